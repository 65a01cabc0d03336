import numpy as np
import pytest

from qdp.problems.registry import PROBLEMS, get

ALL_PROBLEMS = sorted(PROBLEMS)


def random_instances(problem, count, seed=0, max_size=None):
    """``count`` seeded random instances; instance i uses seed ``seed + i``."""
    adapter = get(problem)
    kwargs = {} if max_size is None else {"max_size": max_size}
    return [adapter.random(np.random.default_rng(seed + i), **kwargs) for i in range(count)]


@pytest.fixture(params=ALL_PROBLEMS)
def problem(request):
    return request.param


# Acceptance criteria record their verdicts here; the summary hook prints one line each.
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")

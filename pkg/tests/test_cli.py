import csv
import io
import json

import pytest

from qdp import cli
from qdp.problems import registry


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


SSSP = {"n": 3, "edges": [[0, 1, 1], [0, 2, 4], [1, 2, 2]], "source": 0}
CYK = {"nonterminals": ["S", "A", "B"], "start": "S", "binary": [["S", "A", "B"]],
       "terminal": [["A", "a"], ["B", "b"]], "input": "ab"}


def test_solve_sssp(tmp_path, capsys):
    assert cli.main(["solve", "--problem", "sssp", "--instance", write(tmp_path, "g.json", SSSP)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["solution"] == [0, 1, 3]
    assert set(out["ledger"]) == {"entries_computed", "oracle_queries", "qram_reads", "qram_writes",
                                  "state_preps", "classical_ops"}
    assert set(out["depgraph"]) == {"nodes", "arcs", "delta", "max_out_degree"}


def test_solve_writes_out_file(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["solve", "--problem", "cyk", "--instance", write(tmp_path, "c.json", CYK),
                     "--mode", "mc", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["solution"] is True


def test_solve_infinity_serialized(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"denominations": [2], "target": 3})
    assert cli.main(["solve", "--problem", "coinchange", "--instance", path]) == 0
    assert json.loads(capsys.readouterr().out)["solution"] == "inf"


def test_solve_coin_zero(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"denominations": [1, 4, 5], "target": 0})
    assert cli.main(["solve", "--problem", "coinchange", "--instance", path, "--mode", "classical"]) == 0
    assert json.loads(capsys.readouterr().out)["solution"] == 0


@pytest.mark.parametrize("content, needle", [
    ({"n": 3, "edges": [[0, 1, "x"]], "source": 0}, "edges/0/2"),
    ({"n": 3, "edges": []}, "source"),
    ('{"n": 3,\n "edges": [}', "line 2"),
    ({"n": 3, "edges": [[0, 7, 1]], "source": 0}, "g.json"),
])
def test_solve_bad_input(tmp_path, capsys, content, needle):
    code = cli.main(["solve", "--problem", "sssp", "--instance", write(tmp_path, "g.json", content)])
    assert code == 2
    assert needle in capsys.readouterr().err


def test_solve_engine_error(tmp_path, capsys):
    path = write(tmp_path, "m.json", {"dims": [2**20] * 4})
    assert cli.main(["solve", "--problem", "matrixchain", "--instance", path]) == 3
    assert "ArithmeticOverflow" in capsys.readouterr().err


def test_unknown_problem_rejected(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve", "--problem", "tsp", "--instance", "x.json"])
    assert exc.value.code == 2


def test_analyze_sssp(tmp_path, capsys):
    path = write(tmp_path, "g.json", {"n": 3, "edges": [[0, 1, 1], [1, 2, 2]], "source": 0})
    assert cli.main(["analyze", "--problem", "sssp", "--instance", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["nodes"] == 9 and out["delta_exact"] == "8/9" and round(out["delta"], 6) == 0.888889
    assert out["simple"] is True and out["bucket_bound"] is True


def test_analyze_one_point_sls(tmp_path, capsys):
    path = write(tmp_path, "s.json", {"points": [[0, 0]], "penalty": 1})
    assert cli.main(["analyze", "--problem", "sls", "--instance", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["nodes"], out["arcs"]) == (2, 1)


@pytest.mark.parametrize("problem, size", [("rna", 12), ("sssp", 8)])
def test_verify_passes(capsys, problem, size):
    assert cli.main(["verify", "--problem", problem, "--random", "100", "--max-size", str(size)]) == 0
    assert json.loads(capsys.readouterr().out)["mismatches"] == 0


def test_verify_parallel(capsys):
    assert cli.main(["verify", "--problem", "lds", "--random", "10", "--jobs", "2"]) == 0


def test_verify_corrupted_adapter(monkeypatch, capsys):
    good = registry.PROBLEMS["rodcutting"]

    def corrupted(raw, inst):
        return good.answer(raw, inst) + 1

    monkeypatch.setitem(registry.PROBLEMS, "rodcutting", good.__class__(**{**good.__dict__, "answer": corrupted}))
    assert cli.main(["verify", "--problem", "rodcutting", "--random", "3", "--seed", "40"]) == 1
    err = capsys.readouterr().err
    assert "seed=40" in err and "seed=42" in err


def test_bench(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code = cli.main(["bench", "--problem", "sssp", "--sizes", "16,32,64", "--density", "0.25",
                     "--csv", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "exact: slope=" in text and "classical: slope=" in text
    assert len(out.read_text().splitlines()) == 1 + 3 * 2


def test_bench_rejections(capsys):
    assert cli.main(["bench", "--problem", "sssp", "--sizes", "32,64"]) == 3
    assert cli.main(["bench", "--problem", "rna", "--sizes", "8,16,32", "--density", "0.5"]) == 3


def test_qmin_sim(tmp_path):
    out = tmp_path / "q.csv"
    assert cli.main(["qmin-sim", "--n", "1024", "--trials", "200", "--seed", "5", "--csv", str(out)]) == 0
    first = out.read_text()
    rows = list(csv.DictReader(io.StringIO(first)))
    assert len(rows) == 200 and list(rows[0]) == ["n", "trial", "queries"]
    cli.main(["qmin-sim", "--n", "1024", "--trials", "200", "--seed", "5", "--csv", str(out)])
    assert out.read_text() == first


def test_qmin_sim_small_n(tmp_path, capsys):
    assert cli.main(["qmin-sim", "--n", "1"]) == 2
    out = tmp_path / "q.csv"
    assert cli.main(["qmin-sim", "--n", "2", "--trials", "50", "--csv", str(out)]) == 0
    assert all(int(r["queries"]) >= 2 for r in csv.DictReader(io.StringIO(out.read_text())))


def test_schemas_cover_every_problem():
    assert set(cli.SCHEMAS) == set(registry.PROBLEMS)

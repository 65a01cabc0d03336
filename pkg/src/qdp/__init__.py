"""Classical simulator of quantum dynamic programming with query-cost accounting."""
__version__ = "0.1.0"

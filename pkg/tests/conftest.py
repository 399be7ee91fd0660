import pytest

from gdei.data import generate_data
from gdei.optim import OptimizerConfig
from gdei.runner import RunConfig, train


@pytest.fixture(scope="session")
def default_dataset():
    """Default synthetic set: n=1000, m=1, seed=42."""
    return generate_data(n=1000, m=1, seed=42)


@pytest.fixture(scope="session")
def gd_run(default_dataset):
    """Vanilla GD, alpha 0.05, 10000 iterations, no decay."""
    cfg = RunConfig(OptimizerConfig("gd", alpha=0.05), n_iterations=10000, seed=42)
    return train(default_dataset, cfg)


_ACCEPTANCE: list[tuple[str, str, float]] = []


class _Criterion:
    def __init__(self, label):
        self.label = label

    def __enter__(self):
        import time

        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        import time

        elapsed = time.perf_counter() - self._t0
        _ACCEPTANCE.append(("PASS" if exc_type is None else "FAIL", self.label, elapsed))
        return False


@pytest.fixture
def criterion():
    """Context manager that logs one pass/fail line per acceptance criterion."""
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, label, elapsed in sorted(_ACCEPTANCE, key=lambda r: int(r[1].split()[0].strip("#"))):
        terminalreporter.write_line(f"[{status}] {label} ({elapsed:.2f}s)")

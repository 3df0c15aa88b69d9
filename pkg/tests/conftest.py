import time

import pytest

from mirrorcp.pipeline import RunConfig, run_pipeline


def _timed_run(**kwargs):
    t0 = time.perf_counter()
    result = run_pipeline(RunConfig(**kwargs))
    return result, time.perf_counter() - t0


@pytest.fixture(scope="session")
def cp1_run():
    """n=1, D=6 with the full check battery and the oracle comparison."""
    return _timed_run(n=1, t_degree=6, compare_oracle=True)


@pytest.fixture(scope="session")
def cp2_run():
    """n=2, D=11: the headline configuration."""
    return _timed_run(n=2, t_degree=11, compare_oracle=True)


@pytest.fixture(scope="session")
def cp3_run():
    """n=3, D=5: first dimension with two independent touch classes."""
    return _timed_run(n=3, t_degree=5, compare_oracle=True)


@pytest.fixture(scope="session")
def small2_run():
    """n=2, D=6 core run without optional checks, for unit tests."""
    result, _ = _timed_run(n=2, t_degree=6, checks="none")
    return result


def failing(checks):
    return [c for c in checks if c["status"] != "pass"]

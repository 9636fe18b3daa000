import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from genrel.data import Dataset

settings.register_profile(
    "default", max_examples=50, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


def random_dataset(rng, n=40, p=3, pattern="mixed"):
    """Small dataset with a chosen observation pattern: full, none, or mixed."""
    x = rng.standard_normal((n, p))
    y = x[:, 0] + rng.standard_normal(n)
    z = 0.5 * x[:, 0] - x[:, 1] + rng.standard_normal(n)
    if pattern == "full":
        return Dataset.from_arrays(x, y, z)
    if pattern == "none":
        t_y = np.arange(n) < n // 2
        return Dataset.from_arrays(x, y, z, t_y, ~t_y)
    u = rng.random(n)
    t_y = u < 0.7
    t_z = u > 0.3
    return Dataset.from_arrays(x, y, z, t_y, t_z)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria report one line each at the end of the session
CRITERIA = {}


@pytest.fixture
def criterion():
    def record(key, ok, detail):
        prev = CRITERIA.get(key)
        if prev is not None:
            ok = ok and prev[0]
            detail = f"{prev[1]}; {detail}"
        CRITERIA[key] = (bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA, key=lambda k: (int(k.split()[0]), k)):
        ok, detail = CRITERIA[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} | {detail}")

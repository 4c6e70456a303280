import numpy as np
import pytest
from hypothesis import settings

from bousswave.models import make_abcd, make_builtin
from bousswave.spectral import Field, Grid, hs_norm

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ABCD_EXAMPLE = (-1 / 6, 1 / 3, -1 / 6, 1 / 3)

# acceptance outcomes, filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def grid():
    return Grid(50.0, 1024)


@pytest.fixture(scope="session")
def small_grid():
    return Grid(50.0, 256)


@pytest.fixture(scope="session")
def specs():
    out = {name: make_builtin(name) for name in ("asmp", "hp", "ddk")}
    out["abcd"] = make_abcd(*ABCD_EXAMPLE)
    return out


def smooth_even_field(grid, rng, modes=8, width=50.0):
    """Random even field with a few low modes under a Gaussian envelope."""
    x = np.asarray(grid.nodes)
    c = rng.standard_normal(modes)
    values = np.exp(-x**2 / width) * sum(c[j] * np.cos(j * x / 4) for j in range(modes))
    return Field(grid, values, even=True)


def scaled_to(f, target, s=1.0):
    return f * (target / hs_norm(f, s))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

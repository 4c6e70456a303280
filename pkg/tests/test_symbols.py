import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from bousswave import symbols as sy
from bousswave.errors import SymbolSingular
from bousswave.models import make_builtin

K = sy.tanh_ratio()
SQRT_K = sy.sqrt(K)
finite_xi = st.floats(-50, 50, allow_nan=False)


def numeric_only(sym):
    """Same evaluator, no analytic origin overrides."""
    return sy.MultiplierSymbol(sym.raw, stub=None, label="numeric")


def test_constant_identity():
    assert sy.eval_symbol(sy.constant(1.0), 3.7) == 1.0


def test_tanh_ratio_at_zero():
    assert sy.eval_symbol(K, 0.0) == 1.0


def test_sqrt_tanh_oracle():
    # high-precision reference value of sqrt(tanh 1)
    ref = float(mpmath.sqrt(mpmath.tanh(1)))
    assert sy.eval_symbol(SQRT_K, 1.0) == pytest.approx(ref, abs=1e-12)
    assert ref == pytest.approx(0.8726936, abs=1e-7)


def test_eval_rejects_nonfinite_input():
    with pytest.raises(ValueError):
        sy.eval_symbol(K, float("inf"))


def test_singular_value_raises():
    bad = sy.reciprocal(sy.polynomial([1.0, -1.0]))
    with pytest.raises(SymbolSingular) as err:
        bad(1.0)
    assert err.value.xi == 1.0


def test_sqrt_of_negative_raises():
    with pytest.raises(SymbolSingular):
        sy.sqrt(sy.polynomial([1.0, -1.0]))(2.0)


@pytest.mark.parametrize("sym, expected", [
    (numeric_only(SQRT_K), (1.0, -1.0 / 3.0)),
    (sy.polynomial([1.0, -0.5]), (1.0, -1.0)),
    (numeric_only(sy.quotient(sy.polynomial([1, 1 / 6]), sy.polynomial([1, 1 / 3]))),
     (1.0, -1.0 / 3.0)),
])
def test_origin_data(sym, expected):
    v0, d2 = sy.origin_data(sym)
    assert v0 == pytest.approx(expected[0], abs=1e-12)
    assert d2 == pytest.approx(expected[1], abs=1e-6)


def test_scale_examples():
    xi2 = sy.polynomial([0.0, 1.0])
    assert sy.scale_symbol(xi2, 2.0)(1.0) == 4.0
    assert sy.scale_symbol(K, 0.5)(2.0) == pytest.approx(math.tanh(1.0), abs=1e-15)
    flat = sy.scale_symbol(K, 0.0)
    np.testing.assert_array_equal(flat(np.array([0.0, 3.0, 100.0])), 1.0)


def test_scale_transforms_origin_data():
    s = sy.scale_symbol(SQRT_K, 0.3)
    v0, d2 = sy.origin_data(s)
    assert v0 == 1.0
    assert d2 == pytest.approx(-0.09 / 3.0, rel=1e-12)


def test_combine_examples():
    s = SQRT_K
    xs = np.linspace(0, 20, 50)
    np.testing.assert_array_equal(sy.product(sy.constant(1.0), s)(xs), s(xs))
    assert sy.sqrt(K)(0.0) == 1.0
    q = sy.quotient(sy.polynomial([1.0, 1 / 6]), sy.polynomial([1.0, 1 / 3]))
    assert q(1.0) == pytest.approx(0.875, abs=1e-15)


def test_affine():
    a = sy.affine(K, 0.5, 2.0)
    assert a(1.0) == pytest.approx(0.5 * math.tanh(1.0) + 2.0)
    assert sy.origin_data(a) == pytest.approx((2.5, -1.0 / 3.0))


@pytest.mark.parametrize("recipe, args", [("sqrt", ()), ("reciprocal", ()),
                                          ("quotient", ()), ("affine", (1.0,))])
def test_combine_arity_checked(recipe, args):
    with pytest.raises((ValueError, TypeError)):
        sy.combine([K, K, K], recipe, *args)


@given(finite_xi)
def test_evenness_bit_exact(xi):
    for sym in (K, SQRT_K, sy.reciprocal(K), sy.polynomial([1.0, 0.3, -0.01])):
        assert sy.eval_symbol(sym, xi) == sy.eval_symbol(sym, -xi)


@given(st.floats(-3, 3, allow_nan=False), finite_xi)
def test_scaling_consistency(eps, xi):
    assert sy.scale_symbol(SQRT_K, eps)(xi) == SQRT_K(eps * xi)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 30))
def test_double_scaling(a, b, xi):
    twice = sy.scale_symbol(sy.scale_symbol(K, a), b)
    once = sy.scale_symbol(K, a * b)
    assert twice(xi) == pytest.approx(once(xi), rel=1e-14, abs=1e-300)


@pytest.mark.parametrize("name", ["asmp", "hp", "ddk"])
def test_builtin_overrides_match_numerics(name):
    spec = make_builtin(name)
    for sym in (spec.M, spec.F, spec.G, spec.H, spec.P, spec.Q):
        if not sym.has_overrides:
            continue
        v0, d2 = sy.origin_data(numeric_only(sym))
        assert v0 == pytest.approx(sym.value_at_zero, rel=1e-6, abs=1e-12)
        assert d2 == pytest.approx(sym.d2_at_zero, rel=1e-6, abs=1e-9)


def test_symbols_are_immutable():
    with pytest.raises(AttributeError):
        K.label = "x"


def test_bessel_symbol():
    j = sy.bessel(-2.0)
    assert j(1.0) == pytest.approx(0.5)
    assert sy.origin_data(j) == pytest.approx((1.0, -2.0))

"""Model systems: the reduction from ``(K_a, K_b, K_c, K_d)`` to the single
traveling-wave equation, and the built-in water-wave families.

The trilinear term is stored as a multiplier sandwich

    T(f, g, h) = t_scale * P(f * Q(g h)),

where ``P`` is ``T_outer`` and ``Q`` is ``T_inner``. Eliminating the
surface elevation from the traveling system gives ``t_scale = -1/2`` with
``P = G`` and ``Q = K_c^{-1}``.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from . import symbols as sy
from .dsl import compile_symbol
from .errors import AbcdConditionViolated, ConfigError, GammaZero, UnknownModel

# frequencies used to probe inverses and square roots of a reduced system
_PROBE = np.concatenate([[0.0], np.logspace(-3, 4, 2000)])


@dataclass(frozen=True)
class SystemSpec:
    name: str
    M: sy.MultiplierSymbol
    F: sy.MultiplierSymbol
    G: sy.MultiplierSymbol
    H: sy.MultiplierSymbol
    T_outer: sy.MultiplierSymbol
    T_inner: sy.MultiplierSymbol
    gamma: float
    beta: float = 0.0
    s_h: float = 0.0
    s_t: float = 0.0
    xi1: float = 1.0
    t_scale: float = -0.5
    # (K_a, K_b, K_c, K_d) when the spec comes from a two-equation system
    K: tuple = field(default=None, compare=False)
    notes: tuple = ()

    @property
    def M0(self):
        return sy.origin_data(self.M)[0]

    @property
    def M2(self):
        return sy.origin_data(self.M)[1]

    @property
    def P(self):
        return self.T_outer

    @property
    def Q(self):
        return self.T_inner

    def metadata(self):
        return {"name": self.name, "gamma": self.gamma, "beta": self.beta, "s_h": self.s_h,
                "s_t": self.s_t, "xi1": self.xi1, "t_scale": self.t_scale,
                "notes": list(self.notes)}


def gamma_of(M, F, G, H):
    """KdV coefficient ``-(F(0) + G(0) H(0)) / M''(0)``."""
    _, m2 = sy.origin_data(M)
    if m2 == 0.0 or abs(m2) < 1e-14:
        raise GammaZero("M''(0) vanishes, gamma is undefined")
    f0 = sy.origin_data(F)[0] if F.value_at_zero is None else F.value_at_zero
    g0 = G(0.0) if G.value_at_zero is None else G.value_at_zero
    h0 = H(0.0) if H.value_at_zero is None else H.value_at_zero
    gamma = -(f0 + g0 * h0) / m2
    if abs(gamma) < 1e-12:
        raise GammaZero(f"gamma = {gamma!r} vanishes")
    return float(gamma)


def _probe(*syms):
    for s in syms:
        s(_PROBE)


def reduce_system(K_a, K_b, K_c, K_d, name="system", validate=True, **meta):
    """Build the single-equation spec from the four system multipliers.

    With ``validate=False`` a vanishing or undefined ``gamma`` is stored as
    NaN instead of raising, so degenerate systems can still be inspected.
    """
    inv_b, inv_c, inv_d = sy.reciprocal(K_b), sy.reciprocal(K_c), sy.reciprocal(K_d)
    M = sy.sqrt(sy.product(K_a, inv_b, K_c, inv_d))
    F = sy.affine(inv_d, 0.5, 0.0)
    G = sy.product(inv_b, K_c, inv_d)
    H = sy.product(inv_c, K_d)
    _probe(M, F, G, H, inv_c)
    return _finish(name, M, F, G, H, G, inv_c, validate, K=(K_a, K_b, K_c, K_d), **meta)


def _finish(name, M, F, G, H, P, Q, validate, **kw):
    try:
        gamma = gamma_of(M, F, G, H)
    except (GammaZero, ArithmeticError):
        if validate:
            raise
        gamma = float("nan")
    return SystemSpec(name, M, F, G, H, P, Q, gamma, **kw)


def abcd_violation(a, b, c, d):
    """Number of the first violated well-posedness condition, or ``None``."""
    if not (b >= 0 and d >= 0 and a <= 0 and c <= 0):
        return 1
    if not a + b + c + d > 0:
        return 2
    if not (b * d > a * c or (b * d == 0 and a * c == 0)):
        return 3
    if not (c < 0 or d == 0):
        return 4
    return None


_ABCD_TEXT = {
    1: "b, d >= 0 and a, c <= 0",
    2: "a + b + c + d > 0",
    3: "bd > ac or bd = ac = 0",
    4: "c < 0 or d = 0",
}


def abcd_symbols(a, b, c, d):
    """Symbols of ``1 + a dx^2, 1 - b dx^2, 1 + c dx^2, 1 - d dx^2``."""
    return (sy.polynomial([1.0, -a], label=f"1-({a:g})xi^2"),
            sy.polynomial([1.0, b], label=f"1+({b:g})xi^2"),
            sy.polynomial([1.0, -c], label=f"1-({c:g})xi^2"),
            sy.polynomial([1.0, d], label=f"1+({d:g})xi^2"))


def concavity_radius(M, xi_max=10.0, cap=1.0):
    """Half the first positive inflection point of ``M`` (at most ``cap``)."""
    xs = np.linspace(0.0, xi_max, 4001)[1:]
    h = 1e-3
    d2 = (M(xs + h) - 2.0 * M(xs) + M(xs - h)) / h**2
    turn = np.nonzero(d2 >= 0)[0]
    if len(turn) == 0:
        return cap
    return min(cap, 0.5 * float(xs[turn[0]]))


def make_abcd(a, b, c, d, validate=True):
    a, b, c, d = (float(t) for t in (a, b, c, d))
    which = abcd_violation(a, b, c, d)
    if which is not None and validate:
        raise AbcdConditionViolated(which, _ABCD_TEXT[which])
    K = abcd_symbols(a, b, c, d)
    spec = reduce_system(*K, name=f"abcd({a:g},{b:g},{c:g},{d:g})", validate=validate,
                         beta=0.0, s_h=0.0, s_t=0.0,
                         notes=("s_t = 0 taken for abcd (T_eps bounded uniformly)",))
    return replace(spec, xi1=concavity_radius(spec.M))


def _water_wave_K():
    K = sy.tanh_ratio()
    return K, sy.reciprocal(K), sy.constant(1.0)


def make_builtin(name):
    """``"asmp"``, ``"hp"`` or ``"ddk"`` with closed-form symbols."""
    K, Kinv, one = _water_wave_K()
    M = sy.sqrt(K)
    half = sy.constant(0.5)
    if name == "asmp":
        system = (K, one, one, one)
        F, G, H, P, Q = half, one, one, one, one
        meta = dict(beta=0.0, s_h=0.0, s_t=0.0)
    elif name == "hp":
        system = (one, one, K, one)
        F, G, H, P, Q = half, K, Kinv, K, Kinv
        meta = dict(beta=0.0, s_h=1.0, s_t=1.0)
    elif name == "ddk":
        system = (Kinv, Kinv, one, Kinv)
        KK = sy.product(K, K)
        F, G, H, P, Q = sy.affine(K, 0.5, 0.0), KK, Kinv, KK, one
        meta = dict(beta=0.0, s_h=1.0, s_t=0.0)
    else:
        raise UnknownModel(f"unknown model {name!r}; expected asmp, hp or ddk")
    return _finish(name, M, F, G, H, P, Q, True, K=system, **meta)


BUILTINS = ("asmp", "hp", "ddk")


def _as_symbol(value):
    if isinstance(value, sy.MultiplierSymbol):
        return value
    if isinstance(value, (int, float)):
        return sy.constant(value)
    return compile_symbol(value)


def make_custom(M, F, G, H, T_outer="1", T_inner="1", t_scale=-0.5, name="custom",
                xi1=1.0, validate=True):
    """Spec from explicit symbols or expression strings.

    Growth data (``beta``, ``s_h``, ``s_t``) is estimated numerically.
    """
    from .assumptions import estimate_growth, estimate_trilinear_order, estimate_smoothing

    M, F, G, H, P, Q = (_as_symbol(s) for s in (M, F, G, H, T_outer, T_inner))
    notes = ["growth data estimated numerically"]
    beta = max(estimate_growth(s) for s in (M, F, G, H))
    try:
        s_h = estimate_smoothing(G, H)
    except ArithmeticError as exc:
        s_h = float("nan")
        notes.append(str(exc))
    s_t = estimate_trilinear_order(P, Q)
    return _finish(name, M, F, G, H, P, Q, validate, beta=beta, s_h=s_h, s_t=s_t,
                   xi1=float(xi1), t_scale=float(t_scale), notes=tuple(notes))


def make_system(K_a, K_b, K_c, K_d, name="system", validate=True):
    """Spec from four system multipliers given as symbols or expressions."""
    from .assumptions import estimate_growth, estimate_trilinear_order, estimate_smoothing

    spec = reduce_system(*(_as_symbol(s) for s in (K_a, K_b, K_c, K_d)), name=name,
                         validate=validate)
    beta = max(estimate_growth(s) for s in (spec.M, spec.F, spec.G, spec.H))
    try:
        s_h = estimate_smoothing(spec.G, spec.H)
    except ArithmeticError:
        s_h = float("nan")
    return replace(spec, beta=beta, s_h=s_h, s_t=estimate_trilinear_order(spec.P, spec.Q),
                   notes=("growth data estimated numerically",))


_CUSTOM_KEYS = ("M", "F", "G", "H", "T_outer", "T_inner")
_SYSTEM_KEYS = ("K_a", "K_b", "K_c", "K_d")
MODEL_KEYS = frozenset(("model", "name", "a", "b", "c", "d", "xi1", "T_scale")
                       + _CUSTOM_KEYS + _SYSTEM_KEYS)


def spec_from_config(block):
    """Build a spec from the model keys of a JSON config document."""
    kind = block.get("model")
    if kind is None:
        raise ConfigError("missing 'model'")
    allowed = {"abcd": {"a", "b", "c", "d"}, "custom": set(_CUSTOM_KEYS) | {"T_scale", "name", "xi1"},
               "system": set(_SYSTEM_KEYS) | {"name"}}
    given = {k for k in block if k in MODEL_KEYS and k != "model"}
    extra = given - allowed.get(kind, set())
    if extra:
        raise ConfigError(f"keys {sorted(extra)} not valid for model {kind!r}")
    if kind in BUILTINS:
        return make_builtin(kind)
    if kind == "abcd":
        missing = [k for k in "abcd" if k not in block]
        if missing:
            raise ConfigError(f"abcd model needs {missing}")
        return make_abcd(*(block[k] for k in "abcd"))
    if kind == "custom":
        missing = [k for k in ("M", "F", "G", "H") if k not in block]
        if missing:
            raise ConfigError(f"custom model needs {missing}")
        return make_custom(*(block[k] for k in ("M", "F", "G", "H")),
                           T_outer=block.get("T_outer", "1"), T_inner=block.get("T_inner", "1"),
                           t_scale=block.get("T_scale", -0.5), name=block.get("name", "custom"),
                           xi1=block.get("xi1", 1.0))
    if kind == "system":
        missing = [k for k in _SYSTEM_KEYS if k not in block]
        if missing:
            raise ConfigError(f"system model needs {missing}")
        return make_system(*(block[k] for k in _SYSTEM_KEYS), name=block.get("name", "system"))
    raise UnknownModel(f"unknown model {kind!r}")

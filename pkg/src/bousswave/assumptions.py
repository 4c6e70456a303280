"""Numerical checks of the structural hypotheses on the symbols.

Items are numbered 1..7 following the standard hypothesis list:

1. ``m1 = sup_{|xi|>=xi1} M < M(0)`` and ``m2 = sup_{|xi|<=xi1} M'' < 0``
2. ``m3 = inf (M + M(0)) > 0``
3. derivatives of ``M, F, G, H`` grow at most like ``<xi>^beta`` with ``beta < 1``
4. ``F'', G'', H''`` bounded on ``[-xi1, xi1]``
5. ``F`` bounded
6. ``G`` smooths what ``H`` loses (order ``s_h``)
7. ``gamma != 0``

The growth exponents are least-squares slopes over a fixed log window,
so they are estimates, not bounds.
"""
from dataclasses import asdict, dataclass, field

import numpy as np

from . import symbols as sy
from .errors import AssumptionViolated, ScanUnresolved, SmoothingMismatch, SpectrumCollision

GROWTH_WINDOW = (10.0, 1e4)
_WINDOW_SAMPLES = 200


@dataclass
class AssumptionReport:
    xi1: float
    m1: float
    m2: float
    m3: float
    M0: float
    beta_est: float
    s_h_est: float
    s_t_est: float
    gamma: float
    predicted_exponent: float
    passes: dict
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return all(self.passes.values())

    def to_dict(self):
        d = asdict(self)
        d["passes"] = {str(k): bool(v) for k, v in self.passes.items()}
        d["all_pass"] = self.ok
        for key, value in d.items():
            if isinstance(value, float) and not np.isfinite(value):
                d[key] = None if np.isnan(value) else ("inf" if value > 0 else "-inf")
        return d


def predicted_exponent(beta, s_h, s_t):
    return min((3.0 - 2.0 * beta) / (2.0 - beta), 4.0 - 2.0 * max(s_h, s_t))


def _window():
    return np.geomspace(*GROWTH_WINDOW, _WINDOW_SAMPLES)


def _log_slope(values, xs):
    """Least-squares slope of ``log|values|`` against ``log<xs>``; None if unusable."""
    values = np.abs(values)
    ok = (values > 0) & np.isfinite(values)
    if ok.sum() < len(values) // 2:
        return None
    X = 0.5 * np.log1p(xs[ok] ** 2)
    return float(np.polyfit(X, np.log(values[ok]), 1)[0])


def _first_derivative(sym, xs):
    h = 1e-4 * xs
    return (sym(xs + h) - sym(xs - h)) / (2.0 * h)


def estimate_growth(sym):
    """Growth exponent of ``|sym'|`` over the window, clamped below at 0."""
    xs = _window()
    slope = _log_slope(_first_derivative(sym, xs), xs)
    return 0.0 if slope is None else max(0.0, slope)


def estimate_smoothing(G, H):
    """Order ``s_h`` by which ``G`` decays and ``H`` grows.

    Raises :class:`SmoothingMismatch` when ``G`` does not decay at least
    like ``<xi>^-s_h`` (with 0.1 slack on the slope).
    """
    xs = _window()
    slope_h = _log_slope(H(xs), xs)
    s_h = 0.0 if slope_h is None else max(0.0, slope_h)
    slope_g = _log_slope(G(xs), xs)
    if slope_g is not None and slope_g > -s_h + 0.1:
        raise SmoothingMismatch(f"G grows like <xi>^{slope_g:.3f} but H needs "
                                f"<xi>^-{s_h:.3f} smoothing")
    return s_h


def estimate_trilinear_order(P, Q):
    """Loss order ``s_t`` of ``T(f,g,h) = P(f Q(gh))`` under rescaling.

    The inner growth of ``Q`` is paid as ``eps^-q`` when ``P`` smooths it
    back; any residual growth of ``P`` adds on top.
    """
    xs = _window()
    q = _log_slope(Q(xs), xs)
    p = _log_slope(P(xs), xs)
    q = 0.0 if q is None else max(0.0, q)
    excess = 0.0 if p is None else max(0.0, p + q)
    return q + excess


def _second_derivative(sym, xs, h):
    return (-sym(xs + 2 * h) + 16 * sym(xs + h) - 30 * sym(xs)
            + 16 * sym(xs - h) - sym(xs - 2 * h)) / (12.0 * h * h)


def check_assumptions(spec, xi1=None, xi_max=1e4, samples=4000):
    """Scan the symbols of ``spec`` and assemble an :class:`AssumptionReport`.

    ``M`` is sampled on ``[0, xi1]`` uniformly and on ``[xi1, xi_max]``
    geometrically; ``samples`` points are used on each piece.
    """
    xi1 = float(spec.xi1 if xi1 is None else xi1)
    if not xi1 > 0:
        raise ValueError("xi1 must be positive")
    if not xi_max > xi1:
        raise ValueError("xi_max must exceed xi1")
    if samples < 1000:
        raise ValueError("at least 1000 samples required")
    notes = list(spec.notes)
    M = spec.M
    M0 = M(0.0)

    head = np.linspace(0.0, xi1, samples)
    tail = np.geomspace(xi1, xi_max, samples)
    m_head, m_tail = M(head), M(tail)
    scan = np.concatenate([m_head, m_tail[1:]])
    spread = scan.max() - scan.min()
    if spread > 1e-12 * max(1.0, abs(M0)):
        jump = np.max(np.abs(np.diff(scan)))
        if jump > 0.01 * spread:
            raise ScanUnresolved(f"adjacent samples of M differ by {jump:.3g} "
                                 f"(> 1% of range {spread:.3g}); increase samples")

    m1 = float(m_tail.max())
    if M.growth_hint is not None and M.growth_hint > 0:
        m1 = float("inf")
        notes.append("M grows beyond the scan window")
    h = xi1 / 2000.0
    m2 = float(np.max(_second_derivative(M, head, h)))
    m3 = float(scan.min() + M0)
    if M.growth_hint is not None and M.growth_hint < 0:
        # M -> 0 at infinity, so the infimum of M + M(0) may sit beyond the scan
        m3 = min(m3, M0)

    beta = max(estimate_growth(s) for s in (spec.M, spec.F, spec.G, spec.H))

    d2_ok = True
    for s in (spec.F, spec.G, spec.H):
        d2 = _second_derivative(s, head, h)
        d2_ok &= bool(np.all(np.isfinite(d2)))

    xs = _window()
    f_vals = spec.F(np.concatenate([head, tail]))
    f_slope = _log_slope(spec.F(xs), xs)
    f_ok = bool(np.all(np.isfinite(f_vals))) and (f_slope is None or f_slope <= 0.05)

    smooth_ok = True
    try:
        s_h = estimate_smoothing(spec.G, spec.H)
    except SmoothingMismatch as exc:
        smooth_ok = False
        s_h = float("nan")
        notes.append(str(exc))
    gh = np.abs(spec.G(tail) * spec.H(tail))
    if not np.all(np.isfinite(gh)):
        smooth_ok = False
    elif smooth_ok and _log_slope(gh, tail) is not None and _log_slope(gh, tail) > 0.1:
        smooth_ok = False
        notes.append("G*H grows")
    s_t = estimate_trilinear_order(spec.P, spec.Q)
    notes.append("trilinear bound checked for the P(f Q(gh)) sandwich only")

    gamma = spec.gamma
    passes = {
        1: bool(m1 < M0 and m2 < 0),
        2: bool(m3 > 0),
        3: bool(beta < 1),
        4: d2_ok,
        5: f_ok,
        6: smooth_ok and bool(s_h < 2),
        7: bool(np.isfinite(gamma) and abs(gamma) > 1e-12),
    }
    pred = predicted_exponent(beta, s_h, s_t) if np.isfinite(s_h) else float("nan")
    return AssumptionReport(xi1=xi1, m1=m1, m2=m2, m3=m3, M0=float(M0), beta_est=beta,
                            s_h_est=s_h, s_t_est=s_t, gamma=float(gamma),
                            predicted_exponent=pred, passes=passes, notes=notes)


def inverse_approx_residual(spec, eps, xi):
    """Pointwise error of the long-wave inverse approximation at frequencies ``xi``.

    ``eps^2 / (omega - M(eps xi)) ~ -2 / (M''(0) (1 + xi^2))``, with error ``O(eps^2)``.
    """
    M0, M2 = sy.origin_data(spec.M)
    if not M2 < 0:
        raise AssumptionViolated(f"M''(0) = {M2!r} must be negative")
    eps = float(eps)
    if eps == 0:
        raise ValueError("eps must be nonzero")
    xi = np.asarray(xi, dtype=float)
    den = M0 - 0.5 * M2 * eps**2 - spec.M(eps * xi)
    if np.any(den <= 0):
        raise SpectrumCollision(eps, xi[np.argmax(den <= 0)])
    return eps**2 / den + 2.0 / (M2 * (1.0 + xi**2))


def verify_inverse_approx(spec, eps, grid):
    """Sup over grid frequencies of the inverse-approximation bracket (O(eps^2))."""
    return float(np.max(np.abs(inverse_approx_residual(spec, eps, grid.xi))))

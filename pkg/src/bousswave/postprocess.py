"""Back to physical variables, system residuals, and rate fits."""
import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientData
from .spectral import Field, Grid, hs_norm

SWEEP_COLUMNS = ("eps", "omega", "iterations", "phi_norm", "deviation", "r1", "r2")


def unscale(V, eps):
    """``v(x) = eps^2 V(eps x)`` on the stretched grid ``(L/eps, N)``.

    The nodes of the new grid are exactly ``x_j / eps``, so no interpolation
    is involved.
    """
    eps = float(eps)
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps!r}")
    grid = V.grid if eps == 1.0 else Grid(V.grid.L / eps, V.grid.N)
    return Field(grid, eps * eps * V.values, V.even)


def rescale(v, eps):
    """Inverse of :func:`unscale`."""
    eps = float(eps)
    grid = v.grid if eps == 1.0 else Grid(v.grid.L * eps, v.grid.N)
    return Field(grid, v.values / (eps * eps), v.even)


def _apply(sym, values, grid):
    return grid.apply(sym(grid.xi), values)


def reconstruct_eta(K_c, K_d, v, omega):
    """``eta = omega K_c^-1 K_d v - K_c^-1 v^2 / 2`` (from the second equation)."""
    g = v.grid
    c = K_c(g.xi)
    d = K_d(g.xi)
    vv = g.multiply(v.values, v.values)
    hat = (omega * d * g.fft(v.values) - 0.5 * g.fft(vv)) / c
    return Field(g, g.ifft(hat), v.even)


def system_residual(K_a, K_b, K_c, K_d, eta, v, omega, s=1.0):
    """``H^s`` norms of both traveling-system equations at ``(eta, v)``."""
    g = v.grid
    if eta.grid != g:
        raise ValueError("eta and v live on different grids")
    e, u = eta.values, v.values
    eq1 = -omega * _apply(K_b, e, g) + _apply(K_a, u, g) + g.multiply(e, u)
    eq2 = -omega * _apply(K_d, u, g) + _apply(K_c, e, g) + 0.5 * g.multiply(u, u)
    return float(g.hs_norm(eq1, s)), float(g.hs_norm(eq2, s))


def physical_residual(spec, result, s=1.0):
    """``(r1, r2)`` for a solve result of a spec that carries its system symbols."""
    if spec.K is None:
        return float("nan"), float("nan")
    v = unscale(result.V, result.eps)
    eta = reconstruct_eta(spec.K[2], spec.K[3], v, result.omega)
    return system_residual(*spec.K, eta, v, result.omega, s)


def fit_power_law(eps, values):
    """Least-squares slope and ``r^2`` of ``log values`` against ``log eps``."""
    x = np.log(np.asarray(eps, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 if ss_tot == 0 else 1.0 - np.sum(resid**2) / ss_tot
    return float(slope), float(r2), float(np.exp(intercept))


@dataclass
class RateStudy:
    eps: list
    deviations: list
    fitted_slope: float
    fit_r2: float
    predicted_exponent: float
    prefactor: float = float("nan")
    exponents: tuple = field(default=(1.5, 2.0))

    @property
    def strictly_decreasing(self):
        order = np.argsort(self.eps)[::-1]
        d = np.asarray(self.deviations)[order]
        return bool(np.all(np.diff(d) < 0))

    def envelope_ratios(self):
        """``deviation / (eps^a + eps^b)``, normalized by its value at the largest eps.

        A bound ``deviation <= C (eps^a + eps^b)`` with one constant holds
        across the sweep when no ratio exceeds 1 (up to rounding).
        """
        e = np.asarray(self.eps, dtype=float)
        a, b = self.exponents
        r = np.asarray(self.deviations) / (e**a + e**b)
        return r / r[np.argmax(e)]

    def to_dict(self):
        return {"eps": list(map(float, self.eps)),
                "deviations": list(map(float, self.deviations)),
                "fitted_slope": self.fitted_slope, "fit_r2": self.fit_r2,
                "predicted_exponent": self.predicted_exponent,
                "prefactor": self.prefactor,
                "envelope_ratios": [float(r) for r in self.envelope_ratios()],
                "strictly_decreasing": self.strictly_decreasing}


def rate_fit(results, sigma=None, s=1.0, report=None, spec=None):
    """Fit ``deviation ~ C eps^p`` over converged results.

    Deviations are recomputed against ``sigma`` when it is given, otherwise
    the stored ``result.deviation`` values are used. The predicted exponent
    comes from ``report`` or, failing that, from the declared data of ``spec``.
    """
    from .assumptions import predicted_exponent

    results = list(results)
    eps = [r.eps for r in results]
    if len(set(eps)) < 3:
        raise InsufficientData(f"need at least 3 distinct eps values, got {sorted(set(eps))}")
    if sigma is not None:
        devs = [hs_norm(r.V - sigma, s) for r in results]
    else:
        devs = [r.deviation for r in results]
    if min(devs) <= 0:
        raise InsufficientData("zero deviation cannot enter a log-log fit")
    slope, r2, c = fit_power_law(eps, devs)
    if report is not None:
        beta, s_h, s_t = report.beta_est, report.s_h_est, report.s_t_est
        pred = report.predicted_exponent
    elif spec is not None:
        beta, s_h, s_t = spec.beta, spec.s_h, spec.s_t
        pred = predicted_exponent(beta, s_h, s_t)
    else:
        beta, s_h, s_t, pred = 0.0, 0.0, 0.0, float("nan")
    exps = ((3.0 - 2.0 * beta) / (2.0 - beta), 4.0 - 2.0 * max(s_h, s_t))
    return RateStudy(eps, devs, slope, r2, float(pred), c, exps)


def write_profile_csv(path, v, eta=None):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "v", "eta"] if eta is not None else ["x", "v"])
        cols = [v.grid.nodes, v.values] + ([eta.values] if eta is not None else [])
        for row in zip(*cols):
            w.writerow([repr(float(t)) for t in row])


def write_sweep_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, extrasaction="ignore")
        w.writeheader()
        for row in rows:
            w.writerow({k: row.get(k) for k in SWEEP_COLUMNS})


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isnan(x):
            return None
        if np.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path, data):
    with open(path, "w") as fh:
        json.dump(_jsonable(data), fh, indent=2, sort_keys=True)
        fh.write("\n")

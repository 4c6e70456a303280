"""Rescaled fixed-point map, its derivative, and Newton continuation.

For ``eps != 0`` the map is

    Phi(V, eps) = V - eps^2 (w^2 - M_eps^2)^{-1}
                  [ w F_eps V^2 + w G_eps(V H_eps V) + eps^2 T_eps(V, V, V) ],

with ``w = M(0) - M''(0) eps^2 / 2`` and every symbol sampled at
``eps * xi``. At ``eps = 0`` it is the KdV map ``V - gamma J^-2 V^2``,
whose root is ``sigma(x) = 3/(2 gamma) sech^2(x/2)``.

Newton's method runs in the even cosine basis, which removes the
translation mode ``sigma'`` from the kernel of the linearization.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BousswaveError,
    GammaZero,
    GridUnderResolved,
    JacobianSingular,
    NewtonDiverged,
    SpectrumCollision,
    SweepFailed,
)
from .spectral import Field, Grid, hs_norm, project_even, tail_fraction

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveConfig:
    s: float = 1.0
    L: float = 50.0
    N: int = 1024
    newton_tol: float = 1e-11
    max_iter: int = 25
    tail_tol: float = 1e-8

    def __post_init__(self):
        if not self.s >= 1:
            raise ValueError(f"Sobolev index must be >= 1, got {self.s!r}")
        if not self.newton_tol > 0:
            raise ValueError("newton_tol must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        Grid(self.L, self.N)

    def grid(self):
        return Grid(self.L, self.N)


@dataclass
class SolveResult:
    V: Field
    eps: float
    omega: float
    iterations: int
    phi_norm: float
    deviation: float
    jacobian_condition: float
    history: tuple = ()

    def summary(self):
        return {"eps": self.eps, "omega": self.omega, "iterations": self.iterations,
                "phi_norm": self.phi_norm, "deviation": self.deviation,
                "jacobian_condition": self.jacobian_condition}


def kdv_profile(gamma, grid):
    """``3/(2 gamma) sech^2(x/2)`` sampled on ``grid``."""
    if gamma == 0 or not np.isfinite(gamma):
        raise GammaZero(f"gamma must be finite and nonzero, got {gamma!r}")
    x = np.asarray(grid.nodes)
    return Field(grid, 1.5 / gamma / np.cosh(0.5 * x) ** 2, even=True)


def omega_of(spec, eps):
    """Wave speed ``M(0) - M''(0) eps^2 / 2``."""
    return spec.M0 - 0.5 * spec.M2 * float(eps) ** 2


class RescaledMap:
    """``Phi(., eps)`` on a fixed grid, with symbol tables sampled once.

    Array methods take nodal values with the space axis last, so Jacobian
    columns can be processed in one batch.
    """

    def __init__(self, spec, grid, eps):
        self.spec, self.grid, self.eps = spec, grid, float(eps)
        xi = grid.xi
        self.J2inv = 1.0 / (1.0 + xi**2)
        if self.eps == 0.0:
            self.omega = spec.M0
            return
        e = self.eps
        self.omega = omega_of(spec, e)
        ex = e * xi
        lin = self.omega**2 - spec.M(ex) ** 2
        bad = lin <= 0
        if np.any(bad):
            raise SpectrumCollision(e, xi[np.argmax(bad)])
        self.inv = e * e / lin
        self.F = spec.F(ex)
        self.G = spec.G(ex)
        self.H = spec.H(ex)
        self.P = spec.P(ex)
        self.Q = spec.Q(ex)
        self.t = spec.t_scale

    def _mul(self, a, b):
        return self.grid.multiply(a, b)

    def _spec(self, a):
        return self.grid.fft(a)

    def bracket_hat(self, v):
        """Spectrum of ``eps^2 (w^2 - M^2)^{-1} [ ... ]`` for nodal values ``v``."""
        g = self.grid
        vv = self._mul(v, v)
        if self.eps == 0.0:
            return self.spec.gamma * self.J2inv * self._spec(vv)
        w, e = self.omega, self.eps
        Hv = g.apply(self.H, v)
        Qvv = g.apply(self.Q, vv)
        hat = (w * self.F * self._spec(vv)
               + w * self.G * self._spec(self._mul(v, Hv))
               + e * e * self.t * self.P * self._spec(self._mul(v, Qvv)))
        return self.inv * hat

    def residual(self, v):
        return v - self.grid.ifft(self.bracket_hat(v))

    def jacobian_apply(self, v, w):
        """Derivative of ``residual`` at ``v`` in direction(s) ``w``."""
        g = self.grid
        vw = self._mul(v, w)
        if self.eps == 0.0:
            return w - g.ifft(2.0 * self.spec.gamma * self.J2inv * self._spec(vw))
        om, e = self.omega, self.eps
        Hv = g.apply(self.H, v)
        Hw = g.apply(self.H, w)
        vv = self._mul(v, v)
        Qvv = g.apply(self.Q, vv)
        Qvw = g.apply(self.Q, vw)
        tri = self._spec(self._mul(w, Qvv)) + 2.0 * self._spec(self._mul(v, Qvw))
        hat = (2.0 * om * self.F * self._spec(vw)
               + om * self.G * self._spec(self._mul(w, Hv) + self._mul(v, Hw))
               + e * e * self.t * self.P * tri)
        return w - g.ifft(self.inv * hat)

    def jacobian_matrix(self, v):
        """Derivative in the cosine basis: column ``k`` is the image of ``cos(xi_k x)``."""
        g = self.grid
        basis = g.cos_basis()
        images = self.jacobian_apply(v[None, :], basis)
        return g.cos_coeffs(images).T


def _check_tail(f, s, tail_tol):
    if np.any(f.values != 0):
        tail = tail_fraction(f, s)
        if tail > tail_tol:
            raise GridUnderResolved(tail, tail_tol)


def phi_eval(spec, v, eps, s=1.0, tail_tol=1e-8):
    """``Phi(v, eps)`` as a field; ``eps = 0`` gives the KdV limit map.

    The resolution guard inspects the argument ``v``: its share of the
    ``H^s`` energy above ``N/3`` must not exceed ``tail_tol``.
    """
    _check_tail(v, s, tail_tol)
    op = RescaledMap(spec, v.grid, eps)
    return Field(v.grid, op.residual(v.values), v.even)


def phi_jacobian_apply(spec, v, eps, w, s=1.0, tail_tol=1e-8):
    _check_tail(v, s, tail_tol)
    op = RescaledMap(spec, v.grid, eps)
    return Field(v.grid, op.jacobian_apply(v.values, w.values), v.even and w.even)


def calK_apply(gamma, f):
    """``f - 2 gamma J^-2 (sigma f)``: the linearization at the KdV soliton."""
    sigma = kdv_profile(gamma, f.grid)
    g = f.grid
    J2inv = 1.0 / (1.0 + g.xi**2)
    out = f.values - g.ifft(2.0 * gamma * J2inv * g.fft(g.multiply(sigma.values, f.values)))
    return Field(g, out, f.even)


def calK_matrix(gamma, grid, orthonormal=True):
    """Matrix of ``calK`` on even fields, in an L2-orthonormal cosine basis by default."""
    sigma = kdv_profile(gamma, grid)
    op = RescaledMap(_KdVOnly(gamma), grid, 0.0)
    A = op.jacobian_matrix(sigma.values)
    if orthonormal:
        # ||cos(xi_k x)||^2 = 2L at k = 0, N/2 and L otherwise
        norms = np.sqrt(grid.L * np.where(grid._mult == 1.0, 2.0, 1.0))
        A = norms[:, None] * A / norms[None, :]
    return A


def calK_min_singular(gamma, grid):
    return float(scipy.linalg.svdvals(calK_matrix(gamma, grid))[-1])


class _KdVOnly:
    def __init__(self, gamma):
        self.gamma = gamma
        self.M0 = 1.0


def newton_solve(spec, eps, init=None, config=None, log_progress=False):
    """Solve ``Phi(V, eps) = 0`` by Newton's method from ``init`` (default ``sigma``)."""
    config = config or SolveConfig()
    eps = float(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    grid = init.grid if init is not None else config.grid()
    sigma = kdv_profile(spec.gamma, grid)
    if init is None:
        init = sigma
    op = RescaledMap(spec, grid, eps)
    s, tol = config.s, config.newton_tol

    def evaluate(values):
        f = Field(grid, values, even=True)
        _check_tail(f, s, config.tail_tol)
        r = op.residual(values)
        return r, float(grid.hs_norm(r, s))

    V = project_even(init).values
    r, norm = evaluate(V)
    history = [norm]
    increases = 0
    iterations = 0
    J = None
    while norm > tol:
        if iterations >= config.max_iter:
            raise NewtonDiverged(iterations, norm, eps)
        J = op.jacobian_matrix(V)
        try:
            lu = scipy.linalg.lu_factor(J, check_finite=True)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise JacobianSingular(str(exc)) from exc
        if np.any(np.abs(np.diag(lu[0])) < 1e-14 * np.max(np.abs(np.diag(lu[0])))):
            raise JacobianSingular(f"singular Jacobian at eps={eps!r}")
        step = grid.from_cos(scipy.linalg.lu_solve(lu, grid.cos_coeffs(r)))
        V_new = V - step
        r_new, norm_new = evaluate(V_new)
        if norm_new > norm:
            V_half = V - 0.5 * step
            r_half, norm_half = evaluate(V_half)
            if norm_half < norm_new:
                V_new, r_new, norm_new = V_half, r_half, norm_half
        iterations += 1
        if norm_new > norm:
            increases += 1
            if increases >= 2:
                raise NewtonDiverged(iterations, norm_new, eps)
        else:
            increases = 0
        V = project_even(Field(grid, V_new)).values
        r, norm = evaluate(V)
        history.append(norm)
        if log_progress:
            log.info("eps=%g iter=%d |Phi|=%.3e", eps, iterations, norm)
    if J is None:
        J = op.jacobian_matrix(V)
    cond = float(np.linalg.cond(J))
    Vf = Field(grid, V, even=True)
    return SolveResult(V=Vf, eps=eps, omega=op.omega, iterations=iterations, phi_norm=norm,
                       deviation=hs_norm(Vf - sigma, s), jacobian_condition=cond,
                       history=tuple(history))


def continuation_sweep(spec, eps_list, config=None, warm_start=True, workers=1):
    """Solve for each ``eps`` of a descending list, reusing converged profiles.

    If the first (largest) ``eps`` fails, one retry goes through ``eps/2``
    first and uses that solution as the starting guess. Any other failure
    aborts the sweep with :class:`SweepFailed` carrying the partial results.
    With ``warm_start=False`` every solve starts from ``sigma`` and up to
    ``workers`` solves run concurrently.
    """
    config = config or SolveConfig()
    eps_list = [float(e) for e in eps_list]
    if any(a <= b for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly descending")
    if any(not 0 < e < 1 for e in eps_list):
        raise ValueError("every eps must lie in (0, 1)")
    if not eps_list:
        return []
    if not warm_start:
        return _cold_sweep(spec, eps_list, config, workers)

    results = []
    first = eps_list[0]
    try:
        results.append(newton_solve(spec, first, None, config))
    except NewtonDiverged as exc:
        log.info("eps=%g diverged from sigma; retrying through eps=%g", first, first / 2)
        try:
            helper = newton_solve(spec, first / 2, None, config)
            results.append(newton_solve(spec, first, helper.V, config))
        except BousswaveError as exc2:
            raise SweepFailed(first, exc2, results) from exc
    except BousswaveError as exc:
        raise SweepFailed(first, exc, results) from exc
    for eps in eps_list[1:]:
        try:
            results.append(newton_solve(spec, eps, results[-1].V, config))
        except BousswaveError as exc:
            raise SweepFailed(eps, exc, results) from exc
    return results


def _cold_sweep(spec, eps_list, config, workers):
    def solve(eps):
        try:
            return newton_solve(spec, eps, None, config)
        except BousswaveError as exc:
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(solve, eps_list))
    else:
        outcomes = [solve(e) for e in eps_list]
    results = []
    for eps, out in zip(eps_list, outcomes):
        if isinstance(out, BousswaveError):
            raise SweepFailed(eps, out, results)
        results.append(out)
    return results

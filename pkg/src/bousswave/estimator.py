"""Estimator-style facade over the solver.

``fit`` computes the solitary-wave family for the requested amplitudes and
``predict`` samples the physical profile ``v(x) = eps^2 V(eps x)``.
"""
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from . import _validation as val
from .errors import ConfigError
from .models import SystemSpec, make_builtin
from .postprocess import physical_residual, rate_fit
from .solver import SolveConfig, continuation_sweep, kdv_profile


class SolitaryWaveEstimator(BaseEstimator):
    """Solitary waves of a Boussinesq-type model.

    Parameters
    ----------
    model : str or SystemSpec, default="ddk"
        Built-in model name or a prepared spec.
    L, N : grid half-length and number of nodes for the rescaled problem.
    s : Sobolev index of all norms.
    newton_tol, max_iter, tail_tol : Newton controls, see ``SolveConfig``.
    """

    def __init__(self, model="ddk", L=50.0, N=1024, s=1.0, newton_tol=1e-11, max_iter=25,
                 tail_tol=1e-8):
        self.model = model
        self.L = L
        self.N = N
        self.s = s
        self.newton_tol = newton_tol
        self.max_iter = max_iter
        self.tail_tol = tail_tol

    def _spec(self):
        if isinstance(self.model, SystemSpec):
            return self.model
        if isinstance(self.model, str):
            return make_builtin(self.model)
        raise ConfigError(f"model must be a name or SystemSpec, got {self.model!r}")

    def fit(self, eps, y=None):
        """Solve for every amplitude in ``eps`` (a number or a list)."""
        L, N = val.check_grid_params(self.L, self.N)
        eps = val.check_eps_list(eps)
        config = SolveConfig(s=self.s, L=L, N=N, newton_tol=self.newton_tol,
                             max_iter=self.max_iter, tail_tol=self.tail_tol)
        self.spec_ = self._spec()
        self.grid_ = config.grid()
        self.sigma_ = kdv_profile(self.spec_.gamma, self.grid_)
        self.results_ = continuation_sweep(self.spec_, eps, config)
        self.eps_ = tuple(r.eps for r in self.results_)
        self.rate_ = rate_fit(self.results_, spec=self.spec_) if len(eps) >= 3 else None
        return self

    def _result(self, eps):
        if not hasattr(self, "results_"):
            raise NotFittedError("call fit before predict")
        if eps is None:
            return self.results_[-1]
        eps = val.check_eps(eps)
        for r in self.results_:
            if np.isclose(r.eps, eps, rtol=0, atol=1e-14):
                return r
        raise ValueError(f"eps={eps!r} was not fitted; available: {list(self.eps_)}")

    def predict(self, x, eps=None):
        """Physical profile ``v`` at positions ``x`` (default: smallest fitted eps)."""
        r = self._result(eps)
        x = val.check_points(x)
        return r.eps**2 * self.grid_.interpolate(r.V.values, r.eps * x)

    def score(self, x=None, y=None, eps=None):
        """Negative largest physical-system residual; 0 is perfect."""
        r = self._result(eps)
        return -max(physical_residual(self.spec_, r, self.s))

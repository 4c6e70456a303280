"""Input checks shared by the estimator and the CLI."""
import numbers

import numpy as np

from .errors import ConfigError


def check_eps(eps, name="eps"):
    if isinstance(eps, bool) or not isinstance(eps, numbers.Real):
        raise ConfigError(f"{name} must be a real number, got {eps!r}")
    eps = float(eps)
    if not 0 < eps < 1:
        raise ConfigError(f"{name} must lie in (0, 1), got {eps!r}")
    return eps


def check_eps_list(values, min_len=1):
    """Sorted-descending tuple of distinct eps values in (0, 1)."""
    if isinstance(values, numbers.Real):
        values = [values]
    try:
        items = [check_eps(v, "eps_list entry") for v in values]
    except TypeError:
        raise ConfigError(f"eps_list must be a list of numbers, got {values!r}") from None
    if len(set(items)) != len(items):
        raise ConfigError("eps_list entries must be distinct")
    if len(items) < min_len:
        raise ConfigError(f"eps_list needs at least {min_len} entries")
    return tuple(sorted(items, reverse=True))


def check_grid_params(L, N):
    if isinstance(L, bool) or not isinstance(L, numbers.Real) or not np.isfinite(L) or L <= 0:
        raise ConfigError(f"L must be a positive finite number, got {L!r}")
    if isinstance(N, bool) or not isinstance(N, numbers.Integral):
        raise ConfigError(f"N must be an integer, got {N!r}")
    N = int(N)
    if N < 16 or N & (N - 1):
        raise ConfigError(f"N must be a power of two >= 16, got {N!r}")
    return float(L), N


def check_positive(value, name, integer=False):
    kind = numbers.Integral if integer else numbers.Real
    if isinstance(value, bool) or not isinstance(value, kind) or not value > 0:
        raise ConfigError(f"{name} must be a positive {'integer' if integer else 'number'}, "
                          f"got {value!r}")
    return int(value) if integer else float(value)


def check_points(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.ndim > 1:
        raise ValueError(f"expected a 1-d array of positions, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("positions must be finite")
    return np.atleast_1d(x)

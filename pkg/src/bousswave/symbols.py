"""Even Fourier-multiplier symbols.

A :class:`MultiplierSymbol` wraps a vectorized function of the frequency
and always evaluates it at ``|xi|``, so evenness holds bit-for-bit.
Symbols are immutable; the algebra (:func:`combine`, :func:`scale_symbol`)
returns new objects.
"""
import math

import numpy as np

from .errors import DerivativeUnstable, SymbolSingular

# below this |xi| a registered Taylor stub replaces the raw evaluator
STUB_RADIUS = 1e-8


class MultiplierSymbol:
    """An even real symbol ``phi(xi)``.

    Parameters
    ----------
    func : callable
        Vectorized function of a nonnegative float array.
    value_at_zero, d2_at_zero : float, optional
        Analytic values of ``phi(0)`` and ``phi''(0)``.
    growth_hint : float, optional
        Exponent ``p`` with ``|phi(xi)| ~ |xi|**p`` for large ``|xi|``.
    stub : callable, optional
        Evaluator used for ``|xi| < STUB_RADIUS`` (removable singularities).
    label : str, optional
        Human-readable description, used in ``repr`` only.
    """

    __slots__ = ("_func", "value_at_zero", "d2_at_zero", "growth_hint", "_stub", "label")

    def __init__(self, func, value_at_zero=None, d2_at_zero=None, growth_hint=None,
                 stub=None, label=None):
        object.__setattr__(self, "_func", func)
        object.__setattr__(self, "value_at_zero", None if value_at_zero is None else float(value_at_zero))
        object.__setattr__(self, "d2_at_zero", None if d2_at_zero is None else float(d2_at_zero))
        object.__setattr__(self, "growth_hint", None if growth_hint is None else float(growth_hint))
        object.__setattr__(self, "_stub", stub)
        object.__setattr__(self, "label", label or getattr(func, "__name__", "symbol"))

    def __setattr__(self, name, value):
        raise AttributeError("MultiplierSymbol is immutable")

    def __repr__(self):
        return f"MultiplierSymbol({self.label})"

    @property
    def has_overrides(self):
        return self.value_at_zero is not None and self.d2_at_zero is not None

    def raw(self, xi):
        """Evaluate without the finiteness check. ``xi`` must be nonnegative."""
        xi = np.asarray(xi, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(self._func(xi), dtype=float)
            if out.shape != xi.shape:
                out = np.broadcast_to(out, xi.shape).copy()
            if self._stub is not None:
                small = xi < STUB_RADIUS
                if np.any(small):
                    out = np.where(small, np.asarray(self._stub(xi), dtype=float), out)
        return out

    def __call__(self, xi):
        scalar = np.ndim(xi) == 0
        axi = np.abs(np.asarray(xi, dtype=float))
        out = self.raw(axi)
        bad = ~np.isfinite(out)
        if np.any(bad):
            raise SymbolSingular(axi[bad].flat[0] if axi.ndim else float(axi))
        return float(out) if scalar else out


def eval_symbol(sym, xi):
    """Value of ``sym`` at the scalar frequency ``xi``."""
    if not math.isfinite(xi):
        raise ValueError(f"xi must be finite, got {xi!r}")
    return sym(float(xi))


def constant(c, label=None):
    c = float(c)
    return MultiplierSymbol(lambda xi: np.full(np.shape(xi), c), value_at_zero=c,
                            d2_at_zero=0.0, growth_hint=0.0, label=label or repr(c))


def polynomial(coeffs, label=None):
    """Even polynomial ``sum_j coeffs[j] * xi**(2j)``."""
    coeffs = [float(c) for c in coeffs]

    def func(xi):
        xi2 = xi * xi
        out = np.zeros_like(xi)
        for c in reversed(coeffs):
            out = out * xi2 + c
        return out

    top = max((j for j, c in enumerate(coeffs) if c != 0), default=0)
    return MultiplierSymbol(func, value_at_zero=coeffs[0],
                            d2_at_zero=2 * coeffs[1] if len(coeffs) > 1 else 0.0,
                            growth_hint=2.0 * top, label=label or f"poly{coeffs}")


def _tanh_over_xi(xi):
    return np.tanh(xi) / xi


def tanh_ratio():
    """``tanh(xi)/xi``, the finite-depth water-wave operator ``K``."""
    return MultiplierSymbol(_tanh_over_xi, value_at_zero=1.0, d2_at_zero=-2.0 / 3.0,
                            growth_hint=-1.0, stub=lambda xi: 1.0 - xi * xi / 3.0,
                            label="tanh(xi)/xi")


def origin_data(sym, h=1e-2, rtol=1e-8, max_levels=8):
    """Return ``(sym(0), sym''(0))``.

    Analytic overrides win. Otherwise the second derivative comes from a
    Richardson tableau of central differences on steps ``h, h/2, h/4, ...``,
    accepted once two successive diagonal entries agree to ``rtol``.
    """
    if sym.has_overrides:
        return sym.value_at_zero, sym.d2_at_zero
    f0 = float(sym(0.0))
    fscale = max(abs(f0), 1.0)
    steps = h / 2.0 ** np.arange(max_levels)
    # even symbol: (f(h) - 2 f(0) + f(-h)) / h^2 = 2 (f(h) - f(0)) / h^2
    diffs = 2.0 * (sym(steps) - f0) / steps**2
    table = [[d] for d in diffs]
    prev = None
    for i in range(1, max_levels):
        row = table[i]
        for j in range(1, i + 1):
            factor = 4.0**j
            row.append((factor * row[j - 1] - table[i - 1][j - 1]) / (factor - 1.0))
        best = row[-1]
        if i >= 2:
            prev = table[i - 1][-1]
            if abs(best - prev) <= rtol * max(abs(best), 1e-3 * fscale):
                return f0, float(best)
    raise DerivativeUnstable(f"second derivative at 0 did not settle for {sym!r} "
                             f"(last estimates {prev!r}, {table[-1][-1]!r})")


def scale_symbol(sym, eps):
    """Symbol ``xi -> sym(eps * xi)``; ``eps = 0`` gives the constant ``sym(0)``."""
    eps = float(eps)
    if eps == 0.0:
        return constant(sym(0.0), label=f"{sym.label}(0)")
    base, factor = sym, eps
    # collapse nested scalings so scale(scale(s, a), b) is exactly scale(s, a*b)
    inner = getattr(sym._func, "_scaled_from", None)
    if inner is not None:
        base, factor = inner[0], inner[1] * eps
    a = abs(factor)

    def func(xi):
        return base.raw(a * xi)

    func._scaled_from = (base, factor)
    d2 = None if base.d2_at_zero is None else base.d2_at_zero * factor * factor
    return MultiplierSymbol(func, value_at_zero=base.value_at_zero, d2_at_zero=d2,
                            growth_hint=base.growth_hint, label=f"{base.label}[{factor:g}*xi]")


def _product(a, b):
    def func(xi):
        return a.raw(xi) * b.raw(xi)

    if a.has_overrides and b.has_overrides:
        v = a.value_at_zero * b.value_at_zero
        d2 = a.d2_at_zero * b.value_at_zero + a.value_at_zero * b.d2_at_zero
    else:
        v = d2 = None
    g = _sum_hint(a.growth_hint, b.growth_hint)
    return MultiplierSymbol(func, v, d2, g, label=f"({a.label})*({b.label})")


def _quotient(a, b):
    def func(xi):
        return a.raw(xi) / b.raw(xi)

    if a.has_overrides and b.has_overrides and b.value_at_zero != 0:
        b0 = b.value_at_zero
        v = a.value_at_zero / b0
        d2 = (a.d2_at_zero * b0 - a.value_at_zero * b.d2_at_zero) / b0**2
    else:
        v = d2 = None
    g = _sum_hint(a.growth_hint, None if b.growth_hint is None else -b.growth_hint)
    return MultiplierSymbol(func, v, d2, g, label=f"({a.label})/({b.label})")


def _sqrt(a):
    def func(xi):
        return np.sqrt(a.raw(xi))

    if a.has_overrides and a.value_at_zero > 0:
        v = math.sqrt(a.value_at_zero)
        d2 = a.d2_at_zero / (2.0 * v)
    else:
        v = d2 = None
    g = None if a.growth_hint is None else a.growth_hint / 2.0
    return MultiplierSymbol(func, v, d2, g, label=f"sqrt({a.label})")


def _reciprocal(a):
    def func(xi):
        return 1.0 / a.raw(xi)

    if a.has_overrides and a.value_at_zero != 0:
        v = 1.0 / a.value_at_zero
        d2 = -a.d2_at_zero / a.value_at_zero**2
    else:
        v = d2 = None
    g = None if a.growth_hint is None else -a.growth_hint
    return MultiplierSymbol(func, v, d2, g, label=f"1/({a.label})")


def _affine(a, slope, offset):
    slope, offset = float(slope), float(offset)

    def func(xi):
        return slope * a.raw(xi) + offset

    if a.has_overrides:
        v = slope * a.value_at_zero + offset
        d2 = slope * a.d2_at_zero
    else:
        v = d2 = None
    g = a.growth_hint if slope != 0 else 0.0
    if g is not None and g < 0 and offset != 0:
        g = 0.0
    return MultiplierSymbol(func, v, d2, g, label=f"{slope:g}*({a.label})+{offset:g}")


def _sum_hint(p, q):
    return None if p is None or q is None else p + q


_ARITY = {"product": 2, "quotient": 2, "sqrt": 1, "reciprocal": 1, "affine": 1}


def combine(symbols, recipe, *args):
    """Pointwise algebra on symbols.

    ``recipe`` is one of ``"product"``, ``"quotient"``, ``"sqrt"``,
    ``"reciprocal"`` or ``"affine"`` (the latter takes ``slope, offset``
    as extra arguments). ``"product"`` also accepts more than two factors.

    Zero denominators and negative square-root arguments are detected at
    evaluation time and raise :class:`SymbolSingular`.
    """
    symbols = list(symbols)
    if recipe not in _ARITY:
        raise ValueError(f"unknown recipe {recipe!r}")
    if recipe == "product" and len(symbols) >= 2:
        out = symbols[0]
        for s in symbols[1:]:
            out = _product(out, s)
        return out
    if len(symbols) != _ARITY[recipe]:
        raise ValueError(f"{recipe} takes {_ARITY[recipe]} symbol(s), got {len(symbols)}")
    if recipe == "quotient":
        return _quotient(*symbols)
    if recipe == "sqrt":
        return _sqrt(symbols[0])
    if recipe == "reciprocal":
        return _reciprocal(symbols[0])
    if len(args) != 2:
        raise ValueError("affine needs (slope, offset)")
    return _affine(symbols[0], *args)


def product(*symbols):
    return combine(symbols, "product")


def quotient(num, den):
    return combine([num, den], "quotient")


def sqrt(sym):
    return combine([sym], "sqrt")


def reciprocal(sym):
    return combine([sym], "reciprocal")


def affine(sym, slope, offset):
    return combine([sym], "affine", slope, offset)


def bessel(power=-2.0):
    """``<xi>**power`` with ``<xi> = sqrt(1 + xi^2)``; the default is ``J^-2``."""
    p = float(power)
    return MultiplierSymbol(lambda xi: (1.0 + xi * xi) ** (p / 2.0), value_at_zero=1.0,
                            d2_at_zero=p, growth_hint=p, label=f"<xi>^{p:g}")

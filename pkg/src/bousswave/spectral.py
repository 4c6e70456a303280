"""Periodic pseudo-spectral discretization on ``[-L, L)``.

Grid nodes are ``x_j = -L + 2 L j / N`` and the nonnegative frequencies
``xi_k = pi k / L`` for ``k = 0 .. N/2``. Fields are stored as nodal
values on the full grid; the cosine view ``f = sum_k c_k cos(xi_k x)`` is
available for even fields.

All array helpers act on the last axis so that many fields (for example
all Jacobian columns) can be processed in one call.

Norm convention: ``hs_norm`` is the discrete Parseval sum

    ||f||_{H^s}^2 = (2L / N^2) * sum_k m_k (1 + xi_k^2)^s |F_k|^2,

with ``F = rfft(f)`` and ``m_k = 1`` at ``k = 0, N/2`` and ``2`` otherwise.
It equals the trapezoid rule for ``int_{-L}^{L} |J^s f|^2 dx``.
"""
import csv
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BadGrid


@dataclass(frozen=True)
class Grid:
    L: float
    N: int

    def __post_init__(self):
        L, N = self.L, self.N
        if not (np.isfinite(L) and L > 0):
            raise BadGrid(f"L must be positive and finite, got {L!r}")
        if int(N) != N or N < 16 or (int(N) & (int(N) - 1)):
            raise BadGrid(f"N must be a power of two >= 16, got {N!r}")
        object.__setattr__(self, "L", float(L))
        object.__setattr__(self, "N", int(N))

    @cached_property
    def dx(self):
        return 2.0 * self.L / self.N

    @cached_property
    def nodes(self):
        x = -self.L + self.dx * np.arange(self.N)
        x.flags.writeable = False
        return x

    @cached_property
    def xi(self):
        k = np.pi * np.arange(self.N // 2 + 1) / self.L
        k.flags.writeable = False
        return k

    @property
    def n_modes(self):
        return self.N // 2 + 1

    @cached_property
    def _mult(self):
        m = np.full(self.n_modes, 2.0)
        m[0] = m[-1] = 1.0
        return m

    @cached_property
    def _sign(self):
        # cos(xi_k x_j) = (-1)^k cos(2 pi j k / N) because the grid starts at -L
        return np.where(np.arange(self.n_modes) % 2 == 0, 1.0, -1.0)

    @cached_property
    def reflect_index(self):
        """Index of the node ``-x_j`` (``j=0`` pairs with itself)."""
        return (-np.arange(self.N)) % self.N

    # --- transforms -------------------------------------------------------

    def fft(self, values):
        return np.fft.rfft(values, axis=-1)

    def ifft(self, spec):
        return np.fft.irfft(spec, n=self.N, axis=-1)

    def cos_coeffs(self, values):
        """Cosine coefficients ``c_k`` of (the even part of) nodal values."""
        F = self.fft(values).real
        c = F * (self._mult * self._sign / self.N)
        return c

    def from_cos(self, coeffs):
        F = np.asarray(coeffs, dtype=float) * (self.N * self._sign / self._mult)
        return self.ifft(F)

    def cos_basis(self):
        """Matrix whose row ``k`` holds ``cos(xi_k x_j)``."""
        return np.cos(np.outer(self.xi, self.nodes))

    def apply(self, table, values):
        """Multiply the spectrum of ``values`` by the sampled symbol ``table``."""
        return self.ifft(self.fft(values) * table)

    def multiply(self, a, b):
        """Dealiased product: evaluate on a 2x padded grid, truncate back."""
        N = self.N
        A = _pad(self.fft(a), N)
        B = _pad(self.fft(b), N)
        prod = np.fft.irfft(A, n=2 * N, axis=-1) * np.fft.irfft(B, n=2 * N, axis=-1)
        P = np.fft.rfft(prod, axis=-1)[..., : N // 2 + 1]
        out = P * 0.5
        out[..., -1] = P[..., -1].real
        return self.ifft(out)

    def weights(self, s):
        return self._mult * (1.0 + self.xi**2) ** s

    def hs_norm(self, values, s=0.0):
        F = self.fft(values)
        total = np.sum(self.weights(s) * np.abs(F) ** 2, axis=-1)
        return np.sqrt(total * (2.0 * self.L / self.N**2))

    def interpolate(self, values, x):
        """Trigonometric interpolation of nodal values at arbitrary points."""
        F = self.fft(values) / self.N
        F = F * self._mult
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * np.multiply.outer(x + self.L, self.xi))
        return (phase @ F).real


def _pad(spec, N):
    shape = spec.shape[:-1] + (N + 1,)
    out = np.zeros(shape, dtype=complex)
    out[..., : N // 2 + 1] = 2.0 * spec
    out[..., N // 2] *= 0.5
    return out


def make_grid(L, N):
    return Grid(L, N)


@dataclass
class Field:
    """Real grid function; ``even`` marks fields known to be even about 0."""

    grid: Grid
    values: np.ndarray
    even: bool = False
    _coeffs: np.ndarray = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.N,):
            raise ValueError(f"expected {self.grid.N} samples, got shape {values.shape}")
        self.values = values

    @classmethod
    def from_function(cls, grid, func, even=False):
        return cls(grid, func(np.asarray(grid.nodes)), even=even)

    @classmethod
    def from_coeffs(cls, grid, coeffs):
        f = cls(grid, grid.from_cos(coeffs), even=True)
        f._coeffs = np.array(coeffs, dtype=float)
        return f

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.N), even=True)

    @property
    def coeffs(self):
        if self._coeffs is None:
            self._coeffs = self.grid.cos_coeffs(self.values)
        return self._coeffs

    @property
    def x(self):
        return self.grid.nodes

    def copy(self):
        return Field(self.grid, self.values.copy(), self.even)

    def _check(self, other):
        if isinstance(other, Field):
            if other.grid != self.grid:
                raise ValueError("fields live on different grids")
            return other.values, other.even
        return other, True

    def __add__(self, other):
        v, e = self._check(other)
        return Field(self.grid, self.values + v, self.even and e)

    __radd__ = __add__

    def __sub__(self, other):
        v, e = self._check(other)
        return Field(self.grid, self.values - v, self.even and e)

    def __rsub__(self, other):
        v, e = self._check(other)
        return Field(self.grid, v - self.values, self.even and e)

    def __mul__(self, c):
        if isinstance(c, Field):
            return multiply(self, c)
        return Field(self.grid, self.values * c, self.even)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Field(self.grid, self.values / c, self.even)

    def __neg__(self):
        return Field(self.grid, -self.values, self.even)

    def odd_part_ratio(self):
        """``max|f(x) - f(-x)| / (2 max|f|)``; zero for exactly even fields."""
        scale = np.max(np.abs(self.values))
        if scale == 0:
            return 0.0
        diff = self.values - self.values[self.grid.reflect_index]
        return float(np.max(np.abs(diff)) / (2.0 * scale))


def apply_multiplier(sym, f):
    """Fourier multiplier ``sym(D)`` applied to the field ``f``."""
    table = sym(f.grid.xi)
    return Field(f.grid, f.grid.apply(table, f.values), f.even)


def multiply(f, g):
    """Pointwise product of two fields with 2x-padded dealiasing."""
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    return Field(f.grid, f.grid.multiply(f.values, g.values), f.even and g.even)


def hs_norm(f, s):
    return float(f.grid.hs_norm(f.values, s))


def project_even(f):
    v = 0.5 * (f.values + f.values[f.grid.reflect_index])
    return Field(f.grid, v, even=True)


def tail_fraction(f, s, cutoff=1.0 / 3.0):
    """Share of ``||f||_{H^s}^2`` carried by modes ``k > cutoff * N``."""
    grid = f.grid
    energy = grid.weights(s) * np.abs(grid.fft(f.values)) ** 2
    total = energy.sum()
    if total == 0:
        raise ValueError("tail fraction of the zero field is undefined")
    k = np.arange(grid.n_modes)
    return float(energy[k > cutoff * grid.N].sum() / total)


def derivative(f, order=1):
    """Spectral derivative; the Nyquist mode is dropped for odd orders."""
    grid = f.grid
    table = (1j * grid.xi) ** order
    if order % 2:
        table[-1] = 0.0
    return Field(grid, grid.ifft(grid.fft(f.values) * table), f.even and order % 2 == 0)


def write_field_csv(path, f, name="value"):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", name])
        for x, v in zip(f.grid.nodes, f.values):
            w.writerow([repr(float(x)), repr(float(v))])


def write_coeffs_csv(path, f):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "xi", "coeff"])
        for k, (xi, c) in enumerate(zip(f.grid.xi, f.coeffs)):
            w.writerow([k, repr(float(xi)), repr(float(c))])

"""Exact eigenmodes on one copy of the quotient.

A Landau mode with level n, z-frequency alpha != 0, and sector r in
[0, |alpha|) is the Zak-type lattice sum

    N e^{i alpha z} sum_{j = r mod |alpha|, |j| <= A |alpha|}
        e^{i sqrt(2 pi) j y} h_n(sqrt|alpha| (x - sqrt(2 pi) j / alpha)),

with N = |alpha|^{1/4} / (2 pi)^{3/4}.  Shifting the window index by alpha
absorbs the lattice twist, so the full sum is invariant under the lattice and
the truncation error is Gaussian-small in A.  Distinct (n, alpha, r) modes
are mutually orthonormal, as are the Fourier modes

    e^{i sqrt(2 pi) (k x + l y)} / (2 pi)

living on the z-independent branch.  Each mode also knows how to evaluate the
sub-Laplacian applied to itself through ladder-identity derivatives, which is
what the eigen-equation self-tests differentiate against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import SQRT_2PI
from .hermite import HermiteEvaluator
from .spectrum import Fourier, Landau

TWO_PI = 2.0 * math.pi

#: Hermite arguments beyond this are identically zero in double precision.
GAUSSIAN_REACH = 42.0


@lru_cache(maxsize=64)
def _evaluator(n_max: int) -> HermiteEvaluator:
    return HermiteEvaluator(n_max)


def default_window(alpha: int) -> int:
    """Truncation half-width A for the index window |j| <= A |alpha|.

    Sized so the neglected tail is below 1e-14 for evaluation points within a
    few fundamental periods of the domain.
    """
    return 4 + math.ceil(10.0 / math.sqrt(abs(alpha)))


@dataclass(frozen=True)
class LandauMode:
    """One Zak-sector eigenmode; eigenvalue (2 n + 1) |alpha|."""

    n: int
    alpha: int
    sector: int
    window: int = 0

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("Landau mode needs alpha != 0")
        if self.n < 0:
            raise ValueError("level must be nonnegative")
        if not 0 <= self.sector < abs(self.alpha):
            raise ValueError("sector must lie in [0, |alpha|)")
        if self.window == 0:
            object.__setattr__(self, "window", default_window(self.alpha))

    @property
    def branch(self) -> Landau:
        return Landau(self.n, self.alpha)

    @property
    def z_frequency(self) -> int:
        return self.alpha

    @property
    def normalization(self) -> float:
        return abs(self.alpha) ** 0.25 / TWO_PI ** 0.75

    def indices(self) -> np.ndarray:
        """Window indices j = sector mod |alpha| with |j| <= window * |alpha|."""
        a = abs(self.alpha)
        lo, hi = -self.window * a, self.window * a
        first = lo + (self.sector - lo) % a
        return np.arange(first, hi + 1, a)

    def centers(self) -> np.ndarray:
        return SQRT_2PI * self.indices() / self.alpha

    def _active(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Window indices whose Hermite factor can be nonzero somewhere in x."""
        js = self.indices()
        centers = SQRT_2PI * js / self.alpha
        scale = math.sqrt(abs(self.alpha))
        reach = GAUSSIAN_REACH / scale
        keep = (centers >= x.min() - reach) & (centers <= x.max() + reach)
        return js[keep], centers[keep]

    def xy_values(self, x, y, minus_delta: bool = False) -> np.ndarray:
        """The z-stripped part of the mode on broadcast arrays x, y.

        With ``minus_delta`` the sub-Laplacian is applied first:
        per index j the Hermite factor h_n(xi) becomes
        |alpha| (-h_n''(xi) + xi^2 h_n(xi)), assembled from ladder-identity
        derivatives rather than the oscillator equation.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        js, centers = self._active(np.atleast_1d(x))
        if js.size == 0:
            return np.zeros(np.broadcast(x, y).shape, dtype=complex)
        scale = math.sqrt(abs(self.alpha))
        xi = scale * (x[..., None] - centers)
        if minus_delta:
            ev = _evaluator(self.n + 2)
            rows = ev.batch(xi)
            hpp = -0.5 * (2 * self.n + 1) * rows[self.n]
            if self.n >= 2:
                hpp = hpp + 0.5 * math.sqrt(self.n * (self.n - 1)) * rows[self.n - 2]
            hpp = hpp + 0.5 * math.sqrt((self.n + 1) * (self.n + 2)) * rows[self.n + 2]
            radial = abs(self.alpha) * (-hpp + xi * xi * rows[self.n])
        else:
            radial = _evaluator(self.n).batch(xi)[self.n]
        phases = np.exp(1j * SQRT_2PI * js * y[..., None])
        return self.normalization * np.sum(phases * radial, axis=-1)

    def values(self, x, y, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return np.exp(1j * self.alpha * z) * self.xy_values(x, y)

    def minus_delta_values(self, x, y, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return np.exp(1j * self.alpha * z) * self.xy_values(x, y, minus_delta=True)

    def profile(self, x) -> np.ndarray:
        """Hermite factors per window index, shape (len(indices), len(x));
        the quadrature kernels consume this row matrix."""
        x = np.asarray(x, dtype=float)
        js = self.indices()
        centers = SQRT_2PI * js / self.alpha
        scale = math.sqrt(abs(self.alpha))
        xi = scale * (x[None, :] - centers[:, None])
        return _evaluator(self.n).batch(xi)[self.n]


@dataclass(frozen=True)
class FourierMode:
    """Torus mode on the z-independent branch; eigenvalue 2 pi (k^2 + l^2)."""

    k: int
    l: int

    @property
    def branch(self) -> Fourier:
        return Fourier(self.k, self.l)

    @property
    def z_frequency(self) -> int:
        return 0

    @property
    def normalization(self) -> float:
        return 1.0 / TWO_PI

    def xy_values(self, x, y, minus_delta: bool = False) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        vals = self.normalization * np.exp(1j * SQRT_2PI * (self.k * x + self.l * y))
        if minus_delta:
            vals = TWO_PI * (self.k ** 2 + self.l ** 2) * vals
        return vals + 0j

    def values(self, x, y, z) -> np.ndarray:
        del z
        return self.xy_values(x, y)

    def minus_delta_values(self, x, y, z) -> np.ndarray:
        del z
        return self.xy_values(x, y, minus_delta=True)


CONSTANT_MODE = FourierMode(0, 0)

Mode = LandauMode | FourierMode


def mode_branch_key(mode: Mode) -> tuple[int, int]:
    if isinstance(mode, LandauMode):
        return ((2 * mode.n + 1) * abs(mode.alpha), 0)
    return (0, mode.k ** 2 + mode.l ** 2)


def mode_eigenvalue(mode: Mode) -> float:
    i, f = mode_branch_key(mode)
    return i + TWO_PI * f

"""Per-copy integrals between eigenmodes against trigonometric weights.

Everything reduces to the fundamental cube integral

    I = int e^{i sqrt(2 pi)(a x + b y)} e^{i c z} conj(f) g  dx dy dz

for two modes f, g on one copy.  The z and y integrals are exact Kronecker
deltas because both modes and the weight are finite trigonometric sums in
those coordinates: z forces c = zfreq(f) - zfreq(g) and y matches window
indices pairwise.  What remains is a short list of one-dimensional x
integrals of Hermite-Gaussian products over one period, done by
Gauss-Legendre quadrature with a node count scaled to the integrand
bandwidth and verified by re-integration at a finer resolution.  Cross-alpha
products are not periodic in x, which is why segment quadrature is used
instead of a periodic rule.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .geometry import SQRT_2PI
from .modes import FourierMode, LandauMode, Mode, _evaluator

TWO_PI = 2.0 * math.pi

#: Hermite factors whose center is farther than this many Gaussian widths
#: from the integration segment contribute below 1e-26 and are skipped.
SKIP_REACH = 11.0

RICHARDSON_TOL = 1e-6


class QuadratureError(RuntimeError):
    """Quadrature failed its refinement check at the requested tolerance."""


@lru_cache(maxsize=256)
def _segment_rule(points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, sqrt(2 pi)]."""
    nodes, weights = np.polynomial.legendre.leggauss(points)
    half = 0.5 * SQRT_2PI
    return half * (nodes + 1.0), half * weights


@lru_cache(maxsize=4096)
def _profile_rows(mode: LandauMode, points: int) -> np.ndarray:
    nodes, _ = _segment_rule(points)
    return mode.profile(nodes)


def _node_count(f: Mode, g: Mode, xfreq: int) -> int:
    band = SQRT_2PI * abs(xfreq)
    for mode in (f, g):
        if isinstance(mode, LandauMode):
            band += math.sqrt(abs(mode.alpha) * (2 * mode.n + 1)) + math.sqrt(abs(mode.alpha))
        else:
            band += SQRT_2PI * abs(mode.k)
    return 40 + math.ceil(2.4 * band)


def _expansion(mode: Mode) -> tuple[np.ndarray, float]:
    """Window indices and the scalar normalization of the y-expansion."""
    if isinstance(mode, LandauMode):
        return mode.indices(), mode.normalization
    return np.array([mode.l]), mode.normalization


def _landau_reach(mode: LandauMode) -> float:
    return (SKIP_REACH + math.sqrt(2.0 * mode.n + 1.0)) / math.sqrt(abs(mode.alpha))


def _matched_pairs(f: Mode, g: Mode, b: int) -> list[tuple[int, int]]:
    """Index pairs (j_f, j_g) with j_f = j_g + b surviving both windows and
    the negligibility cut."""
    js_f, _ = _expansion(f)
    js_g, _ = _expansion(g)
    set_f = set(int(j) for j in js_f)
    pairs = []
    for j_g in js_g:
        j_f = int(j_g) + b
        if j_f in set_f:
            pairs.append((j_f, int(j_g)))
    if not pairs:
        return pairs
    lo, hi = 0.0, SQRT_2PI

    def near(mode: Mode, j: int) -> bool:
        if isinstance(mode, FourierMode):
            return True
        center = SQRT_2PI * j / mode.alpha
        reach = _landau_reach(mode)
        return (center >= lo - reach) and (center <= hi + reach)

    return [(jf, jg) for jf, jg in pairs if near(f, jf) and near(g, jg)]


def _factor_on_nodes(mode: Mode, j: int, points: int) -> np.ndarray:
    """The x-dependent coefficient of e^{i sqrt(2 pi) j y} at the nodes,
    normalization included."""
    nodes, _ = _segment_rule(points)
    if isinstance(mode, LandauMode):
        js = mode.indices()
        row = int(np.searchsorted(js, j))
        return mode.normalization * _profile_rows(mode, points)[row].astype(complex)
    return mode.normalization * np.exp(1j * SQRT_2PI * mode.k * nodes)


def _xy_overlap_at(f: Mode, g: Mode, a: int, b: int, points: int) -> complex:
    pairs = _matched_pairs(f, g, b)
    if not pairs:
        return 0.0 + 0.0j
    nodes, weights = _segment_rule(points)
    wave = np.exp(1j * SQRT_2PI * a * nodes) if a else 1.0
    total = 0.0 + 0.0j
    for j_f, j_g in pairs:
        integrand = np.conj(_factor_on_nodes(f, j_f, points)) * _factor_on_nodes(g, j_g, points)
        total += np.sum(weights * wave * integrand)
    return SQRT_2PI * total


@lru_cache(maxsize=65536)
def xy_overlap(f: Mode, g: Mode, a: int = 0, b: int = 0) -> complex:
    """int over one (x, y) period of e^{i sqrt(2 pi)(a x + b y)} conj(f) g
    with the z factors stripped.

    Fourier-Fourier products are exact Kronecker deltas; everything else runs
    through bandwidth-scaled segment quadrature with a refinement check.
    """
    if isinstance(f, FourierMode) and isinstance(g, FourierMode):
        if f.l == g.l + b and f.k == g.k + a:
            return complex(1.0 / TWO_PI)
        return 0.0 + 0.0j
    k_f = f.k if isinstance(f, FourierMode) else 0
    k_g = g.k if isinstance(g, FourierMode) else 0
    points = _node_count(f, g, a + k_g - k_f)
    coarse = _xy_overlap_at(f, g, a, b, points)
    fine = _xy_overlap_at(f, g, a, b, math.ceil(1.4 * points) + 8)
    if abs(fine - coarse) > RICHARDSON_TOL * max(1.0, abs(fine)):
        raise QuadratureError(
            f"xy overlap failed refinement: {abs(fine - coarse):.3e} at {points} nodes"
        )
    return complex(fine)


def full_overlap(f: Mode, g: Mode, a: int = 0, b: int = 0, c: int = 0) -> complex:
    """Full cube integral of e^{i sqrt(2 pi)(a x + b y)} e^{i c z} conj(f) g.

    The z integral contributes 2 pi exactly when c = zfreq(f) - zfreq(g) and
    kills the product otherwise.
    """
    if c != f.z_frequency - g.z_frequency:
        return 0.0 + 0.0j
    return TWO_PI * xy_overlap(f, g, a, b)


def x_profile_product(f: Mode, g: Mode, x: np.ndarray) -> np.ndarray:
    """y-integrated product sqrt(2 pi) sum_j conj(F_j)(x) G_j(x), the
    x-marginal kernel of conj(f) g."""
    x = np.asarray(x, dtype=float)
    pairs = _matched_pairs(f, g, 0)
    out = np.zeros(x.shape, dtype=complex)
    for j_f, j_g in pairs:
        out += np.conj(_factor_at(f, j_f, x)) * _factor_at(g, j_g, x)
    return SQRT_2PI * out


def y_profile_product(f: Mode, g: Mode, y: np.ndarray) -> np.ndarray:
    """x-integrated product sum_{j,j'} e^{i sqrt(2 pi)(j' - j) y} I_{j j'},
    the y-marginal kernel of conj(f) g."""
    y = np.asarray(y, dtype=float)
    js_f, _ = _expansion(f)
    js_g, _ = _expansion(g)
    lo, hi = 0.0, SQRT_2PI

    def near(mode: Mode, j: int) -> bool:
        if isinstance(mode, FourierMode):
            return True
        center = SQRT_2PI * j / mode.alpha
        reach = _landau_reach(mode)
        return (center >= lo - reach) and (center <= hi + reach)

    js_f = [int(j) for j in js_f if near(f, int(j))]
    js_g = [int(j) for j in js_g if near(g, int(j))]
    points = _node_count(f, g, 0)
    nodes, weights = _segment_rule(points)
    out = np.zeros(y.shape, dtype=complex)
    for j_f in js_f:
        conj_f = np.conj(_factor_on_nodes(f, j_f, points))
        for j_g in js_g:
            integral = np.sum(weights * conj_f * _factor_on_nodes(g, j_g, points))
            out += integral * np.exp(1j * SQRT_2PI * (j_g - j_f) * y)
    return out


def _factor_at(mode: Mode, j: int, x: np.ndarray) -> np.ndarray:
    if isinstance(mode, LandauMode):
        scale = math.sqrt(abs(mode.alpha))
        xi = scale * (x - SQRT_2PI * j / mode.alpha)
        return mode.normalization * _evaluator(mode.n).batch(xi)[mode.n].astype(complex)
    return mode.normalization * np.exp(1j * SQRT_2PI * mode.k * x)

"""Shared brute-force oracles, independent of the library's quadrature paths.

Convergence caveat baked into the geometry: a single-frequency eigenfunction
restricted to (x, y) is exactly periodic over the fundamental square, so a
plain Riemann sum is spectrally accurate for same-frequency products.  A
product of modes with different z-frequencies picks up the lattice twist
phase exp(i (alpha_g - alpha_f) sqrt(2 pi) y) per x-period, so Riemann sums
converge only at first order there; ``refine_to_limit`` removes that O(1/N)
term by Richardson extrapolation.
"""

from __future__ import annotations

import math

import numpy as np

from heisfan.geometry import SQRT_2PI, Z_PERIOD


def grid_inner(f, g, n: int = 256) -> complex:
    """Riemann sum of conj(f) g over [0, sqrt(2 pi))^2 for single-copy modes."""
    ax = np.linspace(0.0, SQRT_2PI, n, endpoint=False)
    x, y = np.meshgrid(ax, ax, indexing="ij")
    cell = (SQRT_2PI / n) ** 2
    return complex((np.conj(f.xy_values(x, y)) * g.xy_values(x, y)).sum() * cell)


def refine_to_limit(fn, start: int = 200, doublings: int = 3) -> complex:
    """Richardson-extrapolate fn(N) under an error model sum_k C_k / N^k.

    Standard Neville table over grid doublings: level k cancels the 1/N^k
    term, so the returned value is accurate to O(1/N^{doublings+1}) of the
    finest grid.
    """
    rows = [complex(fn(start * 2 ** i)) for i in range(doublings + 1)]
    for k in range(1, doublings + 1):
        rows = [
            (2 ** k * rows[i + 1] - rows[i]) / (2 ** k - 1.0)
            for i in range(len(rows) - 1)
        ]
    return rows[0]


def brute_pair_m1(phi, test, n_xy: int = 96, n_z: int = 32) -> complex:
    """Direct 3-dimensional Riemann sum of a |phi|^2 pairing for m = 1.

    Exact in z and y once the grids resolve the integer frequency content;
    exact in x when every term pair shares one z-frequency, O(1/n_xy)
    otherwise (see the module docstring).
    """
    ax = np.linspace(0.0, SQRT_2PI, n_xy, endpoint=False)
    az = np.linspace(0.0, Z_PERIOD, n_z, endpoint=False)
    x, y, z = np.meshgrid(ax, ax, az, indexing="ij")
    pts = np.stack([x, y, z], axis=-1)[..., None, :]
    density = np.abs(phi.evaluate(pts)) ** 2
    values = test.values(pts)
    cell = (SQRT_2PI / n_xy) ** 2 * (Z_PERIOD / n_z)
    return complex((values * density).sum() * cell)


def fd_minus_delta(phi, pts: np.ndarray, h: float = 5e-4) -> np.ndarray:
    """Finite-difference sub-Laplacian along group translates.

    The horizontal fields have integral curves t -> q * (t, 0, 0) and
    t -> q * (0, t, 0); per copy the Y step shifts z by -x h under the group
    law, which is the only place the twist enters.  Independent of the
    library's ladder-identity derivatives.
    """
    pts = np.asarray(pts, dtype=float)
    m = pts.shape[-2]
    base = phi.evaluate(pts)
    total = np.zeros_like(base)
    for j in range(m):
        for sign in (1.0, -1.0):
            moved = pts.copy()
            moved[..., j, 0] += sign * h
            total += phi.evaluate(moved)
            moved = pts.copy()
            moved[..., j, 1] += sign * h
            moved[..., j, 2] -= pts[..., j, 0] * sign * h
            total += phi.evaluate(moved)
        total -= 4.0 * base
    return -total / (h * h)


def random_domain_points(rng, count: int, m: int) -> np.ndarray:
    pts = rng.uniform(0.0, 1.0, size=(count, m, 3))
    pts[..., 0] *= SQRT_2PI
    pts[..., 1] *= SQRT_2PI
    pts[..., 2] *= Z_PERIOD
    return pts


def hermite_closed_form(n: int, x: float) -> float:
    """Normalized oscillator eigenfunction from the physicists' polynomials,
    valid for small n: H_n(x) e^(-x^2/2) / sqrt(2^n n! sqrt(pi))."""
    polys = {
        0: 1.0,
        1: 2.0 * x,
        2: 4.0 * x * x - 2.0,
        3: 8.0 * x ** 3 - 12.0 * x,
        4: 16.0 * x ** 4 - 48.0 * x * x + 12.0,
    }
    norm = math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    return polys[n] * math.exp(-0.5 * x * x) / norm

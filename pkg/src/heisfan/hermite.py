"""Orthonormal Hermite functions on the real line.

h_n is the L2(R)-normalized eigenfunction of the harmonic oscillator
-d^2/dx^2 + x^2 with eigenvalue 2 n + 1, evaluated through the stable upward
three-term recurrence

    h_0(x) = pi^(-1/4) exp(-x^2 / 2),
    h_{n+1}(x) = x sqrt(2/(n+1)) h_n(x) - sqrt(n/(n+1)) h_{n-1}(x).

Derivatives come from h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}, so a
second derivative needs degrees up to n + 2.
"""

from __future__ import annotations

import math

import numpy as np


class DegreeOverflowError(ValueError):
    """Requested degree exceeds the evaluator's configured maximum."""


class HermiteEvaluator:
    """Evaluate h_0 .. h_{n_max} on arrays.

    Parameters
    ----------
    n_max : int
        Largest degree this evaluator will produce.  Recurrence coefficients
        are precomputed once.
    """

    def __init__(self, n_max: int):
        if n_max < 0:
            raise ValueError("n_max must be nonnegative")
        self.n_max = n_max
        ns = np.arange(1, n_max + 1, dtype=float)
        self._step = np.sqrt(2.0 / ns)
        self._back = np.sqrt((ns - 1.0) / ns)

    def batch(self, x) -> np.ndarray:
        """All degrees at once; returns shape (n_max + 1,) + x.shape.

        Arguments far in the Gaussian tail underflow cleanly to zero, which is
        the correct limit, so no windowing is needed by callers.
        """
        x = np.asarray(x, dtype=float)
        out = np.empty((self.n_max + 1,) + x.shape)
        out[0] = math.pi ** -0.25 * np.exp(-0.5 * x * x)
        if self.n_max >= 1:
            out[1] = math.sqrt(2.0) * x * out[0]
        for n in range(1, self.n_max):
            out[n + 1] = self._step[n] * x * out[n] - self._back[n] * out[n - 1]
        return out

    def __call__(self, n: int, x) -> np.ndarray:
        if n < 0:
            raise ValueError("degree must be nonnegative")
        if n > self.n_max:
            raise DegreeOverflowError(f"degree {n} exceeds n_max {self.n_max}")
        return self.batch(np.asarray(x, dtype=float))[n]

    def derivative(self, n: int, x) -> np.ndarray:
        """First derivative via the two-term ladder identity."""
        if n + 1 > self.n_max:
            raise DegreeOverflowError(f"derivative of degree {n} needs n_max >= {n + 1}")
        rows = self.batch(np.asarray(x, dtype=float))
        lower = math.sqrt(n / 2.0) * rows[n - 1] if n >= 1 else 0.0
        return lower - math.sqrt((n + 1) / 2.0) * rows[n + 1]

    def second_derivative(self, n: int, x) -> np.ndarray:
        """Second derivative assembled from two ladder applications:

        h_n'' = sqrt(n(n-1))/2 h_{n-2} - (2n+1)/2 h_n + sqrt((n+1)(n+2))/2 h_{n+2}.

        This is a consequence of the ladder identities alone; it is used as an
        independent route when applying the sub-Laplacian analytically.
        """
        if n + 2 > self.n_max:
            raise DegreeOverflowError(f"second derivative of degree {n} needs n_max >= {n + 2}")
        rows = self.batch(np.asarray(x, dtype=float))
        acc = -0.5 * (2 * n + 1) * rows[n]
        if n >= 2:
            acc = acc + 0.5 * math.sqrt(n * (n - 1)) * rows[n - 2]
        acc = acc + 0.5 * math.sqrt((n + 1) * (n + 2)) * rows[n + 2]
        return acc

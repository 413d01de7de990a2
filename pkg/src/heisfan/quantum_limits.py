"""Empirical diagnostics for eigenfunction ladders.

The weak-star behavior of |phi_k|^2 is observed through pairings against a
finite dictionary of trigonometric test functions, low-dimensional
marginals, exact z-frequency histograms, and invariance defects under the
z-translation flows.  All integrals factor per copy: z and y directions are
Kronecker-exact, x directions are verified one-dimensional quadratures, so
no computation ever touches a full 3m-dimensional grid.

A ladder is judged against declared predictions; the report records the
measured values per rung and a verdict per prediction.
"""

from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .eigenfunctions import GridAxis, GridField, QuotientEigenfunction, periodic_axis
from .geometry import SQRT_2PI, Z_PERIOD
from .modes import LandauMode
from .pairing import (
    full_overlap,
    x_profile_product,
    xy_overlap,
    y_profile_product,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TestFunction:
    """Finite trigonometric polynomial on the product of fundamental cubes.

    Keys are m-tuples of integer exponent triples (a_j, b_j, c_j), standing
    for the product over copies of e^{i sqrt(2 pi)(a_j x_j + b_j y_j)}
    e^{i c_j z_j}; values are complex coefficients.
    """

    m: int
    name: str
    coeffs: tuple[tuple[tuple[tuple[int, int, int], ...], complex], ...]

    def __post_init__(self):
        for key, _ in self.coeffs:
            if len(key) != self.m:
                raise ValueError("monomial arity does not match copy count")

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def sup_bound(self) -> float:
        return sum(abs(c) for _, c in self.coeffs)

    def is_real(self) -> bool:
        table = self.as_dict()
        for key, c in table.items():
            neg = tuple(tuple(-e for e in triple) for triple in key)
            if abs(table.get(neg, 0.0) - np.conj(c)) > 1e-15:
                return False
        return True

    def translate_z(self, weights: Sequence[float], t: float) -> "TestFunction":
        """Compose with the flow advancing z_j by t * weights_j (exact)."""
        out = []
        for key, c in self.coeffs:
            phase = sum(triple[2] * w for triple, w in zip(key, weights)) * t
            out.append((key, c * cmath.exp(1j * phase)))
        return TestFunction(self.m, f"{self.name}@flow", tuple(out))

    def values(self, coords: np.ndarray) -> np.ndarray:
        """Pointwise values at coordinates of shape (..., m, 3)."""
        total = np.zeros(coords.shape[:-2], dtype=complex)
        for key, c in self.coeffs:
            term = np.full(coords.shape[:-2], c, dtype=complex)
            for j, (a, b, cz) in enumerate(key):
                term = term * np.exp(
                    1j
                    * (
                        SQRT_2PI * (a * coords[..., j, 0] + b * coords[..., j, 1])
                        + cz * coords[..., j, 2]
                    )
                )
            total += term
        return total


def _zero_key(m: int) -> tuple[tuple[int, int, int], ...]:
    return tuple((0, 0, 0) for _ in range(m))


def constant_test(m: int) -> TestFunction:
    return TestFunction(m, "1", ((_zero_key(m), 1.0 + 0.0j),))


def _single_triple(m: int, copy: int, triple: tuple[int, int, int]):
    key = list(_zero_key(m))
    key[copy] = triple
    return tuple(key)


def monomial_test(m: int, exponents: dict[int, tuple[int, int, int]], name: str | None = None) -> TestFunction:
    """Single complex monomial with per-copy exponents (a, b, c)."""
    key = list(_zero_key(m))
    for copy, triple in exponents.items():
        key[copy] = tuple(int(e) for e in triple)
    label = name or "monomial" + "".join(
        f"[{copy + 1}:{triple}]" for copy, triple in sorted(exponents.items())
    )
    return TestFunction(m, label, ((tuple(key), 1.0 + 0.0j),))


def _real_pair(m: int, key, name: str, odd: bool) -> TestFunction:
    neg = tuple(tuple(-e for e in triple) for triple in key)
    if odd:
        coeffs = ((key, -0.5j), (neg, 0.5j))
    else:
        coeffs = ((key, 0.5 + 0.0j), (neg, 0.5 + 0.0j))
    return TestFunction(m, name, coeffs)


def cos_xy(m: int, copy: int, a: int, b: int) -> TestFunction:
    key = _single_triple(m, copy, (a, b, 0))
    return _real_pair(m, key, f"cos(r2pi({a}x_{copy + 1}+{b}y_{copy + 1}))", odd=False)


def sin_xy(m: int, copy: int, a: int, b: int) -> TestFunction:
    key = _single_triple(m, copy, (a, b, 0))
    return _real_pair(m, key, f"sin(r2pi({a}x_{copy + 1}+{b}y_{copy + 1}))", odd=True)


def cos_z(m: int, copy: int, c: int = 1) -> TestFunction:
    key = _single_triple(m, copy, (0, 0, c))
    return _real_pair(m, key, f"cos({c}z_{copy + 1})", odd=False)


def sin_z(m: int, copy: int, c: int = 1) -> TestFunction:
    key = _single_triple(m, copy, (0, 0, c))
    return _real_pair(m, key, f"sin({c}z_{copy + 1})", odd=True)


def cos_z_difference(m: int, copy_a: int, copy_b: int) -> TestFunction:
    key = list(_zero_key(m))
    key[copy_a] = (0, 0, 1)
    key[copy_b] = (0, 0, -1)
    return _real_pair(m, tuple(key), f"cos(z_{copy_a + 1}-z_{copy_b + 1})", odd=False)


def sin_z_difference(m: int, copy_a: int, copy_b: int) -> TestFunction:
    key = list(_zero_key(m))
    key[copy_a] = (0, 0, 1)
    key[copy_b] = (0, 0, -1)
    return _real_pair(m, tuple(key), f"sin(z_{copy_a + 1}-z_{copy_b + 1})", odd=True)


def default_dictionary(m: int) -> list[TestFunction]:
    """Flow-sensitive dictionary: single-copy and pairwise-difference
    z-harmonics, all bounded by 1 in sup norm."""
    out = []
    for j in range(m):
        out.append(cos_z(m, j))
        out.append(sin_z(m, j))
    for i in range(m):
        for j in range(i + 1, m):
            out.append(cos_z_difference(m, i, j))
            out.append(sin_z_difference(m, i, j))
    return out


# ---- pairings ----


def pair(phi: QuotientEigenfunction, test: TestFunction) -> complex:
    """int a |phi|^2 over the product of fundamental cubes."""
    if test.m != phi.m:
        raise ValueError("copy counts differ")
    total = 0.0 + 0.0j
    for key, c in test.coeffs:
        for c_t, modes_t in phi.terms:
            for c_u, modes_u in phi.terms:
                weight = c * np.conj(c_t) * c_u
                if weight == 0:
                    continue
                prod = weight
                for f, g, (a, b, cz) in zip(modes_t, modes_u, key):
                    prod *= full_overlap(f, g, a, b, cz)
                    if prod == 0:
                        break
                total += prod
    return complex(total)


def joint_pairing(
    phi: QuotientEigenfunction, psi: QuotientEigenfunction, test: TestFunction
) -> complex:
    """int a phi conj(psi) over the product of fundamental cubes."""
    if phi.m != psi.m or test.m != phi.m:
        raise ValueError("copy counts differ")
    total = 0.0 + 0.0j
    for key, c in test.coeffs:
        for c_t, modes_t in phi.terms:
            for d_u, modes_u in psi.terms:
                weight = c * c_t * np.conj(d_u)
                if weight == 0:
                    continue
                prod = weight
                for f, g, (a, b, cz) in zip(modes_u, modes_t, key):
                    prod *= full_overlap(f, g, a, b, cz)
                    if prod == 0:
                        break
                total += prod
    return complex(total)


# ---- marginals ----


def base_marginal(
    phi: QuotientEigenfunction, axis_names: list[str], resolution: int
) -> GridField:
    """Marginal density of |phi|^2 on one or two coordinates, normalized to
    integrate to 1.

    Per copy, the unselected z integral is an exact frequency match, the
    unselected (x, y) integrals are verified quadratures, and selected
    coordinates stay symbolic until the final tensor assembly, so the cost
    is independent of m beyond the term-pair loop.
    """
    if not 1 <= len(axis_names) <= 2:
        raise ValueError("marginals support one or two axes")
    axes = tuple(periodic_axis(name, resolution) for name in axis_names)
    plan = [_parse_axis(name, phi.m) for name in axis_names]
    shape = tuple(len(ax.nodes) for ax in axes)
    density = np.zeros(shape, dtype=complex)
    grid_cache: dict = {}
    for c_t, modes_t in phi.terms:
        for c_u, modes_u in phi.terms:
            weight = np.conj(c_t) * c_u
            if weight == 0:
                continue
            factors: list[tuple[tuple[int, ...], np.ndarray]] = []
            scalar = complex(weight)
            dead = False
            for j in range(phi.m):
                f, g = modes_t[j], modes_u[j]
                sel = {
                    kind: pos
                    for pos, (copy, kind) in enumerate(plan)
                    if copy == j
                }
                value = _copy_marginal_factor(f, g, sel, axes, grid_cache)
                if isinstance(value, complex):
                    scalar *= value
                    if scalar == 0:
                        dead = True
                        break
                else:
                    factors.append(value)
            if dead:
                continue
            block = np.full(shape, scalar, dtype=complex)
            for dims, arr in factors:
                expand = [None] * len(shape)
                for axis_pos, dim in enumerate(dims):
                    expand[dim] = axis_pos
                # place arr's axes onto the grid dims it covers
                order = [expand.index(i) for i in range(len(dims))]
                arr = np.transpose(arr, axes=order) if len(dims) > 1 else arr
                reshape = [1] * len(shape)
                for dim in dims:
                    reshape[dim] = shape[dim]
                block = block * arr.reshape(reshape)
            density += block
    density = density.real
    total = density
    for ax in reversed(axes):
        total = total @ ax.weights
    if total <= 0:
        raise ValueError("marginal has nonpositive mass")
    density = density / total
    meta = {
        "eigenvalue": phi.eigenvalue,
        "marginal_axes": list(axis_names),
        "normalized": True,
    }
    return GridField(axes, density, meta)


def _parse_axis(name: str, m: int) -> tuple[int, str]:
    kind, _, idx = name.partition("_")
    if kind not in ("x", "y", "z") or not idx.isdigit():
        raise ValueError(f"unknown axis name {name!r}")
    copy = int(idx) - 1
    if not 0 <= copy < m:
        raise ValueError(f"axis {name!r} exceeds the copy count {m}")
    return copy, kind


def _copy_marginal_factor(f, g, sel: dict[str, int], axes, grid_cache: dict | None = None):
    """Integral of conj(f) g over this copy's unselected coordinates.

    Returns a complex scalar when nothing is selected, otherwise a tuple
    (grid dims, array) whose array axes follow the listed dims.  The cache
    holds per-mode grid samples so the term-pair loop evaluates each mode
    once per axis pair.
    """
    d_alpha = g.z_frequency - f.z_frequency
    if "z" not in sel and d_alpha != 0:
        return 0.0 + 0.0j
    z_arrays = []
    if "z" in sel:
        nodes = axes[sel["z"]].nodes
        z_arrays.append((sel["z"], np.exp(1j * d_alpha * nodes)))
        z_weight = 1.0
    else:
        z_weight = TWO_PI
    have_x = "x" in sel
    have_y = "y" in sel
    if not have_x and not have_y:
        xy: list[tuple[int, np.ndarray]] = []
        scalar = z_weight * xy_overlap(f, g)
    elif have_x and not have_y:
        nodes = axes[sel["x"]].nodes
        xy = [(sel["x"], x_profile_product(f, g, nodes))]
        scalar = z_weight
    elif have_y and not have_x:
        nodes = axes[sel["y"]].nodes
        xy = [(sel["y"], y_profile_product(f, g, nodes))]
        scalar = z_weight
    else:
        xn = axes[sel["x"]].nodes
        yn = axes[sel["y"]].nodes

        def sampled(mode):
            key = (mode, sel["x"], sel["y"])
            if grid_cache is None:
                X, Y = np.meshgrid(xn, yn, indexing="ij")
                return mode.xy_values(X, Y)
            if key not in grid_cache:
                X, Y = np.meshgrid(xn, yn, indexing="ij")
                grid_cache[key] = mode.xy_values(X, Y)
            return grid_cache[key]

        block = np.conj(sampled(f)) * sampled(g)
        dims = (sel["x"], sel["y"])
        pieces = z_arrays
        if pieces:
            raise ValueError("three coordinates of one copy exceed the marginal rank")
        return (dims, z_weight * block)
    pieces = z_arrays + xy
    if not pieces:
        return complex(scalar)
    if len(pieces) == 1:
        dim, arr = pieces[0]
        return ((dim,), scalar * arr)
    (d1, a1), (d2, a2) = pieces
    return ((d1, d2), scalar * np.multiply.outer(a1, a2))


# ---- frequency data ----


def z_frequency_distribution(phi: QuotientEigenfunction, copy: int) -> dict[int, float]:
    """Mass per z-frequency in one copy, exact from squared coefficients."""
    return phi.z_frequencies(copy)


def frequency_direction(phi: QuotientEigenfunction) -> tuple[float, ...]:
    """Empirical homogeneous direction: per-copy mean |z-frequency|,
    normalized by the largest copy mean (all zeros for pure torus states)."""
    means = []
    for j in range(phi.m):
        dist = phi.z_frequencies(j)
        means.append(sum(mass * abs(a) for a, mass in dist.items()))
    top = max(means)
    if top == 0:
        return tuple(0.0 for _ in means)
    return tuple(v / top for v in means)


# ---- invariance ----


def invariance_defect(
    phi: QuotientEigenfunction,
    weights: Sequence[float],
    t: float,
    dictionary: list[TestFunction] | None = None,
) -> float:
    """Largest pairing shift across the dictionary under the flow advancing
    z_j by t * weights_j."""
    dictionary = dictionary if dictionary is not None else default_dictionary(phi.m)
    worst = 0.0
    for entry in dictionary:
        moved = entry.translate_z(weights, t)
        shift = abs(pair(phi, moved) - pair(phi, entry))
        worst = max(worst, shift)
    return worst


# ---- predictions and reports ----


@dataclass(frozen=True)
class PredictionResult:
    name: str
    passed: bool
    values: dict


class Prediction:
    """One declared property of an eigenfunction ladder."""

    name: str = "prediction"

    def check(self, phis: list[QuotientEigenfunction], ks: list[int]) -> PredictionResult:
        raise NotImplementedError


def _torus_ball_mass(
    phi: QuotientEigenfunction, copy: int, center: tuple[float, float],
    radius: float, resolution: int,
) -> float:
    grid = base_marginal(phi, [f"x_{copy + 1}", f"y_{copy + 1}"], resolution)
    xn, yn = grid.axes[0].nodes, grid.axes[1].nodes
    X, Y = np.meshgrid(xn, yn, indexing="ij")
    dx = np.abs(X - center[0])
    dx = np.minimum(dx, SQRT_2PI - dx)
    dy = np.abs(Y - center[1])
    dy = np.minimum(dy, SQRT_2PI - dy)
    inside = (dx * dx + dy * dy) <= radius * radius
    cell = grid.axes[0].weights[0] * grid.axes[1].weights[0]
    return float((grid.values * inside).sum() * cell)


@dataclass(frozen=True)
class BallMass(Prediction):
    """(x, y) mass outside the given ball shrinks along the ladder and ends
    below the bound."""

    copy: int
    center: tuple[float, float]
    radius: float
    max_outside: float
    resolution: int = 128
    monotone: bool = True
    name: str = "ball-concentration"

    def check(self, phis, ks):
        outside = [
            1.0 - _torus_ball_mass(p, self.copy, self.center, self.radius, self.resolution)
            for p in phis
        ]
        ok = outside[-1] < self.max_outside
        if self.monotone and len(outside) > 1:
            ok = ok and all(b <= a + 1e-9 for a, b in zip(outside, outside[1:]))
        return PredictionResult(
            self.name, ok, {"outside_mass": dict(zip(map(str, ks), outside))}
        )


@dataclass(frozen=True)
class UniformMarginal(Prediction):
    """A one-coordinate marginal stays flat at 1/period within tolerance."""

    axis: str
    tolerance: float
    resolution: int = 64
    name: str = "uniform-marginal"

    def check(self, phis, ks):
        period = Z_PERIOD if self.axis.startswith("z") else SQRT_2PI
        devs = []
        for p in phis:
            grid = base_marginal(p, [self.axis], self.resolution)
            devs.append(float(np.max(np.abs(grid.values - 1.0 / period))))
        ok = all(d < self.tolerance for d in devs)
        return PredictionResult(
            f"{self.name}({self.axis})", ok, {"max_deviation": dict(zip(map(str, ks), devs))}
        )


@dataclass(frozen=True)
class FlowInvariance(Prediction):
    """Invariance defect along a flow direction stays below tolerance."""

    weights: tuple[float, ...]
    times: tuple[float, ...]
    tolerance: float
    name: str = "flow-invariance"

    def check(self, phis, ks):
        rows = {}
        ok = True
        for k, p in zip(ks, phis):
            worst = max(invariance_defect(p, self.weights, t) for t in self.times)
            rows[str(k)] = worst
            ok = ok and worst < self.tolerance
        return PredictionResult(self.name, ok, {"defect": rows})


@dataclass(frozen=True)
class TransverseDefect(Prediction):
    """Defect along a transverse direction exceeds the bound at the final
    rung (the ladder's limit is not invariant in this direction)."""

    weights: tuple[float, ...]
    time: float
    min_defect: float
    name: str = "transverse-defect"

    def check(self, phis, ks):
        rows = {
            str(k): invariance_defect(p, self.weights, self.time)
            for k, p in zip(ks, phis)
        }
        ok = rows[str(ks[-1])] > self.min_defect
        return PredictionResult(self.name, ok, {"defect": rows})


@dataclass(frozen=True)
class DifferenceLine(Prediction):
    """The (z_i, z_j) marginal depends on z_i - z_j only."""

    copy_a: int
    copy_b: int
    tolerance: float
    resolution: int = 48
    name: str = "difference-line"

    def check(self, phis, ks):
        devs = []
        for p in phis:
            grid = base_marginal(
                p, [f"z_{self.copy_a + 1}", f"z_{self.copy_b + 1}"], self.resolution
            )
            vals = grid.values
            worst = 0.0
            for shift in (1, self.resolution // 3):
                moved = np.roll(np.roll(vals, shift, axis=0), shift, axis=1)
                worst = max(worst, float(np.max(np.abs(moved - vals))))
            devs.append(worst)
        ok = all(d < self.tolerance for d in devs)
        return PredictionResult(
            self.name, ok, {"max_shift_change": dict(zip(map(str, ks), devs))}
        )


@dataclass(frozen=True)
class PairingValue(Prediction):
    """A dictionary pairing approaches a target value at the final rung."""

    test: TestFunction
    target: float
    tolerance: float
    name: str = "pairing-value"

    def check(self, phis, ks):
        rows = {str(k): pair(p, self.test).real for k, p in zip(ks, phis)}
        ok = abs(rows[str(ks[-1])] - self.target) < self.tolerance
        return PredictionResult(
            f"{self.name}({self.test.name})", ok, {"pairing": rows, "target": self.target}
        )


@dataclass
class EmpiricalReport:
    """Measured ladder diagnostics plus per-prediction verdicts."""

    sequence: str
    ks: list[int]
    pairings: dict[str, dict[str, float]]
    defects: dict[str, dict[str, float]]
    frequency_tables: list[dict]
    verdicts: dict[str, dict]

    @property
    def all_passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts.values())

    def to_json_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "k": list(self.ks),
            "pairings": self.pairings,
            "defects": self.defects,
            "z_frequencies": self.frequency_tables,
            "verdicts": self.verdicts,
        }

    def to_json(self, path: str, extra: dict | None = None):
        body = self.to_json_dict()
        if extra:
            body.update(extra)
        with open(path, "w", newline="") as fh:
            json.dump(body, fh, indent=2, sort_keys=True)
            fh.write("\n")


def convergence_report(
    name: str,
    builder: Callable[[int], QuotientEigenfunction],
    ks: Sequence[int],
    predictions: Sequence[Prediction],
    dictionary: list[TestFunction] | None = None,
    defect_probes: Sequence[tuple[tuple[float, ...], float]] = (),
    threads: int = 1,
) -> EmpiricalReport:
    """Run the diagnostics over a ladder and judge the declared predictions.

    ``defect_probes`` lists (flow weights, time) rows for the defect table.
    """
    ks = list(ks)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            phis = list(pool.map(builder, ks))
    else:
        phis = [builder(k) for k in ks]
    m = phis[0].m
    dictionary = dictionary if dictionary is not None else default_dictionary(m)
    pairings: dict[str, dict[str, float]] = {}
    for entry in dictionary + [constant_test(m)]:
        row = {}
        for k, p in zip(ks, phis):
            value = pair(p, entry)
            row[str(k)] = value.real if entry.is_real() else abs(value)
        pairings[entry.name] = row
    defects: dict[str, dict[str, float]] = {}
    for weights, t in defect_probes:
        label = f"s={tuple(round(w, 6) for w in weights)},t={t:g}"
        defects[label] = {
            str(k): invariance_defect(p, weights, t, dictionary)
            for k, p in zip(ks, phis)
        }
    freq_tables = []
    final = phis[-1]
    for j in range(m):
        dist = z_frequency_distribution(final, j)
        freq_tables.append(
            {"copy": j + 1, "masses": {str(a): v for a, v in sorted(dist.items())}}
        )
    verdicts = {}
    for prediction in predictions:
        result = prediction.check(phis, ks)
        verdicts[result.name] = {"passed": result.passed, **result.values}
    return EmpiricalReport(name, ks, pairings, defects, freq_tables, verdicts)

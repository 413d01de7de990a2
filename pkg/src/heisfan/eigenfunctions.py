"""Exact eigenfunctions on products of quotient copies.

A ``QuotientEigenfunction`` is a finite combination of tensor products of
per-copy modes, all sharing one exact joint eigenvalue.  Everything built
here is closed under the negative sub-Laplacian: values, derivatives, norms,
and inner products are computed analytically per copy (z and y integrals are
Kronecker deltas, x integrals are verified quadratures), so the objects
serve as their own test oracles.

The sequence builders at the bottom produce the eigenfunction ladders whose
squared moduli concentrate in prescribed ways as the index grows: states
localized at a base point at the z-frequency scale, tensor lines with fixed
frequency ratios, and equal-eigenvalue mixtures combining several
concentration targets into a single eigenfunction.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import SQRT_2PI, Z_PERIOD, ProductPoint
from .modes import CONSTANT_MODE, LandauMode, Mode, mode_branch_key
from .pairing import full_overlap
from .spectrum import AlignmentError, Fourier, JointLabel, Landau

TWO_PI = 2.0 * math.pi


class ZeroFunctionError(ValueError):
    """Normalization was requested for the zero function."""


def _mode_branch(mode: Mode):
    if isinstance(mode, LandauMode):
        return Landau(mode.n, mode.alpha)
    return Fourier(mode.k, mode.l)


@dataclass(frozen=True)
class QuotientEigenfunction:
    """Finite sum of coefficient-weighted m-fold tensor products of modes,
    every term sharing the same exact eigenvalue pair."""

    m: int
    terms: tuple[tuple[complex, tuple[Mode, ...]], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an eigenfunction needs at least one term")
        keys = set()
        for coeff, modes in self.terms:
            if len(modes) != self.m:
                raise ValueError("term arity does not match copy count")
            keys.add(self.term_key(modes))
        if len(keys) != 1:
            raise ValueError(f"terms mix distinct exact eigenvalues: {sorted(keys)}")

    @staticmethod
    def term_key(modes: tuple[Mode, ...]) -> tuple[int, int]:
        ks = [mode_branch_key(mode) for mode in modes]
        return (sum(k[0] for k in ks), sum(k[1] for k in ks))

    @staticmethod
    def term_label(modes: tuple[Mode, ...]) -> JointLabel:
        return JointLabel(tuple(_mode_branch(mode) for mode in modes))

    @property
    def eigenvalue_key(self) -> tuple[int, int]:
        return self.term_key(self.terms[0][1])

    @property
    def eigenvalue(self) -> float:
        key = self.eigenvalue_key
        return key[0] + TWO_PI * key[1]

    def merged(self) -> "QuotientEigenfunction":
        """Combine duplicate mode tuples and drop cancelled terms."""
        acc: dict[tuple[Mode, ...], complex] = {}
        for coeff, modes in self.terms:
            acc[modes] = acc.get(modes, 0.0) + complex(coeff)
        kept = tuple((c, mds) for mds, c in acc.items() if abs(c) > 0.0)
        if not kept:
            raise ZeroFunctionError("all terms cancelled")
        return QuotientEigenfunction(self.m, kept)

    def scaled(self, factor: complex) -> "QuotientEigenfunction":
        return QuotientEigenfunction(
            self.m, tuple((factor * c, modes) for c, modes in self.terms)
        )

    # ---- evaluation ----

    def _coords(self, points) -> np.ndarray:
        if isinstance(points, ProductPoint):
            points = [c.as_tuple() for c in points.copies]
        arr = np.asarray(points, dtype=float)
        if arr.shape[-2:] != (self.m, 3):
            raise ValueError(f"points must have shape (..., {self.m}, 3)")
        return arr

    def evaluate(self, points) -> np.ndarray:
        """Values at points of shape (..., m, 3); returns shape (...)."""
        arr = self._coords(points)
        total = np.zeros(arr.shape[:-2], dtype=complex)
        for coeff, modes in self.terms:
            prod = np.full(arr.shape[:-2], complex(coeff), dtype=complex)
            for j, mode in enumerate(modes):
                prod = prod * mode.values(arr[..., j, 0], arr[..., j, 1], arr[..., j, 2])
            total += prod
        return total

    def minus_delta(self, points) -> np.ndarray:
        """Values of the negative sub-Laplacian applied to the function,
        assembled from closed-form per-copy derivatives."""
        arr = self._coords(points)
        total = np.zeros(arr.shape[:-2], dtype=complex)
        for coeff, modes in self.terms:
            vals = [
                mode.values(arr[..., j, 0], arr[..., j, 1], arr[..., j, 2])
                for j, mode in enumerate(modes)
            ]
            for j, mode in enumerate(modes):
                prod = np.full(arr.shape[:-2], complex(coeff), dtype=complex)
                for i in range(self.m):
                    if i == j:
                        prod = prod * mode.minus_delta_values(
                            arr[..., i, 0], arr[..., i, 1], arr[..., i, 2]
                        )
                    else:
                        prod = prod * vals[i]
                total += prod
        return total

    def __call__(self, points) -> np.ndarray:
        return self.evaluate(points)

    # ---- inner products ----

    def inner(self, other: "QuotientEigenfunction") -> complex:
        """L2 inner product, conjugate-linear in ``other``."""
        if other.m != self.m:
            raise ValueError("copy counts differ")
        total = 0.0 + 0.0j
        for c_t, modes_t in self.terms:
            for d_u, modes_u in other.terms:
                weight = c_t * np.conj(d_u)
                if weight == 0:
                    continue
                prod = weight
                for f, g in zip(modes_u, modes_t):
                    prod *= full_overlap(f, g)
                    if prod == 0:
                        break
                total += prod
        return complex(total)

    def norm_squared(self) -> float:
        return self.inner(self).real

    def normalized(self) -> "QuotientEigenfunction":
        n2 = self.norm_squared()
        if n2 <= 0.0:
            raise ZeroFunctionError("cannot normalize the zero function")
        return self.scaled(1.0 / math.sqrt(n2))

    # ---- label bookkeeping ----

    def label_masses(self) -> dict[JointLabel, float]:
        """Squared-coefficient mass per joint label.

        Exact because distinct mode tuples under one label differ in sector
        or torus frequency and are therefore orthogonal.
        """
        merged = self.merged()
        out: dict[JointLabel, float] = {}
        for coeff, modes in merged.terms:
            label = self.term_label(modes)
            out[label] = out.get(label, 0.0) + abs(coeff) ** 2
        return out

    def landau_supports(self) -> set[frozenset[int]]:
        """Distinct sets of copies carrying a nonzero z-frequency."""
        return {
            frozenset(j for j, mode in enumerate(modes) if isinstance(mode, LandauMode))
            for _, modes in self.terms
        }

    def z_frequencies(self, copy: int) -> dict[int, float]:
        """Mass per z-frequency in one copy (exact, from coefficients)."""
        out: dict[int, float] = {}
        for coeff, modes in self.merged().terms:
            freq = modes[copy].z_frequency
            out[freq] = out.get(freq, 0.0) + abs(coeff) ** 2
        return out


def tensor(*factors: QuotientEigenfunction) -> QuotientEigenfunction:
    """Tensor product across independent copies."""
    m = sum(f.m for f in factors)
    terms = [(1.0 + 0.0j, ())]
    for f in factors:
        terms = [
            (c * c2, modes + modes2) for c, modes in terms for c2, modes2 in f.terms
        ]
    return QuotientEigenfunction(m, tuple(terms))


def single_mode(*modes: Mode) -> QuotientEigenfunction:
    """The normalized eigenfunction with one tensor-product term."""
    return QuotientEigenfunction(len(modes), ((1.0 + 0.0j, tuple(modes)),))


def constant_function(m: int) -> QuotientEigenfunction:
    return single_mode(*([CONSTANT_MODE] * m))


def mixture(
    weighted: list[tuple[complex, QuotientEigenfunction]]
) -> QuotientEigenfunction:
    """Coefficient-weighted sum of eigenfunctions sharing one eigenvalue."""
    m = weighted[0][1].m
    terms: list[tuple[complex, tuple[Mode, ...]]] = []
    for w, phi in weighted:
        for c, modes in phi.terms:
            terms.append((w * c, modes))
    return QuotientEigenfunction(m, tuple(terms)).merged()


# ---- grids ----


@dataclass(frozen=True)
class GridAxis:
    """One sampled coordinate with its quadrature weights."""

    name: str
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("axis nodes and weights must be equal-length vectors")


def axis_period(name: str) -> float:
    """Full period of a coordinate axis named like x_1, y_2, z_1."""
    kind = name.split("_")[0]
    if kind in ("x", "y"):
        return SQRT_2PI
    if kind == "z":
        return Z_PERIOD
    raise ValueError(f"unknown axis name {name!r}")


def periodic_axis(name: str, resolution: int) -> GridAxis:
    """Uniform periodic sampling of one coordinate; the trapezoid weights
    integrate smooth periodic functions to spectral accuracy."""
    period = axis_period(name)
    nodes = np.linspace(0.0, period, resolution, endpoint=False)
    weights = np.full(resolution, period / resolution)
    return GridAxis(name, nodes, weights)


@dataclass(frozen=True)
class GridField:
    """Values sampled on a tensor grid of coordinate axes."""

    axes: tuple[GridAxis, ...]
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        expect = tuple(len(ax.nodes) for ax in self.axes)
        if self.values.shape != expect:
            raise ValueError(f"value shape {self.values.shape} != grid {expect}")

    def integrate(self) -> complex:
        out = self.values
        for ax in reversed(self.axes):
            out = out @ ax.weights
        return complex(out)

    def rows(self):
        """Yield (coords..., value) in row-major order."""
        mesh = np.meshgrid(*(ax.nodes for ax in self.axes), indexing="ij")
        flat_vals = self.values.reshape(-1)
        flat_coords = [m.reshape(-1) for m in mesh]
        for i in range(flat_vals.size):
            yield tuple(float(c[i]) for c in flat_coords), complex(flat_vals[i])

    def manifest(self) -> dict:
        body = {
            "axes": [
                {
                    "name": ax.name,
                    "points": len(ax.nodes),
                    "start": float(ax.nodes[0]) if len(ax.nodes) else 0.0,
                    "period": axis_period(ax.name),
                }
                for ax in self.axes
            ],
        }
        body.update(self.meta)
        return body


def evaluation_grid(
    phi: QuotientEigenfunction,
    axis_names: list[str],
    resolution: int,
    fixed: dict[str, float] | None = None,
) -> GridField:
    """Sample an eigenfunction over a tensor grid of up to three coordinates,
    holding the remaining coordinates at fixed values (default 0)."""
    if not 1 <= len(axis_names) <= 3:
        raise ValueError("choose between one and three axes")
    fixed = dict(fixed or {})
    axes = tuple(periodic_axis(name, resolution) for name in axis_names)
    mesh = np.meshgrid(*(ax.nodes for ax in axes), indexing="ij")
    shape = mesh[0].shape
    coords = np.zeros(shape + (phi.m, 3), dtype=float)
    for name, value in fixed.items():
        j, axis_idx = _axis_position(name, phi.m)
        coords[..., j, axis_idx] = value
    for name, grid in zip(axis_names, mesh):
        j, axis_idx = _axis_position(name, phi.m)
        coords[..., j, axis_idx] = grid
    values = phi.evaluate(coords)
    meta = {
        "eigenvalue": phi.eigenvalue,
        "labels": sorted(str(lbl) for lbl in phi.label_masses()),
        "norm_squared": phi.norm_squared(),
        "fixed": {k: float(v) for k, v in fixed.items()},
    }
    return GridField(axes, values, meta)


def _axis_position(name: str, m: int) -> tuple[int, int]:
    kind, _, idx = name.partition("_")
    table = {"x": 0, "y": 1, "z": 2}
    if kind not in table or not idx.isdigit():
        raise ValueError(f"unknown axis name {name!r}")
    copy = int(idx) - 1
    if not 0 <= copy < m:
        raise ValueError(f"axis {name!r} exceeds the copy count {m}")
    return copy, table[kind]


def write_grid_csv(grid: GridField, path: str, header_lines: list[str] | None = None):
    cols = [f"coord_{i + 1}" for i in range(len(grid.axes))]
    with open(path, "w", newline="") as fh:
        for line in header_lines or []:
            fh.write(f"# {line}\n")
        fh.write(",".join(cols + ["re", "im", "abs2"]) + "\n")
        for coords, value in grid.rows():
            parts = [f"{c:.17g}" for c in coords]
            parts += [
                f"{value.real:.17g}",
                f"{value.imag:.17g}",
                f"{abs(value) ** 2:.17g}",
            ]
            fh.write(",".join(parts) + "\n")


def write_grid_manifest(grid: GridField, path: str, extra: dict | None = None):
    body = grid.manifest()
    if extra:
        body.update(extra)
    with open(path, "w", newline="") as fh:
        json.dump(body, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---- concentration builders ----


def localized_sector_weights(
    n: int, alpha: int, center: tuple[float, float] = (0.0, 0.0), width: float = 1.0
) -> list[tuple[complex, int]]:
    """Normalized sector coefficients concentrating the level-n eigenfunction
    at a base point, at the 1/sqrt(|alpha|) scale.

    The window-index Gaussian exp(-pi (j - j0)^2 / (w^2 |alpha|)) centered at
    j0 = alpha x0 / sqrt(2 pi) selects x-centers near x0; the phases
    exp(-i sqrt(2 pi) j y0) steer the y concentration.  Folding over each
    residue class gives one coefficient per sector.
    """
    size = abs(alpha)
    x0, y0 = center
    j0 = alpha * x0 / SQRT_2PI
    spread = width * width * size
    weights = []
    reach = int(math.ceil(6.0 * math.sqrt(spread))) + size
    j_lo = int(math.floor(j0)) - reach
    j_hi = int(math.ceil(j0)) + reach
    for sector in range(size):
        total = 0.0 + 0.0j
        for j in range(j_lo, j_hi + 1):
            if (j - sector) % size:
                continue
            total += math.exp(-math.pi * (j - j0) ** 2 / spread) * cmath.exp(
                -1j * SQRT_2PI * j * y0
            )
        weights.append((total, sector))
    # drop sectors carrying < 1e-24 of the largest squared weight; the
    # renormalized truncation is still an exact eigenfunction and the mass
    # perturbation is far below every tolerance in use
    peak = max(abs(w) for w, _ in weights)
    weights = [(w, sector) for w, sector in weights if abs(w) > 1e-12 * peak]
    scale = math.sqrt(sum(abs(w) ** 2 for w, _ in weights))
    return [(w / scale, sector) for w, sector in weights]


def localized_state(
    n: int,
    alpha: int,
    center: tuple[float, float] = (0.0, 0.0),
    width: float = 1.0,
) -> QuotientEigenfunction:
    """Single-copy eigenfunction with eigenvalue (2n+1)|alpha| concentrated
    near the center in (x, y) and uniform in z."""
    terms = tuple(
        (coeff, (LandauMode(n, alpha, sector),))
        for coeff, sector in localized_sector_weights(n, alpha, center, width)
        if abs(coeff) > 1e-300
    )
    return QuotientEigenfunction(1, terms)


def line_sequence(
    m: int,
    copies: tuple[int, ...],
    levels: tuple[int, ...],
    ratios: tuple[int, ...],
    k: int,
    centers: tuple[tuple[float, float], ...] | None = None,
    width: float = 1.0,
    scale: int | None = None,
) -> QuotientEigenfunction:
    """k-th element of a tensor eigenfunction ladder concentrating on one
    z-line.

    The active copies (0-based) carry localized states with z-frequencies
    alpha_j = ratios_j * scale, so the frequency vector points in a fixed
    rational direction while growing with k; the remaining copies carry the
    constant function.  The default scale is k for several active copies and
    k^2 for a single one, which steepens the one-copy concentration ladder.
    """
    if len(copies) != len(levels) or len(copies) != len(ratios):
        raise ValueError("copies, levels, and ratios must align")
    if len(set(copies)) != len(copies):
        raise ValueError("duplicate copy index")
    if any(not 0 <= j < m for j in copies):
        raise ValueError("copy index out of range")
    if any(r <= 0 for r in ratios):
        raise ValueError("ratios must be positive integers")
    if k < 1:
        raise ValueError("sequence index starts at 1")
    if scale is None:
        scale = k * k if len(copies) == 1 else k
    if centers is None:
        centers = tuple((0.0, 0.0) for _ in copies)
    factors = []
    slot = {j: i for i, j in enumerate(copies)}
    for j in range(m):
        if j in slot:
            i = slot[j]
            factors.append(
                localized_state(levels[i], ratios[i] * scale, centers[i], width)
            )
        else:
            factors.append(constant_function(1))
    return tensor(*factors)


@dataclass(frozen=True)
class MixtureAtom:
    """One concentration target inside a mixture component: a line through
    the given centers with z-frequency ratios ``ratios`` (optionally offset
    by ``shifts`` to force distinct frequency vectors at equal eigenvalue)."""

    beta: float
    ratios: tuple[int, ...]
    centers: tuple[tuple[float, float], ...] | None = None
    shifts: tuple[int, ...] | None = None


@dataclass(frozen=True)
class MixtureComponent:
    """A group of atoms sharing active copies and oscillator levels; the
    levels determine the flow direction s_j = (2 n_j + 1) / sum (2 n_i + 1).
    """

    weight: float
    copies: tuple[int, ...]
    levels: tuple[int, ...]
    atoms: tuple[MixtureAtom, ...]


def prescribed_limit_sequence(
    m: int,
    components: tuple[MixtureComponent, ...],
    k: int,
    width: float = 1.0,
    congruence_bound: int = 100_000,
) -> QuotientEigenfunction:
    """k-th eigenfunction of a ladder whose limit measure mixes several
    concentration targets with prescribed masses.

    Every atom of every component is realized at one shared exact eigenvalue
    lambda(k) = sum_j (2 n_j + 1) |alpha_j|: atom frequencies are
    alpha_j = ratios_j * t + shifts_j with per-atom integers t solving the
    resulting congruences.  Coefficients are sqrt(weight * beta), so squared
    coefficients sum to one and distinct-label masses are exact.
    """
    if k < 1:
        raise ValueError("sequence index starts at 1")
    entries = []
    for comp in components:
        if len(comp.copies) != len(comp.levels):
            raise ValueError("component copies and levels must align")
        for atom in comp.atoms:
            if len(atom.ratios) != len(comp.copies):
                raise ValueError("atom ratios must match component copies")
            shifts = atom.shifts or tuple(0 for _ in comp.copies)
            coins = tuple(2 * n + 1 for n in comp.levels)
            base = sum(c * r for c, r in zip(coins, atom.ratios))
            offset = sum(c * s for c, s in zip(coins, shifts))
            entries.append((comp, atom, shifts, base, offset))
    lam = _common_eigenvalue(
        [(base, offset) for _, _, _, base, offset in entries], k, congruence_bound
    )
    total = sum(comp.weight * atom.beta for comp, atom, _, _, _ in entries)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"mixture masses sum to {total}, expected 1")
    pieces = []
    for comp, atom, shifts, base, offset in entries:
        t = (lam - offset) // base
        alphas = tuple(r * t + s for r, s in zip(atom.ratios, shifts))
        if any(a <= 0 for a in alphas):
            raise AlignmentError("a mixture frequency came out nonpositive")
        centers = atom.centers or tuple((0.0, 0.0) for _ in comp.copies)
        factors = []
        slot = {j: i for i, j in enumerate(comp.copies)}
        for j in range(m):
            if j in slot:
                i = slot[j]
                factors.append(
                    localized_state(comp.levels[i], alphas[i], centers[i], width)
                )
            else:
                factors.append(constant_function(1))
        pieces.append((math.sqrt(comp.weight * atom.beta), tensor(*factors)))
    return mixture(pieces)


def _common_eigenvalue(
    base_offset: list[tuple[int, int]], k: int, bound: int
) -> int:
    """Smallest eigenvalue >= k * lcm(bases) with lam = offset (mod base)
    and positive quotient for every pair, found by stepping the lcm lattice.
    """
    lcm = 1
    for base, _ in base_offset:
        lcm = lcm * base // math.gcd(lcm, base)
    start = k * lcm
    for lam in range(start, start + bound + 1):
        ok = True
        for base, offset in base_offset:
            if (lam - offset) % base or (lam - offset) <= 0:
                ok = False
                break
        if ok:
            return lam
    raise AlignmentError(
        f"no shared eigenvalue in [{start}, {start + bound}] for the mixture"
    )

"""Nested cone partitions of the level quadrant and spectral disintegration.

Joint Landau labels carry a direction datum: the simplex point with
coordinates s_j = (2 n_j + 1) / sum_i (2 n_i + 1) over the active copies.
Equivalently, shifted by the vertex V = (-1/2, ..., -1/2), the label lattice
sits inside the positive cone over the simplex, and a nested family of
binary cone splits sorts labels into 2^N cells at depth N.  Because labels
are exactly orthogonal, per-cell masses are sums of squared coefficients,
so every histogram produced here is exact rather than quadrature-limited.

The simplex is parametrized by its first J-1 coordinates inside the unit
box; splitting bisects one box coordinate per level in cyclic order, ties
going to the lower child.  Each full cycle halves every width, giving the
cell-diameter bound diameter_bound below.  For J = 1 the simplex is a point
and the partition is the single half-line cone at every depth.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .eigenfunctions import QuotientEigenfunction
from .geometry import SimplexPoint
from .modes import LandauMode
from .spectrum import JointLabel

MAX_DEPTH = 32


class DepthOverflowError(ValueError):
    """Requested partition depth exceeds the supported maximum."""


@dataclass(frozen=True)
class ConePartition:
    """Depth-N binary partition of the positive cone over a (dim-1)-simplex."""

    dim: int
    depth: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        if not 0 <= self.depth <= MAX_DEPTH:
            raise DepthOverflowError(f"depth must lie in [0, {MAX_DEPTH}]")

    @property
    def leaf_count(self) -> int:
        if self.dim == 1:
            return 1
        return 1 << self.depth

    def locate(self, s: Iterable[float]) -> int:
        """Leaf index of a simplex direction, bits ordered root first."""
        s = tuple(float(v) for v in s)
        if len(s) != self.dim:
            raise ValueError("direction arity does not match the partition")
        if any(v < -1e-12 for v in s) or abs(sum(s) - 1.0) > 1e-9:
            raise ValueError("not a simplex direction")
        if self.dim == 1:
            return 0
        t = list(s[:-1])
        lo = [0.0] * (self.dim - 1)
        hi = [1.0] * (self.dim - 1)
        index = 0
        for level in range(self.depth):
            c = level % (self.dim - 1)
            mid = 0.5 * (lo[c] + hi[c])
            if t[c] <= mid:
                bit = 0
                hi[c] = mid
            else:
                bit = 1
                lo[c] = mid
            index = (index << 1) | bit
        return index

    def locate_levels(self, levels: Iterable[int]) -> int:
        levels = tuple(levels)
        return self.locate(
            SimplexPoint.from_levels(tuple(range(len(levels))), levels).weights
        )

    def locate_point(self, point: SimplexPoint) -> int:
        return self.locate(point.weights)

    @staticmethod
    def parent(index: int) -> int:
        """Index of the containing leaf one depth up."""
        return index >> 1

    def box(self, index: int) -> list[tuple[float, float]]:
        """Bounds of the leaf in the first dim-1 simplex coordinates."""
        if self.dim == 1:
            return []
        if not 0 <= index < self.leaf_count:
            raise ValueError("leaf index out of range")
        lo = [0.0] * (self.dim - 1)
        hi = [1.0] * (self.dim - 1)
        for level in range(self.depth):
            c = level % (self.dim - 1)
            mid = 0.5 * (lo[c] + hi[c])
            bit = (index >> (self.depth - 1 - level)) & 1
            if bit:
                lo[c] = mid
            else:
                hi[c] = mid
        return list(zip(lo, hi))

    def simplex_bounds(self, index: int) -> list[tuple[float, float]]:
        """Per-coordinate bounds of the leaf cell for all dim coordinates."""
        if self.dim == 1:
            return [(1.0, 1.0)]
        box = self.box(index)
        sum_lo = sum(b[0] for b in box)
        sum_hi = sum(b[1] for b in box)
        last = (max(0.0, 1.0 - sum_hi), min(1.0, 1.0 - sum_lo))
        return box + [last]

    def diameter_bound(self) -> float:
        """Upper bound on the Euclidean diameter of any leaf's simplex cell."""
        if self.dim == 1:
            return 0.0
        return 2.0 * (self.dim - 1) * 2.0 ** (-(self.depth // (self.dim - 1)))


@dataclass(frozen=True)
class ConeCell:
    index: int
    simplex_bounds: tuple[tuple[float, float], ...]
    mass: float
    defect: float


@dataclass(frozen=True)
class DisintegrationReport:
    """Per-cone masses of one eigenfunction's active-copy component."""

    depth: int
    copies: tuple[int, ...]
    cells: tuple[ConeCell, ...]

    @property
    def total_mass(self) -> float:
        return sum(c.mass for c in self.cells)

    def mass_by_index(self) -> dict[int, float]:
        return {c.index: c.mass for c in self.cells}

    def to_json_dict(self) -> dict:
        return {
            "depth": self.depth,
            "copies": [c + 1 for c in self.copies],
            "cells": [
                {
                    "index": cell.index,
                    "simplex_bounds": [[b[0], b[1]] for b in cell.simplex_bounds],
                    "mass": cell.mass,
                    "defect": cell.defect,
                }
                for cell in self.cells
            ],
        }

    def to_json(self, path: str, extra: dict | None = None):
        body = self.to_json_dict()
        if extra:
            body.update(extra)
        with open(path, "w", newline="") as fh:
            json.dump(body, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _label_levels(label: JointLabel, copies: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(label.branches[j].n for j in copies)


def cone_masses(
    phi: QuotientEigenfunction,
    copies: tuple[int, ...],
    depth: int,
    defect_fn: Callable[[QuotientEigenfunction, tuple[float, ...]], float] | None = None,
) -> DisintegrationReport:
    """Sort the labels supported exactly on the given copies into cone cells.

    Masses are exact squared-coefficient sums.  When a defect evaluator is
    supplied, it receives each cell's normalized piece and the cell's center
    direction and its result is recorded per cell; otherwise defects are 0.
    """
    copies = tuple(sorted(copies))
    partition = ConePartition(len(copies), depth) if copies else None
    masses: dict[int, float] = {}
    pieces: dict[int, list] = {}
    target = frozenset(copies)
    for coeff, modes in phi.merged().terms:
        label = QuotientEigenfunction.term_label(modes)
        if label.landau_copies != target:
            continue
        index = partition.locate_levels(_label_levels(label, copies)) if copies else 0
        masses[index] = masses.get(index, 0.0) + abs(coeff) ** 2
        pieces.setdefault(index, []).append((coeff, modes))
    cells = []
    for index in sorted(masses):
        bounds = (
            tuple(partition.simplex_bounds(index)) if copies else ((1.0, 1.0),)
        )
        defect = 0.0
        if defect_fn is not None and masses[index] > 0:
            piece = QuotientEigenfunction(phi.m, tuple(pieces[index])).normalized()
            center = tuple(0.5 * (b[0] + b[1]) for b in bounds)
            defect = defect_fn(piece, center)
        cells.append(ConeCell(index, bounds, masses[index], defect))
    return DisintegrationReport(depth, copies, tuple(cells))


def refinement_check(
    phi: QuotientEigenfunction, copies: tuple[int, ...], depth: int
) -> float:
    """Largest mass discrepancy between depth-N cells and their depth-(N+1)
    children; exactly zero for a consistent nested partition."""
    coarse = cone_masses(phi, copies, depth).mass_by_index()
    fine = cone_masses(phi, copies, depth + 1).mass_by_index()
    rolled: dict[int, float] = {}
    for index, mass in fine.items():
        rolled[index >> 1] = rolled.get(index >> 1, 0.0) + mass
    keys = set(coarse) | set(rolled)
    return max(abs(coarse.get(k, 0.0) - rolled.get(k, 0.0)) for k in keys)


def limit_histogram(
    phis: list[QuotientEigenfunction],
    copies: tuple[int, ...],
    depth: int,
) -> dict:
    """Per-cone masses across an eigenfunction ladder.

    Returns the full mass table per iterate plus the final iterate's
    histogram, which estimates the limiting cone measure.
    """
    table = []
    for i, phi in enumerate(phis):
        report = cone_masses(phi, copies, depth)
        table.append(
            {
                "iterate": i,
                "masses": {str(k): v for k, v in sorted(report.mass_by_index().items())},
            }
        )
    final = table[-1]["masses"] if table else {}
    return {"depth": depth, "copies": [c + 1 for c in copies], "table": table, "final": final}


def split_by_energy_ratio(
    phi: QuotientEigenfunction, tau: float
) -> dict[frozenset[int], QuotientEigenfunction]:
    """Partition an eigenfunction by which copies carry a share of at least
    tau of the comparison energy E = lambda + sum_j alpha_j^2.

    Each term joins the piece keyed by { j : alpha_j^2 / E >= tau }; terms
    with no such copy form the elliptic piece keyed by the empty set.  The
    pieces share phi's eigenvalue, are mutually orthogonal, and sum to phi.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError("threshold must lie strictly between 0 and 1")
    lam = phi.eigenvalue
    groups: dict[frozenset[int], list] = {}
    for coeff, modes in phi.merged().terms:
        alphas = [
            mode.alpha if isinstance(mode, LandauMode) else 0 for mode in modes
        ]
        energy = lam + sum(a * a for a in alphas)
        key = frozenset(
            j for j, a in enumerate(alphas) if a != 0 and a * a / energy >= tau
        )
        groups.setdefault(key, []).append((coeff, modes))
    return {
        key: QuotientEigenfunction(phi.m, tuple(terms))
        for key, terms in groups.items()
    }

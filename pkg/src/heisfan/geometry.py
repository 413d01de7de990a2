"""Points, lattice translates, and covectors for products of Heisenberg quotients.

Coordinates are (x, y, z) with the polarized group law

    (x, y, z) * (x', y', z') = (x + x', y + y', z + z' - x y'),

and the cocompact lattice (sqrt(2 pi) Z)^2 x (2 pi Z) acting on the left.
The fundamental domain is [0, sqrt(2 pi))^2 x [0, 2 pi); every orbit meets it
exactly once.  Product points carry one copy of the quotient per factor and
copies are indexed from 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SQRT_2PI = math.sqrt(2.0 * math.pi)
Z_PERIOD = 2.0 * math.pi

#: Side lengths of the fundamental domain, in coordinate order (x, y, z).
DOMAIN_EXTENTS = (SQRT_2PI, SQRT_2PI, Z_PERIOD)

#: Volume of the fundamental domain of a single copy.
COPY_VOLUME = SQRT_2PI * SQRT_2PI * Z_PERIOD


@dataclass(frozen=True)
class GroupElement:
    """A point of the ambient group in (x, y, z) coordinates."""

    x: float
    y: float
    z: float

    def as_tuple(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class LatticeElement:
    """Integer coordinates (a, b, c) of the lattice point
    (a sqrt(2 pi), b sqrt(2 pi), 2 pi c)."""

    a: int
    b: int
    c: int

    def embed(self) -> GroupElement:
        return GroupElement(self.a * SQRT_2PI, self.b * SQRT_2PI, self.c * Z_PERIOD)


IDENTITY = GroupElement(0.0, 0.0, 0.0)


def group_mul(p: GroupElement, q: GroupElement) -> GroupElement:
    """Product p * q under the polarized law; the twist couples p.x with q.y."""
    return GroupElement(p.x + q.x, p.y + q.y, p.z + q.z - p.x * q.y)


def group_inv(p: GroupElement) -> GroupElement:
    """Two-sided inverse: (x, y, z)^-1 = (-x, -y, -x y - z)."""
    return GroupElement(-p.x, -p.y, -p.x * p.y - p.z)


def reduce_to_fundamental(q: GroupElement) -> tuple[GroupElement, LatticeElement]:
    """Reduce q into [0, sqrt(2 pi))^2 x [0, 2 pi).

    Returns the representative together with the lattice element gamma such
    that gamma * q equals the representative.  Reduction runs x, then y, then
    z; the x step applies its twist to z before z is reduced, which is what
    makes the representative independent of the orbit element we started from.
    """
    a = -math.floor(q.x / SQRT_2PI)
    x = q.x + a * SQRT_2PI
    z = q.z - a * SQRT_2PI * q.y
    b = -math.floor(q.y / SQRT_2PI)
    y = q.y + b * SQRT_2PI
    c = -math.floor(z / Z_PERIOD)
    z = z + c * Z_PERIOD
    return GroupElement(x, y, z), LatticeElement(a, b, c)


@dataclass(frozen=True)
class ProductPoint:
    """A point of the m-fold product, one GroupElement per copy."""

    copies: tuple[GroupElement, ...]

    def __post_init__(self):
        if len(self.copies) < 1:
            raise ValueError("product point needs at least one copy")

    @property
    def m(self) -> int:
        return len(self.copies)

    @classmethod
    def from_coords(cls, coords) -> "ProductPoint":
        """Build from an iterable of (x, y, z) triples."""
        return cls(tuple(GroupElement(*c) for c in coords))

    def reduce(self) -> tuple["ProductPoint", tuple[LatticeElement, ...]]:
        pairs = [reduce_to_fundamental(g) for g in self.copies]
        return ProductPoint(tuple(p for p, _ in pairs)), tuple(g for _, g in pairs)


@dataclass(frozen=True)
class SimplexPoint:
    """Barycentric weights s over a nonempty set of copies.

    ``copies`` lists the participating copy indices in increasing order and
    ``weights`` the matching nonnegative reals summing to one.
    """

    copies: tuple[int, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if not self.copies:
            raise ValueError("empty copy set")
        if len(self.copies) != len(self.weights):
            raise ValueError("copies and weights must have matching length")
        if list(self.copies) != sorted(set(self.copies)):
            raise ValueError("copies must be strictly increasing")
        if min(self.weights) < -1e-15:
            raise ValueError("weights must be nonnegative")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    @classmethod
    def from_levels(cls, copies, levels) -> "SimplexPoint":
        """Map oscillator levels (n_j) to s_j = (2 n_j + 1) / sum_i (2 n_i + 1)."""
        odds = [2 * n + 1 for n in levels]
        total = sum(odds)
        return cls(tuple(copies), tuple(o / total for o in odds))

    def weight_of(self, copy: int) -> float:
        try:
            return self.weights[self.copies.index(copy)]
        except ValueError:
            return 0.0


@dataclass(frozen=True)
class SigmaCovector:
    """Characteristic covector: base point plus the z-frequencies (p_z per copy).

    The support {j : p_z[j] != 0} names the stratum the covector sits on.
    """

    base: ProductPoint
    pz: tuple[float, ...]

    def __post_init__(self):
        if len(self.pz) != self.base.m:
            raise ValueError("pz length must match number of copies")

    @property
    def m(self) -> int:
        return self.base.m

    def support(self) -> frozenset[int]:
        return frozenset(j for j, p in enumerate(self.pz) if p != 0.0)

    def normalized(self) -> "SigmaCovector":
        """Projective representative: sup-norm 1 with first nonzero entry positive."""
        sup = max(abs(p) for p in self.pz)
        if sup == 0.0:
            raise ValueError("cannot normalize the zero covector")
        scale = 1.0 / sup
        for p in self.pz:
            if p != 0.0:
                if p < 0.0:
                    scale = -scale
                break
        return SigmaCovector(self.base, tuple(p * scale for p in self.pz))


@dataclass(frozen=True)
class FullCovector:
    """A full cotangent vector over a product point."""

    base: ProductPoint
    px: tuple[float, ...]
    py: tuple[float, ...]
    pz: tuple[float, ...]

    def __post_init__(self):
        m = self.base.m
        if not (len(self.px) == len(self.py) == len(self.pz) == m):
            raise ValueError("covector components must match number of copies")

    def to_sigma(self, tol: float = 1e-12) -> SigmaCovector:
        if principal_symbol(self) > tol:
            raise ValueError("covector is not characteristic")
        return SigmaCovector(self.base, self.pz)


def principal_symbol(p: FullCovector) -> float:
    """Principal symbol of the sub-Laplacian: sum_j p_x^2 + (p_y - x p_z)^2.

    Nonnegative, and zero exactly on the characteristic variety.
    """
    total = 0.0
    for j, g in enumerate(p.base.copies):
        total += p.px[j] ** 2 + (p.py[j] - g.x * p.pz[j]) ** 2
    return total


def flow_hamiltonian(p: SigmaCovector, s: SimplexPoint) -> float:
    """Weighted z-frequency sum_j s_j |p_z[j]|, the generator whose flow
    advances z_j at speed s_j."""
    if any(j < 0 or j >= p.m for j in s.copies):
        raise ValueError("simplex copies outside covector index range")
    return sum(w * abs(p.pz[j]) for j, w in zip(s.copies, s.weights))


def flow_translate(q: ProductPoint, s: SimplexPoint, t: float) -> ProductPoint:
    """Advance z_j by t * s_j on the copies named by s, then reduce."""
    if any(j < 0 or j >= q.m for j in s.copies):
        raise ValueError("simplex copies outside point index range")
    shift = {j: t * w for j, w in zip(s.copies, s.weights)}
    moved = [
        GroupElement(g.x, g.y, g.z + shift.get(j, 0.0))
        for j, g in enumerate(q.copies)
    ]
    reduced, _ = ProductPoint(tuple(moved)).reduce()
    return reduced

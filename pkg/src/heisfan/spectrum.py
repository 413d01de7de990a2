"""Joint spectrum enumeration for products of compact Heisenberg quotients.

A single copy carries two branches of eigenvalues:

* Landau branch: (2 n + 1) |alpha| for n >= 0 and integer alpha != 0, where
  the label (n, alpha) contributes an eigenspace of dimension |alpha| and the
  two signs of alpha are distinct labels;
* Fourier branch: 2 pi (k^2 + l^2) for integer (k, l), weight 1 each.

Every eigenvalue of the m-fold product is an integer plus an integer multiple
of 2 pi, so eigenvalue identity is decided on the exact integer pair
(Landau part, coefficient of 2 pi) rather than on floats.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

TWO_PI = 2.0 * math.pi

DEFAULT_LABEL_BUDGET = 5_000_000


class CutoffTooLargeError(ValueError):
    """Enumeration refused: the estimated label count exceeds the budget."""


class Landau(NamedTuple):
    """Landau-branch label; alpha is the nonzero z-frequency."""

    n: int
    alpha: int


class Fourier(NamedTuple):
    """Fourier-branch label on the base torus; the (0, 0) label is the constant."""

    k: int
    l: int


def branch_key(b) -> tuple[int, int]:
    """Exact eigenvalue as (integer part, coefficient of 2 pi)."""
    if isinstance(b, Landau):
        return ((2 * b.n + 1) * abs(b.alpha), 0)
    return (0, b.k * b.k + b.l * b.l)


def branch_value(b) -> float:
    i, f = branch_key(b)
    return i + TWO_PI * f


def branch_weight(b) -> int:
    """Eigenspace dimension carried by one label."""
    if isinstance(b, Landau):
        return abs(b.alpha)
    return 1


def branch_str(b) -> str:
    if isinstance(b, Landau):
        return f"L({b.n},{b.alpha})"
    return f"F({b.k},{b.l})"


@dataclass(frozen=True)
class JointLabel:
    """An m-tuple of branch labels, one per copy."""

    branches: tuple

    @property
    def m(self) -> int:
        return len(self.branches)

    @property
    def key(self) -> tuple[int, int]:
        i = f = 0
        for b in self.branches:
            bi, bf = branch_key(b)
            i += bi
            f += bf
        return (i, f)

    @property
    def eigenvalue(self) -> float:
        i, f = self.key
        return i + TWO_PI * f

    @property
    def landau_copies(self) -> frozenset[int]:
        return frozenset(j for j, b in enumerate(self.branches) if isinstance(b, Landau))

    @property
    def weight(self) -> int:
        w = 1
        for b in self.branches:
            w *= branch_weight(b)
        return w

    def __str__(self) -> str:
        return "|".join(branch_str(b) for b in self.branches)


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    multiplicity: int
    labels: tuple[JointLabel, ...]


@dataclass(frozen=True)
class SpectrumTable:
    """Eigenvalues up to a cutoff, ascending, with exact multiplicities."""

    m: int
    cutoff: float
    entries: tuple[SpectrumEntry, ...]

    def key_multiplicity_pairs(self) -> list[tuple[tuple[int, int], int]]:
        return [(e.labels[0].key, e.multiplicity) for e in self.entries]

    def multiplicity_of(self, key: tuple[int, int]) -> int:
        for e in self.entries:
            if e.labels and e.labels[0].key == key:
                return e.multiplicity
        return 0


def _fourier_shell(f: int) -> list[Fourier]:
    """All (k, l) with k^2 + l^2 = f, deterministic order."""
    out = []
    kmax = math.isqrt(f)
    for k in range(-kmax, kmax + 1):
        rem = f - k * k
        lroot = math.isqrt(rem)
        if lroot * lroot == rem:
            out.append(Fourier(k, lroot))
            if lroot != 0:
                out.append(Fourier(k, -lroot))
    return sorted(out)


def iter_single_labels_ascending(cutoff: float) -> Iterator[tuple[tuple[int, int], list]]:
    """Stream (key, labels) groups for one copy in ascending eigenvalue order.

    A bounded heap merges one ray per Landau level (values (2n+1) A for
    A = 1, 2, ...) with the Fourier shells (values 2 pi f), so arbitrarily
    large cutoffs stream without materializing the whole table first.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    heap: list[tuple[float, int, int, int]] = []
    # entries: (value, kind, p, q); kind 0 = Landau ray p = n with q = A,
    # kind 1 = Fourier shells with q = f.
    n = 0
    while 2 * n + 1 <= cutoff:
        heapq.heappush(heap, (float(2 * n + 1), 0, n, 1))
        n += 1
    heapq.heappush(heap, (0.0, 1, 0, 0))

    pending_key: tuple[int, int] | None = None
    pending: list = []
    while heap:
        value, kind, p, q = heapq.heappop(heap)
        if value > cutoff + 1e-12:
            continue
        if kind == 0:
            key = ((2 * p + 1) * q, 0)
            labels = [Landau(p, q), Landau(p, -q)]
            if (2 * p + 1) * (q + 1) <= cutoff:
                heapq.heappush(heap, (float((2 * p + 1) * (q + 1)), 0, p, q + 1))
        else:
            key = (0, q)
            labels = _fourier_shell(q)
            if TWO_PI * (q + 1) <= cutoff:
                heapq.heappush(heap, (TWO_PI * (q + 1), 1, 0, q + 1))
        if labels:
            if pending_key is None:
                pending_key, pending = key, list(labels)
            elif key == pending_key:
                pending.extend(labels)
            else:
                yield pending_key, pending
                pending_key, pending = key, list(labels)
    if pending_key is not None:
        yield pending_key, pending


def single_copy_spectrum(cutoff: float) -> SpectrumTable:
    """SpectrumTable for one copy by direct label enumeration."""
    entries = []
    for key, branches in iter_single_labels_ascending(cutoff):
        labels = tuple(JointLabel((b,)) for b in branches)
        mult = sum(l.weight for l in labels)
        entries.append(SpectrumEntry(labels[0].eigenvalue, mult, labels))
    return SpectrumTable(1, cutoff, tuple(entries))


def _odd_part_divisor_sum(e: int) -> int:
    """Sum of e/d over odd divisors d of e."""
    total = 0
    d = 1
    while d * d <= e:
        if e % d == 0:
            if d % 2 == 1:
                total += e // d
            other = e // d
            if other != d and other % 2 == 1:
                total += e // other
        d += 1
    return total


def _r2(f: int) -> int:
    """Number of (k, l) in Z^2 with k^2 + l^2 = f, via the divisor formula
    r2 = 4 (d_1(f) - d_3(f)) built from the prime factorization."""
    if f == 0:
        return 1
    count4 = 4
    n = f
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if p % 4 == 1:
                count4 *= e + 1
            elif p % 4 == 3 and e % 2 == 1:
                return 0
        p += 1 if p == 2 else 2
    if n > 1:
        if n % 4 == 1:
            count4 *= 2
        elif n % 4 == 3:
            return 0
    return count4


def single_copy_multiplicities_arithmetic(cutoff: float) -> list[tuple[tuple[int, int], int]]:
    """Independent (key, multiplicity) route from arithmetic functions.

    Landau multiplicity of an integer e is 2 * sum_{d | e, d odd} e / d (both
    signs of alpha, each of weight |alpha| = e / d); the Fourier multiplicity
    of 2 pi f is the lattice count r2(f).  No labels are enumerated.
    """
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    items: list[tuple[float, tuple[int, int], int]] = []
    for e in range(1, math.floor(cutoff + 1e-12) + 1):
        items.append((float(e), (e, 0), 2 * _odd_part_divisor_sum(e)))
    f = 0
    while TWO_PI * f <= cutoff + 1e-12:
        r = _r2(f)
        if r:
            items.append((TWO_PI * f, (0, f), r))
        f += 1
    items.sort()
    return [(key, mult) for _, key, mult in items]


def _single_labels_list(cutoff: float) -> list[tuple[tuple[int, int], object]]:
    out = []
    for key, branches in iter_single_labels_ascending(cutoff):
        for b in branches:
            out.append((key, b))
    out.sort(key=lambda t: (t[0][0] + TWO_PI * t[0][1], isinstance(t[1], Fourier), t[1]))
    return out


def _count_by_key(cutoff: float, weighted: bool) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = {}
    for key, branches in iter_single_labels_ascending(cutoff):
        amount = sum(branch_weight(b) for b in branches) if weighted else len(branches)
        counts[key] = counts.get(key, 0) + amount
    return counts


def _convolve_counts(
    a: dict[tuple[int, int], int], b: dict[tuple[int, int], int], cutoff: float
) -> dict[tuple[int, int], int]:
    out: dict[tuple[int, int], int] = {}
    for (i1, f1), c1 in a.items():
        for (i2, f2), c2 in b.items():
            key = (i1 + i2, f1 + f2)
            if key[0] + TWO_PI * key[1] <= cutoff + 1e-12:
                out[key] = out.get(key, 0) + c1 * c2
    return out


def product_multiplicity_convolution(m: int, cutoff: float) -> dict[tuple[int, int], int]:
    """(key -> multiplicity) for the m-fold product by sumset convolution of
    the single-copy table; an independent check on label enumeration."""
    single = _count_by_key(cutoff, weighted=True)
    acc = {(0, 0): 1}
    for _ in range(m):
        acc = _convolve_counts(acc, single, cutoff)
    return acc


def estimate_product_label_count(m: int, cutoff: float) -> int:
    single = _count_by_key(cutoff, weighted=False)
    acc = {(0, 0): 1}
    for _ in range(m):
        acc = _convolve_counts(acc, single, cutoff)
    return sum(acc.values())


def _iter_product_branches(m: int, cutoff: float) -> Iterator[tuple]:
    """All m-tuples of branch labels with total eigenvalue <= cutoff."""
    singles = _single_labels_list(cutoff)
    values = [key[0] + TWO_PI * key[1] for key, _ in singles]

    def rec(copy: int, budget: float, prefix: tuple):
        if copy == m:
            yield prefix
            return
        for (key, b), v in zip(singles, values):
            if v > budget + 1e-12:
                break
            yield from rec(copy + 1, budget - v, prefix + (b,))

    yield from rec(0, cutoff, ())


def product_spectrum(m: int, cutoff: float, label_budget: int = DEFAULT_LABEL_BUDGET) -> SpectrumTable:
    """SpectrumTable for the m-fold product.

    Joint labels are all m-tuples of single-copy labels with eigenvalue sum
    below the cutoff; their weights multiply.  Refuses to run when the label
    count estimate exceeds ``label_budget``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    estimate = estimate_product_label_count(m, cutoff)
    if estimate > label_budget:
        raise CutoffTooLargeError(
            f"estimated {estimate} labels exceeds budget {label_budget}"
        )
    groups: dict[tuple[int, int], list[JointLabel]] = {}
    for branches in _iter_product_branches(m, cutoff):
        label = JointLabel(branches)
        groups.setdefault(label.key, []).append(label)
    entries = []
    for key in sorted(groups, key=lambda k: k[0] + TWO_PI * k[1]):
        labels = tuple(groups[key])
        mult = sum(l.weight for l in labels)
        entries.append(SpectrumEntry(key[0] + TWO_PI * key[1], mult, labels))
    return SpectrumTable(m, cutoff, tuple(entries))


def density_fraction(m: int, cutoff: float) -> float:
    """Multiplicity-weighted fraction of the spectrum below the cutoff whose
    labels are Landau on every copy.

    For m = 1 eigenvalue classes are branch-pure, so this equals the fraction
    of eigenvalues (counted with multiplicity) that carry only full-J labels;
    for m >= 2 the same label-mass reading is used since integer eigenvalues
    always admit partial-J labels as well.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    full = total = 0
    for branches in _iter_product_branches(m, cutoff):
        label = JointLabel(branches)
        w = label.weight
        total += w
        if len(label.landau_copies) == m:
            full += w
    if total == 0:
        return 0.0
    return full / total


class FanPoint(NamedTuple):
    """One joint-spectrum record: eigenvalue with per-copy |alpha| and 2n+1
    (zero on Fourier copies)."""

    eigenvalue: float
    alphas: tuple[int, ...]
    odds: tuple[int, ...]


def fan_points(m: int, cutoff: float, label_budget: int = DEFAULT_LABEL_BUDGET) -> list[FanPoint]:
    """Scatter records of the joint spectrum, ascending, one row per label."""
    table = product_spectrum(m, cutoff, label_budget)
    points = []
    for entry in table.entries:
        for label in entry.labels:
            alphas = tuple(
                abs(b.alpha) if isinstance(b, Landau) else 0 for b in label.branches
            )
            odds = tuple(
                2 * b.n + 1 if isinstance(b, Landau) else 0 for b in label.branches
            )
            points.append(FanPoint(entry.eigenvalue, alphas, odds))
    return points


def match_equal_eigenvalues(
    m: int,
    cutoff: float,
    *,
    j_sets: Iterable[frozenset[int]] | None = None,
    levels: dict[int, int] | None = None,
    eigenvalue_key: tuple[int, int] | None = None,
    min_size: int = 2,
    label_budget: int = DEFAULT_LABEL_BUDGET,
) -> list[list[JointLabel]]:
    """Groups of distinct labels sharing an exact eigenvalue key.

    Optional filters: ``j_sets`` restricts the Landau copy sets a label may
    have, ``levels`` pins the oscillator level on given copies, and
    ``eigenvalue_key`` keeps a single eigenvalue class.  Groups smaller than
    ``min_size`` after filtering are dropped.
    """
    table = product_spectrum(m, cutoff, label_budget)
    j_allowed = None if j_sets is None else {frozenset(J) for J in j_sets}
    out = []
    for entry in table.entries:
        labels = []
        for label in entry.labels:
            if j_allowed is not None and label.landau_copies not in j_allowed:
                continue
            if levels is not None:
                ok = True
                for copy, n in levels.items():
                    b = label.branches[copy]
                    if not (isinstance(b, Landau) and b.n == n):
                        ok = False
                        break
                if not ok:
                    continue
            labels.append(label)
        if len(labels) >= min_size:
            if eigenvalue_key is None or labels[0].key == eigenvalue_key:
                out.append(labels)
    return out


class AlignmentError(ValueError):
    """No equal-eigenvalue alignment exists below the search bound."""


def _representable(target: int, coins: tuple[int, ...]) -> list[int] | None:
    """Nonnegative integers d with sum(coins[i] * d[i]) = target, or None.

    Small bounded coin problem; the greedy round-robin spread keeps the
    adjustment distributed so direction ratios drift by O(target / alpha).
    """
    if target < 0:
        return None
    if target == 0:
        return [0] * len(coins)
    best: list[int] | None = None

    def rec(i: int, remaining: int, acc: list[int]):
        nonlocal best
        if best is not None:
            return
        if i == len(coins) - 1:
            if remaining % coins[i] == 0:
                best = acc + [remaining // coins[i]]
            return
        step = coins[i]
        for d in range(remaining // step, -1, -1):
            rec(i + 1, remaining - step * d, acc + [d])
            if best is not None:
                return

    # spread pass: try to split evenly first by seeding with target // len
    rec(0, target, [])
    return best


def align_equal_eigenvalue(
    component_coins: list[tuple[int, ...]],
    base_alphas: list[tuple[int, ...]],
    search_width: int = 512,
) -> tuple[int, list[tuple[int, ...]]]:
    """Find one integer Landau eigenvalue shared by all components.

    ``component_coins[i]`` holds the per-copy odd weights (2 n_j + 1) of
    component i and ``base_alphas[i]`` its target |alpha| vector.  Returns the
    matched eigenvalue and adjusted alpha vectors (entrywise >= the base), or
    raises AlignmentError when nothing matches within ``search_width`` above
    the largest base value.
    """
    base_values = [
        sum(c * a for c, a in zip(coins, alphas))
        for coins, alphas in zip(component_coins, base_alphas)
    ]
    start = max(base_values)
    for lam in range(start, start + search_width + 1):
        adjusted = []
        for coins, alphas, v in zip(component_coins, base_alphas, base_values):
            d = _representable(lam - v, coins)
            if d is None:
                break
            adjusted.append(tuple(a + di for a, di in zip(alphas, d)))
        else:
            return lam, adjusted
    raise AlignmentError(
        f"no common eigenvalue within {search_width} above {start}"
    )


@dataclass(frozen=True)
class HTypeEntry:
    eigenvalue: float
    multiplicity: int
    labels: tuple[str, ...]


def htype_spectrum(d: int, beta: tuple[float, ...], cutoff: float) -> list[HTypeEntry]:
    """Spectrum of the weighted operator sum_j beta_j (X_j^2 + Y_j^2) on the
    (2d+1)-dimensional quotient with a single center.

    Landau branch: |alpha| * sum_j beta_j (2 n_j + 1) for alpha != 0 and
    n in N^d, carrying weight |alpha|^d; Fourier branch (alpha = 0):
    2 pi sum_j beta_j (k_j^2 + l_j^2), weight 1.  Grouping keys are rounded
    to 1e-9 since irrational weights admit no exact integer pair.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if len(beta) != d:
        raise ValueError("beta must have length d")
    if min(beta) <= 0:
        raise ValueError("beta must be positive")
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    groups: dict[int, tuple[float, int, list[str]]] = {}

    def push(value: float, weight: int, label: str):
        key = round(value * 1e9)
        if key in groups:
            v, w, ls = groups[key]
            groups[key] = (v, w + weight, ls + [label])
        else:
            groups[key] = (value, weight, [label])

    def landau_levels(prefix: list[int], budget: float, alpha: int):
        j = len(prefix)
        if j == d:
            value = alpha * sum(b * (2 * n + 1) for b, n in zip(beta, prefix))
            push(value, alpha ** d, f"L(n={tuple(prefix)},|a|={alpha})")
            push(value, alpha ** d, f"L(n={tuple(prefix)},|a|={-alpha})")
            return
        n = 0
        while beta[j] * (2 * n + 1) <= budget + 1e-12:
            landau_levels(prefix + [n], budget - beta[j] * (2 * n + 1), alpha)
            n += 1

    alpha = 1
    while alpha * sum(beta) <= cutoff + 1e-12:
        landau_levels([], cutoff / alpha, alpha)
        alpha += 1

    def fourier_levels(prefix: list[tuple[int, int]], budget: float):
        j = len(prefix)
        if j == d:
            value = TWO_PI * sum(
                b * (k * k + l * l) for b, (k, l) in zip(beta, prefix)
            )
            push(value, 1, "F" + "".join(f"({k},{l})" for k, l in prefix))
            return
        kmax = math.isqrt(max(0, math.floor(budget / (TWO_PI * beta[j]) + 1e-12)))
        for k in range(-kmax, kmax + 1):
            for l in range(-kmax, kmax + 1):
                cost = TWO_PI * beta[j] * (k * k + l * l)
                if cost <= budget + 1e-12:
                    fourier_levels(prefix + [(k, l)], budget - cost)

    fourier_levels([], cutoff)

    entries = [
        HTypeEntry(v, w, tuple(sorted(ls)))
        for v, w, ls in sorted(groups.values(), key=lambda t: t[0])
    ]
    return entries

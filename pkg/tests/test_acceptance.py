"""Top-level acceptance checks.

Each test exercises one end-to-end guarantee of the package and prints a
single ``ACCEPTANCE n: PASS/FAIL`` line (visible in the -rA summary), with
tolerances and runtime budgets pinned in the assertions.
"""

from __future__ import annotations

import functools
import math
import time
from pathlib import Path

import numpy as np
import pytest

from heisfan.cli import main
from heisfan.cones import (
    ConePartition,
    limit_histogram,
    refinement_check,
    split_by_energy_ratio,
)
from heisfan.eigenfunctions import (
    MixtureAtom,
    MixtureComponent,
    line_sequence,
    localized_state,
    mixture,
    prescribed_limit_sequence,
    single_mode,
    tensor,
)
from heisfan.modes import FourierMode, LandauMode
from heisfan.pairing import full_overlap
from heisfan.quantum_limits import (
    base_marginal,
    cos_xy,
    cos_z_difference,
    invariance_defect,
    joint_pairing,
    sin_xy,
)
from heisfan.spectrum import (
    density_fraction,
    product_multiplicity_convolution,
    product_spectrum,
    single_copy_multiplicities_arithmetic,
)

SQRT_2PI = math.sqrt(2.0 * math.pi)
TWO_PI = 2.0 * math.pi
GOLDEN = Path(__file__).parent / "golden"


def criterion(n: int, description: str):
    """Print one PASS/FAIL line per acceptance criterion."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {n}: FAIL - {description}")
                raise
            print(f"ACCEPTANCE {n}: PASS - {description}")

        return wrapper

    return decorate


def random_points(rng: np.random.Generator, count: int, m: int) -> np.ndarray:
    pts = rng.random((count, m, 3))
    pts[..., 0] *= SQRT_2PI
    pts[..., 1] *= SQRT_2PI
    pts[..., 2] *= TWO_PI
    return pts


def outside_ball_mass(phi, radius: float, resolution: int = 128) -> float:
    """(x, y) marginal mass outside the periodic ball around the origin."""
    grid = base_marginal(phi, ["x_1", "y_1"], resolution)
    x = grid.axes[0].nodes
    y = grid.axes[1].nodes
    dx = np.minimum(x, SQRT_2PI - x)
    dy = np.minimum(y, SQRT_2PI - y)
    dist = np.hypot(dx[:, None], dy[None, :])
    weights = np.outer(grid.axes[0].weights, grid.axes[1].weights)
    return float(np.sum(np.real(grid.values) * weights * (dist > radius)))


@criterion(1, "closed-form eigen-equation residual < 1e-8 on random states")
def test_eigen_equation_residual():
    start = time.monotonic()
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(50):
        m = 1 + (i % 2)
        modes = []
        for _ in range(m):
            n = int(rng.integers(0, 5))
            alpha = int(rng.integers(1, 13)) * (1 if rng.random() < 0.5 else -1)
            sector = int(rng.integers(0, abs(alpha)))
            modes.append(LandauMode(n, alpha, sector))
        phi = single_mode(*modes)
        pts = random_points(rng, 1000, m)
        values = phi.evaluate(pts)
        residual = np.max(np.abs(phi.minus_delta(pts) - phi.eigenvalue * values))
        scale = np.max(np.abs(values))
        assert scale > 0
        worst = max(worst, residual / scale)
    assert worst < 1e-8
    assert time.monotonic() - start < 60.0


@criterion(2, "independent spectrum enumerators agree; spot multiplicities 2/8/4")
def test_spectrum_cross_validation():
    start = time.monotonic()
    streamed_1 = dict(product_spectrum(1, 500.0).key_multiplicity_pairs())
    assert streamed_1 == product_multiplicity_convolution(1, 500.0)
    streamed_2 = dict(product_spectrum(2, 200.0).key_multiplicity_pairs())
    assert streamed_2 == product_multiplicity_convolution(2, 200.0)
    arithmetic = dict(single_copy_multiplicities_arithmetic(10.0))
    for key, want in (((1, 0), 2), ((3, 0), 8), ((0, 1), 4)):
        assert streamed_1[key] == want
        assert arithmetic[key] == want
    assert time.monotonic() - start < 30.0


@criterion(3, "Zak-sector Gram matrices are the identity within 1e-6")
def test_sector_gram_identity():
    worst = 0.0
    for size in range(1, 7):
        for alpha in (size, -size):
            for n in range(3):
                sectors = [LandauMode(n, alpha, s) for s in range(size)]
                for i, f in enumerate(sectors):
                    for j, g in enumerate(sectors):
                        got = full_overlap(f, g)
                        want = 1.0 if i == j else 0.0
                        worst = max(worst, abs(got - want))
    assert worst < 1e-6


@criterion(4, "integer-branch density fraction nondecreasing and >= 0.9")
def test_density_one_trend():
    start = time.monotonic()
    fractions = [density_fraction(1, cutoff) for cutoff in (100.0, 400.0, 1600.0)]
    assert fractions == sorted(fractions)
    assert fractions[-1] >= 0.9
    assert time.monotonic() - start < 60.0


@criterion(5, "localized ladder concentrates in (x,y); z-marginals uniform")
def test_localization_ladder():
    start = time.monotonic()
    previous = None
    outside = None
    for k in range(3, 11):
        phi = localized_state(0, k * k)
        outside = outside_ball_mass(phi, 0.4)
        if previous is not None:
            assert outside < previous
        previous = outside
        z_grid = base_marginal(phi, ["z_1"], 64)
        assert np.max(np.abs(z_grid.values - 1.0 / TWO_PI)) < 1e-10
    assert outside < 0.1
    assert time.monotonic() - start < 120.0


def diagonal_state(k: int):
    components = (
        MixtureComponent(
            1.0,
            (0, 1),
            (0, 0),
            (
                MixtureAtom(0.5, (1, 1), None, (0, 0)),
                MixtureAtom(0.5, (1, 1), None, (1, -1)),
            ),
        ),
    )
    return prescribed_limit_sequence(2, components, k)


@criterion(6, "equal-eigenvalue mixture: diagonal flow invariant, transverse not")
def test_mixture_flow_invariance():
    start = time.monotonic()
    phi = diagonal_state(3)
    for t in (math.pi / 4, math.pi / 2, math.pi):
        assert invariance_defect(phi, (0.5, 0.5), t) < 1e-8
    transverse = invariance_defect(
        phi, (1.0, 0.0), math.pi, dictionary=[cos_z_difference(2, 0, 1)]
    )
    assert transverse > 0.01
    z_grid = base_marginal(phi, ["z_1", "z_2"], 64)
    rolled = np.roll(z_grid.values, (1, 1), axis=(0, 1))
    assert np.max(np.abs(z_grid.values - rolled)) < 1e-8
    assert time.monotonic() - start < 120.0


@criterion(7, "energy-ratio splitter recovers orthogonal pieces; cross pairing decays")
def test_splitting_and_joint_pairing():
    start = time.monotonic()
    phi = mixture(
        [
            (
                math.sqrt(0.4),
                tensor(single_mode(LandauMode(0, 1, 0)), single_mode(FourierMode(1, 0))),
            ),
            (
                math.sqrt(0.6),
                tensor(single_mode(FourierMode(0, 1)), single_mode(LandauMode(0, 1, 0))),
            ),
        ]
    )
    assert phi.eigenvalue_key == (1, 1)
    pieces = split_by_energy_ratio(phi, 0.1)
    assert set(pieces) == {frozenset({0}), frozenset({1})}
    first = pieces[frozenset({0})]
    second = pieces[frozenset({1})]
    assert first.eigenvalue_key == phi.eigenvalue_key
    assert second.eigenvalue_key == phi.eigenvalue_key
    assert first.norm_squared() == pytest.approx(0.4, abs=1e-12)
    assert second.norm_squared() == pytest.approx(0.6, abs=1e-12)
    assert abs(first.inner(second)) < 1e-15

    probes = [cos_xy(2, 0, 1, 0), sin_xy(2, 0, 0, 1)]
    values = []
    for k in (1, 2, 3, 4):
        on_first = line_sequence(2, (0,), (0,), (1,), k)
        on_second = line_sequence(2, (1,), (0,), (1,), k)
        values.append(
            max(abs(joint_pairing(on_first, on_second, a)) for a in probes)
        )
    assert all(later <= earlier for earlier, later in zip(values, values[1:]))
    assert values[-1] < 0.05
    assert time.monotonic() - start < 120.0


@criterion(8, "cone histogram places 0.36/0.64 exactly; refinement conserves mass")
def test_disintegration_histogram():
    start = time.monotonic()
    components = (
        MixtureComponent(0.36, (0, 1), (0, 0), (MixtureAtom(1.0, (1, 1)),)),
        MixtureComponent(0.64, (0, 1), (0, 1), (MixtureAtom(1.0, (1, 1)),)),
    )
    ladder = [prescribed_limit_sequence(2, components, k) for k in (1, 2, 3)]
    table = limit_histogram(ladder, (0, 1), 6)
    partition = ConePartition(2, 6)
    half_half = partition.locate_levels((0, 0))
    quarter_rest = partition.locate_levels((0, 1))
    assert table["final"][str(half_half)] == pytest.approx(0.36, abs=1e-9)
    assert table["final"][str(quarter_rest)] == pytest.approx(0.64, abs=1e-9)
    for depth in range(2, 6):
        assert refinement_check(ladder[-1], (0, 1), depth) <= 1e-12
    assert time.monotonic() - start < 30.0


@criterion(9, "partition axioms: unique located leaf, nesting, shrinking diameter")
def test_partition_axioms():
    start = time.monotonic()
    rng = np.random.default_rng(11)
    for dim, count in ((2, 10_000), (3, 1_000)):
        raw = rng.random((count, dim)) + 1e-9
        points = raw / raw.sum(axis=1, keepdims=True)
        previous_cells = None
        previous_diameter = None
        for depth in range(0, 11):
            partition = ConePartition(dim, depth)
            located = [partition.locate(p) for p in points]
            for point, index in zip(points, located):
                assert 0 <= index < partition.leaf_count
                bounds = partition.simplex_bounds(index)
                for coordinate, (lo, hi) in zip(point, bounds):
                    assert lo - 1e-12 <= coordinate <= hi + 1e-12
            if previous_cells is not None:
                assert all(
                    fine >> 1 == coarse
                    for fine, coarse in zip(located, previous_cells)
                )
            diameter = partition.diameter_bound()
            if previous_diameter is not None:
                assert diameter <= previous_diameter + 1e-15
            previous_cells = located
            previous_diameter = diameter
        assert ConePartition(dim, 30).diameter_bound() < 1e-3
    assert time.monotonic() - start < 10.0


@criterion(10, "delimited outputs are byte-identical across runs")
def test_golden_determinism(tmp_path, monkeypatch):
    monkeypatch.delenv("HEISFAN_THREADS", raising=False)
    for run in ("a", "b"):
        base = tmp_path / run
        assert (
            main(
                [
                    "spectrum",
                    "--m",
                    "1",
                    "--lambda",
                    "100",
                    "--no-figures",
                    "--out",
                    str(base / "spectrum.csv"),
                ]
            )
            == 0
        )
        assert (
            main(
                [
                    "fan",
                    "--m",
                    "2",
                    "--lambda",
                    "50",
                    "--no-figures",
                    "--out",
                    str(base / "fan.csv"),
                ]
            )
            == 0
        )
    for name, golden in (
        ("spectrum.csv", "spectrum_m1_l100.csv"),
        ("fan.csv", "fan_m2_l50.csv"),
    ):
        first = (tmp_path / "a" / name).read_bytes()
        second = (tmp_path / "b" / name).read_bytes()
        assert first == second
        assert first == (GOLDEN / golden).read_bytes()

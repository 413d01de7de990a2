"""Cone partitions: axioms, nesting, exact masses, and the energy split."""

import json
import math

import numpy as np
import pytest

from heisfan.cones import (
    ConePartition,
    DepthOverflowError,
    cone_masses,
    limit_histogram,
    refinement_check,
    split_by_energy_ratio,
)
from heisfan.eigenfunctions import (
    MixtureAtom,
    MixtureComponent,
    constant_function,
    mixture,
    prescribed_limit_sequence,
    single_mode,
    tensor,
)
from heisfan.modes import FourierMode, LandauMode

from _oracles import random_domain_points


def random_directions(rng, dim, count):
    u = rng.uniform(0.1, 1.0, size=(count, dim))
    return u / u.sum(axis=1, keepdims=True)


def cone_mixture(k=1):
    components = (
        MixtureComponent(0.36, (0, 1), (0, 0), (MixtureAtom(1.0, (1, 1)),)),
        MixtureComponent(0.64, (0, 1), (0, 1), (MixtureAtom(1.0, (1, 1)),)),
    )
    return prescribed_limit_sequence(2, components, k=k)


def diagonal_pair():
    a = tensor(single_mode(LandauMode(0, 1, 0)), single_mode(FourierMode(1, 0)))
    b = tensor(single_mode(FourierMode(0, 1)), single_mode(LandauMode(0, 1, 0)))
    return mixture([(math.sqrt(0.5), a), (math.sqrt(0.5), b)])


def test_every_direction_lands_in_its_own_cell():
    rng = np.random.default_rng(21)
    for dim in (2, 3):
        for depth in (0, 1, 4, 9):
            part = ConePartition(dim, depth)
            for s in random_directions(rng, dim, 60):
                index = part.locate(s)
                assert 0 <= index < part.leaf_count
                bounds = part.simplex_bounds(index)
                assert len(bounds) == dim
                for coord, (lo, hi) in zip(s, bounds):
                    assert lo - 1e-12 <= coord <= hi + 1e-12


def test_cells_partition_disjointly():
    # distinct leaves at one depth have disjoint box interiors: midpoints of
    # one leaf's box never locate into another leaf
    part = ConePartition(3, 6)
    for index in range(0, part.leaf_count, 7):
        box = part.box(index)
        mid = [0.5 * (lo + hi) for lo, hi in box]
        s = mid + [1.0 - sum(mid)]
        if s[-1] < 0:
            continue
        assert part.locate(s) == index


def test_locate_levels_frozen_cells():
    part = ConePartition(2, 6)
    # (1/4, 3/4) and (1/2, 1/2): binary-split paths worked out by hand
    assert part.locate_levels((0, 1)) == 15
    assert part.locate_levels((0, 0)) == 31
    part1 = ConePartition(2, 1)
    assert part1.locate_levels((0, 1)) == 0
    assert part1.locate_levels((1, 0)) == 1


def test_parent_nesting():
    rng = np.random.default_rng(5)
    for dim in (2, 3):
        fine = ConePartition(dim, 7)
        coarse = ConePartition(dim, 6)
        for s in random_directions(rng, dim, 40):
            idx = fine.locate(s)
            assert ConePartition.parent(idx) == coarse.locate(s)
            inner = fine.box(idx)
            outer = coarse.box(ConePartition.parent(idx))
            for (ilo, ihi), (olo, ohi) in zip(inner, outer):
                assert olo - 1e-15 <= ilo and ihi <= ohi + 1e-15


def test_diameter_bound_shrinks_to_zero_and_caps_cells():
    part = ConePartition(3, 8)
    bounds = [ConePartition(3, d).diameter_bound() for d in range(0, 21)]
    assert all(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:]))
    assert bounds[-1] < 1e-2
    for index in range(part.leaf_count):
        cell = part.simplex_bounds(index)
        if cell[-1][1] < cell[-1][0]:
            continue  # box misses the simplex entirely; no direction lands here
        diam = math.sqrt(sum((hi - lo) ** 2 for lo, hi in cell))
        assert diam <= part.diameter_bound() + 1e-12


def test_depth_and_dimension_guards():
    with pytest.raises(DepthOverflowError):
        ConePartition(2, 33)
    with pytest.raises(DepthOverflowError):
        ConePartition(2, -1)
    with pytest.raises(ValueError):
        ConePartition(0, 3)


def test_locate_validation():
    part = ConePartition(2, 3)
    with pytest.raises(ValueError):
        part.locate((0.5, 0.2, 0.3))
    with pytest.raises(ValueError):
        part.locate((-0.2, 1.2))
    with pytest.raises(ValueError):
        part.locate((0.9, 0.9))
    with pytest.raises(ValueError):
        part.box(8)


def test_single_copy_partition_degenerates():
    part = ConePartition(1, 10)
    assert part.leaf_count == 1
    assert part.locate((1.0,)) == 0
    assert part.box(0) == []
    assert part.simplex_bounds(0) == [(1.0, 1.0)]
    assert part.diameter_bound() == 0.0


def test_cone_masses_exact_histogram():
    phi = cone_mixture(k=1)
    report = cone_masses(phi, (0, 1), 6)
    masses = report.mass_by_index()
    assert set(masses) == {15, 31}
    assert abs(masses[15] - 0.64) < 1e-12
    assert abs(masses[31] - 0.36) < 1e-12
    assert abs(report.total_mass - 1.0) < 1e-12
    assert report.copies == (0, 1)


def test_cone_masses_filters_by_support():
    phi = diagonal_pair()
    only_first = cone_masses(phi, (0,), 3)
    assert abs(only_first.total_mass - 0.5) < 1e-12
    assert [c.index for c in only_first.cells] == [0]
    empty_support = cone_masses(phi, (), 3)
    assert empty_support.cells == ()
    flat = cone_masses(constant_function(2), (), 3)
    assert abs(flat.total_mass - 1.0) < 1e-12


def test_refinement_is_conservative():
    phi = cone_mixture(k=1)
    for depth in (1, 3, 5):
        assert refinement_check(phi, (0, 1), depth) == 0.0


def test_defect_hook_sees_normalized_cell_pieces():
    phi = cone_mixture(k=1)
    seen = []

    def defect(piece, center):
        seen.append(center)
        return abs(piece.norm_squared() - 1.0)

    report = cone_masses(phi, (0, 1), 4, defect_fn=defect)
    assert len(seen) == len(report.cells) == 2
    assert all(cell.defect < 1e-9 for cell in report.cells)
    for center, cell in zip(seen, report.cells):
        for c, (lo, hi) in zip(center, cell.simplex_bounds):
            assert lo <= c <= hi


def test_report_json_roundtrip(tmp_path):
    report = cone_masses(cone_mixture(k=1), (0, 1), 6)
    body = report.to_json_dict()
    assert body["depth"] == 6
    assert body["copies"] == [1, 2]
    assert {c["index"] for c in body["cells"]} == {15, 31}
    assert all(
        set(c) == {"index", "simplex_bounds", "mass", "defect"}
        for c in body["cells"]
    )
    path = tmp_path / "report.json"
    report.to_json(str(path), extra={"note": "x"})
    parsed = json.loads(path.read_text())
    assert parsed["note"] == "x"
    assert parsed["cells"] == json.loads(json.dumps(body["cells"]))


def test_limit_histogram_table():
    ladder = [cone_mixture(k) for k in (1, 2)]
    hist = limit_histogram(ladder, (0, 1), 6)
    assert hist["depth"] == 6
    assert hist["copies"] == [1, 2]
    assert len(hist["table"]) == 2
    assert hist["final"] == hist["table"][-1]["masses"]
    assert abs(float(hist["final"]["15"]) - 0.64) < 1e-12


def test_energy_split_pure_fourier_is_single_piece():
    pieces = split_by_energy_ratio(constant_function(2), 0.1)
    assert set(pieces) == {frozenset()}


def test_energy_split_separates_diagonal_pair():
    phi = diagonal_pair()
    pieces = split_by_energy_ratio(phi, 0.1)
    assert set(pieces) == {frozenset({0}), frozenset({1})}
    a, b = pieces[frozenset({0})], pieces[frozenset({1})]
    assert abs(a.inner(b)) < 1e-12
    assert abs(a.norm_squared() + b.norm_squared() - phi.norm_squared()) < 1e-10
    # the pieces reassemble the function pointwise
    rng = np.random.default_rng(12)
    pts = random_domain_points(rng, 20, 2)
    recombined = a.evaluate(pts) + b.evaluate(pts)
    assert np.max(np.abs(recombined - phi.evaluate(pts))) < 1e-12
    # every piece keeps the parent eigenvalue
    assert a.eigenvalue_key == b.eigenvalue_key == phi.eigenvalue_key


def test_energy_split_threshold_moves_terms_to_elliptic_piece():
    phi = diagonal_pair()
    pieces = split_by_energy_ratio(phi, 0.5)
    assert set(pieces) == {frozenset()}
    with pytest.raises(ValueError):
        split_by_energy_ratio(phi, 0.0)
    with pytest.raises(ValueError):
        split_by_energy_ratio(phi, 1.0)

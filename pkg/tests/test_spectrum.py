"""Spectrum enumeration tests: exact keys, multiplicities, alignment."""

import math

import numpy as np
import pytest

from heisfan.spectrum import (
    AlignmentError,
    CutoffTooLargeError,
    Fourier,
    JointLabel,
    Landau,
    align_equal_eigenvalue,
    branch_key,
    branch_value,
    branch_weight,
    density_fraction,
    fan_points,
    htype_spectrum,
    match_equal_eigenvalues,
    product_multiplicity_convolution,
    product_spectrum,
    single_copy_multiplicities_arithmetic,
    single_copy_spectrum,
)

TWO_PI = 2.0 * math.pi


def test_branch_data():
    assert branch_key(Landau(1, -3)) == (9, 0)
    assert branch_key(Fourier(2, -1)) == (0, 5)
    assert branch_value(Landau(0, 1)) == 1.0
    assert branch_value(Fourier(1, 0)) == pytest.approx(TWO_PI)
    assert branch_weight(Landau(0, -4)) == 4
    assert branch_weight(Fourier(3, 1)) == 1


def test_joint_label_key_and_weight():
    label = JointLabel((Landau(0, 2), Fourier(1, 1)))
    assert label.key == (2, 2)
    assert label.eigenvalue == pytest.approx(2.0 + TWO_PI * 2.0)
    assert label.weight == 2
    assert label.landau_copies == frozenset({0})
    assert str(label) == "L(0,2)|F(1,1)"


def test_hand_checked_multiplicities():
    """mult(1): n=0, alpha=+-1.  mult(3): alpha=+-3 at weight 3 plus
    (n=1, alpha=+-1) at weight 1.  mult(2 pi): the four unit lattice points."""
    table = single_copy_spectrum(10.0)
    assert table.multiplicity_of((1, 0)) == 2
    assert table.multiplicity_of((3, 0)) == 8
    assert table.multiplicity_of((0, 1)) == 4


def test_enumerators_agree_single_copy():
    table = single_copy_spectrum(120.0)
    assert table.key_multiplicity_pairs() == single_copy_multiplicities_arithmetic(120.0)


def test_enumerators_agree_product():
    table = product_spectrum(2, 60.0)
    conv = product_multiplicity_convolution(2, 60.0)
    pairs = table.key_multiplicity_pairs()
    assert len(pairs) == len(conv)
    assert all(conv[key] == mult for key, mult in pairs)


def test_entries_sorted_with_distinct_exact_keys():
    table = product_spectrum(2, 40.0)
    values = [e.eigenvalue for e in table.entries]
    assert values == sorted(values)
    keys = [e.labels[0].key for e in table.entries]
    assert len(set(keys)) == len(keys)
    for entry in table.entries:
        assert {lbl.key for lbl in entry.labels} == {entry.labels[0].key}
        assert entry.multiplicity == sum(lbl.weight for lbl in entry.labels)


def test_fan_points_cover_all_labels():
    table = product_spectrum(2, 30.0)
    points = fan_points(2, 30.0)
    assert len(points) == sum(len(e.labels) for e in table.entries)
    for p in points:
        landau = sum(o * a for a, o in zip(p.alphas, p.odds))
        assert p.eigenvalue >= landau - 1e-9


def test_label_budget_guard():
    with pytest.raises(CutoffTooLargeError):
        product_spectrum(2, 200.0, label_budget=10)


def test_density_fraction_monotone_tail():
    values = [density_fraction(1, lam) for lam in (100.0, 400.0, 1600.0)]
    assert values[0] <= values[1] <= values[2]
    assert values[2] > 0.99
    assert 0.0 < values[0] <= 1.0


def test_match_equal_eigenvalues_groups_exact_keys():
    groups = match_equal_eigenvalues(
        2,
        12.0,
        j_sets=[frozenset({0}), frozenset({1})],
        eigenvalue_key=(1, 1),
    )
    assert len(groups) == 1
    labels = groups[0]
    assert all(lbl.key == (1, 1) for lbl in labels)
    assert {lbl.landau_copies for lbl in labels} == {frozenset({0}), frozenset({1})}
    assert len(labels) == 16


def test_match_equal_eigenvalues_level_filter():
    groups = match_equal_eigenvalues(1, 10.0, levels={0: 1}, min_size=1)
    for labels in groups:
        assert all(b.n == 1 for lbl in labels for b in lbl.branches)


def test_align_equal_eigenvalue_meets_all_components():
    lam, adjusted = align_equal_eigenvalue([(5,), (3,)], [(1,), (2,)])
    assert lam == 15
    assert adjusted[0] == (3,) and adjusted[1] == (5,)
    assert all(a >= b for pair in zip(adjusted, [(1,), (2,)]) for a, b in zip(*pair))
    with pytest.raises(AlignmentError):
        align_equal_eigenvalue([(5,), (3,)], [(1,), (2,)], search_width=3)


def test_htype_reduces_to_single_copy_at_unit_weight():
    """d=1, beta=(1,) is the ordinary quotient: same eigenvalues, same
    multiplicities as the single-copy enumerator."""
    entries = htype_spectrum(1, (1.0,), 25.0)
    table = single_copy_spectrum(25.0)
    assert len(entries) == len(table.entries)
    for got, want in zip(entries, table.entries):
        assert got.eigenvalue == pytest.approx(want.eigenvalue, abs=1e-9)
        assert got.multiplicity == want.multiplicity


def test_htype_weighted_values():
    entries = htype_spectrum(2, (1.0, 0.5), 6.0)
    values = np.array([e.eigenvalue for e in entries])
    assert np.all(np.diff(values) > 0)
    # lowest Landau branch: |alpha| (1 (2n1+1) + 0.5 (2n2+1)) = 1.5 |alpha|
    assert values[1] == pytest.approx(1.5)
    assert entries[0].eigenvalue == pytest.approx(0.0)


def test_htype_validation():
    with pytest.raises(ValueError):
        htype_spectrum(0, (), 5.0)
    with pytest.raises(ValueError):
        htype_spectrum(2, (1.0,), 5.0)
    with pytest.raises(ValueError):
        htype_spectrum(1, (-1.0,), 5.0)

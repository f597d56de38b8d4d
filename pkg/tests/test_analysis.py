from fractions import Fraction

import numpy as np
import pytest

from pgcode.analysis import (
    GENERAL_CASE,
    HYP_CASE,
    NEITHER,
    POOR,
    RICH,
    SIDE_LARGE,
    SIDE_SMALL,
    THICK,
    THIN,
    blocking_check,
    classify_rich_poor,
    classify_thick_thin,
    cmp_with_sqrt,
    dichotomy_check,
    expander_check,
    find_delta,
    spectrum,
)
from pgcode.code import Codeword, char_function, combination
from pgcode.constructions import disjoint_union
from pgcode.errors import BadDimensions, EmptySet
from pgcode.geometry import PointSet, enumerate_subspaces, gaussian, projective_geometry, theta
from pgcode.gf import field_new


def test_cmp_with_sqrt_against_floats():
    rng = np.random.default_rng(0)
    for _ in range(200):
        q = int(rng.choice([2, 3, 8, 16, 27, 32, 49]))
        x = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 9)))
        a = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 9)))
        b = Fraction(int(rng.integers(-9, 9)), int(rng.integers(1, 9)))
        approx = float(x) - (float(a) + float(b) * q**0.5)
        if abs(approx) < 1e-6:
            continue
        assert cmp_with_sqrt(x, a, b, q) == (1 if approx > 0 else -1)
    # exact boundary: x == a + b*sqrt(q) for square q
    assert cmp_with_sqrt(7, 3, 1, 16) == 0
    assert cmp_with_sqrt(7, 3, -1, 16) > 0


def test_spectrum_line_pg24():
    geom = projective_geometry(field_new(2, 2), 2)
    line = enumerate_subspaces(geom, 1)[0]
    s = PointSet(geom, geom.subspace_points(line))
    rep = spectrum(s, 1)
    assert rep.counts == {5: 1, 1: 20}
    assert rep.verified


def test_spectrum_empty_set():
    geom = projective_geometry(field_new(2, 2), 2)
    rep = spectrum(PointSet(geom, []), 1)
    assert rep.counts == {0: gaussian(3, 2, 4)}
    assert rep.verified


def test_spectrum_moments_random_pg34():
    geom = projective_geometry(field_new(2, 2), 3)
    rng = np.random.default_rng(8)
    for _ in range(10):
        size = int(rng.integers(1, geom.num_points))
        s = PointSet(geom, rng.choice(geom.num_points, size=size, replace=False))
        for r in (1, 2):
            assert spectrum(s, r).verified


def test_classify_thick_thin_lines_q16():
    geom = projective_geometry(field_new(2, 4), 2)
    lines = enumerate_subspaces(geom, 1)
    full = char_function(lines[0], 0)
    assert classify_thick_thin(full, lines[0], HYP_CASE, delta=3) == THICK
    empty = Codeword.zero(geom, 0)
    assert classify_thick_thin(empty, lines[0], HYP_CASE, delta=3) == THIN
    four = Codeword(geom, 0, {int(i): 1 for i in geom.subspace_points(lines[0])[:4]})
    # 4 > delta = 3 yet 4 < q - sqrt(q) + 3 = 15
    assert classify_thick_thin(four, lines[0], HYP_CASE, delta=3) == NEITHER
    assert classify_thick_thin(four, lines[0], GENERAL_CASE) == NEITHER


def test_classify_thick_plane_q8():
    geom = projective_geometry(field_new(2, 3), 3)
    plane = enumerate_subspaces(geom, 2)[0]
    full = char_function(plane, 0)
    assert classify_thick_thin(full, plane, GENERAL_CASE) == THICK
    with pytest.raises(BadDimensions):
        classify_thick_thin(full, geom.point(0), GENERAL_CASE)


def test_classify_rich_poor_frozen_pg316():
    geom = projective_geometry(field_new(2, 4), 3)
    lines = enumerate_subspaces(geom, 1)
    line = lines[0]
    s = PointSet(geom, geom.subspace_points(line))
    planes = enumerate_subspaces(geom, 2)
    from pgcode.geometry import incident

    rho = next(pl for pl in planes if incident(line, pl))
    # oracle: count = 17, poor bound = 1 * theta_1 = 17, rich bound = 13.5 * 17
    assert 17 <= 1 * theta(1, 16)
    assert Fraction(17) < (16 - 4 + Fraction(3, 2)) * Fraction(16**2 - 1, 16 - 1)
    assert classify_rich_poor(s, rho, 1, 1) == POOR
    # rich: the full plane against delta = 1
    full = PointSet(geom, geom.subspace_points(rho))
    assert classify_rich_poor(full, rho, 1, 1) == RICH
    assert classify_rich_poor(PointSet(geom, []), rho, 1, 0) == POOR
    five = PointSet(geom, geom.subspace_points(rho)[:5])
    assert classify_rich_poor(five, rho, 1, 0) == NEITHER


def test_expander_equality_case():
    geom = projective_geometry(field_new(2, 2), 2)
    s = PointSet(geom, range(geom.num_points))
    t = list(range(geom.num_spaces(1)))
    rep = expander_check(s, t, 1)
    assert rep.incidences == rep.main_term
    assert rep.holds


def test_expander_single_line_exact_values():
    geom = projective_geometry(field_new(2, 2), 2)
    line = enumerate_subspaces(geom, 1)[0]
    s = PointSet(geom, geom.subspace_points(line))
    rep = expander_check(s, [line.index], 1)
    assert rep.incidences == 5
    assert rep.main_term == Fraction(25, 21)
    assert rep.bound_squared == 20
    assert (5 - Fraction(25, 21)) ** 2 < 20
    assert rep.holds


def test_expander_rejects_empty():
    geom = projective_geometry(field_new(2, 2), 2)
    with pytest.raises(EmptySet):
        expander_check(PointSet(geom, []), [0], 1)
    with pytest.raises(EmptySet):
        expander_check(PointSet(geom, [0]), [], 1)


def test_expander_random_sweep():
    geom = projective_geometry(field_new(2, 2), 3)
    rng = np.random.default_rng(77)
    for _ in range(50):
        ns = int(rng.integers(1, geom.num_points + 1))
        nt = int(rng.integers(1, geom.num_spaces(2) + 1))
        s = PointSet(geom, rng.choice(geom.num_points, size=ns, replace=False))
        t = [int(x) for x in rng.choice(geom.num_spaces(2), size=nt, replace=False)]
        assert expander_check(s, t, 2).holds


def test_dichotomy_single_line_small():
    geom = projective_geometry(field_new(2, 4), 2)
    line = enumerate_subspaces(geom, 1)[0]
    s = PointSet(geom, geom.subspace_points(line))
    rep = dichotomy_check(s, 1, 1)
    assert rep.hypothesis_holds
    assert rep.side == SIDE_SMALL
    assert rep.size == 17 == rep.small_bound


def test_dichotomy_all_points_large():
    geom = projective_geometry(field_new(2, 4), 2)
    s = PointSet(geom, range(geom.num_points))
    rep = dichotomy_check(s, 1, 1)
    assert rep.hypothesis_holds
    assert rep.side == SIDE_LARGE
    # theta_2 = 273 > 13.5 * 17 = 229.5
    assert rep.large_bound.compare(273) > 0


def test_dichotomy_two_disjoint_lines_pg316():
    geom = projective_geometry(field_new(2, 4), 3)
    s = disjoint_union(geom, 1, 2)
    rep = dichotomy_check(s, 1, 2)
    assert rep.hypothesis_holds
    assert rep.side == SIDE_SMALL
    assert rep.size == 34 <= 2 * theta(2, 16)


def test_dichotomy_hypothesis_violation_detected():
    geom = projective_geometry(field_new(2, 4), 2)
    line = enumerate_subspaces(geom, 1)[0]
    s = PointSet(geom, geom.subspace_points(line)[:7])  # a 7-secant exists
    rep = dichotomy_check(s, 1, 1)
    assert not rep.hypothesis_holds
    assert rep.violators


def test_find_delta_cases():
    geom = projective_geometry(field_new(2, 5), 2)
    assert find_delta(Codeword.zero(geom, 0), 1) == 0
    line = enumerate_subspaces(geom, 1)[0]
    assert find_delta(char_function(line, 0), 1) == 1
    lines = enumerate_subspaces(geom, 1)
    two = combination(geom, 0, [(lines[0], 1), (lines[1], 1)])
    assert find_delta(two, 1) == 2


def test_blocking_check():
    geom = projective_geometry(field_new(3, 1), 2)
    line = enumerate_subspaces(geom, 1)[0]
    rep = blocking_check(PointSet(geom, geom.subspace_points(line)), 1)
    assert rep.blocks and rep.minimal and rep.is_subspace
    # three points never block the lines of PG(2,3): size < theta_1 = 4
    rng = np.random.default_rng(5)
    for _ in range(10):
        s = PointSet(geom, rng.choice(geom.num_points, size=3, replace=False))
        rep = blocking_check(s, 1)
        assert not rep.blocks
        assert rep.witness is not None
        pts = set(int(x) for x in geom.subspace_points(rep.witness))
        assert not pts & set(int(x) for x in s.indices)


def test_classification_monotone():
    geom = projective_geometry(field_new(2, 4), 2)
    line = enumerate_subspaces(geom, 1)[0]
    pts = geom.subspace_points(line)
    order = [THIN, NEITHER, THICK]
    last = 0
    for size in (1, 3, 5, 13, 17):
        c = Codeword(geom, 0, {int(i): 1 for i in pts[:size]})
        cls = classify_thick_thin(c, line, HYP_CASE, delta=1)
        assert order.index(cls) >= last
        last = order.index(cls)


def test_rich_poor_monotone():
    geom = projective_geometry(field_new(2, 4), 3)
    planes = enumerate_subspaces(geom, 2)
    rho = planes[0]
    pts = geom.subspace_points(rho)
    order = [POOR, NEITHER, RICH]
    last = 0
    for size in (1, 30, 120, len(pts)):
        s = PointSet(geom, pts[:size])
        cls = classify_rich_poor(s, rho, 1, 1)
        assert order.index(cls) >= last
        last = order.index(cls)


def test_expander_j_out_of_range():
    geom = projective_geometry(field_new(2, 2), 2)
    with pytest.raises(BadDimensions):
        expander_check(PointSet(geom, [0]), [0], 2)


def test_general_regime_needs_composite_order():
    from pgcode.errors import PrimeField

    geom = projective_geometry(field_new(5, 1), 2)
    line = enumerate_subspaces(geom, 1)[0]
    c = Codeword(geom, 0, {int(i): 1 for i in geom.subspace_points(line)[:3]})
    with pytest.raises(PrimeField):
        classify_thick_thin(c, line, GENERAL_CASE)

"""Permutation-scan oracle: frozen counts, solver agreement, one-faced lists."""

import pytest

from mapcomb.degrees import parse_degree_set
from mapcomb.errors import OracleBound, ValidationError
from mapcomb.mobiles import count_maps, joint_distribution
from mapcomb.oracle import (
    RotationMap,
    distribution_oracle,
    one_faced_maps,
    oracle_refined_rows,
    rooted_map_count,
)


def test_rotation_map_triangle():
    # three vertices, each rotation a transposition of its two darts
    m = RotationMap(3, (5, 2, 1, 4, 3, 0))
    assert m.is_connected()
    assert m.vertex_degrees() == [2, 2, 2]
    assert m.face_valencies() == [3, 3]
    assert m.genus() == 0


def test_rotation_map_rejects_non_permutation():
    with pytest.raises(ValidationError):
        RotationMap(2, (0, 0, 1, 2))


def test_small_counts_frozen():
    assert rooted_map_count(1, genus=0) == 2
    assert rooted_map_count(1, genus=1) == 0
    assert rooted_map_count(2, genus=0) == 9
    assert rooted_map_count(2, genus=1) == 1
    assert rooted_map_count(3, genus=0) == 54
    assert rooted_map_count(3, genus=1) == 20


def test_genus_summation():
    for n in (1, 2, 3, 4):
        total = rooted_map_count(n)
        by_genus = sum(rooted_map_count(n, genus=g) for g in range(0, n // 2 + 1))
        assert by_genus == total


def test_triangle_family_count():
    assert rooted_map_count(3, genus=0, face_pred=parse_degree_set("3")) == 4


def test_complementary_predicates_partition():
    even = parse_degree_set("even")
    total = rooted_map_count(3, genus=0)
    yes = rooted_map_count(3, genus=0, face_pred=even)
    no = rooted_map_count(3, genus=0,
                          face_pred=lambda ms: any(v % 2 for v in ms))
    assert yes + no == total


@pytest.mark.parametrize("spec", ["all", "even", "4", "3", "2,4", "3,4"])
def test_counts_agree_with_solver(spec):
    dset = parse_degree_set(spec)
    for n in range(1, 5):
        assert rooted_map_count(n, genus=0, face_pred=dset) == \
            count_maps(dset, n)


@pytest.mark.parametrize("spec,tracked", [
    ("all", (1, 2)),
    ("even", (2, 4)),
    ("4", (4,)),
    ("2,4", (2,)),
    ("3,4", (3, 4)),
])
def test_distributions_agree_with_solver(spec, tracked):
    dset = parse_degree_set(spec)
    for n in range(1, 5):
        got = distribution_oracle(dset, n, 0, tracked)
        want = joint_distribution(dset, n, tracked)
        assert got.rows == want.rows


def test_quadrangular_distribution_two_edges():
    d = distribution_oracle(parse_degree_set("4"), 2, 0, (4,))
    assert d.rows == {(1,): 2}


def test_refined_rows_match_series():
    from mapcomb.mobiles import map_series
    from mapcomb.series import extract

    dset = parse_degree_set("even")
    tracked = (2, 4)
    order = 4
    s = map_series(dset, order, tracked)
    rows = oracle_refined_rows(dset, 4, 0, tracked)
    assert rows
    for (v, *marks), cnt in rows.items():
        assert extract(s, 4, v=v, marks=tuple(marks)) == cnt
    # and nothing in the series beyond the oracle rows
    total = sum(rows.values())
    assert total == count_maps(dset, 4)


def test_pruned_scan_quadrangulations():
    # three quadrangular faces <-> arbitrary maps with three edges
    c = rooted_map_count(6, genus=0, face_pred=parse_degree_set("4"))
    assert c == count_maps(parse_degree_set("all"), 3) == 54


def test_oracle_bound_raised():
    with pytest.raises(OracleBound):
        rooted_map_count(7)
    with pytest.raises(OracleBound):
        rooted_map_count(6)      # no degree set to prune with
    with pytest.raises(OracleBound):
        rooted_map_count(6, face_pred=parse_degree_set("4"), perm_budget=100)


def test_one_faced_genus_one_schemes():
    maps = one_faced_maps(1)
    assert len(maps) == 2
    degs = sorted(tuple(m.vertex_degrees()) for m in maps)
    assert degs == [(3, 3), (4,)]
    for m in maps:
        assert m.genus() == 1
        assert m.face_valencies() == [2 * m.n]
        assert sum(d - 2 for d in m.vertex_degrees()) == 2


def test_one_faced_planar_empty():
    assert one_faced_maps(0) == []


def test_one_faced_no_floor_needs_cap():
    with pytest.raises(ValidationError):
        one_faced_maps(1, min_degree=1)
    small = one_faced_maps(1, min_degree=1, max_edges=3)
    kinds = sorted((m.n, tuple(m.vertex_degrees())) for m in small)
    assert kinds == [(2, (4,)), (3, (1, 5)), (3, (2, 4)), (3, (3, 3))]

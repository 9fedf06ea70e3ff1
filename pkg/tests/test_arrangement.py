import random
from fractions import Fraction
from itertools import product

import pytest

from _helpers import A2, NU, random_system, scaled
from vpartition.arrangement import (NULL_CHAMBER, Exterior, NoHalfspace, NotSpanning, OnWall, System,
                                    chamber_of, enumerate_bases, enumerate_chambers, get_chamber,
                                    in_validity_region, validate_system, validity_region)
from vpartition.linalg import dot

TWO_THREE = System(1, ((2,), (3,)))


def test_validate_system():
    v = validate_system(A2)
    assert all(dot(v, b) > 0 for b in A2.vectors)
    with pytest.raises(NoHalfspace):
        validate_system(System(1, ((1,), (-1,))))
    with pytest.raises(NotSpanning):
        validate_system(System(2, ((1, 0),)))


def test_system_rejects_bad_input():
    with pytest.raises(ValueError):
        System(2, ((1, 0), (0, 0)))
    with pytest.raises(ValueError):
        System(2, ((1, 0), (1, 0)))
    s = System.from_sequence([(1, 0), (0, 1), (1, 0)])
    assert s.multiplicities == (2, 1) and s.size == 3


def test_bases():
    assert sorted(b.volume for b in enumerate_bases(A2)) == [1, 1, 1]
    vols = {tuple(b.vectors): b.volume for b in enumerate_bases(NU)}
    assert vols[((1, 0), (1, 2))] == 2 and vols[((0, 1), (1, 2))] == 1 and vols[((1, 0), (0, 1))] == 1
    assert sorted(b.volume for b in enumerate_bases(TWO_THREE)) == [2, 3]


def test_chambers_a2():
    cs = enumerate_chambers(A2)
    assert [c.id for c in cs] == ["c1", "c2"]
    c1, c2 = cs
    assert c1.contains((2, 1)) and not c1.contains((1, 2))
    assert c2.contains((1, 2))
    assert sorted(c1.inequalities) == sorted([(0, 1), (1, -1)])


def test_chambers_nonunimodular():
    c1, c2 = enumerate_chambers(NU)
    assert sorted(c1.inequalities) == sorted([(0, 1), (2, -1)])
    assert sorted(c2.inequalities) == sorted([(1, 0), (-2, 1)])


def test_one_dimensional():
    cs = enumerate_chambers(TWO_THREE)
    assert len(cs) == 1 and cs[0].contains((5,)) and not cs[0].contains((-1,))


def test_chamber_of_examples():
    assert chamber_of(A2, (2, 1)).id == "c1"
    assert isinstance(chamber_of(A2, (1, 1)), OnWall)
    ext = chamber_of(A2, (-1, 0))
    assert isinstance(ext, Exterior) and ext.id == NULL_CHAMBER
    with pytest.raises(KeyError):
        get_chamber(A2, "c9")


def test_in_validity_region_examples():
    c1 = get_chamber(A2, "c1")
    assert in_validity_region(A2, c1, (3, 3, 3), (-2, -4))
    assert in_validity_region(A2, c1, (1, 1, 1), (5, 1))
    assert not in_validity_region(A2, c1, (1, 1, 1), (0, -3))


SYSTEMS = [A2, NU, scaled(A2, 2),
           System(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1), (1, 1, 1)))]


@pytest.mark.parametrize("s", SYSTEMS, ids=["A2", "NU", "A2h2", "3d"])
def test_chambers_partition_the_cone(s):
    rng = random.Random(7)
    cs = enumerate_chambers(s)
    v = validate_system(s)
    hits = 0
    while hits < 500:
        # random point of C(Phi): positive combination of the directions
        coeffs = [Fraction(rng.randint(1, 60), rng.randint(1, 7)) for _ in s.vectors]
        p = [sum(c * b[i] for c, b in zip(coeffs, s.vectors)) for i in range(s.n)]
        where = chamber_of(s, p)
        if isinstance(where, OnWall):
            continue
        assert not isinstance(where, Exterior)
        assert sum(c.contains(p) for c in cs) == 1
        assert where.contains(p)
        hits += 1
    assert dot(v, cs[0].interior_point) > 0


@pytest.mark.parametrize("s", SYSTEMS, ids=["A2", "NU", "A2h2", "3d"])
def test_chamber_is_intersection_of_basis_cones(s):
    box = range(-3, 6)
    for c in enumerate_chambers(s):
        for b in c.bases:
            assert b.contains_strictly(c.interior_point)
        for p in product(box, repeat=s.n):
            in_all = all(all(x >= 0 for x in b.coordinates(p)) for b in c.bases)
            assert c.closure_contains(p) == in_all


@pytest.mark.parametrize("s", [A2, NU, scaled(NU, 2)], ids=["A2", "NU", "NUh2"])
def test_closure_inside_validity_region(s):
    for c in enumerate_chambers(s):
        region = validity_region(s, c)
        for p in product(range(-4, 8), repeat=s.n):
            if c.closure_contains(p):
                assert in_validity_region(s, c, None, p)
                assert region.contains(p)


def test_validity_region_matches_lp():
    rng = random.Random(3)
    systems = [A2, NU, scaled(A2, 2)] + [random_system(rng, 2, 4) for _ in range(3)]
    for s in systems:
        for c in enumerate_chambers(s):
            for h in (None, tuple(2 for _ in range(s.size))):
                region = validity_region(s, c, h)
                for p in product(range(-5, 6), repeat=2):
                    assert region.contains(p) == in_validity_region(s, c, h, p), (s, c.id, h, p)


def test_validity_region_3d_matches_lp():
    rng = random.Random(5)
    s = random_system(rng, 3, 5)
    for c in enumerate_chambers(s):
        region = validity_region(s, c)
        for p in product(range(-3, 4), repeat=3):
            assert region.contains(p) == in_validity_region(s, c, None, p)


def test_validity_regions_of_scaled_a2():
    # S_{1,n}: a2 > -2n, a1 > -2n, a1 - a2 > -n
    for n in (1, 2, 3):
        c1 = get_chamber(A2, "c1")
        region = validity_region(scaled(A2, n), c1)
        assert sorted(region.halfspaces) == sorted([((0, 1), -2 * n), ((1, 0), -2 * n), ((1, -1), -n)])


def test_validity_region_json_round_trip():
    c1 = get_chamber(NU, "c1")
    region = validity_region(NU, c1)
    from vpartition.arrangement import ValidityRegion
    assert ValidityRegion.from_json(region.to_json()) == region

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import pytest

from _helpers import random_complex_point, random_separation_instance
from vpartition.cyclotomic import CycNumber, one_minus_root_inverse
from vpartition.linalg import rank
from vpartition.oracle import coeff_expansion
from vpartition.separation import (DegenerateRelation, EssentialityViolated, FlatBox, MeroFunction,
                                   admissible_decompose, box_has_interior, box_membership, c_coeff,
                                   coeff_closed_form, crucial_split)

F = Fraction


def mero(n, factors, numerator=None):
    numerator = numerator or [(1, (0,) * n)]
    return MeroFunction(n, tuple(numerator), tuple(factors))


F1 = mero(2, [(0, (1, 0)), (0, (0, 1))])


def _key(m):
    return (tuple(sorted(m.factors)), tuple((CycNumber.coerce(c), xi) for c, xi in m.numerator))


def test_box_membership_examples():
    assert box_membership(mero(1, [(0, (1,))]), (F(1, 2),))
    assert box_membership(F1, (F(1, 2), F(1, 2)))
    assert not box_membership(F1, (F(3, 2), 0))
    g = mero(1, [(0, (2,))], [(1, (0,)), (1, (1,))])
    assert not box_membership(g, (F(3, 2),))
    assert box_membership(g, (F(1, 2),))
    assert box_membership(F1, (0, 1)) and not box_membership(F1, (0, 1), interior=True)


def test_crucial_split_example():
    parts = crucial_split(F1, (F(1, 4), F(3, 4)))
    first = mero(2, [(0, (1, 1)), (0, (0, 1))])
    second = mero(2, [(0, (1, 1)), (0, (-1, 0))], [(-1, (0, 0))])
    assert sorted(map(_key, parts)) == sorted(map(_key, [first, second]))
    for p in parts:
        assert box_membership(p, (F(1, 4), F(3, 4)))


def test_crucial_split_reversed_roles():
    parts = crucial_split(F1, (F(3, 4), F(1, 4)))
    first = mero(2, [(0, (1, 1)), (0, (1, 0))])
    second = mero(2, [(0, (1, 1)), (0, (0, -1))], [(-1, (0, 0))])
    assert sorted(map(_key, parts)) == sorted(map(_key, [first, second]))


def test_crucial_split_one_dimensional():
    # 1/((1 - u e^z)(1 - v e^{-z})) with u != v
    u, v = F(1, 3), F(1, 4)
    parts = crucial_split([(u, (1,)), (v, (-1,))], (0,))
    assert len(parts) == 2
    z = 0.3 + 0.2j
    lhs = 1 / ((1 - cmath.exp(2j * cmath.pi * float(u) + z)) * (1 - cmath.exp(2j * cmath.pi * float(v) - z)))
    assert abs(sum(p.evaluate((z,)) for p in parts) - lhs) < 1e-12
    for p in parts:
        assert len(p.factors) == 1
        assert box_membership(p, (0,))


def test_crucial_split_degenerate():
    with pytest.raises(DegenerateRelation):
        crucial_split([(F(1, 3), (1,)), (F(2, 3), (-1,))], (0,))


def test_already_independent_unchanged():
    d = admissible_decompose(F1, (F(1, 4), F(3, 4)))
    assert len(d.terms) == 1
    t = d.terms[0]
    assert t.coeff == CycNumber.rational(1) and sorted(t.forms) == [(0, 1), (1, 0)]


def test_same_direction_distinct_twists():
    u1, u2 = F(1, 3), F(2, 3)
    d = admissible_decompose(mero(1, [(u1, (1,)), (u2, (1,))]), (F(1, 2),))
    got = {t.twists: t.coeff for t in d.terms}
    assert got == {(u1,): one_minus_root_inverse(u2 - u1), (u2,): one_minus_root_inverse(u1 - u2)}


def test_essentiality():
    with pytest.raises(EssentialityViolated):
        admissible_decompose(mero(2, [(0, (1, 1)), (0, (2, 2))]), (F(1, 2), F(1, 2)))


def test_flat_box():
    # shifts (-1, 1) and (1, 1) leave only a segment of the zonotope in common
    f = mero(2, [(F(2, 3), (-1, -1)), (F(3, 4), (1, 1)), (F(2, 3), (-1, 1))],
             [(1, (-1, 1)), (2, (1, 1))])
    mu = (F(-1, 4), F(-1, 4))
    assert box_membership(f, mu) and not box_has_interior(f)
    with pytest.raises(FlatBox):
        admissible_decompose(f, mu)
    assert box_has_interior(F1)


def test_c_coeff():
    assert [c_coeff(k, 3) for k in range(5)] == [1, 3, 6, 10, 15]
    assert c_coeff(-1, 2) == 0 and c_coeff(-2, 2) == -1


def test_random_decompositions_exact_and_admissible():
    rng = random.Random(2024)
    done = 0
    while done < 30:
        inst = random_separation_instance(rng)
        if inst is None:
            continue
        f, mu, d = inst
        for t in d.terms:
            assert rank(list(t.forms)) == len(t.forms)
            assert t.in_box(d.mu)
            assert box_membership(t.as_mero(), d.mu)
        checked = 0
        while checked < 20:
            z = random_complex_point(rng, f.n)
            try:
                lhs = f.evaluate(z)
            except ZeroDivisionError:
                continue
            rhs = d.evaluate(z)
            assert abs(lhs - rhs) <= 1e-9
            checked += 1
        done += 1


@dataclass
class _Expansion:
    numerator: list
    factors: list


def test_closed_form_matches_expansion():
    rng = random.Random(5)
    done = 0
    while done < 8:
        inst = random_separation_instance(rng)
        if inst is None:
            continue
        f, _, d = inst
        for t in d.terms:
            mf = t.as_mero()
            exp = _Expansion(list(mf.numerator), list(mf.factors))
            pts = list(product(range(-3, 4), repeat=f.n))
            rng.shuffle(pts)
            for lam in pts[:10]:
                assert CycNumber.coerce(coeff_closed_form(t, lam)) == CycNumber.coerce(coeff_expansion(exp, lam))
        done += 1

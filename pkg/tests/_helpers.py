"""Shared data for the test-suite: systems, golden polynomials, small utilities."""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial

import pytest

from vpartition import System
from vpartition.linalg import rank
from vpartition.separation import (DegenerateRelation, FlatBox, MeroFunction, admissible_decompose,
                                   box_has_interior, box_membership)
from vpartition.series import Poly

A2 = System(2, ((1, 0), (0, 1), (1, 1)))
NU = System(2, ((1, 0), (0, 1), (1, 2)))


def scaled(s: System, h: int) -> System:
    return System(s.n, s.vectors, tuple(h for _ in s.vectors))


a1 = Poly.var(2, 0)
a2 = Poly.var(2, 1)
ONE = Poly.const(2, 1)


def binom(p: Poly, k: int) -> Poly:
    out = Poly.const(p.nvars, 1)
    for i in range(k):
        out = out * (p - i)
    return out * Fraction(1, factorial(k))


def fr(p, q=1) -> Fraction:
    return Fraction(p, q)


# displayed closed forms, as polynomials in (a1, a2)
GOLDEN_A2 = {
    (1, "c1"): a2 + 1,
    (1, "c2"): a1 + 1,
    (2, "c1"): binom(a2 + 3, 3) * (a1 * 2 - a2 + 2) * fr(1, 2),
    (2, "c2"): binom(a1 + 3, 3) * (a2 * 2 - a1 + 2) * fr(1, 2),
    (3, "c1"): binom(a2 + 5, 5) * (a1 * a1 * 7 - a1 * a2 * 7 + a2 * a2 * 2 + a1 * 21 - a2 * 9 + 14) * fr(1, 14),
    # symmetric partner of the c1 formula (a1 and a2 exchanged)
    (3, "c2"): binom(a1 + 5, 5) * (a2 * a2 * 7 - a1 * a2 * 7 + a1 * a1 * 2 + a2 * 21 - a1 * 9 + 14) * fr(1, 14),
}

# the non-unimodular system: c1 carries (even, odd) in a2, c2 is a polynomial
GOLDEN_NU = {
    (1, "c1"): ((a2 + 2) * fr(1, 2), (a2 + 1) * fr(1, 2)),
    (1, "c2"): a1 + 1,
    (2, "c1"): ((a2 + 2) * (a2 + 4) * (a1 * a2 * 4 - a2 * a2 + a1 * 12 + a2 * 2 + 12) * fr(1, 96),
                (a2 + 1) * (a2 + 3) * (a2 + 5) * (a1 * 4 - a2 + 5) * fr(1, 96)),
    (2, "c2"): (a1 + 1) * (a1 + 2) * (a1 + 3) * (a1 - a2 - 1) * fr(-1, 6),
    (3, "c1"): (
        (a2 + 2) * (a2 + 4) * (a2 + 6) * (a2 + 8)
        * (a1 * a1 * a2 * 28 - a1 * a2 * a2 * 14 + a2 * a2 * a2 * 2 + a1 * a1 * 70 + a1 * a2 * 70
           - a2 * a2 * 19 + a1 * 210 + a2 * 44 + 140) * fr(1, 53760),
        (a2 + 1) * (a2 + 3) * (a2 + 5) * (a2 + 7)
        * (a1 * a1 * a2 * 28 - a1 * a2 * a2 * 14 + a2 * a2 * a2 * 2 + a1 * a1 * 182 + a1 * a2 * 14
           - a2 * a2 * 11 + a1 * 630 - a2 * 52 + 481) * fr(1, 53760),
    ),
    (3, "c2"): (a1 + 1) * (a1 + 2) * (a1 + 3) * (a1 + 4) * (a1 + 5)
    * (a1 * a1 * 8 - a1 * a2 * 14 + a2 * a2 * 7 - a1 * 15 + a2 * 21 + 14) * fr(1, 1680),
}


def rational_poly(p: Poly) -> Poly:
    """Coefficients as Fractions (CycNumber entries must be rational)."""
    from vpartition.cyclotomic import CycNumber

    def conv(c):
        if isinstance(c, CycNumber):
            assert c.is_rational(), c
            return c.to_fraction()
        return Fraction(c)

    return p.map_coeffs(conv)


def random_system(rng: random.Random, n: int, N: int, hi: int = 3) -> System:
    """Random spanning system in an open halfspace, entries in [0, hi]."""
    from vpartition.arrangement import validate_system

    while True:
        vecs = []
        while len(vecs) < N:
            v = tuple(rng.randint(0, hi) for _ in range(n))
            if any(v):
                vecs.append(v)
        try:
            s = System.from_sequence(vecs)
            validate_system(s)
        except Exception:
            continue
        return s


TWISTS = [Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4)]
F = Fraction


def random_separation_instance(rng):
    """A random function, a point of its box and its decomposition (or None)."""
    n = rng.randint(1, 2)
    while True:
        count = rng.randint(n, 4)
        forms = [tuple(rng.choice((-1, 0, 1)) for _ in range(n)) for _ in range(count)]
        if any(not any(f) for f in forms) or rank(forms) < n:
            continue
        twists = [rng.choice(TWISTS) for _ in forms]
        factors = list(zip(twists, forms))
        xis = [tuple(rng.randint(-1, 1) for _ in range(n)) for _ in range(rng.randint(1, 2))]
        numerator = [(F(rng.randint(1, 3)), xi) for xi in dict.fromkeys(xis)]
        f = MeroFunction(n, tuple(numerator), tuple(factors))
        for _ in range(20):
            t = [F(rng.randint(0, 12), 12) for _ in forms]
            mu = tuple(sum(tk * a[i] for tk, a in zip(t, forms)) - xis[0][i] for i in range(n))
            if box_membership(f, mu):
                if not box_has_interior(f):
                    # no nonspecial point exists; the decomposition must refuse
                    with pytest.raises(FlatBox):
                        admissible_decompose(f, mu)
                    break
                try:
                    return f, mu, admissible_decompose(f, mu)
                except DegenerateRelation:
                    break


def random_complex_point(rng, n):
    return tuple(complex(F(rng.randint(-40, 40), 37), F(rng.randint(-40, 40), 41)) for _ in range(n))

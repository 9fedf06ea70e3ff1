from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vpartition import linalg
from vpartition.linalg import (Feasible, Infeasible, LinearSystem, NoSolution, Underdetermined, det,
                               feasible, minimize, smith_normal_form, solve)


def _check_snf(m):
    u, d, v = smith_normal_form(m)
    assert linalg.matmul(linalg.matmul(u, m), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = linalg.diagonal(d)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    for x, y in zip(diag, diag[1:]):
        assert x == 0 and y == 0 or (x != 0 and y % x == 0)
    return diag


def test_snf_examples():
    assert _check_snf([[2, 0], [0, 3]]) == [1, 6]
    assert _check_snf([[1, 0], [0, 1]]) == [1, 1]
    assert _check_snf([[1, 0], [1, 2]]) == [1, 2]
    assert _check_snf([[1, 0], [0, 1], [1, 2]]) == [1, 1]
    assert _check_snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3))
def test_snf_properties(m):
    diag = _check_snf(m)
    prod = 1
    for x in diag:
        prod *= x
    assert abs(prod) == abs(det(m))


def test_det_examples():
    assert det([[1, 0], [0, 1]]) == 1
    assert det([[1, 0], [1, 2]]) == 2
    assert det([[1, 1], [1, 1]]) == 0
    assert det([[Fraction(1, 2), 1], [0, 3]]) == Fraction(3, 2)
    with pytest.raises(ValueError):
        det([[1, 2, 3], [4, 5, 6]])


def test_solve_examples():
    assert solve([[1, 0], [0, 1]], [3, 4]) == (3, 4)
    # columns e1 and e1 + 2 e2
    assert solve(linalg.transpose([[1, 0], [1, 2]]), [1, 2]) == (0, 1)
    with pytest.raises(NoSolution):
        solve([[1, 1], [1, 1]], [1, 2])
    res = solve([[1, 1]], [2])
    assert isinstance(res, Underdetermined)
    assert sum(res.particular) == 2
    assert len(res.kernel) == 1 and sum(res.kernel[0]) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_solve_round_trip(m, x):
    b = linalg.matvec(m, x)
    res = solve(m, b)
    if isinstance(res, Underdetermined):
        assert linalg.matvec(m, res.particular) == b
        for k in res.kernel:
            assert not any(linalg.matvec(m, k))
    else:
        assert linalg.matvec(m, res) == b


def test_feasible_examples():
    lp = LinearSystem(1)
    lp.add([1], ">=", 0)
    lp.add([1], "<=", 1)
    res = feasible(lp)
    assert isinstance(res, Feasible) and 0 <= res.point[0] <= 1

    lp = LinearSystem(1)
    lp.add([1], ">", 0)
    lp.add([1], "<", 0)
    assert isinstance(feasible(lp), Infeasible)

    # mu = (1/2, 1/2) in the box of 1/((1 - e^{z1})(1 - e^{z2}))
    lp = LinearSystem(2)
    lp.add([1, 0], "==", Fraction(1, 2))
    lp.add([0, 1], "==", Fraction(1, 2))
    for e in ([1, 0], [0, 1]):
        lp.add(e, ">=", 0)
        lp.add(e, "<=", 1)
    assert isinstance(feasible(lp), Feasible)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.lists(st.integers(-3, 3), min_size=2, max_size=2),
                          st.sampled_from(["<=", ">=", "<", ">", "=="]),
                          st.integers(-4, 4)), min_size=1, max_size=5))
def test_feasible_point_satisfies_constraints(rows):
    lp = LinearSystem(2)
    for a, op, b in rows:
        lp.add(a, op, b)
    res = feasible(lp)
    if isinstance(res, Feasible):
        x = res.point
        for a, op, b in rows:
            v = a[0] * x[0] + a[1] * x[1]
            assert {"<=": v <= b, ">=": v >= b, "<": v < b, ">": v > b, "==": v == b}[op]
    else:
        # cross-check infeasibility on a fine rational grid is impossible in general;
        # at least no grid point may satisfy everything
        grid = [Fraction(i, 4) for i in range(-40, 41)]
        for x in grid[::4]:
            for y in grid[::4]:
                ok = True
                for a, op, b in rows:
                    v = a[0] * x + a[1] * y
                    ok &= {"<=": v <= b, ">=": v >= b, "<": v < b, ">": v > b, "==": v == b}[op]
                assert not ok


def test_minimize():
    lp = LinearSystem(2)
    lp.add([1, 1], ">=", 2)
    lp.add([1, 0], ">=", 0)
    lp.add([0, 1], ">=", 0)
    value, point = minimize(lp, [1, 2])
    assert value == 2 and point == (2, 0)
    bad = LinearSystem(1)
    bad.add([1], ">=", 1)
    bad.add([1], "<=", 0)
    assert minimize(bad, [1]) is None
    with pytest.raises(ValueError):
        minimize(lp, [-1, 0])


def test_kernel_and_rank():
    m = [[1, 2, 3], [2, 4, 6]]
    assert linalg.rank(m) == 1
    ker = linalg.kernel(m, 3)
    assert len(ker) == 2
    for k in ker:
        assert not any(linalg.matvec(m, k))
    basis = linalg.integer_kernel_basis([[1, 1, 1]])
    assert len(basis) == 2 and all(sum(v) == 0 for v in basis)

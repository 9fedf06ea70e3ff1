"""Exact linear algebra over the integers and the rationals.

Matrices are sequences of rows.  Integer routines return lists of lists of
``int``; rational routines return lists of lists of ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence]


class NoSolution(Exception):
    """Raised by :func:`solve_unique` when the system is inconsistent."""


@dataclass(frozen=True)
class Underdetermined:
    particular: tuple
    kernel: tuple


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Feasible:
    point: tuple


# ---------------------------------------------------------------- helpers

def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def canonical_normal(v: Sequence) -> tuple[int, ...]:
    """Primitive integer multiple of a rational vector, first nonzero entry > 0."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    p = primitive([int(x * den) for x in fr])
    for x in p:
        if x:
            return p if x > 0 else tuple(-y for y in p)
    return p


# ------------------------------------------------------------ determinant

def det(m: Matrix):
    """Determinant.  Integer input gives an ``int`` (Bareiss); otherwise ``Fraction``."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for row in m for x in row):
        return _bareiss(m)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                row_r, row_c = a[r], a[col]
                for k in range(col, n):
                    row_r[k] -= f * row_c[k]
    return sign * result


def _bareiss(m: Matrix) -> int:
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------- rank / solve

def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def kernel(m: Matrix, ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel {x : m x = 0}."""
    if not m:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    a, pivots = rref(m)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(a, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, b: Sequence):
    """Solve ``m x = b`` exactly.

    Returns a tuple (unique solution), an :class:`Underdetermined` record, or
    raises :class:`NoSolution`.
    """
    rows = len(m)
    ncols = len(m[0]) if rows else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    a, pivots = rref(aug)
    if ncols in pivots:
        raise NoSolution("inconsistent system")
    x = [Fraction(0)] * ncols
    for row, pc in zip(a, pivots):
        x[pc] = row[ncols]
    if len(pivots) == ncols:
        return tuple(x)
    return Underdetermined(tuple(x), tuple(kernel(m)))


def solve_unique(m: Matrix, b: Sequence) -> tuple[Fraction, ...]:
    r = solve(m, b)
    if isinstance(r, Underdetermined):
        raise NoSolution("system is underdetermined")
    return r


def inverse(m: Matrix) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    a, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NoSolution("singular matrix")
    return [row[n:] for row in a]


# ---------------------------------------------------- Smith normal form

def smith_normal_form(m: Matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return unimodular ``U``, ``V`` and diagonal ``D`` with ``U m V = D``.

    The diagonal entries are nonnegative and each divides the next.
    """
    a = [[int(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: fold any offending row into row t
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def diagonal(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def integer_kernel_basis(m: Matrix) -> list[tuple[int, ...]]:
    """A lattice basis of ``{x in Z^N : m x = 0}``."""
    u, d, v = smith_normal_form(m)
    r = sum(1 for x in diagonal(d) if x)
    ncols = len(m[0])
    return [tuple(v[i][j] for i in range(ncols)) for j in range(r, ncols)]


# ------------------------------------------------------------- simplex

_OPS = ("==", ">=", "<=", ">", "<")


@dataclass
class LinearSystem:
    """Linear constraints on ``nvars`` free real variables.

    Each constraint is ``(coefficients, op, rhs)`` with ``op`` one of
    ``== >= <= > <``.
    """

    nvars: int
    constraints: list = field(default_factory=list)

    def add(self, coeffs, op, rhs=0):
        if op not in _OPS:
            raise ValueError(f"unknown operator {op!r}")
        if len(coeffs) != self.nvars:
            raise ValueError("coefficient vector has wrong length")
        self.constraints.append((tuple(Fraction(c) for c in coeffs), op, Fraction(rhs)))
        return self


def feasible(system: LinearSystem):
    """Decide exact feasibility, returning :class:`Feasible` with a witness or
    :class:`Infeasible`.

    Strict inequalities are handled by a shared slack ``s`` in ``[0, 1]`` that
    is maximized; the system is strictly feasible iff the optimum is positive.
    """
    nx = system.nvars
    strict = any(op in (">", "<") for _, op, _ in system.constraints)
    # columns: x+ (nx), x- (nx), [s], then one slack per inequality
    ncols = 2 * nx + (1 if strict else 0)
    s_col = 2 * nx if strict else None
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    slack_cols = []
    for coeffs, op, b in system.constraints:
        row = [c for c in coeffs] + [-c for c in coeffs]
        if strict:
            row.append(Fraction(0))
        if op in (">", "<"):
            row[s_col] = Fraction(-1 if op == ">" else 1)
        sign = 0
        if op in (">=", ">"):
            sign = -1
        elif op in ("<=", "<"):
            sign = 1
        rows.append(row)
        rhs.append(b)
        slack_cols.append(sign)
    if strict:
        row = [Fraction(0)] * ncols
        row[s_col] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
        slack_cols.append(1)
    nslack = sum(1 for sg in slack_cols if sg)
    total = ncols + nslack
    a = []
    k = ncols
    for row, sg in zip(rows, slack_cols):
        full = row + [Fraction(0)] * nslack
        if sg:
            full[k] = Fraction(sg)
            k += 1
        a.append(full)
    objective = [Fraction(0)] * total
    if strict:
        objective[s_col] = Fraction(1)
    status, y, value = _simplex_max(a, rhs, objective)
    if status != "optimal":
        return Infeasible()
    if strict and value <= 0:
        return Infeasible()
    point = tuple(y[i] - y[nx + i] for i in range(nx))
    return Feasible(point)


def _simplex_max(a, b, c):
    """Two-phase tableau simplex with Bland's rule.

    Maximizes ``c.y`` subject to ``a y = b, y >= 0``.  Returns
    ``(status, y, value)`` with status ``optimal``, ``infeasible`` or
    ``unbounded``.
    """
    m = len(a)
    n = len(c)
    tab = []
    for row, rhs in zip(a, b):
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        tab.append(list(row) + [Fraction(0)] * m + [Fraction(rhs)])
    for i in range(m):
        tab[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    width = n + m

    # phase 1: minimise sum of artificials == maximise -sum
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] += tab[i][j]
    for i in range(m):
        obj[n + i] = Fraction(0)
    # obj[j] holds reduced "gain" for entering column j (maximize sum of rows)
    _run(tab, basis, obj, n + m, allowed=width)
    if obj[width] != 0:
        return "infeasible", None, None

    # drive artificial variables out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, None, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i][:n] + [tab[i][width]] for i in keep]
    basis = [basis[i] for i in keep]

    obj = [Fraction(cj) for cj in c] + [Fraction(0)]
    for i, bi in enumerate(basis):
        if c[bi]:
            f = c[bi]
            obj = [x - f * y for x, y in zip(obj, tab[i])]
    # obj[j] = c_j - c_B B^{-1} A_j ; obj[-1] = -value
    status = _run(tab, basis, obj, n, allowed=n)
    if status == "unbounded":
        return "unbounded", None, None
    y = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        y[bi] = tab[i][-1]
    value = sum(ci * yi for ci, yi in zip(c, y))
    return "optimal", y, value


def _run(tab, basis, obj, ncols, allowed):
    while True:
        enter = next((j for j in range(allowed) if obj[j] > 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(tab):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, obj, best[1], enter)


def _pivot(tab, basis, obj, r, col):
    p = tab[r][col]
    if p != 1:
        tab[r] = [x / p for x in tab[r]]
    pr = tab[r]
    for i, row in enumerate(tab):
        if i != r and row[col] != 0:
            f = row[col]
            tab[i] = [x - f * y for x, y in zip(row, pr)]
    if obj is not None and obj[col] != 0:
        f = obj[col]
        obj[:] = [x - f * y for x, y in zip(obj, pr)]
    basis[r] = col


def minimize(system: LinearSystem, objective: Sequence):
    """Minimize ``objective . x`` over a system without strict inequalities.

    Returns ``(value, point)``, ``None`` when infeasible, and raises
    ``ValueError`` when the objective is unbounded below.
    """
    nx = system.nvars
    if any(op in (">", "<") for _, op, _ in system.constraints):
        raise ValueError("strict inequalities are not supported here")
    rows, rhs, signs = [], [], []
    for coeffs, op, b in system.constraints:
        rows.append(list(coeffs) + [-c for c in coeffs])
        rhs.append(b)
        signs.append(-1 if op == ">=" else (1 if op == "<=" else 0))
    nslack = sum(1 for sg in signs if sg)
    a = []
    k = 2 * nx
    for row, sg in zip(rows, signs):
        full = row + [Fraction(0)] * nslack
        if sg:
            full[k] = Fraction(sg)
            k += 1
        a.append(full)
    c = [-Fraction(x) for x in objective] + [Fraction(x) for x in objective] + [Fraction(0)] * nslack
    status, y, value = _simplex_max(a, rhs, c)
    if status == "infeasible":
        return None
    if status == "unbounded":
        raise ValueError("objective is unbounded")
    point = tuple(y[i] - y[nx + i] for i in range(nx))
    return -value, point

"""Brute-force enumeration used as the independent reference.

Nothing here uses residues: counts come from walking the nonnegative integer
solutions of ``sum x_k beta_k = lambda`` directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Callable, Iterator, Sequence

from . import linalg
from .arrangement import NoHalfspace, System, validate_system
from .cyclotomic import expi
from .linalg import Feasible, LinearSystem, dot, feasible, minimize
from .residue import frac_part


class Unbounded(ValueError):
    pass


class NonSpanning(ValueError):
    pass


def _witness(vectors: Sequence[Sequence[int]]) -> tuple[int, ...]:
    n = len(vectors[0])
    lp = LinearSystem(n)
    for v in vectors:
        lp.add(v, ">=", 1)
    res = feasible(lp)
    if not isinstance(res, Feasible):
        raise NoHalfspace("vectors are not in an open halfspace")
    den = 1
    for x in res.point:
        den = den * x.denominator // _g(den, x.denominator)
    return tuple(int(x * den) for x in res.point)


def _g(a, b):
    from math import gcd
    return gcd(a, b)


def _order(vectors, v):
    return sorted(range(len(vectors)), key=lambda k: -dot(vectors[k], v))


def enumerate_points(s: System, lam: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All ``x`` in ``Z^N_{>=0}`` with ``sum x_k beta_k = lam`` (flattened order)."""
    flat = s.flattened
    v = validate_system(s)
    order = _order(flat, v)
    N = len(flat)
    lam = tuple(int(x) for x in lam)
    x = [0] * N

    def rec(pos, rem):
        budget = dot(rem, v)
        if pos == N:
            if not any(rem):
                yield tuple(x)
            return
        k = order[pos]
        b = flat[k]
        step = dot(b, v)
        for t in range(budget // step + 1):
            x[k] = t
            yield from rec(pos + 1, tuple(r - t * bb for r, bb in zip(rem, b)))
        x[k] = 0

    if dot(lam, v) < 0:
        return
    yield from rec(0, lam)


def count_points(s: System, lam: Sequence[int]) -> int:
    """Number of integral points of the partition polytope at ``lam``.

    Depth-first over the flattened vectors sorted by decreasing ``<beta, v>``
    with memoisation on the remaining target.
    """
    flat = s.flattened
    v = validate_system(s)
    order = tuple(flat[k] for k in _order(flat, v))
    lam = tuple(int(x) for x in lam)
    return _count(order, v, lam)


def _count(order, v, lam):
    @lru_cache(maxsize=None)
    def rec(pos, rem):
        budget = dot(rem, v)
        if budget < 0:
            return 0
        if pos == len(order):
            return 0 if any(rem) else 1
        b = order[pos]
        step = dot(b, v)
        total = 0
        for t in range(budget // step + 1):
            total += rec(pos + 1, tuple(r - t * bb for r, bb in zip(rem, b)))
        return total

    return rec(0, lam)


def count_table(s: System, points: Sequence[Sequence[int]]) -> dict[tuple[int, ...], int]:
    """Counts for many targets at once by dynamic programming.

    Builds the generating function ``prod (1 - e^beta)^{-1}`` truncated at
    ``<lam, v> <= max`` over the requested points, one vector at a time.
    """
    flat = s.flattened
    v = validate_system(s)
    pts = [tuple(int(x) for x in p) for p in points]
    vmax = max(dot(p, v) for p in pts) if pts else 0
    table: dict[tuple[int, ...], int] = {(0,) * s.n: 1} if vmax >= 0 else {}
    for b in flat:
        new: dict[tuple[int, ...], int] = {}
        for x in table:
            c = table[x]
            y = x
            while dot(y, v) <= vmax:
                new[y] = new.get(y, 0) + c
                y = tuple(a + bb for a, bb in zip(y, b))
        table = new
    return {p: table.get(p, 0) for p in pts}


def sum_weight(s: System, lam: Sequence[int], f: Callable[[tuple[int, ...]], object]):
    """Sum of ``f(x)`` over the integral points ``x`` of the partition polytope."""
    total = 0
    for x in enumerate_points(s, lam):
        total = total + f(x)
    return total


# ------------------------------------------------------ generic expansion

def coeff_expansion(F, lam: Sequence[int]):
    """Coefficient of ``e^lam`` in the expansion of ``F`` in the cone of its directions.

    ``F`` needs ``numerator`` as ``(coeff, xi)`` pairs and ``factors`` as
    ``(twist, beta)`` pairs with ``u = exp(2 pi i twist)``.  Each factor is
    expanded as a geometric series; the result is exact.
    """
    factors = [(Fraction(t), tuple(b)) for t, b in F.factors]
    betas = [b for _, b in factors]
    v = _witness(betas)
    order = tuple(sorted(factors, key=lambda f: -dot(f[1], v)))
    lam = tuple(int(x) for x in lam)

    @lru_cache(maxsize=None)
    def rec(pos, rem):
        """Map phase (mod 1) -> number of decompositions of ``rem``."""
        budget = dot(rem, v)
        if budget < 0:
            return {}
        if pos == len(order):
            return {} if any(rem) else {Fraction(0): 1}
        twist, b = order[pos]
        step = dot(b, v)
        out: dict = {}
        for t in range(budget // step + 1):
            sub = rec(pos + 1, tuple(r - t * bb for r, bb in zip(rem, b)))
            shift = t * twist
            for ph, cnt in sub.items():
                key = frac_part(ph + shift)
                out[key] = out.get(key, 0) + cnt
        return out

    total = Fraction(0)
    for coeff, xi in F.numerator:
        target = tuple(a - b for a, b in zip(lam, xi))
        phases = rec(0, target)
        part = Fraction(0)
        for ph, cnt in sorted(phases.items()):
            part = part + (expi(ph) * cnt if ph else Fraction(cnt))
        total = total + coeff * part
    return total


# -------------------------------------------------------------- polytopes

@dataclass(frozen=True)
class InequalityPolytope:
    """``{v in R^r : <u_k, v> + h_k >= 0}``."""

    normals: tuple[tuple[int, ...], ...]
    offsets: tuple

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple(tuple(int(x) for x in u) for u in self.normals))
        object.__setattr__(self, "offsets", tuple(Fraction(h) for h in self.offsets))
        if len(self.normals) != len(self.offsets):
            raise ValueError("one offset per normal")

    @property
    def dim(self) -> int:
        return len(self.normals[0])

    def contains(self, point) -> bool:
        return all(dot(u, point) + h >= 0 for u, h in zip(self.normals, self.offsets))


@dataclass(frozen=True)
class Embedding:
    polytope: InequalityPolytope  # possibly augmented with redundant rows
    phi: tuple[tuple[int, ...], ...]  # beta_k in the order of the rows
    a: tuple[int, ...]
    offsets: tuple[int, ...]

    @property
    def system(self) -> System:
        return System.from_sequence(self.phi)

    def section(self, point) -> tuple:
        """``v -> (<u_k, v> + h_k)_k``, a point of the partition polytope."""
        return tuple(dot(u, point) + h for u, h in zip(self.polytope.normals, self.offsets))


def embed_polytope(p: InequalityPolytope) -> Embedding:
    """Realise a bounded polytope as a partition polytope ``Pi_Phi(a)``."""
    r = p.dim
    normals = list(p.normals)
    offsets = [floor(h) for h in p.offsets]  # same integral points
    if linalg.rank(normals) < r:
        raise NonSpanning("normals do not span; the polytope contains a line")
    N = len(normals)
    lp = LinearSystem(N)
    for k in range(N):
        e = [0] * N
        e[k] = 1
        lp.add(e, ">", 0)
    for i in range(r):
        lp.add([u[i] for u in normals], "==", 0)
    if not isinstance(feasible(lp), Feasible):
        raise Unbounded("polytope is unbounded")
    # make the normals generate the integer lattice
    _, d, _ = linalg.smith_normal_form(normals)
    if any(d[i][i] != 1 for i in range(r)):
        cons = LinearSystem(r)
        for u, h in zip(normals, offsets):
            cons.add(u, ">=", -h)
        for j in range(r):
            e = [0] * r
            e[j] = 1
            res = minimize(cons, e)
            low = res[0] if res is not None else Fraction(0)
            normals.append(tuple(e))
            offsets.append(-floor(low))
    A = linalg.transpose(normals)  # r x N
    K = linalg.integer_kernel_basis(A)  # columns of the kernel lattice
    phi = tuple(tuple(col[k] for col in K) for k in range(len(normals)))
    a = tuple(sum(h * b[i] for h, b in zip(offsets, phi)) for i in range(len(K)))
    poly = InequalityPolytope(tuple(normals), tuple(offsets))
    return Embedding(poly, phi, a, tuple(offsets))


def polytope_points(p: InequalityPolytope) -> list[tuple[int, ...]]:
    """Integral points by scanning the bounding box (found by linear programming)."""
    r = p.dim
    cons = LinearSystem(r)
    for u, h in zip(p.normals, p.offsets):
        cons.add(u, ">=", -h)
    bounds = []
    for j in range(r):
        e = [0] * r
        e[j] = 1
        lo = minimize(cons, e)
        if lo is None:
            return []
        hi = minimize(cons, [-x for x in e])
        bounds.append((int(floor(lo[0])), int(floor(-hi[0]))))
    out = []

    def rec(i, cur):
        if i == r:
            if p.contains(cur):
                out.append(tuple(cur))
            return
        for t in range(bounds[i][0], bounds[i][1] + 1):
            rec(i + 1, cur + [t])

    rec(0, [])
    return out


# ------------------------------------------------------- Minkowski sums

def _vertices(flat, x) -> list[tuple[Fraction, ...]]:
    from itertools import combinations

    n = len(x)
    verts = set()
    for idx in combinations(range(len(flat)), n):
        vecs = [flat[i] for i in idx]
        try:
            coords = linalg.solve_unique(linalg.transpose(vecs), list(x))
        except linalg.NoSolution:
            continue
        if all(c >= 0 for c in coords):
            v = [Fraction(0)] * len(flat)
            for i, c in zip(idx, coords):
                v[i] = c
            verts.add(tuple(v))
    return sorted(verts)


def minkowski_sum_law_check(s: System, a: Sequence[int], b: Sequence[int]) -> bool:
    """Whether ``Pi(a) + Pi(b) = Pi(a + b)``.

    The inclusion from left to right always holds; equality is tested by
    checking that every vertex ``w`` of ``Pi(a + b)`` splits as ``x + (w - x)``
    with ``x`` in ``Pi(a)`` and ``w - x`` in ``Pi(b)``.
    """
    flat = s.flattened
    N = len(flat)
    ab = [x + y for x, y in zip(a, b)]
    for w in _vertices(flat, ab):
        lp = LinearSystem(N)
        for k in range(N):
            e = [0] * N
            e[k] = 1
            lp.add(e, ">=", 0)
            lp.add(e, "<=", w[k])
        for i in range(s.n):
            lp.add([beta[i] for beta in flat], "==", a[i])
        if not isinstance(feasible(lp), Feasible):
            return False
    return True

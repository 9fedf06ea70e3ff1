"""Systems of integer vectors, their bases, walls and chambers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from . import linalg
from .linalg import Feasible, LinearSystem, canonical_normal, det, dot, feasible, kernel, primitive

IntVec = tuple[int, ...]

NULL_CHAMBER = "cnull"


class NotSpanning(ValueError):
    pass


class NoHalfspace(ValueError):
    pass


@dataclass(frozen=True)
class System:
    """Distinct nonzero integer directions with positive multiplicities."""

    n: int
    vectors: tuple[IntVec, ...]
    multiplicities: tuple[int, ...] | None = None

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        mult = self.multiplicities
        mult = tuple(1 for _ in vecs) if mult is None else tuple(int(m) for m in mult)
        object.__setattr__(self, "multiplicities", mult)
        if len(mult) != len(vecs):
            raise ValueError("one multiplicity per vector is required")
        for v in vecs:
            if len(v) != self.n:
                raise ValueError(f"vector {v} does not have length {self.n}")
            if not any(v):
                raise ValueError("zero vector in system")
        if len(set(vecs)) != len(vecs):
            raise ValueError("directions must be distinct; use multiplicities")
        if any(m < 1 for m in mult):
            raise ValueError("multiplicities must be positive")

    @property
    def flattened(self) -> tuple[IntVec, ...]:
        """The sequence Phi with every vector repeated by its multiplicity."""
        out = []
        for v, m in zip(self.vectors, self.multiplicities):
            out.extend([v] * m)
        return tuple(out)

    @property
    def size(self) -> int:
        return sum(self.multiplicities)

    @classmethod
    def from_sequence(cls, vectors: Sequence[Sequence[int]]) -> "System":
        """Group a sequence with repeats into directions and multiplicities."""
        order: list[IntVec] = []
        counts: dict[IntVec, int] = {}
        for v in vectors:
            v = tuple(int(x) for x in v)
            if v not in counts:
                order.append(v)
                counts[v] = 0
            counts[v] += 1
        n = len(order[0]) if order else 0
        return cls(n, tuple(order), tuple(counts[v] for v in order))

    def to_json(self) -> dict:
        return {"n": self.n, "vectors": [list(v) for v in self.vectors],
                "multiplicities": list(self.multiplicities)}


@dataclass(frozen=True)
class Basis:
    indices: tuple[int, ...]
    vectors: tuple[IntVec, ...]

    @cached_property
    def volume(self) -> int:
        return abs(det([list(v) for v in self.vectors]))

    def coordinates(self, point: Sequence) -> tuple[Fraction, ...]:
        """Coefficients ``x`` with ``point = sum x_i vectors[i]``."""
        return linalg.solve_unique(linalg.transpose(self.vectors), list(point))

    def contains_strictly(self, point: Sequence) -> bool:
        return all(x > 0 for x in self.coordinates(point))


@dataclass(frozen=True)
class Chamber:
    id: str
    inequalities: tuple[IntVec, ...]  # open cone {x : <w, x> > 0 for all w}
    interior_point: IntVec
    bases: tuple[Basis, ...]
    rays: tuple[IntVec, ...] = field(default=())

    def contains(self, point: Sequence) -> bool:
        return all(dot(w, point) > 0 for w in self.inequalities)

    def closure_contains(self, point: Sequence) -> bool:
        return all(dot(w, point) >= 0 for w in self.inequalities)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "inequalities": [list(w) for w in self.inequalities],
            "interior_point": list(self.interior_point),
            "rays": [list(r) for r in self.rays],
            "bases": [list(b.indices) for b in self.bases],
        }


@dataclass(frozen=True)
class OnWall:
    point: tuple


@dataclass(frozen=True)
class Exterior:
    point: tuple
    id: str = NULL_CHAMBER


def validate_system(s: System) -> IntVec:
    """Check that the directions span and lie in an open halfspace.

    Returns an integer vector ``v`` with ``<beta, v> >= 1`` for every direction.
    """
    if linalg.rank(s.vectors) < s.n:
        raise NotSpanning("directions do not span the ambient space")
    lp = LinearSystem(s.n)
    for v in s.vectors:
        lp.add(v, ">=", 1)
    res = feasible(lp)
    if not isinstance(res, Feasible):
        raise NoHalfspace("directions are not contained in an open halfspace")
    den = 1
    for x in res.point:
        den = den * x.denominator // _gcd(den, x.denominator)
    return tuple(int(x * den) for x in res.point)


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


def enumerate_bases(s: System) -> list[Basis]:
    out = []
    for idx in combinations(range(len(s.vectors)), s.n):
        vecs = tuple(s.vectors[i] for i in idx)
        if det([list(v) for v in vecs]) != 0:
            out.append(Basis(idx, vecs))
    return out


def wall_normals(s: System) -> list[IntVec]:
    """Canonical normals of hyperplanes spanned by n-1 independent directions."""
    if s.n == 1:
        return [(1,)]
    normals = set()
    for idx in combinations(range(len(s.vectors)), s.n - 1):
        vecs = [s.vectors[i] for i in idx]
        ker = kernel(vecs, s.n)
        if len(ker) == 1:
            normals.add(canonical_normal(ker[0]))
    return sorted(normals)


def _strictly_feasible(n: int, normals: Sequence[Sequence]) -> tuple | None:
    lp = LinearSystem(n)
    for w in normals:
        lp.add(w, ">", 0)
    res = feasible(lp)
    return res.point if isinstance(res, Feasible) else None


def _irredundant(n: int, normals: list[IntVec]) -> list[IntVec]:
    keep = list(dict.fromkeys(normals))
    i = 0
    while i < len(keep):
        others = keep[:i] + keep[i + 1:]
        lp = LinearSystem(n)
        for w in others:
            lp.add(w, ">", 0)
        lp.add(keep[i], "<", 0)
        if isinstance(feasible(lp), Feasible):
            i += 1
        else:
            keep = others
    return keep


def cone_rays(n: int, normals: Sequence[IntVec]) -> list[IntVec]:
    """Extreme rays of the pointed cone ``{x : <w, x> >= 0}``."""
    if n == 1:
        return [(1,)] if all(w[0] > 0 for w in normals) else [(-1,)]
    rays = set()
    for sub in combinations(normals, n - 1):
        ker = kernel([list(w) for w in sub], n)
        if len(ker) != 1:
            continue
        r = canonical_normal(ker[0])
        for cand in (r, tuple(-x for x in r)):
            if all(dot(w, cand) >= 0 for w in normals):
                rays.add(cand)
    return sorted(rays)


def _signature(bases: Sequence[Basis], point: Sequence) -> tuple[int, ...]:
    return tuple(i for i, b in enumerate(bases) if b.contains_strictly(point))


def _facet_normals(b: Basis) -> list[IntVec]:
    inv = linalg.inverse(linalg.transpose(b.vectors))
    out = []
    for row in inv:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append(primitive([int(x * den) for x in row]))
    return out


_CHAMBER_CACHE: dict = {}


def enumerate_chambers(s: System) -> list[Chamber]:
    """All chambers of the system, ordered and labelled ``c1, c2, ...``.

    Regions of the wall hyperplane arrangement inside the cone are grouped by
    the set of bases whose cone contains them; each group is one chamber.
    """
    key = (s.n, s.vectors)
    if key in _CHAMBER_CACHE:
        return _CHAMBER_CACHE[key]
    validate_system(s)
    n = s.n
    walls = wall_normals(s)
    facets = []
    splitting = []
    for w in walls:
        vals = [dot(w, v) for v in s.vectors]
        if all(x >= 0 for x in vals):
            facets.append(w)
        elif all(x <= 0 for x in vals):
            facets.append(tuple(-x for x in w))
        else:
            splitting.append(w)
    regions = [facets]
    for w in splitting:
        neg = tuple(-x for x in w)
        nxt = []
        for reg in regions:
            for side in (w, neg):
                cand = reg + [side]
                if _strictly_feasible(n, cand) is not None:
                    nxt.append(cand)
        regions = nxt
    bases = enumerate_bases(s)
    groups: dict[tuple[int, ...], None] = {}
    for reg in regions:
        pt = _strictly_feasible(n, reg)
        groups.setdefault(_signature(bases, pt), None)
    chambers = []
    for sig in groups:
        members = [bases[i] for i in sig]
        normals = []
        for b in members:
            normals.extend(_facet_normals(b))
        normals = _irredundant(n, sorted(set(normals)))
        rays = cone_rays(n, normals)
        interior = tuple(sum(r[i] for r in rays) for i in range(n))
        chambers.append((tuple(b.indices for b in members), normals, interior, members, rays))
    chambers.sort(key=lambda c: c[0])
    out = [
        Chamber(f"c{k + 1}", tuple(normals), interior, tuple(members), tuple(rays))
        for k, (_, normals, interior, members, rays) in enumerate(chambers)
    ]
    _CHAMBER_CACHE[key] = out
    return out


def get_chamber(s: System, cid: str) -> Chamber:
    for c in enumerate_chambers(s):
        if c.id == cid:
            return c
    raise KeyError(f"no chamber {cid!r}")


def chamber_of(s: System, point: Sequence) -> Chamber | OnWall | Exterior:
    point = tuple(point)
    inside = False
    sig = []
    for i, b in enumerate(enumerate_bases(s)):
        x = b.coordinates(point)
        if all(c >= 0 for c in x):
            inside = True
            if any(c == 0 for c in x):
                return OnWall(point)
            sig.append(b.indices)
    if not inside:
        return Exterior(point)
    sig = tuple(sig)
    for c in enumerate_chambers(s):
        if tuple(b.indices for b in c.bases) == sig:
            return c
    raise AssertionError("regular point without a chamber")


def adjacent_chambers(s: System, point: Sequence) -> list[Chamber]:
    """Chambers whose closure contains ``point``."""
    return [c for c in enumerate_chambers(s) if c.closure_contains(point)]


def _flat_h(s: System, h: Sequence | None) -> list:
    N = s.size
    if h is None:
        return [1] * N
    if len(h) != N:
        raise ValueError(f"h must have length {N}")
    return list(h)


def in_validity_region(s: System, c: Chamber, h: Sequence | None, lam: Sequence) -> bool:
    """Exact test of ``lam in c - Box(Phi, h)`` by linear programming."""
    flat = s.flattened
    h = _flat_h(s, h)
    N = len(flat)
    lp = LinearSystem(N)
    for i in range(N):
        e = [0] * N
        e[i] = 1
        lp.add(e, ">=", 0)
        lp.add(e, "<=", 1)
    for w in c.inequalities:
        coeffs = [Fraction(hi) * dot(w, b) for hi, b in zip(h, flat)]
        lp.add(coeffs, ">", -dot(w, lam))
    return isinstance(feasible(lp), Feasible)


@dataclass(frozen=True)
class ValidityRegion:
    """Open polyhedron ``{lam : <a, lam> > b}`` for every ``(a, b)`` listed."""

    halfspaces: tuple[tuple[IntVec, Fraction], ...]

    def contains(self, lam: Sequence) -> bool:
        return all(dot(a, lam) > b for a, b in self.halfspaces)

    def intersect(self, other: "ValidityRegion") -> "ValidityRegion":
        return ValidityRegion(tuple(dict.fromkeys(self.halfspaces + other.halfspaces)))

    def to_json(self) -> list:
        return [{"normal": list(a), "bound": str(b)} for a, b in self.halfspaces]

    @classmethod
    def from_json(cls, data) -> "ValidityRegion":
        return cls(tuple((tuple(d["normal"]), Fraction(d["bound"])) for d in data))


def validity_region(s: System, c: Chamber, h: Sequence | None = None) -> ValidityRegion:
    """Halfspace description of ``c - Box(Phi, h)``.

    Facet normals of the Minkowski difference are rays of the common
    refinement of the dual cone and the normal fan of the zonotope, so they
    are found among kernels of n-1 vectors drawn from the directions and the
    rays of the chamber.
    """
    flat = s.flattened
    h = _flat_h(s, h)
    n = s.n
    rays = list(c.rays) or cone_rays(n, c.inequalities)
    if n == 1:
        cands = {(1,)}
    else:
        pool = list(dict.fromkeys(list(s.vectors) + rays))
        cands = set()
        for sub in combinations(pool, n - 1):
            ker = kernel([list(v) for v in sub], n)
            if len(ker) != 1:
                continue
            a = canonical_normal(ker[0])
            for cand in (a, tuple(-x for x in a)):
                if all(dot(cand, r) >= 0 for r in rays):
                    cands.add(cand)
    halfspaces = []
    for a in sorted(cands):
        bound = -sum(Fraction(hi) * max(0, dot(a, b)) for hi, b in zip(h, flat))
        halfspaces.append((a, bound))
    return ValidityRegion(tuple(_prune(n, halfspaces)))


def _prune(n: int, halfspaces: list) -> list:
    keep = list(halfspaces)
    i = 0
    while i < len(keep):
        others = keep[:i] + keep[i + 1:]
        lp = LinearSystem(n)
        for a, b in others:
            lp.add(a, ">", b)
        a, b = keep[i]
        lp.add(a, "<", b)
        if isinstance(feasible(lp), Feasible):
            i += 1
        else:
            keep = others
    return keep

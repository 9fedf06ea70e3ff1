"""Poles, total residues, simple-fraction decomposition and the JK functional."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as iproduct
from math import gcd
from typing import Iterable, Sequence

from . import linalg
from .arrangement import Chamber
from .cyclotomic import expi
from .linalg import det, dot, smith_normal_form
from .series import Poly, TruncSeries, exp_symbolic, expand_factor, mul_degree

IntVec = tuple[int, ...]
RatVec = tuple[Fraction, ...]


def frac_part(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def vec_mod1(v: Iterable) -> RatVec:
    return tuple(frac_part(x) for x in v)


def order_of(q: Sequence[Fraction]) -> int:
    m = 1
    for x in q:
        d = Fraction(x).denominator
        m = m * d // gcd(m, d)
    return m


@dataclass(frozen=True, order=True)
class Pole:
    """The point ``p = 2 pi i q`` with ``q`` in ``[0, 1)^n``."""

    q: RatVec

    @property
    def order(self) -> int:
        return order_of(self.q)


@dataclass(frozen=True)
class Factor:
    """Denominator factor ``(1 - exp(2 pi i twist) e^{<beta, z>})^power``."""

    beta: IntVec
    twist: Fraction = Fraction(0)
    power: int = 1


# ------------------------------------------------------------------ poles

def poles_of_basis(vectors: Sequence[Sequence[int]], twist: Sequence | None = None) -> list[RatVec]:
    """All ``q`` in ``[0,1)^n`` with ``<beta_j, q> + r_j`` integral for each row.

    There are exactly ``|det|`` of them; they are enumerated through the
    Smith normal form of the basis matrix.
    """
    b = [[int(x) for x in row] for row in vectors]
    n = len(b)
    r = [Fraction(x) for x in twist] if twist is not None else [Fraction(0)] * n
    u, d, v = smith_normal_form(b)
    diag = [d[i][i] for i in range(n)]
    if any(x == 0 for x in diag):
        raise ValueError("vectors are not a basis")
    # U B V = D ; write q = V w ; D w = -U r (mod Z^n)
    ur = linalg.matvec(u, [-x for x in r])
    out = set()
    for ks in iproduct(*[range(di) for di in diag]):
        w = [(ur[i] + ks[i]) / diag[i] for i in range(n)]
        q = linalg.matvec(v, w)
        out.add(vec_mod1(q))
    return sorted(out)


def _basis_in_chamber(vectors: Sequence[IntVec], chamber: Chamber) -> bool:
    try:
        x = linalg.solve_unique(linalg.transpose(vectors), list(chamber.interior_point))
    except linalg.NoSolution:
        return False
    return all(c > 0 for c in x)


def chamber_bases_flat(flat: Sequence[IntVec], chamber: Chamber) -> list[tuple[int, ...]]:
    """Index n-subsets of a flattened sequence that are bases whose cone contains the chamber."""
    n = len(chamber.interior_point)
    out = []
    for idx in combinations(range(len(flat)), n):
        vecs = [flat[i] for i in idx]
        if det([list(v) for v in vecs]) != 0 and _basis_in_chamber(vecs, chamber):
            out.append(idx)
    return out


def reduced_pole_set(s, c: Chamber, r: Sequence | None = None) -> tuple[list[RatVec], int]:
    """Poles that can contribute on the chamber ``c``, and the lcm of their orders.

    ``r`` is an optional twist per flattened vector.
    """
    poles = set()
    if r is None or not any(r):
        for b in c.bases:
            poles.update(poles_of_basis(b.vectors))
    else:
        flat = s.flattened
        for idx in chamber_bases_flat(flat, c):
            poles.update(poles_of_basis([flat[i] for i in idx], [r[i] for i in idx]))
    poles = sorted(poles)
    m = 1
    for q in poles:
        o = order_of(q)
        m = m * o // gcd(m, o)
    if r is not None:
        for x in r:
            d = Fraction(x).denominator
            m = m * d // gcd(m, d)
    return poles, m


def general_pole_set(n: int, factors: Sequence[Factor]) -> list[RatVec]:
    """All poles of a function whose denominator is the product of ``factors``."""
    poles = set()
    for idx in combinations(range(len(factors)), n):
        vecs = [factors[i].beta for i in idx]
        if det([list(v) for v in vecs]) != 0:
            poles.update(poles_of_basis(vecs, [factors[i].twist for i in idx]))
    return sorted(poles)


# ------------------------------------------------------ simple fractions

class SimpleFractionVector:
    """Linear combination of simple fractions ``1 / prod_{beta in sigma} <beta, z>``.

    Keys are sorted tuples of ``n`` independent forms.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict | None = None):
        self.n = n
        self.coeffs = {}
        for k, v in (coeffs or {}).items():
            if v:
                self.coeffs[tuple(sorted(k))] = v

    def add(self, key, value) -> None:
        key = tuple(sorted(key))
        cur = self.coeffs.get(key)
        new = value if cur is None else cur + value
        if new:
            self.coeffs[key] = new
        elif cur is not None:
            del self.coeffs[key]

    def __iter__(self):
        return iter(sorted(self.coeffs.items()))

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, SimpleFractionVector):
            return NotImplemented
        return self.coeffs.keys() == other.coeffs.keys() and all(
            self.coeffs[k] == other.coeffs[k] for k in self.coeffs)

    __hash__ = None

    def evaluate(self, z: Sequence):
        total = 0
        for key, c in self.coeffs.items():
            d = 1
            for b in key:
                d *= dot(b, z)
            total = total + c * (1 / Fraction(d) if not isinstance(d, complex) else 1 / d)
        return total

    def __repr__(self):
        return f"SimpleFractionVector({dict(sorted(self.coeffs.items()))})"


@dataclass(frozen=True)
class DroppedTerm:
    """``coeff * z^mono / prod(denoms)`` with non-spanning denominators or wrong degree."""

    mono: IntVec
    denoms: tuple[IntVec, ...]
    coeff: object


def _independent_prefix(dens: tuple[IntVec, ...], n: int) -> list[int] | None:
    chosen: list[int] = []
    rows: list[IntVec] = []
    for i, d in enumerate(dens):
        if linalg.rank(rows + [d]) > len(rows):
            chosen.append(i)
            rows.append(d)
            if len(rows) == n:
                return chosen
    return None


@lru_cache(maxsize=None)
def _tau_inverse(tau: tuple[IntVec, ...]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(row) for row in linalg.inverse([list(t) for t in tau]))


@lru_cache(maxsize=200000)
def _decompose_monomial(mono: IntVec, dens: tuple[IntVec, ...]):
    n = len(mono)
    if sum(mono) != len(dens) - n:
        return (), (((mono, dens), Fraction(1)),)
    pick = _independent_prefix(dens, n)
    if pick is None:
        return (), (((mono, dens), Fraction(1)),)
    if len(dens) == n:
        return ((dens, Fraction(1)),), ()
    tau = tuple(dens[i] for i in pick)
    inv = _tau_inverse(tau)
    i = next(j for j, k in enumerate(mono) if k)
    rest = list(mono)
    rest[i] -= 1
    rest = tuple(rest)
    simple: dict = {}
    dropped: dict = {}
    for k, pos in enumerate(pick):
        c = inv[i][k]
        if not c:
            continue
        sub = dens[:pos] + dens[pos + 1:]
        s_terms, d_terms = _decompose_monomial(rest, sub)
        for key, v in s_terms:
            simple[key] = simple.get(key, 0) + c * v
        for key, v in d_terms:
            dropped[key] = dropped.get(key, 0) + c * v
    return (tuple((k, v) for k, v in simple.items() if v),
            tuple((k, v) for k, v in dropped.items() if v))


def simple_fraction_decompose(P: Poly, denoms: Sequence[Sequence[int]]):
    """Split ``P / prod(denoms)`` into simple fractions plus dropped terms.

    Denominators are consumed in the order given: at each step the first
    independent spanning subset is used to cancel one variable.
    Returns ``(SimpleFractionVector, [DroppedTerm, ...])``.  The dropped terms
    have non-spanning denominators or the wrong homogeneous degree, so their
    total residue vanishes; the sum of both parts equals the input exactly.
    """
    dens = tuple(tuple(int(x) for x in d) for d in denoms)
    n = P.nvars
    vec = SimpleFractionVector(n)
    dropped: dict = {}
    for mono, c in P.terms.items():
        s_terms, d_terms = _decompose_monomial(tuple(mono), dens)
        for key, v in s_terms:
            vec.add(key, c * v)
        for key, v in d_terms:
            cur = dropped.get(key)
            dropped[key] = c * v if cur is None else cur + c * v
    out = [DroppedTerm(k[0], k[1], v) for k, v in sorted(dropped.items()) if v]
    return vec, out


# --------------------------------------------------------------- residues

@lru_cache(maxsize=None)
def _exp_series(n: int, bound: int, shift: IntVec) -> TruncSeries:
    return exp_symbolic(n, bound, [-x for x in shift])


def _numerator_series(n: int, factors: Sequence[Factor], q: RatVec, in_pole: list[int], D: int):
    """Product of the regular and Todd parts of the denominator at the pole."""
    g = TruncSeries.one(n, D)
    for j, f in enumerate(factors):
        s = f.twist + dot(f.beta, q)
        if j in in_pole:
            s = Fraction(0)
        else:
            s = frac_part(s)
        g = g * expand_factor(f.beta, s, f.power, D)
    return g


def tres_at_pole(n: int, factors: Sequence[Factor], numerator, q: RatVec) -> SimpleFractionVector:
    """Total residue of ``e^{<lambda, z - p>} F(p - z)`` as simple fractions in ``z``.

    ``numerator`` is a list of ``(coefficient, xi)`` pairs describing
    ``sum c_xi e^{<xi, z>}``; the coefficients of the result are polynomials
    in ``lambda``.
    """
    q = tuple(Fraction(x) for x in q)
    in_pole = [j for j, f in enumerate(factors) if (f.twist + dot(f.beta, q)).denominator == 1]
    vecs = [factors[j].beta for j in in_pole]
    if not vecs or linalg.rank(vecs) < n:
        return SimpleFractionVector(n)
    D = sum(factors[j].power for j in in_pole) - n
    g = _numerator_series(n, factors, q, in_pole, D)
    top = Poly(n)
    for coeff, xi in numerator:
        xi = tuple(int(x) for x in xi)
        phase = dot(xi, q)
        c = coeff * expi(phase) if frac_part(phase) else coeff
        part = mul_degree(_exp_series(n, D, xi), g, D)
        top = top + part * c
    denoms = []
    for j in in_pole:
        denoms.extend([factors[j].beta] * factors[j].power)
    vec, _ = simple_fraction_decompose(top, denoms)
    return vec


def tres_exponential(a: Sequence, forms: Sequence[Sequence[int]], powers: Sequence[int] | None = None):
    """Total residue of ``e^{<a, z>} / prod (1 - e^{-<beta, z>})^{h}`` at ``z = 0``.

    Accepts arbitrary nonzero forms, including systems that are not in a
    halfspace.  Returns ``(SimpleFractionVector, dropped)``.
    """
    forms = [tuple(int(x) for x in f) for f in forms]
    n = len(forms[0])
    powers = list(powers) if powers is not None else [1] * len(forms)
    D = sum(powers) - n
    g = TruncSeries.one(n, D)
    for f, h in zip(forms, powers):
        g = g * expand_factor(f, 0, h, D)
    top = mul_degree(exp_symbolic(n, D, None), g, D)
    top = Poly(n, {e: c.evaluate(a) for e, c in top.terms.items()})
    denoms = []
    for f, h in zip(forms, powers):
        denoms.extend([f] * h)
    return simple_fraction_decompose(top, denoms)


# ---------------------------------------------------------------------- JK

@lru_cache(maxsize=None)
def _jk_weight(key: tuple[IntVec, ...], point: IntVec) -> Fraction:
    vol = abs(det([list(v) for v in key]))
    try:
        x = linalg.solve_unique(linalg.transpose(key), list(point))
    except linalg.NoSolution:
        return Fraction(0)
    if all(c > 0 for c in x):
        return Fraction(1, vol)
    return Fraction(0)


def jk(v: SimpleFractionVector, c: Chamber | Sequence[int]):
    """Jeffrey-Kirwan residue: ``sum coeff / vol(sigma)`` over ``sigma`` whose cone contains ``c``.

    ``c`` is a chamber or any point in the open chamber.
    """
    point = tuple(c.interior_point) if isinstance(c, Chamber) else tuple(c)
    total = 0
    for key, coeff in v.coeffs.items():
        w = _jk_weight(key, point)
        if w:
            total = total + coeff * w
    return total

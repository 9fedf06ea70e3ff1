"""Quasi-polynomial formulas on chambers.

Every formula is a finite sum over poles ``p = 2 pi i q`` of
``exp(-<lambda, p>) * P_q(lambda)``; the builders below assemble the
polynomials ``P_q`` from total residues and the JK functional.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import factorial, gcd
from typing import Sequence

from . import linalg
from .arrangement import (
    Chamber,
    Exterior,
    OnWall,
    System,
    ValidityRegion,
    adjacent_chambers,
    chamber_of,
    validity_region,
)
from .cyclotomic import CycNumber, expi, one_minus_root_inverse, ramanujan_sum
from .linalg import det, dot
from .residue import (
    Factor,
    chamber_bases_flat,
    frac_part,
    general_pole_set,
    jk,
    order_of,
    poles_of_basis,
    reduced_pole_set,
    simple_fraction_decompose,
    tres_at_pole,
    vec_mod1,
)
from .series import Poly, exponents_of_degree

RatVec = tuple[Fraction, ...]


class NonRealValue(ArithmeticError):
    """A quasi-polynomial value that should be rational is not."""


class GenericityViolated(ValueError):
    pass


class ExteriorPoint(ValueError):
    pass


def _units(m: int) -> list[int]:
    return [a for a in range(1, m) if gcd(a, m) == 1] if m > 1 else [1]


def _galois(c, a: int):
    if isinstance(c, CycNumber) and c.order > 1:
        return c.galois(a % c.order)
    return c


def _rational(c) -> Fraction:
    if isinstance(c, CycNumber):
        return c.to_fraction()
    return Fraction(c)


def _trace_mult(c, m: int, k: int) -> Fraction:
    """``Tr_{Q(zeta_m)/Q}(zeta_m^k * c)`` for ``c`` in ``Q(zeta_m)``."""
    if not isinstance(c, CycNumber) or c.order == 1:
        return _rational(c) * ramanujan_sum(m, k)
    c = c.promote(m)
    total = 0
    for j, x in enumerate(c.num):
        if x:
            total += x * ramanujan_sum(m, k + j)
    return Fraction(total, c.den)


@dataclass
class QuasiPolynomial:
    """``lambda -> sum_q exp(-2 pi i <lambda, q>) P_q(lambda)``.

    ``galois`` records that the pole set is stable under ``q -> a q`` for
    units ``a`` with conjugate polynomials, which makes the value rational
    and allows evaluation through traces.
    """

    n: int
    terms: dict  # q -> Poly
    order: int = 1
    domain: ValidityRegion | None = None
    chamber: str | None = None
    note: str = ""
    galois: bool = False
    _tables: list | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.terms = {tuple(Fraction(x) for x in q): p for q, p in sorted(self.terms.items()) if p}

    @property
    def poles(self) -> list[RatVec]:
        return list(self.terms)

    def degree(self) -> int:
        return max((p.degree() for p in self.terms.values()), default=-1)

    def poly_at(self, q) -> Poly:
        return self.terms.get(tuple(Fraction(x) for x in q), Poly(self.n))

    def in_domain(self, lam) -> bool:
        return self.domain is None or self.domain.contains(lam)

    # -- values
    def value(self, lam: Sequence[int]):
        """Exact value as an element of a cyclotomic field (or a Fraction)."""
        lam = tuple(int(x) for x in lam)
        total = Fraction(0)
        for q, p in self.terms.items():
            v = p.evaluate(lam)
            phase = frac_part(-dot(lam, q))
            if phase:
                v = v * expi(phase)
            total = total + v
        return total

    def evaluate(self, lam: Sequence[int]) -> Fraction:
        lam = tuple(int(x) for x in lam)
        if self.galois:
            return self._fast_value(lam)
        v = self.value(lam)
        if isinstance(v, CycNumber):
            if not v.is_rational():
                raise NonRealValue(f"value at {lam} is not rational: {v}")
            return v.to_fraction()
        return Fraction(v)

    def _orbits(self):
        reps = []
        seen = set()
        for q in self.terms:
            if q in seen:
                continue
            m = order_of(q)
            members = [vec_mod1(a * x for x in q) for a in _units(m)]
            for qa in members:
                if qa not in self.terms:
                    raise ValueError("pole set is not Galois stable")
                seen.add(qa)
            reps.append((q, m))
        return reps

    def _build_tables(self):
        tables = []
        for q, m in self._orbits():
            p = self.terms[q]
            if m == 1:
                tables.append((q, 1, [p.map_coeffs(_rational)]))
                continue
            per_k = []
            for k in range(m):
                per_k.append(Poly(self.n, {e: _trace_mult(c, m, k) for e, c in p.terms.items()}))
            tables.append((q, m, per_k))
        self._tables = tables

    def _fast_value(self, lam) -> Fraction:
        if self._tables is None:
            self._build_tables()
        total = Fraction(0)
        for q, m, per_k in self._tables:
            if m == 1:
                total += per_k[0].evaluate(lam)
            else:
                k = int(-m * dot(lam, q)) % m
                total += per_k[k].evaluate(lam)
        return total

    # -- algebra
    def __add__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        terms = dict(self.terms)
        for q, p in other.terms.items():
            terms[q] = terms[q] + p if q in terms else p
        if self.domain is None:
            dom = other.domain
        elif other.domain is None:
            dom = self.domain
        else:
            dom = self.domain.intersect(other.domain)
        m = self.order * other.order // gcd(self.order, other.order)
        return QuasiPolynomial(self.n, terms, m, dom, self.chamber or other.chamber,
                               self.note, self.galois and other.galois)

    def scale(self, c) -> "QuasiPolynomial":
        return QuasiPolynomial(self.n, {q: p * c for q, p in self.terms.items()}, self.order,
                               self.domain, self.chamber, self.note, self.galois)

    def difference(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        d = self + other.scale(Fraction(-1))
        d.domain = None
        return d


# ----------------------------------------------------------------- engine

def _chamber_terms(n, factors, numerator, chamber, poles, galois) -> dict:
    terms: dict = {}
    done = set()
    for q in poles:
        if q in done:
            continue
        vec = tres_at_pole(n, factors, numerator, q)
        poly = jk(vec, chamber)
        if not isinstance(poly, Poly):
            poly = Poly.const(n, poly) if poly else Poly(n)
        m = order_of(q)
        if galois and m > 1:
            for a in _units(m):
                qa = vec_mod1(a * x for x in q)
                done.add(qa)
                pa = poly if a == 1 else poly.map_coeffs(lambda c, a=a: _galois(c, a))
                if pa:
                    terms[qa] = pa
        else:
            done.add(q)
            if poly:
                terms[q] = poly
    return terms


def _flat_factors(s: System, h=None, r=None) -> list[Factor]:
    flat = s.flattened
    h = [1] * len(flat) if h is None else list(h)
    r = [Fraction(0)] * len(flat) if r is None else [Fraction(x) for x in r]
    if len(h) != len(flat) or len(r) != len(flat):
        raise ValueError(f"expected {len(flat)} entries for h and r")
    grouped: dict = {}
    for b, hi, ri in zip(flat, h, r):
        if hi < 1:
            raise ValueError("h entries must be positive integers")
        key = (b, frac_part(ri))
        grouped[key] = grouped.get(key, 0) + int(hi)
    return [Factor(b, t, p) for (b, t), p in grouped.items()]


def partition_quasipoly(s: System, c: Chamber) -> QuasiPolynomial:
    """Vector partition function on ``c - Box(Phi)``."""
    factors = [Factor(b, Fraction(0), m) for b, m in zip(s.vectors, s.multiplicities)]
    poles, m = reduced_pole_set(s, c)
    terms = _chamber_terms(s.n, factors, [(Fraction(1), (0,) * s.n)], c, poles, True)
    return QuasiPolynomial(s.n, terms, m, validity_region(s, c), c.id,
                           "partition function; valid on c - Box(Phi)", True)


def euler_maclaurin_quasipoly(s: System, c: Chamber, h=None, r=None) -> QuasiPolynomial:
    """Coefficient of ``e^lambda`` in ``prod (1 - u_i e^{beta_i})^{-h_i}``, ``u_i = exp(2 pi i r_i)``."""
    factors = _flat_factors(s, h, r)
    twisted = r is not None and any(frac_part(x) for x in r)
    poles, m = reduced_pole_set(s, c, r if twisted else None)
    if twisted:
        for x in r:
            d = Fraction(x).denominator
            m = m * d // gcd(m, d)
    terms = _chamber_terms(s.n, factors, [(Fraction(1), (0,) * s.n)], c, poles, not twisted)
    return QuasiPolynomial(s.n, terms, m, validity_region(s, c, h), c.id,
                           "valid on c - Box(Phi, h)", not twisted)


def meromorphic_quasipoly(n: int, factors: Sequence[Factor], numerator, chamber: Chamber) -> QuasiPolynomial:
    """Coefficient formula for ``sum c_xi e^xi / prod (1 - u_k e^{beta_k})`` on a chamber.

    Uses every pole of the function; the chamber must belong to the system of
    denominator directions.
    """
    grouped: dict = {}
    for f in factors:
        key = (tuple(f.beta), frac_part(f.twist))
        grouped[key] = grouped.get(key, 0) + f.power
    facs = [Factor(b, t, p) for (b, t), p in grouped.items()]
    poles = general_pole_set(n, facs)
    m = 1
    for q in poles:
        o = order_of(q)
        m = m * o // gcd(m, o)
    terms = _chamber_terms(n, facs, numerator, chamber, poles, False)
    return QuasiPolynomial(n, terms, m, None, chamber.id, "valid where (lambda + Box(F)) meets c")


# --------------------------------------------------------- weighted sums

def _c_poly(h: int) -> list[Fraction]:
    """Coefficients of ``c(x, h) = binom(x + h - 1, h - 1)`` in powers of x."""
    coeffs = [Fraction(1)]
    for i in range(1, h):
        # multiply by (x + i) / i
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for k, a in enumerate(coeffs):
            nxt[k] += a * i
            nxt[k + 1] += a
        coeffs = [x / i for x in nxt]
    return coeffs


def power_in_c_basis(d: int) -> dict[int, Fraction]:
    """``x^d = sum_h A[h] c(x, h)`` for ``h = 1..d+1``."""
    target = [Fraction(0)] * d + [Fraction(1)]
    out: dict[int, Fraction] = {}
    for deg in range(d, -1, -1):
        a = target[deg] if deg < len(target) else Fraction(0)
        if not a:
            continue
        cp = _c_poly(deg + 1)
        f = a / cp[deg]
        out[deg + 1] = f
        for k, v in enumerate(cp):
            target[k] -= f * v
    return {h: v for h, v in out.items() if v}


def weighted_sum_quasipoly(s: System, c: Chamber, f: Poly) -> QuasiPolynomial:
    """``lambda -> sum of f(xi)`` over integral points ``xi`` of the partition polytope."""
    N = s.size
    if f.nvars != N:
        raise ValueError(f"weight must be a polynomial in {N} variables")
    combo: dict[tuple[int, ...], Fraction] = {}
    for e, coeff in f.terms.items():
        parts = [sorted(power_in_c_basis(d).items()) for d in e]
        for choice in iproduct(*parts):
            hvec = tuple(h for h, _ in choice)
            v = Fraction(coeff)
            for _, a in choice:
                v *= a
            combo[hvec] = combo.get(hvec, 0) + v
    result = None
    for hvec, v in sorted(combo.items()):
        if not v:
            continue
        qp = euler_maclaurin_quasipoly(s, c, list(hvec)).scale(v)
        result = qp if result is None else result + qp
    if result is None:
        result = QuasiPolynomial(s.n, {}, 1, validity_region(s, c), c.id, galois=True)
    result.note = "weighted sum; valid on the intersection of c - Box(Phi, h) over the h used"
    result.chamber = c.id
    return result


# ----------------------------------------------------------------- volume

def volume_polynomial(s: System, c: Chamber) -> Poly:
    """Volume of the partition polytope as a polynomial on the closure of ``c``."""
    n = s.n
    flat = s.flattened
    D = len(flat) - n
    terms = {}
    for e in exponents_of_degree(n, D):
        coef = Fraction(1)
        for k in e:
            coef /= factorial(k)
        lam_mono = Poly(n, {e: coef})
        terms[e] = lam_mono
    vec, _ = simple_fraction_decompose(Poly(n, terms), flat)
    res = jk(vec, c)
    return res if isinstance(res, Poly) else Poly.const(n, res)


# ----------------------------------------------------------- exponentials

@dataclass
class FloatExpSum:
    """``lambda -> sum coeff * exp(-<lambda, p>)`` with complex data."""

    n: int
    terms: list  # (coeff complex, p tuple of complex)
    chamber: str | None = None

    def evaluate(self, lam: Sequence[int]) -> complex:
        vals = [c * cmath.exp(-sum(l * x for l, x in zip(lam, p))) for c, p in self.terms]
        return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def exponential_sum_closed_form(s: System, c: Chamber, r=None, y=None, tol: float = 1e-9):
    """Closed form for ``sum exp(<y, xi>)`` over integral points of the partition polytope.

    Exact mode takes rational ``r`` with ``y = 2 pi i r`` and returns a
    :class:`QuasiPolynomial` of constant polynomials.  Float mode takes a
    complex vector ``y`` and returns a :class:`FloatExpSum`.
    """
    if (r is None) == (y is None):
        raise ValueError("give exactly one of r (exact) or y (float)")
    flat = s.flattened
    N = len(flat)
    bases = chamber_bases_flat(flat, c)
    if r is not None:
        r = [Fraction(x) for x in r]
        if len(r) != N:
            raise ValueError(f"r must have {N} entries")
        terms: dict = {}
        m = 1
        for idx in bases:
            vecs = [flat[i] for i in idx]
            vol = abs(det([list(v) for v in vecs]))
            for q in poles_of_basis(vecs, [r[i] for i in idx]):
                coef = CycNumber.rational(Fraction(1, vol))
                for k in range(N):
                    if k in idx:
                        continue
                    ph = frac_part(r[k] + dot(flat[k], q))
                    if not ph:
                        raise GenericityViolated(f"exp(y_{k}) exp(<beta_{k}, p>) = 1 at q = {q}")
                    coef = coef * one_minus_root_inverse(ph)
                terms[q] = terms[q] + coef if q in terms else coef
                o = order_of(q)
                m = m * o // gcd(m, o)
        polys = {q: Poly.const(s.n, v) for q, v in terms.items()}
        return QuasiPolynomial(s.n, polys, m, validity_region(s, c), c.id,
                               "exponential sum; valid on c - Box(Phi)", False)
    y = [complex(x) for x in y]
    if len(y) != N:
        raise ValueError(f"y must have {N} entries")
    out = []
    for idx in bases:
        vecs = [flat[i] for i in idx]
        vol = abs(det([list(v) for v in vecs]))
        binv = linalg.inverse([list(v) for v in vecs])
        u, d, _ = linalg.smith_normal_form([list(v) for v in vecs])
        uinv = linalg.inverse(u)
        diag = [d[i][i] for i in range(s.n)]
        for ks in iproduct(*[range(di) for di in diag]):
            kvec = linalg.matvec(uinv, list(ks))  # representatives of Z^n / B Z^n
            rhs = [-y[i] + 2j * math.pi * float(kv) for i, kv in zip(idx, kvec)]
            p = tuple(sum(complex(float(binv[a][b])) * rhs[b] for b in range(s.n)) for a in range(s.n))
            coef = complex(1 / vol)
            for k in range(N):
                if k in idx:
                    continue
                w = cmath.exp(y[k] + sum(x * pv for x, pv in zip(flat[k], p)))
                if abs(1 - w) < tol:
                    raise GenericityViolated(f"exp(y_{k}) exp(<beta_{k}, p>) = 1")
                coef /= (1 - w)
            out.append((coef, p))
    return FloatExpSum(s.n, out, c.id)


# ---------------------------------------------------------------- Ehrhart

@dataclass
class EhrhartQP:
    """``k -> polys[k mod period](k)`` for ``k >= 0``."""

    period: int
    polys: list  # univariate Poly with rational coefficients
    chamber: str | None = None

    def evaluate(self, k: int) -> Fraction:
        return self.polys[k % self.period].evaluate((k,))

    def degree(self) -> int:
        return max(p.degree() for p in self.polys)


def _dilate(p: Poly, lam0: Sequence[int]) -> Poly:
    out: dict = {}
    for e, c in p.terms.items():
        scale = 1
        for x, k in zip(lam0, e):
            scale *= x ** k
        if scale:
            key = (sum(e),)
            v = c * scale
            out[key] = out[key] + v if key in out else v
    return Poly(1, out)


def ehrhart(s: System, lam0: Sequence[int]) -> EhrhartQP:
    """Ehrhart quasi-polynomial of the dilates ``k * Pi(lam0)``."""
    lam0 = tuple(int(x) for x in lam0)
    where = chamber_of(s, lam0)
    if isinstance(where, Exterior):
        raise ExteriorPoint(f"{lam0} is outside the cone of the system")
    if isinstance(where, OnWall):
        where = adjacent_chambers(s, lam0)[0]
    qp = partition_quasipoly(s, where)
    period = 1
    for q in qp.terms:
        d = Fraction(dot(lam0, q)).denominator
        period = period * d // gcd(period, d)
    dilated = [(q, order_of(q), _dilate(p, lam0)) for q, p in qp.terms.items()]
    orbits = qp._orbits()
    polys = []
    for rho in range(period):
        acc = Poly(1)
        for q, m in orbits:
            dp = next(d for qq, _, d in dilated if qq == q)
            if m == 1:
                acc = acc + dp.map_coeffs(_rational)
                continue
            k = int(-rho * m * dot(lam0, q)) % m
            acc = acc + Poly(1, {e: _trace_mult(cf, m, k) for e, cf in dp.terms.items()})
        polys.append(acc)
    # reduce to the minimal period
    for d in sorted(x for x in range(1, period + 1) if period % x == 0):
        if all(polys[i] == polys[i % d] for i in range(period)):
            return EhrhartQP(d, polys[:d], where.id)
    return EhrhartQP(period, polys, where.id)


def evaluate(qp: QuasiPolynomial, lam: Sequence[int]) -> Fraction:
    return qp.evaluate(lam)

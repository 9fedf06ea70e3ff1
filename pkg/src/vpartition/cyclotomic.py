"""Exact arithmetic in cyclotomic fields Q(zeta_M).

An element is stored in the power basis ``1, zeta, ..., zeta^(phi(M)-1)`` as a
tuple of integers over a common positive denominator.  Elements of different
orders are promoted to the lcm of their orders only when they meet.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import gcd


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("order must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(a: list[int], b: tuple[int, ...]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            # b is monic
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    assert not any(a[:db]), "inexact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def totient(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


@lru_cache(maxsize=None)
def _reduction_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Row ``k - phi`` holds the reduction of x^k modulo Phi_m, for phi <= k < m."""
    phi_poly = cyclotomic_poly(m)
    phi = len(phi_poly) - 1
    rows = []
    cur = [-c for c in phi_poly[:phi]]
    for _ in range(phi, m):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [x - top * c for x, c in zip(cur, phi_poly[:phi])]
    return tuple(rows)


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def ramanujan_sum(m: int, k: int) -> int:
    """Trace of zeta_m^k from Q(zeta_m) down to Q."""
    g = gcd(k % m, m) if k % m else m
    q = m // g
    return _mobius(q) * totient(m) // totient(q)


def _reduce(m: int, vals: dict[int, int] | list[int]) -> list[int]:
    """Reduce an integer combination of powers of zeta_m to the power basis."""
    phi = totient(m)
    out = [0] * phi
    items = vals.items() if isinstance(vals, dict) else enumerate(vals)
    table = None
    for k, c in items:
        if not c:
            continue
        k %= m
        if k < phi:
            out[k] += c
        else:
            if table is None:
                table = _reduction_table(m)
            row = table[k - phi]
            for i, r in enumerate(row):
                if r:
                    out[i] += c * r
    return out


class CycNumber:
    """An element of Q(zeta_order)."""

    __slots__ = ("order", "num", "den")

    def __init__(self, order: int, num, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        num = list(num)
        if len(num) != totient(order):
            raise ValueError("coefficient vector length must equal phi(order)")
        if den < 0:
            num = [-x for x in num]
            den = -den
        g = den
        for x in num:
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            num = [x // g for x in num]
            den //= g
        if order > 1 and not any(num[1:]):
            order, num = 1, num[:1]
        self.order = order
        self.num = tuple(num)
        self.den = den

    # -- constructors
    @classmethod
    def rational(cls, x) -> "CycNumber":
        x = Fraction(x)
        return cls(1, [x.numerator], x.denominator)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CycNumber":
        if m == 1:
            return cls(1, [1])
        vals = {k % m: 1}
        return cls(m, _reduce(m, vals))

    @classmethod
    def coerce(cls, x) -> "CycNumber":
        if isinstance(x, CycNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycNumber")

    # -- structure
    def promote(self, m: int) -> "CycNumber":
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"cannot promote order {self.order} to {m}")
        step = m // self.order
        vals: dict[int, int] = {}
        for k, c in enumerate(self.num):
            if c:
                vals[k * step] = vals.get(k * step, 0) + c
        obj = object.__new__(CycNumber)
        obj.order = m
        obj.num = tuple(_reduce(m, vals))
        obj.den = self.den
        return obj

    def is_rational(self) -> bool:
        return self.order == 1

    def to_fraction(self) -> Fraction:
        if self.order != 1:
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_one(self) -> bool:
        return self.order == 1 and self.num[0] == self.den

    def __bool__(self):
        return any(self.num)

    def _pair(self, other):
        other = CycNumber.coerce(other)
        if self.order == other.order:
            return self, other, self.order
        m = _lcm(self.order, other.order)
        return self.promote(m), other.promote(m), m

    # -- arithmetic
    def __add__(self, other):
        if isinstance(other, int) and self.order >= 1:
            num = list(self.num)
            num[0] += other * self.den
            return CycNumber(self.order, num, self.den)
        try:
            a, b, m = self._pair(other)
        except TypeError:
            return NotImplemented
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return CycNumber(m, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.order, [-x for x in self.num], self.den)

    def __sub__(self, other):
        try:
            return self + (-CycNumber.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycNumber(self.order, [x * other.numerator for x in self.num],
                             self.den * other.denominator)
        if not isinstance(other, CycNumber):
            return NotImplemented
        if other.order == 1:
            return self * Fraction(other.num[0], other.den)
        if self.order == 1:
            return other * Fraction(self.num[0], self.den)
        a, b, m = self._pair(other)
        vals: dict[int, int] = {}
        bn = [(j, y) for j, y in enumerate(b.num) if y]
        for i, x in enumerate(a.num):
            if x:
                for j, y in bn:
                    k = i + j
                    vals[k] = vals.get(k, 0) + x * y
        return CycNumber(m, _reduce(m, vals), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.order == 1:
            return CycNumber(1, [self.den], self.num[0])
        m = self.order
        # extended Euclid in Q[x] against Phi_m
        a = [Fraction(x) for x in self.num]
        b = [Fraction(x) for x in cyclotomic_poly(m)]
        s0, s1 = [Fraction(1)], [Fraction(0)]
        r0, r1 = _trim(a), _trim(b)
        while len(r1) > 0 and any(r1):
            q, r = _divmod_poly(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_sub_poly(s0, _mul_poly(q, s1)))
        # r0 is a nonzero constant since Phi_m is irreducible
        c = r0[0]
        coeffs = [x / c for x in s0]
        den = 1
        for x in coeffs:
            den = _lcm(den, x.denominator)
        ints = [int(x * den) for x in coeffs]
        return CycNumber(m, _reduce(m, ints), den) * Fraction(self.den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, CycNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycNumber.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycNumber(1, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.order == 1 and Fraction(self.num[0], self.den) == other
        if not isinstance(other, CycNumber):
            return NotImplemented
        if self.order == other.order:
            return self.num == other.num and self.den == other.den
        a, b, _ = self._pair(other)
        return a.num == b.num and a.den == b.den

    __hash__ = None

    # -- Galois structure
    def galois(self, a: int) -> "CycNumber":
        """Apply the automorphism zeta -> zeta^a (a coprime to the order)."""
        m = self.order
        if m == 1:
            return self
        if gcd(a, m) != 1:
            raise ValueError("exponent must be a unit modulo the order")
        vals: dict[int, int] = {}
        for k, c in enumerate(self.num):
            if c:
                e = (a * k) % m
                vals[e] = vals.get(e, 0) + c
        return CycNumber(m, _reduce(m, vals), self.den)

    def conjugate(self) -> "CycNumber":
        return self.galois(-1 % self.order if self.order > 1 else 1)

    def trace(self) -> Fraction:
        m = self.order
        total = sum(c * ramanujan_sum(m, k) for k, c in enumerate(self.num) if c)
        return Fraction(total, self.den)

    def to_complex(self) -> complex:
        m = self.order
        re = []
        im = []
        for k, c in enumerate(self.num):
            if c:
                ang = 2 * math.pi * k / m
                re.append(c * math.cos(ang))
                im.append(c * math.sin(ang))
        return complex(math.fsum(re) / self.den, math.fsum(im) / self.den)

    def __complex__(self):
        return self.to_complex()

    def __repr__(self):
        if self.order == 1:
            return f"CycNumber({Fraction(self.num[0], self.den)})"
        return f"CycNumber(order={self.order}, num={list(self.num)}, den={self.den})"

    def __str__(self):
        return format_cyc(self)


def root_of_unity(num: int, den: int) -> CycNumber:
    """``exp(2 pi i num/den)`` as an exact element."""
    f = Fraction(num, den)
    return CycNumber.zeta(f.denominator, f.numerator)


def expi(s) -> CycNumber:
    """``exp(2 pi i s)`` for rational ``s``."""
    s = Fraction(s)
    return CycNumber.zeta(s.denominator, s.numerator)


def one_minus_root_inverse(s) -> CycNumber:
    """``1 / (1 - exp(2 pi i s))`` for non-integral rational ``s``.

    Uses ``1/(1-w) = -(1/m) sum_j j w^j`` for a root of unity ``w != 1`` with
    ``w^m = 1``, which avoids a Euclidean inversion.
    """
    s = Fraction(s)
    m = s.denominator
    if m == 1:
        raise ZeroDivisionError("exp(2 pi i s) = 1")
    k = s.numerator % m
    vals: dict[int, int] = {}
    for j in range(1, m):
        e = (j * k) % m
        vals[e] = vals.get(e, 0) - j
    return CycNumber(m, _reduce(m, vals), m)


def format_cyc(c: CycNumber, var: str = "z") -> str:
    if c.order == 1:
        return str(Fraction(c.num[0], c.den))
    parts = []
    for k, x in enumerate(c.num):
        if not x:
            continue
        coef = Fraction(x, c.den)
        mono = "" if k == 0 else (f"{var}{c.order}" if k == 1 else f"{var}{c.order}^{k}")
        if not mono:
            parts.append(str(coef))
        elif coef == 1:
            parts.append(mono)
        elif coef == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{coef}*{mono}")
    s = " + ".join(parts).replace("+ -", "- ")
    return f"({s})"


# ---------------------------------------------------------------- Q[x] helpers

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _sub_poly(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _mul_poly(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divmod_poly(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            f = c / lead
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
    return _trim(q), _trim(a[:db])


def to_cyc(x) -> CycNumber:
    return CycNumber.coerce(x)


def is_rational_value(x) -> bool:
    return not isinstance(x, CycNumber) or x.is_rational()


def as_fraction(x) -> Fraction:
    if isinstance(x, CycNumber):
        return x.to_fraction()
    return Fraction(x)


def complex_value(x) -> complex:
    if isinstance(x, CycNumber):
        return x.to_complex()
    return complex(x)


def exp_angle(s) -> complex:
    return cmath.exp(2j * math.pi * float(Fraction(s)))

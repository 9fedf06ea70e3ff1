"""Sparse multivariate polynomials and truncated power series.

Coefficients may be ``Fraction``, :class:`~vpartition.cyclotomic.CycNumber`
or :class:`Poly` itself; anything closed under ``+``, ``*`` and truth-testing
for zero works.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb, factorial
from typing import Iterable, Sequence

from .cyclotomic import CycNumber, expi, one_minus_root_inverse

Exp = tuple[int, ...]


def _add_into(terms: dict, e: Exp, c) -> None:
    cur = terms.get(e)
    new = c if cur is None else cur + c
    if new:
        terms[e] = new
    elif cur is not None:
        del terms[e]


def _mono_add(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Polynomial in ``nvars`` variables stored as ``{exponent: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError("exponent length does not match nvars")
                if c:
                    self.terms[tuple(e)] = c

    # -- constructors
    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "Poly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Fraction(c)
        if const:
            terms[(0,) * n] = Fraction(const)
        return cls(n, terms)

    # -- queries
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, e: Exp):
        return self.terms.get(tuple(e), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0])))

    # -- arithmetic
    def copy(self) -> "Poly":
        p = Poly(self.nvars)
        p.terms = dict(self.terms)
        return p

    def __add__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return self
            other = Poly.const(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            _add_into(out, e, c)
        p = Poly(self.nvars)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly):
            out: dict = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    _add_into(out, _mono_add(e1, e2), c1 * c2)
            p = Poly(self.nvars)
            p.terms = out
            return p
        if not other:
            return Poly(self.nvars)
        p = Poly(self.nvars)
        p.terms = {}
        for e, c in self.terms.items():
            v = c * other
            if v:
                p.terms[e] = v
        return p

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return other.__mul__(self)
        if not other:
            return Poly(self.nvars)
        p = Poly(self.nvars)
        for e, c in self.terms.items():
            v = other * c
            if v:
                p.terms[e] = v
        return p

    def __pow__(self, k: int):
        result = Poly.const(self.nvars, Fraction(1))
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            if self.terms.keys() != other.terms.keys():
                return False
            return all(self.terms[e] == other.terms[e] for e in self.terms)
        if not other:
            return not self.terms
        return self == Poly.const(self.nvars, other)

    __hash__ = None

    def map_coeffs(self, f) -> "Poly":
        return Poly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            m = 1
            for x, k in zip(point, e):
                if k:
                    m *= x ** k
            total = total + c * m
        return total

    def shift(self, offset: Sequence) -> "Poly":
        """The polynomial ``x -> self(x + offset)``."""
        if not any(offset):
            return self
        n = self.nvars
        out: dict = {}
        for e, c in self.terms.items():
            ranges = [range(k + 1) for k in e]
            for sub in iproduct(*ranges):
                coef = 1
                for k, j, o in zip(e, sub, offset):
                    if j < k:
                        coef *= comb(k, j) * Fraction(o) ** (k - j)
                if coef:
                    _add_into(out, tuple(sub), c * coef)
        p = Poly(n)
        p.terms = out
        return p

    def substitute_linear(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute variable i by the polynomial ``images[i]``."""
        nv = images[0].nvars if images else 0
        total = Poly(nv)
        cache: dict = {}
        for e, c in self.terms.items():
            m = Poly.const(nv, Fraction(1))
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    m = m * cache[key]
            total = total + m * c
        return total

    def format(self, names: Sequence[str] | None = None, coeff_fmt=None) -> str:
        return format_poly(self, names, coeff_fmt)

    def __repr__(self):
        return f"Poly({self.format()})"


# alias used in the public API for polynomials in the lambda variables
SymbolicPoly = Poly


def default_names(n: int, prefix: str = "a") -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def format_poly(p: Poly, names: Sequence[str] | None = None, coeff_fmt=None) -> str:
    from .cyclotomic import format_cyc

    names = list(names) if names else default_names(p.nvars)
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.items():
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
        )
        if coeff_fmt is not None:
            cs = coeff_fmt(c)
        elif isinstance(c, CycNumber):
            cs = format_cyc(c)
        else:
            cs = str(c)
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


# ------------------------------------------------------------ truncated series

class TruncSeries:
    """Power series in ``nvars`` variables truncated above total degree ``bound``."""

    __slots__ = ("nvars", "bound", "terms")

    def __init__(self, nvars: int, bound: int, terms: dict | None = None):
        self.nvars = nvars
        self.bound = bound
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if sum(e) <= bound and c:
                    self.terms[tuple(e)] = c

    @classmethod
    def one(cls, nvars: int, bound: int) -> "TruncSeries":
        return cls(nvars, bound, {(0,) * nvars: Fraction(1)})

    @classmethod
    def from_poly(cls, p: Poly, bound: int) -> "TruncSeries":
        return cls(p.nvars, bound, p.terms)

    def to_poly(self) -> Poly:
        return Poly(self.nvars, self.terms)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return mul(self, other)
        s = TruncSeries(self.nvars, self.bound)
        s.terms = {e: c * other for e, c in self.terms.items() if c * other}
        return s

    def __add__(self, other: "TruncSeries"):
        out = dict(self.terms)
        for e, c in other.terms.items():
            _add_into(out, e, c)
        s = TruncSeries(self.nvars, min(self.bound, other.bound))
        s.terms = {e: c for e, c in out.items() if sum(e) <= s.bound}
        return s

    def homogeneous(self, d: int) -> dict:
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def inverse(self) -> "TruncSeries":
        return inverse(self)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.bound == other.bound and Poly(self.nvars, self.terms) == Poly(other.nvars, other.terms)

    __hash__ = None

    def __repr__(self):
        return f"TruncSeries(bound={self.bound}, {format_poly(self.to_poly(), default_names(self.nvars, 'z'))})"


def mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    bound = min(a.bound, b.bound)
    out: dict = {}
    bt = [(e, sum(e), c) for e, c in b.terms.items()]
    for e1, c1 in a.terms.items():
        d1 = sum(e1)
        for e2, d2, c2 in bt:
            if d1 + d2 <= bound:
                _add_into(out, _mono_add(e1, e2), c1 * c2)
    s = TruncSeries(a.nvars, bound)
    s.terms = out
    return s


def mul_degree(a: TruncSeries, b: TruncSeries, d: int) -> Poly:
    """Homogeneous part of degree ``d`` of the product ``a b``."""
    out: dict = {}
    by_deg: dict[int, list] = {}
    for e, c in b.terms.items():
        by_deg.setdefault(sum(e), []).append((e, c))
    for e1, c1 in a.terms.items():
        for e2, c2 in by_deg.get(d - sum(e1), ()):
            _add_into(out, _mono_add(e1, e2), c1 * c2)
    p = Poly(a.nvars)
    p.terms = out
    return p


def inverse(a: TruncSeries) -> TruncSeries:
    """Multiplicative inverse; the constant term must be invertible."""
    n, bound = a.nvars, a.bound
    zero = (0,) * n
    a0 = a.terms.get(zero)
    if not a0:
        raise ZeroDivisionError("series has zero constant term")
    inv0 = _scalar_inverse(a0)
    parts = [dict() for _ in range(bound + 1)]
    for e, c in a.terms.items():
        parts[sum(e)][e] = c
    result = [dict() for _ in range(bound + 1)]
    result[0] = {zero: inv0}
    for d in range(1, bound + 1):
        acc: dict = {}
        for k in range(1, d + 1):
            for e1, c1 in parts[k].items():
                for e2, c2 in result[d - k].items():
                    _add_into(acc, _mono_add(e1, e2), c1 * c2)
        result[d] = {e: -(c * inv0) for e, c in acc.items() if c}
    s = TruncSeries(n, bound)
    for part in result:
        s.terms.update(part)
    return s


def _scalar_inverse(c):
    if isinstance(c, CycNumber):
        return c.inverse()
    return 1 / Fraction(c)


def homogeneous_part(s: TruncSeries, d: int) -> Poly:
    if d > s.bound:
        raise ValueError("degree exceeds truncation bound")
    return Poly(s.nvars, s.homogeneous(d))


# ------------------------------------------------------- univariate helpers

def _uni_mul(a: list, b: list, bound: int) -> list:
    out = [0] * (bound + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(len(b), bound + 1 - i)):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _uni_inverse(a: list, bound: int) -> list:
    inv0 = _scalar_inverse(a[0])
    out = [inv0] + [0] * bound
    for d in range(1, bound + 1):
        acc = 0
        for k in range(1, min(d, len(a) - 1) + 1):
            if a[k] and out[d - k]:
                acc = acc + a[k] * out[d - k]
        out[d] = -(acc * inv0) if acc else 0
    return out


def _uni_pow(a: list, h: int, bound: int) -> list:
    out = [Fraction(1)] + [0] * bound
    for _ in range(h):
        out = _uni_mul(out, a, bound)
    return out


@lru_cache(maxsize=None)
def todd_coefficients(bound: int) -> tuple[Fraction, ...]:
    """Taylor coefficients of ``t / (1 - exp(-t))``."""
    # (1 - e^{-t}) / t = sum_k (-1)^k t^k / (k+1)!
    base = [Fraction((-1) ** k, factorial(k + 1)) for k in range(bound + 1)]
    return tuple(_uni_inverse(base, bound))


def _geometric_coefficients(zeta_exp, bound: int) -> list:
    """Taylor coefficients of ``1 / (1 - w exp(-t))`` with ``w = exp(2 pi i s)``, ``w != 1``."""
    s = Fraction(zeta_exp)
    w = expi(s)
    # 1 - w e^{-t} = (1 - w) - w * sum_{k>=1} (-t)^k/k!
    base = [1 - w] + [-(w * Fraction((-1) ** k, factorial(k))) for k in range(1, bound + 1)]
    inv0 = one_minus_root_inverse(s)
    out = [inv0] + [0] * bound
    for d in range(1, bound + 1):
        acc = 0
        for k in range(1, d + 1):
            if out[d - k]:
                acc = acc + base[k] * out[d - k]
        out[d] = -(acc * inv0) if acc else 0
    return out


@lru_cache(maxsize=None)
def _linear_form_powers(beta: tuple[int, ...], bound: int) -> tuple[dict, ...]:
    n = len(beta)
    lin = {}
    for i, b in enumerate(beta):
        if b:
            e = [0] * n
            e[i] = 1
            lin[tuple(e)] = b
    powers = [{(0,) * n: 1}]
    for _ in range(bound):
        prev = powers[-1]
        nxt: dict = {}
        for e1, c1 in prev.items():
            for e2, c2 in lin.items():
                _add_into(nxt, _mono_add(e1, e2), c1 * c2)
        powers.append(nxt)
    return tuple(powers)


def substitute_form(coeffs: Sequence, beta: Sequence[int], bound: int) -> TruncSeries:
    """The series ``sum_k coeffs[k] <beta, z>^k`` truncated at ``bound``."""
    beta = tuple(int(b) for b in beta)
    n = len(beta)
    powers = _linear_form_powers(beta, bound)
    out: dict = {}
    for k in range(min(bound, len(coeffs) - 1) + 1):
        c = coeffs[k]
        if not c:
            continue
        for e, v in powers[k].items():
            _add_into(out, e, c * v)
    s = TruncSeries(n, bound)
    s.terms = out
    return s


def factor_coefficients(zeta_exp, h: int, bound: int) -> list:
    """Univariate expansion in ``t`` of one factor raised to the power ``h``.

    ``zeta_exp`` is a rational ``s`` with ``zeta = exp(2 pi i s)``.  When ``s``
    is integral the factor is the Todd function ``(t/(1 - e^{-t}))^h``,
    otherwise ``(1 - zeta e^{-t})^{-h}``.
    """
    s = Fraction(zeta_exp)
    if s.denominator == 1:
        base = list(todd_coefficients(bound))
    else:
        base = _geometric_coefficients(s, bound)
    return _uni_pow(base, h, bound)


def expand_factor(beta: Sequence[int], zeta, h: int, bound: int) -> TruncSeries:
    """Expand one denominator factor at a pole.

    ``zeta`` is given by its rational exponent (``zeta = exp(2 pi i zeta)``);
    an integer, ``1`` or a ``CycNumber`` equal to one selects the Todd branch.
    """
    if isinstance(zeta, CycNumber):
        if zeta.is_one():
            zeta = 0
        else:
            raise TypeError("pass the exponent s of zeta = exp(2 pi i s) for zeta != 1")
    return substitute_form(factor_coefficients(zeta, h, bound), beta, bound)


def exp_symbolic(nvars: int, bound: int, shift: Sequence | None = None) -> TruncSeries:
    """``exp(<lambda + shift, z>)`` as a series in ``z`` with coefficients in ``Q[lambda]``."""
    shift = [Fraction(x) for x in shift] if shift is not None else [Fraction(0)] * nvars
    # univariate pieces (lambda_i + s_i)^k / k!
    uni = []
    for i in range(nvars):
        lin = Poly.var(nvars, i) + shift[i] if shift[i] else Poly.var(nvars, i)
        pw = [Poly.const(nvars, Fraction(1))]
        for k in range(1, bound + 1):
            pw.append(pw[-1] * lin)
        uni.append([p * Fraction(1, factorial(k)) for k, p in enumerate(pw)])
    out: dict = {}
    for e in _exponents_up_to(nvars, bound):
        c = Poly.const(nvars, Fraction(1))
        for i, k in enumerate(e):
            if k:
                c = c * uni[i][k]
        out[e] = c
    s = TruncSeries(nvars, bound)
    s.terms = out
    return s


def _exponents_up_to(n: int, bound: int) -> Iterable[Exp]:
    def rec(i, left):
        if i == n - 1:
            for k in range(left + 1):
                yield (k,)
            return
        for k in range(left + 1):
            for rest in rec(i + 1, left - k):
                yield (k,) + rest

    if n == 0:
        yield ()
        return
    yield from rec(0, bound)


def exponents_of_degree(n: int, d: int) -> list[Exp]:
    return [e for e in _exponents_up_to(n, d) if sum(e) == d]

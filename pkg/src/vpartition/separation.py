"""Box-admissible partial fraction decompositions of exponential fractions.

A :class:`MeroFunction` is ``sum c e^{<xi, z>} / prod (1 - u_k e^{<beta_k, z>})``
with ``u_k = exp(2 pi i r_k)``.  :func:`admissible_decompose` rewrites it as a
sum of fractions whose denominators involve linearly independent forms only,
keeping a chosen point ``mu`` inside the box of every piece.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import linalg
from .cyclotomic import CycNumber, expi, one_minus_root_inverse
from .linalg import Feasible, LinearSystem, canonical_normal, feasible
from .residue import frac_part

IntVec = tuple[int, ...]


class DegenerateRelation(ValueError):
    pass


class EssentialityViolated(ValueError):
    pass


class FlatBox(ValueError):
    """The box of the function has empty interior, so every point of it is special."""


def _cyc(c) -> CycNumber:
    return CycNumber.coerce(c)


@dataclass(frozen=True)
class MeroFunction:
    """``sum_xi c_xi e^{<xi, z>} / prod_k (1 - exp(2 pi i r_k) e^{<beta_k, z>})``.

    ``numerator`` holds ``(c_xi, xi)`` pairs, ``factors`` holds ``(r_k, beta_k)``.
    """

    n: int
    numerator: tuple
    factors: tuple

    def __post_init__(self):
        num = tuple((c, tuple(int(x) for x in xi)) for c, xi in self.numerator if c)
        facs = []
        extra = CycNumber.rational(1)
        for r, b in self.factors:
            b = tuple(int(x) for x in b)
            r = frac_part(r)
            if not any(b):
                if r == 0:
                    raise ZeroDivisionError("constant factor 1 - 1")
                extra = extra * one_minus_root_inverse(r)
                continue
            facs.append((r, b))
        if not extra.is_one():
            num = tuple((_cyc(c) * extra, xi) for c, xi in num)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "factors", tuple(facs))

    def evaluate(self, z: Sequence[complex]) -> complex:
        num = sum(complex(c) * cmath.exp(sum(x * zz for x, zz in zip(xi, z)))
                  for c, xi in self.numerator)
        den = 1
        for r, b in self.factors:
            den *= 1 - cmath.exp(2j * math.pi * float(r) + sum(x * zz for x, zz in zip(b, z)))
        return num / den

    def single_terms(self) -> list["MeroFunction"]:
        return [MeroFunction(self.n, ((c, xi),), self.factors) for c, xi in self.numerator]

    @property
    def forms(self) -> list[IntVec]:
        return [b for _, b in self.factors]


def c_coeff(k: int, R: int) -> int:
    """``c(k, R) = binom(k + R - 1, R - 1)`` as a polynomial in ``k``."""
    num = 1
    for i in range(1, R):
        num *= k + i
    return num // math.factorial(R - 1)


# ------------------------------------------------------------------- boxes

def box_certificate(forms: Sequence[IntVec], powers: Sequence[int] | None, target: Sequence,
                    interior: bool = False):
    """``t`` with ``target = sum t_k forms_k`` and ``0 <= t_k <= powers_k`` (strict if interior)."""
    R = len(forms)
    n = len(target)
    powers = [1] * R if powers is None else list(powers)
    lp = LinearSystem(R)
    lo, hi = (">", "<") if interior else (">=", "<=")
    for k in range(R):
        e = [0] * R
        e[k] = 1
        lp.add(e, lo, 0)
        lp.add(e, hi, powers[k])
    for i in range(n):
        lp.add([f[i] for f in forms], "==", target[i])
    res = feasible(lp)
    return res.point if isinstance(res, Feasible) else None


def box_membership(F: MeroFunction, mu: Sequence, interior: bool = False) -> bool:
    """Whether ``mu + xi`` lies in the zonotope of the forms for every numerator term."""
    forms = F.forms
    for _, xi in F.numerator:
        target = [Fraction(m) + x for m, x in zip(mu, xi)]
        if box_certificate(forms, None, target, interior) is None:
            return False
    return True


def box_has_interior(F: MeroFunction) -> bool:
    """Whether some ``mu`` lies strictly inside the zonotope shifted by every ``-xi``."""
    forms = F.forms
    n, R = F.n, len(forms)
    xis = [xi for _, xi in F.numerator]
    lp = LinearSystem(n + R * len(xis))
    for j, xi in enumerate(xis):
        base = n + j * R
        for k in range(R):
            e = [0] * lp.nvars
            e[base + k] = 1
            lp.add(e, ">", 0)
            lp.add(e, "<", 1)
        for i in range(n):
            row = [0] * lp.nvars
            row[i] = -1
            for k, f in enumerate(forms):
                row[base + k] = f[i]
            lp.add(row, "==", xi[i])
    return isinstance(feasible(lp), Feasible)


# ------------------------------------------------------------ crucial split

def crucial_split(F, mu: Sequence, t: Sequence | None = None) -> list[MeroFunction]:
    """Split ``1 / prod (1 - u_i e^{alpha_i})`` so that ``mu`` stays in every box.

    ``F`` is a denominator-only :class:`MeroFunction` or a list of
    ``(r_i, alpha_i)`` pairs.  ``t`` is a certificate ``mu = sum t_i alpha_i``
    with ``0 <= t_i <= 1``; it is found by linear programming when omitted.
    The returned functions sum to ``F``.
    """
    if isinstance(F, MeroFunction):
        n = F.n
        factors = list(F.factors)
        scale = F.numerator
        if len(scale) != 1 or any(scale[0][1]):
            raise ValueError("crucial_split expects a constant numerator")
        scale = _cyc(scale[0][0])
    else:
        factors = [(frac_part(r), tuple(a)) for r, a in F]
        n = len(factors[0][1])
        scale = CycNumber.rational(1)
    if t is None:
        t = box_certificate([a for _, a in factors], None, list(mu))
        if t is None:
            raise ValueError("mu is not in the box of the function")
    zero = (0,) * n
    return [MeroFunction(n, ((scale * c, zero),), tuple(facs)) for c, facs in _crucial(factors, t)]


def _crucial(factors, t) -> list[tuple]:
    order = sorted(range(len(factors)), key=lambda i: (t[i], i))
    fs = [factors[i] for i in order]
    n = len(fs[0][1])
    alpha0 = tuple(-sum(a[i] for _, a in fs) for i in range(n))
    rsum = frac_part(sum(r for r, _ in fs))
    if not any(alpha0) and rsum == 0:
        raise DegenerateRelation("alpha_0 = 0 and u_1 ... u_r = 1")
    out = []
    for k in range(len(fs)):
        coeff = CycNumber.rational(1 if k % 2 == 0 else -1)
        new = []
        neg0 = tuple(-x for x in alpha0)
        if any(neg0):
            new.append((rsum, neg0))
        else:
            coeff = coeff * one_minus_root_inverse(rsum)
        for j, (r, a) in enumerate(fs):
            if j < k:
                new.append((frac_part(-r), tuple(-x for x in a)))
            elif j > k:
                new.append((r, a))
        out.append((coeff, new))
    return out


# --------------------------------------------------------- decomposition

@dataclass
class _Term:
    coeff: CycNumber
    xi: IntVec
    factors: list  # (r, form)

    def certificate(self, mu, interior=False):
        target = [Fraction(m) + x for m, x in zip(mu, self.xi)]
        return box_certificate([a for _, a in self.factors], None, target, interior)


def _collect(terms, keep_order: bool = False) -> list[_Term]:
    """Merge terms with the same numerator exponent and the same factor multiset.

    With ``keep_order`` the factor lists must agree position by position, so
    indices into them stay valid.
    """
    acc: dict = {}
    for t in terms:
        key = (t.xi, tuple(t.factors) if keep_order else tuple(sorted(t.factors)))
        acc[key] = acc[key] + t.coeff if key in acc else t.coeff
    return [_Term(c, xi, list(f)) for (xi, f), c in acc.items() if c]


def _line(a: IntVec) -> IntVec:
    return canonical_normal(a)


def _multiple(a: IntVec, base: IntVec) -> int:
    for x, y in zip(a, base):
        if y:
            return x // y
    raise ValueError("zero form")


def _rescale(term: _Term, idx: int, k: int) -> list[_Term]:
    """Rewrite factor ``idx`` of ``term`` so its form is multiplied by the integer ``k``."""
    r, a = term.factors[idx]
    coeff, xi = term.coeff, term.xi
    if k < 0:
        # 1/(1 - u e^a) = -u^{-1} e^{-a} / (1 - u^{-1} e^{-a})
        coeff = coeff * (-expi(-r))
        xi = tuple(x - y for x, y in zip(xi, a))
        r, a = frac_part(-r), tuple(-x for x in a)
        k = -k
    out = []
    new_form = tuple(k * x for x in a)
    for j in range(k):
        # 1/(1 - u e^a) = sum_j u^j e^{j a} / (1 - u^k e^{k a})
        c = coeff * expi(j * r) if j else coeff
        facs = list(term.factors)
        facs[idx] = (frac_part(k * r), new_form)
        out.append(_Term(c, tuple(x + j * y for x, y in zip(xi, a)), facs))
    return out


def _circuit(lines: list[IntVec], target: int):
    """Minimal subset ``S`` of the other lines spanning ``lines[target]`` with integer relation.

    Returns ``(S, coeffs, c0)`` with ``c0 * lines[target] = sum coeffs_i * lines[S_i]``.
    """
    others = [i for i in range(len(lines)) if i != target]
    S = list(others)
    for i in list(others):
        trial = [j for j in S if j != i]
        if trial and linalg.rank([lines[j] for j in trial] + [lines[target]]) == linalg.rank(
                [lines[j] for j in trial]):
            S = trial
    # solve sum x_i lines[S_i] = lines[target]
    mat = linalg.transpose([lines[j] for j in S])
    sol = linalg.solve(mat, list(lines[target]))
    if isinstance(sol, linalg.Underdetermined):
        sol = sol.particular
    den = 1
    for x in sol:
        den = den * x.denominator // gcd(den, x.denominator)
    coeffs = [int(x * den) for x in sol]
    return S, coeffs, den


def _exchange(term: _Term, mu, lines: list[IntVec], h0: int, S, coeffs, c0) -> list[_Term]:
    """Move factors off the circuit ``S`` onto the hyperplane ``lines[h0]``."""
    done = []
    work = [term]
    while work:
        nxt = []
        for t in work:
            _exchange_step(t, mu, lines, S, coeffs, done, nxt)
        work = _collect(nxt)
    return _collect(done)


def _exchange_step(t, mu, lines, S, coeffs, done, work):
    if True:
        by_line: dict[int, list[int]] = {}
        for idx, (_, a) in enumerate(t.factors):
            by_line.setdefault(lines.index(_line(a)), []).append(idx)
        if any(i not in by_line for i in S):
            done.append(t)
            return
        chosen = [min(by_line[i], key=lambda j: (abs(_multiple(t.factors[j][1], lines[i])), j))
                  for i in S]
        # sum coeffs_i L_i lies on H_0; pick the smallest integers k_i with
        # k_i * form_i proportional to coeffs_i * L_i
        mults = [_multiple(t.factors[idx][1], lines[i]) for idx, i in zip(chosen, S)]
        ratios = [Fraction(c, m) for m, c in zip(mults, coeffs)]
        L = 1
        G = 0
        for q in ratios:
            L = L * q.denominator // gcd(L, q.denominator)
            G = gcd(G, q.numerator)
        ks = [int(q * L / G) for q in ratios]
        pieces = [t]
        for idx, k in zip(chosen, ks):
            if k == 1:
                continue
            pieces = _collect((p for piece in pieces for p in _rescale(piece, idx, k)), keep_order=True)
        for piece in pieces:
            cert = piece.certificate(mu)
            if cert is None:
                raise AssertionError("lost box membership while rescaling")
            sub = [piece.factors[idx] for idx in chosen]
            tsub = [cert[idx] for idx in chosen]
            rest = [f for j, f in enumerate(piece.factors) if j not in chosen]
            for c, facs in _crucial(sub, tsub):
                work.append(_Term(piece.coeff * c, piece.xi, facs + rest))


def _merge_line(term: _Term, mu, line_idx: list[int]) -> list[_Term]:
    """Bring all factors on one hyperplane to a common form and a common ``u``."""
    base = _line(term.factors[line_idx[0]][1])
    mults = [_multiple(term.factors[i][1], base) for i in line_idx]
    L = 1
    for m in mults:
        L = L * abs(m) // gcd(L, abs(m))
    pieces = [term]
    for i, m in zip(line_idx, mults):
        k = L // m
        if k != 1:
            pieces = _collect((p for piece in pieces for p in _rescale(piece, i, k)), keep_order=True)
    out = []
    work = pieces
    while work:
        t = work.pop()
        idx = [j for j, (_, a) in enumerate(t.factors) if _line(a) == base]
        twists = {}
        for j in idx:
            twists.setdefault(t.factors[j][0], j)
        if len(twists) <= 1:
            out.append(t)
            continue
        j1, j2 = sorted(twists.values())[:2]
        (r1, a), (r2, _) = t.factors[j1], t.factors[j2]
        cert = t.certificate(mu)
        if cert is None:
            raise AssertionError("lost box membership while merging")
        tt = cert[j1] + cert[j2]
        rest = [f for j, f in enumerate(t.factors) if j not in (j1, j2)]
        if tt <= 1:
            c1 = one_minus_root_inverse(r2 - r1)
            c2 = one_minus_root_inverse(r1 - r2)
            work.append(_Term(t.coeff * c1, t.xi, rest + [(r1, a)]))
            work.append(_Term(t.coeff * c2, t.xi, rest + [(r2, a)]))
        else:
            # e^{-a}/(u1 - u2) [1/(1 - u1 e^a) - 1/(1 - u2 e^a)]
            inv = (expi(r1) - expi(r2)).inverse()
            xi = tuple(x - y for x, y in zip(t.xi, a))
            work.append(_Term(t.coeff * inv, xi, rest + [(r1, a)]))
            work.append(_Term(-(t.coeff * inv), xi, rest + [(r2, a)]))
    return out


def _finalize(term: _Term, mu) -> list[_Term]:
    groups: dict[IntVec, list[int]] = {}
    for j, (_, a) in enumerate(term.factors):
        groups.setdefault(_line(a), []).append(j)
    pieces = [term]
    for line in sorted(groups):
        nxt = []
        for p in pieces:
            idx = [j for j, (_, a) in enumerate(p.factors) if _line(a) == line]
            if len(idx) > 1 and (len({p.factors[j] for j in idx}) > 1):
                nxt.extend(_merge_line(p, mu, idx))
            else:
                nxt.append(p)
        pieces = nxt
    return _collect(pieces)


def _parfrac(term: _Term, mu) -> list[_Term]:
    lines = sorted({_line(a) for _, a in term.factors})
    if not lines or linalg.rank(lines) == len(lines):
        return _finalize(term, mu)
    h0 = max(i for i in range(len(lines))
             if linalg.rank([l for j, l in enumerate(lines) if j != i]) == linalg.rank(lines))
    S, coeffs, c0 = _circuit(lines, h0)
    out = []
    for piece in _exchange(term, mu, lines, h0, S, coeffs, c0):
        out.extend(_parfrac(piece, mu))
    return _collect(out)


@dataclass(frozen=True)
class SimpleTerm:
    """``coeff * e^{<xi, z>} / prod_i (1 - exp(2 pi i r_i) e^{<alpha_i, z>})^{h_i}``.

    The forms ``alpha_i`` are linearly independent.
    """

    coeff: CycNumber
    xi: IntVec
    forms: tuple[IntVec, ...]
    twists: tuple[Fraction, ...]
    powers: tuple[int, ...]

    def as_mero(self) -> MeroFunction:
        facs = []
        for a, r, h in zip(self.forms, self.twists, self.powers):
            facs.extend([(r, a)] * h)
        return MeroFunction(len(self.xi), ((self.coeff, self.xi),), tuple(facs))

    @property
    def sigma(self) -> tuple[IntVec, ...]:
        return self.forms

    def evaluate(self, z) -> complex:
        return self.as_mero().evaluate(z)

    def in_box(self, mu, interior: bool = True) -> bool:
        # the box of the expanded fraction: each factor counted h_i times
        target = [Fraction(m) + x for m, x in zip(mu, self.xi)]
        return box_certificate(self.forms, self.powers, target, interior) is not None


def _to_simple(t: _Term) -> SimpleTerm:
    groups: dict = {}
    for r, a in t.factors:
        groups[(a, r)] = groups.get((a, r), 0) + 1
    keys = sorted(groups)
    return SimpleTerm(t.coeff, t.xi, tuple(a for a, _ in keys), tuple(r for _, r in keys),
                      tuple(groups[k] for k in keys))


@dataclass
class Decomposition:
    terms: list
    mu: tuple

    def evaluate(self, z) -> complex:
        return sum(t.evaluate(z) for t in self.terms)


def admissible_decompose(F: MeroFunction, mu: Sequence, seed: int = 0) -> Decomposition:
    """Box-admissible decomposition of ``F`` into fractions with independent denominators.

    ``mu`` must lie in the box of ``F``.  If some piece would have ``mu`` on
    the boundary of its box, ``mu`` is moved slightly inside the box of ``F``
    and the decomposition is redone; the point actually used is returned.
    """
    forms = F.forms
    if forms and linalg.rank(forms) < F.n:
        raise EssentialityViolated("the denominator forms do not span")
    mu = tuple(Fraction(x) for x in mu)
    if not box_membership(F, mu):
        raise ValueError("mu is not in the box of F")
    if not box_membership(F, mu, interior=True) and not box_has_interior(F):
        raise FlatBox("the box of F has empty interior")
    rng = random.Random(seed)
    current = mu
    for attempt in range(20):
        terms = []
        for c, xi in F.numerator:
            terms.extend(_parfrac(_Term(_cyc(c), xi, list(F.factors)), current))
        simple = [_to_simple(t) for t in terms if t.coeff]
        simple = _combine(simple)
        if all(s.in_box(current) for s in simple):
            return Decomposition(simple, current)
        current = _perturb(F, mu, rng, attempt)
    raise ValueError("could not find a nonspecial point near mu")


def _combine(terms: list[SimpleTerm]) -> list[SimpleTerm]:
    acc: dict = {}
    order = []
    for t in terms:
        key = (t.xi, t.forms, t.twists, t.powers)
        if key not in acc:
            order.append(key)
            acc[key] = t.coeff
        else:
            acc[key] = acc[key] + t.coeff
    return [SimpleTerm(acc[k], *k) for k in order if acc[k]]


def _perturb(F: MeroFunction, mu, rng, attempt) -> tuple:
    scale = Fraction(1, 10 ** (attempt // 4 + 2))
    for _ in range(50):
        d = [Fraction(rng.randint(-97, 97), 97) * scale for _ in mu]
        cand = tuple(m + x for m, x in zip(mu, d))
        if box_membership(F, cand, interior=True):
            return cand
    return tuple(mu)


def coeff_closed_form(t: SimpleTerm, lam: Sequence[int]):
    """Coefficient of ``e^lam`` in the expansion of ``t``: ``prod u_i^{k_i} c(k_i, h_i)``.

    ``lam - xi = sum k_i alpha_i``; the coefficient vanishes unless every
    ``k_i`` is a nonnegative integer (``c(k, h)`` is zero for ``1 - h <= k < 0``
    anyway).
    """
    target = [Fraction(a) - x for a, x in zip(lam, t.xi)]
    try:
        ks = linalg.solve(linalg.transpose(t.forms), target)
    except linalg.NoSolution:
        return Fraction(0)
    if any(k.denominator != 1 or k < 0 for k in ks):
        return Fraction(0)
    value = t.coeff
    phase = Fraction(0)
    for k, h, r in zip(ks, t.powers, t.twists):
        value = value * c_coeff(int(k), h)
        phase += int(k) * r
    ph = frac_part(phase)
    return value * expi(ph) if ph else value

"""Serialization and display of quasi-polynomials and related results."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .arrangement import ValidityRegion
from .cyclotomic import CycNumber, format_cyc, totient
from .formulas import QuasiPolynomial
from .residue import frac_part
from .series import Poly, default_names, format_poly


def frac_str(x) -> str:
    return str(Fraction(x))


# ------------------------------------------------------------------- JSON

def coeff_to_json(c):
    """Rationals become ``"p/q"``; cyclotomic elements ``{"order", "coeffs"}``.

    ``coeffs[j]`` multiplies ``zeta_order^j`` for ``j < phi(order)``.
    """
    if isinstance(c, CycNumber):
        if c.order == 1:
            return frac_str(Fraction(c.num[0], c.den))
        return {"order": c.order, "coeffs": [frac_str(Fraction(x, c.den)) for x in c.num]}
    return frac_str(c)


def coeff_from_json(d):
    if isinstance(d, (str, int)):
        return Fraction(d)
    m = int(d["order"])
    fr = [Fraction(x) for x in d["coeffs"]]
    if len(fr) != totient(m):
        raise ValueError("coefficient vector has the wrong length")
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    return CycNumber(m, [int(x * den) for x in fr], den)


def poly_to_json(p: Poly) -> list:
    return [{"exponent": list(e), "coeff": coeff_to_json(c)} for e, c in p.items()]


def poly_from_json(n: int, data) -> Poly:
    return Poly(n, {tuple(int(x) for x in d["exponent"]): coeff_from_json(d["coeff"]) for d in data})


def compact(s: str) -> str:
    return s.replace(" ", "")


def quasipoly_to_json(qp: QuasiPolynomial) -> dict:
    return {
        "kind": "quasi-polynomial",
        "n": qp.n,
        "chamber": qp.chamber,
        "order": qp.order,
        "galois": qp.galois,
        "note": qp.note,
        "domain": qp.domain.to_json() if qp.domain is not None else None,
        "terms": [
            {"pole": [frac_str(x) for x in q], "poly": compact(p.format()), "coefficients": poly_to_json(p)}
            for q, p in qp.terms.items()
        ],
    }


def quasipoly_from_json(d: dict) -> QuasiPolynomial:
    n = int(d["n"])
    terms = {tuple(Fraction(x) for x in t["pole"]): poly_from_json(n, t["coefficients"]) for t in d["terms"]}
    dom = ValidityRegion.from_json(d["domain"]) if d.get("domain") is not None else None
    return QuasiPolynomial(n, terms, int(d.get("order", 1)), dom, d.get("chamber"),
                           d.get("note", ""), bool(d.get("galois", False)))


# ------------------------------------------------------------------- text

def _phase_form(q, names) -> str:
    parts = []
    for x, nm in zip(q, names):
        if x:
            parts.append(nm if x == 1 else f"{x}*{nm}")
    return " + ".join(parts)


def quasipoly_to_text(qp: QuasiPolynomial, names=None) -> str:
    names = names or default_names(qp.n)
    lines = [f"chamber {qp.chamber}" + (f"  [{qp.note}]" if qp.note else "")]
    if qp.domain is not None:
        conds = [f"{compact(Poly.linear(list(a)).format(names))} > {b}" for a, b in qp.domain.halfspaces]
        lines.append("valid for: " + ", ".join(conds))
    if not qp.terms:
        lines.append("  0")
    for q, p in qp.terms.items():
        body = format_poly(p, names)
        if any(q):
            lines.append(f"  + exp(-2*pi*i*({_phase_form(q, names)})) * ({body})")
        else:
            lines.append(f"  + ({body})")
    return "\n".join(lines)


# ------------------------------------------------------------------ LaTeX

def _latex_frac(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    sign = "-" if x < 0 else ""
    return f"{sign}\\frac{{{abs(x.numerator)}}}{{{x.denominator}}}"


def _latex_cyc(c) -> str:
    if isinstance(c, CycNumber) and c.order > 1:
        body = format_cyc(c, "\\zeta_")
        body = body.replace("*", " ")
        return body
    return _latex_frac(c.to_fraction() if isinstance(c, CycNumber) else c)


def _latex_mono(e, names) -> str:
    out = []
    for k, nm in zip(e, names):
        if k == 1:
            out.append(nm)
        elif k:
            out.append(f"{nm}^{{{k}}}")
    return " ".join(out)


def latex_poly(p: Poly, names=None) -> str:
    names = names or [f"a_{{{i + 1}}}" for i in range(p.nvars)]
    if not p.terms:
        return "0"
    parts = []
    for e, c in p.items():
        mono = _latex_mono(e, names)
        cs = _latex_cyc(c)
        if mono and cs == "1":
            cs = ""
        elif mono and cs == "-1":
            cs = "-"
        parts.append(f"{cs} {mono}".strip() if mono else cs)
    s = " + ".join(parts)
    return s.replace("+ -", "- ")


def _latex_linear(q, names) -> str:
    return latex_poly(Poly.linear(list(q)), names)


def _real_imag(p: Poly):
    re_terms, im_terms = {}, {}
    for e, c in p.terms.items():
        c = CycNumber.coerce(c)
        cc = c.conjugate()
        re_terms[e] = (c + cc) * Fraction(1, 2)
        # Im c = (c - conj c) / (2i); store (c - conj c)/2 and divide by i below
        im_terms[e] = (c - cc) * Fraction(1, 2) * CycNumber.zeta(4, -1)
    return Poly(p.nvars, re_terms), Poly(p.nvars, im_terms)


def quasipoly_to_latex(qp: QuasiPolynomial) -> str:
    """Display form; conjugate poles are paired into cosine and sine terms."""
    names = [f"a_{{{i + 1}}}" for i in range(qp.n)]
    pieces = []
    done = set()
    for q, p in qp.terms.items():
        if q in done:
            continue
        done.add(q)
        if not any(q):
            pieces.append(f"\\left({latex_poly(p, names)}\\right)")
            continue
        neg = tuple(frac_part(-x) for x in q)
        if neg == q:
            # half poles: exp(-2 pi i <lam, q>) = (-1)^{<lam, 2q>}
            lin = _latex_linear(tuple(2 * x for x in q), names)
            pieces.append(f"(-1)^{{{lin}}}\\left({latex_poly(p, names)}\\right)")
            continue
        if neg in qp.terms and qp.terms[neg] == p.map_coeffs(lambda c: CycNumber.coerce(c).conjugate()):
            done.add(neg)
            re, im = _real_imag(p)
            theta = f"2\\pi\\left({_latex_linear(q, names)}\\right)"
            part = f"2\\cos\\left({theta}\\right)\\left({latex_poly(re, names)}\\right)"
            if im.terms:
                part += f" + 2\\sin\\left({theta}\\right)\\left({latex_poly(im, names)}\\right)"
            pieces.append(part)
            continue
        lin = _latex_linear(q, names)
        pieces.append(f"e^{{-2\\pi i\\left({lin}\\right)}}\\left({latex_poly(p, names)}\\right)")
    body = " + ".join(pieces) if pieces else "0"
    return f"\\iota[{qp.chamber}](a) = {body}"

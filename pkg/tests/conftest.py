import random
from fractions import Fraction

import pytest
import sympy

from singular_dq.exprio import parse_element
from singular_dq.superalgebra import GaussianRational, WeylElement


def E(src, dim=2, param=None, order=None):
    return parse_element(src, dim, order=order, param=param)


def L(src, dim=2):
    return parse_element(src, dim, param="lambda")


# -- sympy oracle for even elements ------------------------------------------

def _syms(dim, tag=""):
    return {
        k: sympy.symbols(f"{k}{tag}1:{dim + 1}") for k in ("x", "p", "y")
    }


PARAM = sympy.Symbol("t")


def to_sympy(e: WeylElement, tag=""):
    assert not e.depends_on("psi")
    s = _syms(e.dim, tag)
    n = e.dim
    out = 0
    for (exps, _, h), c in e.terms.items():
        mono = PARAM**h
        for kind, off in (("x", 0), ("p", n), ("y", 2 * n)):
            for a in range(n):
                mono *= s[kind][a] ** exps[off + a]
        out += (sympy.Rational(c.re.numerator, c.re.denominator)
                + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)) * mono
    return sympy.expand(out)


def from_sympy(expr, dim, param, shift=8):
    s = _syms(dim)
    gens = list(s["x"]) + list(s["p"]) + list(s["y"])
    expr = sympy.expand(expr * PARAM**shift)
    terms = {}
    if expr == 0:
        return WeylElement({}, dim, None, param)
    for monom, c in sympy.Poly(expr, *gens, PARAM, domain="QQ_I").terms():
        re, im = sympy.nsimplify(c).as_real_imag()
        g = GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))
        terms[(tuple(monom[:-1]), 0, monom[-1] - shift)] = g
    return WeylElement(terms, dim, None, param)


def oracle_star(kind, f: WeylElement, g: WeylElement, sign=1):
    """exp of the bidifferential operator, applied on doubled variables."""
    n = f.dim
    F = to_sympy(f)
    G = to_sympy(g, tag="t")
    a, b = _syms(n), _syms(n, "t")
    if kind == "moyal":
        unit = sign
        left, right = "x", "p"
    else:
        unit = -sympy.I * sign / 2
        left, right = "y", "p"
    term = F * G
    total = term
    k = 0
    while term != 0:
        k += 1
        nxt = 0
        for i in range(n):
            nxt += sympy.diff(term, a[left][i], b[right][i]) - sympy.diff(term, b[left][i], a[right][i])
        term = sympy.expand(nxt * unit * PARAM / k)
        total += term
    subs = {b[kk][i]: a[kk][i] for kk in ("x", "p", "y") for i in range(n)}
    return from_sympy(total.subs(subs), n, "lambda" if kind == "moyal" else "hbar")


@pytest.fixture
def rng():
    return random.Random(12345)

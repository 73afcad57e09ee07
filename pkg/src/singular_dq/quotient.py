"""Left ideals generated by base polynomials, right-factored normal forms,
normalizer residuals and the quotient product.

Everything here lives on the flat cotangent bundle with the Moyal product in
the parameter ``lambda``.  Every element has a unique expansion

    f = sum_alpha f_alpha(p, lambda) * x^alpha          (right-factored)

and in these coordinates the left ideal ``{f * phi}`` generated by x-only
``phi`` is exactly ``R[p, lambda] (x) I`` with ``I`` the commutative ideal of the
``phi``.  Reduction therefore runs coefficient-by-coefficient: each x-polynomial
attached to a fixed p-monomial and power of ``lambda`` is divided by a Groebner
basis of ``I``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
import yaml

from . import linalg
from .exprio import ParseError, format_monomial, parse_element, print_canonical
from .starproducts import Kind, StarConfig, star
from .superalgebra import GaussianRational, WeylElement, partial

__all__ = [
    "IdealSpec",
    "NormalForm",
    "Residual",
    "AnsatzSpace",
    "NotInNormalizer",
    "moyal",
    "to_normal_form",
    "reassemble",
    "reduce_mod_ideal",
    "normalizer_residual",
    "in_normalizer",
    "normalizer_solve",
    "normalizer_complete",
    "ideal_slice",
    "nf_vector",
    "quotient_multiply",
    "scalar_right_reduce",
    "load_ideal",
    "ideal_from_document",
]

NFKey = Tuple[Tuple[int, ...], Tuple[int, ...], int]  # (x exps, p exps, lambda power)


def moyal(sign: int = 1) -> StarConfig:
    return StarConfig(Kind.MOYAL_BASE, sign=sign)


class NotInNormalizer(ValueError):
    pass


# -- commutative x-polynomials -------------------------------------------

XPoly = Dict[Tuple[int, ...], GaussianRational]


def _grlex_key(var_order):
    def key(m):
        return (sum(m), tuple(m[v] for v in var_order))

    return key


def _xpoly_of(e: WeylElement) -> XPoly:
    n = e.dim
    out: XPoly = {}
    for (exps, psi, h), c in e.terms.items():
        if psi or h or any(exps[n:]):
            raise ValueError(f"ideal generator must depend on x only: {print_canonical(e)}")
        out[exps[:n]] = c
    return out


def _to_sympy(c: GaussianRational):
    return sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
        c.im.numerator, c.im.denominator
    )


def _from_sympy(c) -> GaussianRational:
    re, im = sympy.nsimplify(c).as_real_imag()
    return GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def groebner_basis(polys: Sequence[XPoly], dim: int, var_order: Sequence[int]) -> List[XPoly]:
    """Reduced grlex Groebner basis; ``var_order`` lists slots from largest."""
    gens = sympy.symbols(f"x1:{dim + 1}")
    ordered = [gens[v] for v in var_order]
    exprs = []
    complex_coeffs = False
    for p in polys:
        expr = 0
        for m, c in p.items():
            complex_coeffs |= bool(c.im)
            expr += _to_sympy(c) * sympy.Mul(*[g**k for g, k in zip(gens, m)])
        exprs.append(expr)
    opts = {"order": "grlex"}
    if complex_coeffs:
        opts["domain"] = "QQ_I"
    basis = sympy.groebner(exprs, *ordered, **opts)
    out = []
    for g in basis.exprs:
        poly = sympy.Poly(g, *gens)
        out.append({tuple(m): _from_sympy(c) for m, c in poly.terms()})
    return out


def divide(p: XPoly, divisors: Sequence[XPoly], var_order: Sequence[int]) -> XPoly:
    """Multivariate division remainder under grlex."""
    key = _grlex_key(var_order)
    leads = []
    for g in divisors:
        lm = max(g, key=key)
        leads.append((lm, g[lm], g))
    p = dict(p)
    rem: XPoly = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, lc, g in leads:
            if all(a >= b for a, b in zip(m, lm)):
                q = c / lc
                shift = tuple(a - b for a, b in zip(m, lm))
                for gm, gc in g.items():
                    t = tuple(a + b for a, b in zip(gm, shift))
                    v = p.get(t, GaussianRational(0)) - q * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    return rem


# -- ideals ---------------------------------------------------------------


class IdealSpec:
    """Generators (x-only, nonzero) of a base ideal, lifted to a left ideal.

    ``var_order`` fixes the grlex variable order as zero-based slots from the
    largest variable down; it defaults to ``x1 > x2 > ...``.
    """

    def __init__(self, dim: int, generators: Sequence[WeylElement], var_order=None, name=""):
        if not generators:
            raise ValueError("an ideal needs at least one generator")
        gens = []
        for g in generators:
            if g.dim != dim:
                raise ValueError("generator dimension mismatch")
            if g.is_zero():
                raise ValueError("zero generator")
            _xpoly_of(g)
            gens.append(g.with_param("lambda"))
        self.dim = dim
        self.generators = tuple(gens)
        self.var_order = tuple(range(dim)) if var_order is None else tuple(var_order)
        if sorted(self.var_order) != list(range(dim)):
            raise ValueError("var_order must be a permutation of the variable slots")
        self.name = name
        self._basis = None

    @classmethod
    def parse(cls, dim, sources: Iterable[str], var_order=None, name=""):
        return cls(dim, [parse_element(s, dim, param="lambda") for s in sources], var_order, name)

    @property
    def basis(self) -> List[XPoly]:
        if self._basis is None:
            self._basis = groebner_basis(
                [_xpoly_of(g) for g in self.generators], self.dim, self.var_order
            )
        return self._basis

    def reduce_xpoly(self, p: XPoly) -> XPoly:
        return divide(p, self.basis, self.var_order)

    def __repr__(self):
        gens = ", ".join(print_canonical(g) for g in self.generators)
        return f"IdealSpec(dim={self.dim}, generators=[{gens}])"


def ideal_from_document(doc) -> IdealSpec:
    if not isinstance(doc, dict) or not isinstance(doc.get("dim"), int) or doc["dim"] < 1:
        raise ValueError("ideal document needs a positive integer 'dim'")
    dim = doc["dim"]
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ValueError("ideal document needs a non-empty 'generators' list")
    var_order = doc.get("var_order")
    if var_order is not None:
        try:
            var_order = [int(str(v).lstrip("x")) - 1 for v in var_order]
        except ValueError as exc:
            raise ValueError(f"bad var_order {doc['var_order']!r}") from exc
    return IdealSpec.parse(dim, [str(g) for g in gens], var_order, str(doc.get("name", "")))


def load_ideal(path) -> IdealSpec:
    """Read ``{dim, generators: [expr, ...], var_order?: [x2, x1]}`` (YAML/JSON)."""
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    return ideal_from_document(doc)


# -- normal forms ---------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    """``sum f_alpha(p, lambda) * x^alpha`` (``side='right'``) or
    ``sum x^alpha * f_alpha`` (``side='left'``), stored flat by NFKey."""

    dim: int
    terms: Dict[NFKey, GaussianRational]
    side: str = "right"
    sign: int = 1

    @property
    def components(self) -> Dict[Tuple[int, ...], WeylElement]:
        n = self.dim
        grouped: Dict[Tuple[int, ...], dict] = {}
        for (xe, pe, h), c in self.terms.items():
            grouped.setdefault(xe, {})[((0,) * n + pe + (0,) * n, 0, h)] = c
        return {xe: WeylElement(t, n, None, "lambda") for xe, t in grouped.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def to_element(self) -> WeylElement:
        return reassemble(self)

    def __str__(self):
        if not self.terms:
            return "0"
        n = self.dim
        parts = []
        for xe in sorted(self.components, key=lambda m: (-sum(m), tuple(-v for v in m))):
            coeff = print_canonical(self.components[xe])
            xmono = format_monomial((xe + (0,) * (2 * n), 0, 0), n)
            if not xmono:
                parts.append(coeff)
                continue
            if " " in coeff:
                coeff = f"({coeff})"
            parts.append(f"{xmono} ⋆ {coeff}" if self.side == "left" else f"{coeff} ⋆ {xmono}")
        return " + ".join(parts)


def _falling(n, k):
    return factorial(n) // factorial(n - k)


def to_normal_form(f: WeylElement, side: str = "right", sign: int = 1) -> NormalForm:
    """Unique factored form with respect to the Moyal product of sign ``sign``.

    Pointwise ``p^beta x^alpha`` expands as
    ``sum_gamma t^|gamma|/gamma! (alpha)_gamma (beta)_gamma p^(beta-gamma) * x^(alpha-gamma)``
    with ``t = sign*lambda`` for right factors and ``-sign*lambda`` for left ones.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    if f.depends_on("y") or f.depends_on("psi"):
        raise ValueError("normal forms are defined for base elements (no y, psi)")
    if f.has_param() and f.param != "lambda":
        raise ValueError("normal forms use the parameter lambda")
    n = f.dim
    t = sign if side == "right" else -sign
    out: Dict[NFKey, GaussianRational] = {}
    for (exps, _, h), c in f.terms.items():
        xa, pb = exps[:n], exps[n : 2 * n]
        for gamma in itertools.product(*[range(min(a, b) + 1) for a, b in zip(xa, pb)]):
            w = Fraction(1)
            for a, b, g in zip(xa, pb, gamma):
                w *= Fraction(_falling(a, g) * _falling(b, g), factorial(g))
            k = sum(gamma)
            if t < 0 and k % 2:
                w = -w
            key = (
                tuple(a - g for a, g in zip(xa, gamma)),
                tuple(b - g for b, g in zip(pb, gamma)),
                h + k,
            )
            v = out.get(key)
            v = c * w if v is None else v + c * w
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return NormalForm(n, out, side, sign)


def _monomial(dim, xe=None, pe=None, h=0) -> WeylElement:
    xe = xe or (0,) * dim
    pe = pe or (0,) * dim
    return WeylElement({(tuple(xe) + tuple(pe) + (0,) * dim, 0, h): 1}, dim, None, "lambda")


def reassemble(nf: NormalForm) -> WeylElement:
    """Multiply the factored form back out with the Moyal product."""
    cfg = moyal(nf.sign)
    total = WeylElement.zero(nf.dim, None, "lambda")
    for xe, comp in nf.components.items():
        xm = _monomial(nf.dim, xe)
        total = total + (star(cfg, comp, xm) if nf.side == "right" else star(cfg, xm, comp))
    return total


def nf_vector(f: WeylElement, side="right", sign=1) -> Dict[NFKey, GaussianRational]:
    return dict(to_normal_form(f, side, sign).terms)


# -- reduction ------------------------------------------------------------


@dataclass(frozen=True)
class Residual:
    value: NormalForm
    is_zero: bool

    def __str__(self):
        return str(self.value)


def _reduce_terms(terms: Dict[NFKey, GaussianRational], ideal: IdealSpec):
    buckets: Dict[tuple, XPoly] = {}
    for (xe, pe, h), c in terms.items():
        buckets.setdefault((pe, h), {})[xe] = c
    out = {}
    for (pe, h), poly in buckets.items():
        for xe, c in ideal.reduce_xpoly(poly).items():
            out[(xe, pe, h)] = c
    return out


def reduce_mod_ideal(nf: NormalForm, ideal: IdealSpec) -> Residual:
    """Remainder of a normal form modulo the lifted ideal (left ideal for
    right-factored forms, right ideal for left-factored ones)."""
    if nf.dim != ideal.dim:
        raise ValueError("dimension mismatch between element and ideal")
    out = _reduce_terms(nf.terms, ideal)
    return Residual(NormalForm(nf.dim, out, nf.side, nf.sign), not out)


def _check_base(g: WeylElement):
    if g.depends_on("y") or g.depends_on("psi"):
        raise ValueError("expected a base element (no y, psi)")
    if g.has_param() and g.param != "lambda":
        raise ValueError("expected lambda as deformation parameter")
    return g.with_param("lambda")


def normalizer_residual(ideal: IdealSpec, g: WeylElement, side="left", sign=1) -> List[Residual]:
    """One residual per generator.

    ``side='left'``: ``phi * g`` modulo the left ideal ``{f * phi}``.
    ``side='right'``: ``g * phi`` modulo the right ideal ``{phi * f}``.
    """
    g = _check_base(g)
    cfg = moyal(sign)
    out = []
    for phi in ideal.generators:
        if side == "left":
            nf = to_normal_form(star(cfg, phi, g), "right", sign)
        elif side == "right":
            nf = to_normal_form(star(cfg, g, phi), "left", sign)
        else:
            raise ValueError("side must be 'left' or 'right'")
        out.append(reduce_mod_ideal(nf, ideal))
    return out


def in_normalizer(ideal: IdealSpec, g: WeylElement, side="left", sign=1) -> bool:
    return all(r.is_zero for r in normalizer_residual(ideal, g, side, sign))


# -- ansatz spaces and linear solves --------------------------------------


@dataclass(frozen=True)
class AnsatzSpace:
    """Finite box of factored monomials ``lambda^k p^beta * x^alpha`` with
    ``|alpha| + |beta| <= max_degree`` and ``|k| <= lambda_degree_cap``."""

    dim: int
    max_degree: int
    lambda_degree_cap: int
    basis: Tuple[NFKey, ...] = field(default=())

    @classmethod
    def box(cls, dim, max_degree, lambda_degree_cap=0, x_slots=None, p_slots=None):
        x_slots = range(dim) if x_slots is None else x_slots
        p_slots = range(dim) if p_slots is None else p_slots
        keys = []
        mons = []
        for total in range(max_degree + 1):
            for e in _compositions(total, 2 * dim):
                xe, pe = e[:dim], e[dim:]
                if any(xe[i] for i in range(dim) if i not in x_slots):
                    continue
                if any(pe[i] for i in range(dim) if i not in p_slots):
                    continue
                mons.append((xe, pe))
        for k in range(-lambda_degree_cap, lambda_degree_cap + 1):
            keys.extend((xe, pe, k) for xe, pe in mons)
        return cls(dim, max_degree, lambda_degree_cap, tuple(keys))

    def __len__(self):
        return len(self.basis)

    def element(self, key: NFKey) -> WeylElement:
        return reassemble(NormalForm(self.dim, {key: GaussianRational(1)}))

    def combine(self, coeffs: Dict[int, GaussianRational]) -> WeylElement:
        nf = NormalForm(self.dim, {self.basis[j]: c for j, c in coeffs.items() if c})
        return reassemble(nf)

    def vector(self, coeffs: Dict[int, GaussianRational]) -> Dict[NFKey, GaussianRational]:
        return {self.basis[j]: c for j, c in coeffs.items() if c}


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _shift(vec, k):
    return {(xe, pe, h + k): c for (xe, pe, h), c in vec.items()}


def _residual_columns(ideal: IdealSpec, ansatz: AnsatzSpace, sign=1):
    cache = {}
    cols = []
    for xe, pe, k in ansatz.basis:
        base = cache.get((xe, pe))
        if base is None:
            g = ansatz.element((xe, pe, 0))
            base = {}
            for i, r in enumerate(normalizer_residual(ideal, g, "left", sign)):
                for key, c in r.value.terms.items():
                    base[(i, key)] = c
            cache[(xe, pe)] = base
        cols.append({(i, (xe2, pe2, h + k)): c for (i, (xe2, pe2, h)), c in base.items()})
    return cols


def normalizer_solve_vectors(ideal: IdealSpec, ansatz: AnsatzSpace, sign=1):
    """Null-space basis of the residual map, as normal-form coordinate vectors."""
    if ansatz.dim != ideal.dim:
        raise ValueError("dimension mismatch between ansatz and ideal")
    combos = linalg.nullspace(_residual_columns(ideal, ansatz, sign))
    return [ansatz.vector(c) for c in combos]


def normalizer_solve(ideal: IdealSpec, ansatz: AnsatzSpace, sign=1) -> List[WeylElement]:
    """Exact basis of the normalizer inside the ansatz box."""
    return [
        reassemble(NormalForm(ideal.dim, v)) for v in normalizer_solve_vectors(ideal, ansatz, sign)
    ]


def normalizer_complete(ideal: IdealSpec, fixed: WeylElement, ansatz: AnsatzSpace, sign=1):
    """An ansatz element ``u`` with ``fixed + u`` in the normalizer, or ``None``."""
    target = {}
    for i, r in enumerate(normalizer_residual(ideal, fixed, "left", sign)):
        for key, c in r.value.terms.items():
            target[(i, key)] = -c
    sol = linalg.solve(_residual_columns(ideal, ansatz, sign), target)
    if sol is None:
        return None
    return ansatz.combine(sol)


def ideal_slice(ideal: IdealSpec, ansatz: AnsatzSpace):
    """Basis (coordinate vectors) of the ansatz box intersected with the ideal."""
    cols = []
    for key in ansatz.basis:
        cols.append(_reduce_terms({key: GaussianRational(1)}, ideal))
    return [ansatz.vector(c) for c in linalg.nullspace(cols)]


# -- quotient algebra -----------------------------------------------------


def quotient_multiply(ideal: IdealSpec, g: WeylElement, h: WeylElement, check=True) -> Residual:
    """Class of ``g * h`` modulo the left ideal, for normalizer elements."""
    g, h = _check_base(g), _check_base(h)
    if check:
        for name, e in (("left", g), ("right", h)):
            if not in_normalizer(ideal, e):
                raise NotInNormalizer(f"{name} operand is not in the normalizer: {print_canonical(e)}")
    return reduce_mod_ideal(to_normal_form(star(moyal(), g, h)), ideal)


def scalar_right_reduce(A: WeylElement, B: WeylElement, var: int = 1) -> WeylElement:
    """``sum_n (2 lambda)^n A_n B^(n)`` for ``A = sum A_n * x^n``, i.e. ``A * B``
    modulo the left ideal generated by ``x = x<var>``; ``B`` depends on ``p`` only."""
    A, B = _check_base(A), _check_base(B)
    n = A.dim
    if B.depends_on("x"):
        raise ValueError("B must not depend on x")
    slot = var - 1
    nf = to_normal_form(A)
    for xe in nf.components:
        if any(e for i, e in enumerate(xe) if i != slot):
            raise ValueError(f"A involves base variables other than x{var}")
    total = WeylElement.zero(n, None, "lambda")
    for xe, comp in nf.components.items():
        k = xe[slot]
        deriv = B
        for _ in range(k):
            deriv = partial(deriv, f"p{var}")
        total = total + (comp * deriv).scale(GaussianRational(2) ** k, k)
    return total

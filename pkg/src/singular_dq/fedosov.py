"""The modified Fedosov construction on a cotangent bundle.

Operators on the auxiliary super-algebra in (x, p, y, psi):

* ``delta      = psi^a d/dy^a``
* ``delta_star = y^a d/dpsi^a``
* ``delta_inv``  -- ``delta_star / (p + q)`` on (y-degree p, psi-degree q) pieces
* ``d_op       = psi^a d/dx^a``
* ``nabla``      -- ``psi^a (d/dx^a + G^c_ab p_c d/dp_b - G^c_ab y^b d/dy^c)``

``gamma_recursion`` solves for the odd correction ``gamma`` making
``D = nabla - delta + (i/hbar)[gamma, .]`` flat; ``flat_lift`` builds the flat
section over a base function and ``base_star`` is the induced product.

Truncation is by Fedosov degree (``deg y = 1``, ``deg hbar = 2``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

import yaml

from .exprio import ParseError, parse_element, print_canonical
from .starproducts import Kind, StarConfig, commutator, star
from .superalgebra import (
    GaussianRational,
    WeylElement,
    grade_split,
    partial,
    restrict_00,
)

__all__ = [
    "ConnectionData",
    "CurvatureTensor",
    "GammaSeries",
    "FlatSection",
    "load_connection",
    "curvature",
    "curvature_section",
    "christoffel_section",
    "delta",
    "delta_star",
    "delta_inv",
    "d_op",
    "nabla",
    "i_over_hbar",
    "gamma_recursion",
    "flatness_residual",
    "flat_lift",
    "d_residual",
    "base_star",
    "gamma_leading_terms",
    "lift_leading_terms",
]


@dataclass(frozen=True)
class ConnectionData:
    """Torsion-free Christoffel symbols ``G^c_ab`` as x-polynomials.

    ``christoffel`` maps zero-based ``(c, a, b)`` to an element; both
    ``(c, a, b)`` and ``(c, b, a)`` are present.
    """

    dim: int
    christoffel: Mapping[Tuple[int, int, int], WeylElement] = field(default_factory=dict)

    def __post_init__(self):
        for (c, a, b), poly in self.christoffel.items():
            if not all(0 <= i < self.dim for i in (c, a, b)):
                raise ValueError(f"Christoffel index {(c, a, b)} outside dimension {self.dim}")
            if poly.dim != self.dim:
                raise ValueError("Christoffel entry has the wrong dimension")
            if any(poly.depends_on(k) for k in ("p", "y", "psi")) or poly.has_param():
                raise ValueError("Christoffel entries must be polynomials in x only")
            if self.christoffel.get((c, b, a)) != poly:
                raise ValueError(f"connection has torsion at G^{c + 1}_{a + 1}{b + 1}")

    @classmethod
    def from_entries(cls, dim: int, entries: Mapping[Tuple[int, int, int], WeylElement]):
        """Complete symmetric entries; conflicting duplicates are rejected."""
        full: Dict[Tuple[int, int, int], WeylElement] = {}
        for (c, a, b), poly in entries.items():
            poly = poly.untruncated()
            for key in ((c, a, b), (c, b, a)):
                prev = full.get(key)
                if prev is not None and prev != poly:
                    raise ValueError(f"conflicting entries for G^{c + 1}_{a + 1}{b + 1}")
                full[key] = poly
        full = {k: v for k, v in full.items() if not v.is_zero()}
        return cls(dim, full)

    @classmethod
    def flat(cls, dim: int):
        return cls(dim, {})

    def gamma(self, c, a, b) -> WeylElement:
        return self.christoffel.get((c, a, b)) or WeylElement.zero(self.dim)

    def is_flat_coordinates(self) -> bool:
        return not self.christoffel


def load_connection(path) -> ConnectionData:
    """Read a connection document (JSON or YAML).

    ``{"dim": n, "christoffel": [{"upper": c, "lower": [a, b], "poly": "..."}]}``
    with 1-based indices; omitted entries are zero.
    """
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    return connection_from_document(doc)


def connection_from_document(doc) -> ConnectionData:
    if not isinstance(doc, dict) or "dim" not in doc:
        raise ValueError("connection document needs an integer 'dim'")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValueError("'dim' must be a positive integer")
    entries = {}
    for n, rec in enumerate(doc.get("christoffel") or []):
        try:
            c = int(rec["upper"]) - 1
            a, b = (int(v) - 1 for v in rec["lower"])
            src = str(rec["poly"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed christoffel record #{n}: {rec!r}") from exc
        poly = parse_element(src, dim)
        key = (c, a, b)
        if key in entries and entries[key] != poly:
            raise ValueError(f"duplicate christoffel record for G^{c + 1}_{a + 1}{b + 1}")
        entries[key] = poly
    return ConnectionData.from_entries(dim, entries)


@dataclass(frozen=True)
class CurvatureTensor:
    """``R^d_abc`` keyed by zero-based ``(d, a, b, c)``; zero entries omitted."""

    dim: int
    entries: Mapping[Tuple[int, int, int, int], WeylElement]

    def __getitem__(self, key) -> WeylElement:
        return self.entries.get(key) or WeylElement.zero(self.dim)

    def is_zero(self) -> bool:
        return not self.entries


def curvature(conn: ConnectionData) -> CurvatureTensor:
    """``R^i_jkl = d_k G^i_jl - d_l G^i_jk + G^i_mk G^m_jl - G^i_ml G^m_jk``."""
    n = conn.dim
    G = conn.gamma
    entries = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    r = partial(G(i, j, l), f"x{k + 1}") - partial(G(i, j, k), f"x{l + 1}")
                    for m in range(n):
                        r = r + G(i, m, k) * G(m, j, l) - G(i, m, l) * G(m, j, k)
                    if not r.is_zero():
                        entries[(i, j, k, l)] = r
    return CurvatureTensor(n, entries)


def _var(name, dim):
    return WeylElement.variable(name, dim)


def curvature_section(conn: ConnectionData, curv: Optional[CurvatureTensor] = None) -> WeylElement:
    """``R = 1/2 psi^b psi^c R^d_abc p_d y^a``."""
    n = conn.dim
    curv = curv or curvature(conn)
    out = WeylElement.zero(n)
    for (d, a, b, c), r in curv.entries.items():
        mono = _var(f"psi{b + 1}", n) * _var(f"psi{c + 1}", n) * _var(f"p{d + 1}", n) * _var(f"y{a + 1}", n)
        out = out + r * mono
    return out.scale(Fraction(1, 2))


def christoffel_section(conn: ConnectionData) -> WeylElement:
    """``G^c_ab y^b p_c psi^a`` -- the odd element with ``nabla = d + (i/hbar)[G, .]``."""
    n = conn.dim
    out = WeylElement.zero(n)
    for (c, a, b), g in conn.christoffel.items():
        out = out + g * _var(f"y{b + 1}", n) * _var(f"p{c + 1}", n) * _var(f"psi{a + 1}", n)
    return out


# -- the delta calculus --------------------------------------------------


def delta(a: WeylElement) -> WeylElement:
    out = WeylElement.zero(a.dim, a.order, a.param)
    for s in range(a.dim):
        d = partial(a, f"y{s + 1}")
        if d:
            out = out + _var(f"psi{s + 1}", a.dim) * d
    return out


def delta_star(a: WeylElement) -> WeylElement:
    order = None if a.order is None else a.order + 1
    out = WeylElement.zero(a.dim, order, a.param)
    for s in range(a.dim):
        d = partial(a.untruncated(), f"psi{s + 1}")
        if d:
            out = out + _var(f"y{s + 1}", a.dim) * d
    return out


def delta_inv(a: WeylElement) -> WeylElement:
    """``delta_star / (p + q)`` on each homogeneous piece; the (0, 0) piece maps to 0."""
    out = WeylElement.zero(a.dim, None, a.param)
    for grading, piece in grade_split(a).items():
        total = grading.y_degree + grading.psi_degree
        if total:
            out = out + delta_star(piece).scale(Fraction(1, total))
    # raises y-degree by one, so the known range grows by one as well
    return out.with_order(a.order + 1) if a.order is not None else out


def d_op(a: WeylElement) -> WeylElement:
    out = WeylElement.zero(a.dim, a.order, a.param)
    for s in range(a.dim):
        d = partial(a, f"x{s + 1}")
        if d:
            out = out + _var(f"psi{s + 1}", a.dim) * d
    return out


def nabla(conn: ConnectionData, a: WeylElement) -> WeylElement:
    """Covariant psi-valued derivative of the torsion-free connection."""
    n = a.dim
    if conn.dim != n:
        raise ValueError("connection and element dimensions differ")
    out = WeylElement.zero(n, a.order, a.param)
    dp = [partial(a, f"p{b + 1}") for b in range(n)]
    dy = [partial(a, f"y{c + 1}") for c in range(n)]
    for s in range(n):
        inner = partial(a, f"x{s + 1}")
        for b in range(n):
            for c in range(n):
                g = conn.christoffel.get((c, s, b))
                if g is None:
                    continue
                if dp[b]:
                    inner = inner + g * _var(f"p{c + 1}", n) * dp[b]
                if dy[c]:
                    inner = inner - g * _var(f"y{b + 1}", n) * dy[c]
        if inner:
            out = out + _var(f"psi{s + 1}", n) * inner
    return out


def i_over_hbar(a: WeylElement, sign: int = 1) -> WeylElement:
    """Multiply by ``i / (sign * hbar)``."""
    return a.untruncated().scale(GaussianRational(0, sign), -1)


def _weyl(sign):
    return StarConfig(Kind.WEYL_FIBERWISE, sign=sign)


def _bracket_term(gamma: WeylElement, a: WeylElement, order: int, sign: int) -> WeylElement:
    """``(i/hbar)[gamma, a]`` correct through Fedosov degree ``order``."""
    br = commutator(_weyl(sign), gamma.untruncated(), a.untruncated(), max_degree=order + 2)
    return i_over_hbar(br, sign).truncate(order)


# -- gamma ---------------------------------------------------------------


@dataclass(frozen=True)
class GammaSeries:
    value: WeylElement
    order: int
    sign: int = 1


def gamma_recursion(conn: ConnectionData, order: int, sign: int = 1) -> GammaSeries:
    """Fixed point of ``gamma = delta_inv(R) + delta_inv(nabla gamma + (i/hbar) gamma*gamma)``.

    Each pass fixes one more Fedosov degree, so ``order`` passes suffice.
    """
    if order < 2:
        raise ValueError("gamma recursion needs order >= 2")
    R = curvature_section(conn)
    seed = delta_inv(R).truncate(order)
    g = seed
    for _ in range(order):
        sq = star(_weyl(sign), g.untruncated(), g.untruncated(), max_degree=order + 1)
        rhs = nabla(conn, g).truncate(order - 1) + i_over_hbar(sq, sign).truncate(order - 1)
        new = (seed + delta_inv(rhs)).truncate(order)
        if new == g:
            break
        g = new
    return GammaSeries(g.with_order(order), order, sign)


def flatness_residual(conn: ConnectionData, gamma: GammaSeries) -> WeylElement:
    """``delta gamma - R - nabla gamma - (i/hbar) gamma*gamma`` through degree
    ``gamma.order - 1`` (the part fully determined by ``gamma``)."""
    top = gamma.order - 1
    g = gamma.value.untruncated()
    R = curvature_section(conn)
    sq = star(_weyl(gamma.sign), g, g, max_degree=top + 2)
    res = delta(g) - R - nabla(conn, g) - i_over_hbar(sq, gamma.sign)
    return res.truncate(top)


# -- flat sections -------------------------------------------------------


@dataclass(frozen=True)
class FlatSection:
    value: WeylElement
    base: WeylElement
    order: int


def flat_lift(
    conn: ConnectionData,
    gamma: GammaSeries,
    a00: WeylElement,
    order: Optional[int] = None,
) -> FlatSection:
    """Solve ``a = a00 + delta_inv(nabla a + (i/hbar)[gamma, a])`` to ``order``."""
    if a00.depends_on("y") or a00.depends_on("psi"):
        raise ValueError("flat_lift expects a base element (no y, psi)")
    if a00.has_param() and a00.param != "hbar":
        raise ValueError("flat_lift expects hbar coefficients")
    order = gamma.order if order is None else order
    base = a00.untruncated().with_param("hbar").truncate(order)
    a = base
    for _ in range(order + 1):
        rhs = nabla(conn, a).truncate(order - 1) + _bracket_term(gamma.value, a, order - 1, gamma.sign)
        new = (base + delta_inv(rhs)).truncate(order)
        if new == a:
            break
        a = new
    return FlatSection(a.with_order(order), base, order)


def d_residual(conn: ConnectionData, gamma: GammaSeries, section: FlatSection) -> WeylElement:
    """``delta a - nabla a - (i/hbar)[gamma, a]`` through degree ``order - 1``."""
    top = section.order - 1
    a = section.value.untruncated()
    res = delta(a) - nabla(conn, a) - _bracket_term(gamma.value, a, top, gamma.sign)
    return res.truncate(top)


def base_star(
    conn: ConnectionData,
    gamma: GammaSeries,
    f00: WeylElement,
    g00: WeylElement,
    order: Optional[int] = None,
) -> WeylElement:
    """``f00 *' g00`` = restriction to ``y = psi = 0`` of the product of flat lifts."""
    order = gamma.order if order is None else order
    f = flat_lift(conn, gamma, f00, order).value.untruncated()
    g = flat_lift(conn, gamma, g00, order).value.untruncated()
    prod = star(_weyl(gamma.sign), f, g, max_degree=order)
    return restrict_00(prod).truncate(order)


# -- leading terms in closed form ----------------------------------------


def gamma_leading_terms(conn: ConnectionData) -> Tuple[WeylElement, WeylElement]:
    """The two leading terms of gamma in closed form:
    ``1/3 R^d_abc y^a y^b psi^c p_d`` and ``1/12 d_l R^d_abc y^l y^a y^b psi^c p_d``
    (``d_l`` the plain coordinate derivative)."""
    n = conn.dim
    curv = curvature(conn)
    first = WeylElement.zero(n)
    second = WeylElement.zero(n)
    for (d, a, b, c), r in curv.entries.items():
        mono = _var(f"y{a + 1}", n) * _var(f"y{b + 1}", n) * _var(f"psi{c + 1}", n) * _var(f"p{d + 1}", n)
        first = first + r * mono
        for l in range(n):
            dr = partial(r, f"x{l + 1}")
            if dr:
                second = second + dr * _var(f"y{l + 1}", n) * mono
    return first.scale(Fraction(1, 3)), second.scale(Fraction(1, 12))


def lift_leading_terms(conn: ConnectionData, a00: WeylElement, coefficient=Fraction(-1, 12)):
    """Closed form of the flat lift through y-degree 2:

    ``a00 + y^i X_i a00 + 1/2 y^i y^j (X_i X_j - G^k_ij X_k) a00
    + coefficient * R^d_abc y^a y^b p_d da00/dp_c``

    where ``X_i`` is the component operator of ``nabla``.  Returns the whole
    expression and the curvature term alone.
    """
    n = conn.dim
    a00 = a00.untruncated().with_param("hbar")

    def X(s, e):
        out = partial(e, f"x{s + 1}")
        for b in range(n):
            db = partial(e, f"p{b + 1}")
            if not db:
                continue
            for c in range(n):
                g = conn.christoffel.get((c, s, b))
                if g is not None:
                    out = out + g * _var(f"p{c + 1}", n) * db
        return out

    y = [_var(f"y{s + 1}", n) for s in range(n)]
    first = [X(s, a00) for s in range(n)]
    total = a00
    for i in range(n):
        total = total + y[i] * first[i]
    half = WeylElement.zero(n)
    for i in range(n):
        for j in range(n):
            hess = X(i, first[j])
            for k in range(n):
                g = conn.christoffel.get((k, i, j))
                if g is not None:
                    hess = hess - g * first[k]
            half = half + y[i] * y[j] * hess
    total = total + half.scale(Fraction(1, 2))
    curv = curvature(conn)
    rterm = WeylElement.zero(n)
    for (d, a, b, c), r in curv.entries.items():
        dp = partial(a00, f"p{c + 1}")
        if dp:
            rterm = rterm + r * y[a] * y[b] * _var(f"p{d + 1}", n) * dp
    rterm = rterm.scale(coefficient)
    return total + rterm, rterm

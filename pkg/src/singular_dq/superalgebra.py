"""Exact graded super-polynomials in (x, p, y, psi) over the Gaussian rationals.

A term is keyed by ``(exps, psi, h)``:

* ``exps`` -- tuple of ``3*dim`` naturals, the exponents of
  ``x1..xn, p1..pn, y1..yn`` in that order;
* ``psi`` -- bitmask of the odd variables present (slot ``a`` is bit ``a``),
  stored in ascending slot order;
* ``h`` -- integer power of the deformation parameter (``hbar`` or ``lambda``).

Values are Gaussian rationals.  Elements are immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Tuple

__all__ = [
    "GaussianRational",
    "I",
    "Var",
    "WeylElement",
    "Grading",
    "parse_var",
    "superproduct",
    "partial",
    "restrict_00",
    "grade_split",
    "koszul_sign",
]


class GaussianRational:
    """Exact element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(value, 0)

    def __add__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if type(other) is GaussianRational:
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational(a * c, b)
            return GaussianRational(a * c - b * d, a * d + b * c)
        other = _as_gauss(other)
        if other is NotImplemented:
            return other
        return self * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return other
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(other.re / norm, -other.im / norm)

    def __rtruediv__(self, other):
        return _as_gauss(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / (self ** -n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _as_gauss(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "-" if self.im < 0 else "+"
        return f"({self.re} {sign} {abs(self.im)}*i)"


def _as_gauss(value):
    if type(value) is GaussianRational:
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value, 0)
    if isinstance(value, complex):
        return GaussianRational(Fraction(value.real), Fraction(value.imag))
    return NotImplemented


I = GaussianRational(0, 1)
ZERO = GaussianRational(0)
ONE = GaussianRational(1)

KINDS = ("x", "p", "y", "psi")
PARAMS = ("hbar", "lambda")


class Var(NamedTuple):
    """A variable: ``kind`` in {x, p, y, psi} and a zero-based slot."""

    kind: str
    slot: int

    def __str__(self):
        return f"{self.kind}{self.slot + 1}"


_VAR_RE = re.compile(r"^(psi|x|p|y)([1-9][0-9]*)$")


def parse_var(name, dim: Optional[int] = None) -> Var:
    """Turn ``"x1"``/``"psi2"`` (or a ``Var``) into a ``Var``."""
    if isinstance(name, Var):
        var = name
    else:
        m = _VAR_RE.match(str(name))
        if not m:
            raise ValueError(f"unknown variable id {name!r}")
        var = Var(m.group(1), int(m.group(2)) - 1)
    if var.kind not in KINDS or var.slot < 0:
        raise ValueError(f"unknown variable id {name!r}")
    if dim is not None and var.slot >= dim:
        raise ValueError(f"variable {var} exceeds dimension {dim}")
    return var


@lru_cache(maxsize=None)
def koszul_sign(left: int, right: int) -> int:
    """Sign of reordering the psi factors of ``left`` followed by ``right``
    into ascending order.  Returns 0 if they share a slot."""
    if left & right:
        return 0
    swaps = 0
    r = right
    while r:
        low = r & -r
        swaps += bin(left & ~((low << 1) - 1)).count("1")
        r ^= low
    return -1 if swaps & 1 else 1


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


class Grading(NamedTuple):
    y_degree: int
    psi_degree: int


Key = Tuple[Tuple[int, ...], int, int]


class WeylElement:
    """Sparse element of the super-polynomial ring, truncated by Fedosov degree.

    ``order`` is the truncation order (``None`` for no truncation): every term
    satisfies ``y_degree + 2*max(0, h) <= order``.  ``floor`` is the lowest
    admissible parameter power; it defaults to ``-2*order``.
    """

    __slots__ = ("terms", "dim", "order", "param", "floor")

    def __init__(
        self,
        terms: Optional[Mapping[Key, object]] = None,
        dim: int = 1,
        order: Optional[int] = None,
        param: str = "hbar",
        floor: Optional[int] = None,
        _trusted: bool = False,
    ):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        if param not in PARAMS:
            raise ValueError(f"unknown deformation parameter {param!r}")
        if floor is None and order is not None:
            floor = -2 * order
        self.dim = dim
        self.order = order
        self.param = param
        self.floor = floor
        if _trusted:
            self.terms = terms
            return
        clean: Dict[Key, GaussianRational] = {}
        for key, coeff in (terms or {}).items():
            exps, psi, h = key
            if len(exps) != 3 * dim:
                raise ValueError("exponent vector does not match dimension")
            if psi >> dim:
                raise ValueError("psi slot exceeds dimension")
            c = GaussianRational.coerce(coeff)
            if not c:
                continue
            if order is not None and _fedosov_degree(exps, h, dim) > order:
                continue
            if floor is not None and h < floor:
                raise ValueError(f"parameter power {h} below Laurent floor {floor}")
            key = (tuple(exps), psi, h)
            prev = clean.get(key)
            c = c if prev is None else prev + c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def _from_dict(cls, terms, dim, order, param, floor=None):
        """Build from an accumulated dict, dropping zeros and applying order."""
        if floor is None and order is not None:
            floor = -2 * order
        clean = {}
        for key, c in terms.items():
            if not c:
                continue
            if order is not None and _fedosov_degree(key[0], key[2], dim) > order:
                continue
            if floor is not None and key[2] < floor:
                raise ValueError(f"parameter power {key[2]} below Laurent floor {floor}")
            clean[key] = c
        return cls(clean, dim, order, param, floor, _trusted=True)

    @classmethod
    def zero(cls, dim, order=None, param="hbar"):
        return cls({}, dim, order, param)

    @classmethod
    def const(cls, value, dim, order=None, param="hbar", h=0):
        return cls({((0,) * (3 * dim), 0, h): value}, dim, order, param)

    @classmethod
    def variable(cls, name, dim, order=None, param="hbar"):
        var = parse_var(name, dim)
        exps = [0] * (3 * dim)
        psi = 0
        if var.kind == "psi":
            psi = 1 << var.slot
        else:
            exps[KINDS.index(var.kind) * dim + var.slot] = 1
        return cls({(tuple(exps), psi, 0): 1}, dim, order, param)

    @classmethod
    def parameter(cls, dim, power=1, param="hbar", order=None):
        return cls.const(1, dim, order, param, h=power)

    def with_order(self, order):
        return WeylElement._from_dict(self.terms, self.dim, order, self.param)

    def untruncated(self):
        return WeylElement(self.terms, self.dim, None, self.param, self.floor, _trusted=True)

    def with_param(self, param):
        return WeylElement(self.terms, self.dim, self.order, param, self.floor, _trusted=True)

    # inspection ---------------------------------------------------------
    def __iter__(self) -> Iterator[Tuple[Key, GaussianRational]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def has_param(self) -> bool:
        return any(h for (_, _, h) in self.terms)

    def depends_on(self, kind: str) -> bool:
        n = self.dim
        if kind == "psi":
            return any(psi for (_, psi, _) in self.terms)
        k = KINDS.index(kind)
        return any(any(exps[k * n:(k + 1) * n]) for (exps, _, _) in self.terms)

    def parity(self) -> Optional[int]:
        """0 or 1 when homogeneous in psi-parity, ``None`` when mixed."""
        parities = {_popcount(psi) & 1 for (_, psi, _) in self.terms}
        if len(parities) > 1:
            return None
        return parities.pop() if parities else 0

    def parity_split(self):
        even, odd = {}, {}
        for key, c in self.terms.items():
            (odd if _popcount(key[1]) & 1 else even)[key] = c
        return self._same(even), self._same(odd)

    def fedosov_degree(self) -> int:
        return max((_fedosov_degree(e, h, self.dim) for (e, _, h) in self.terms), default=0)

    def truncate(self, order):
        if order is None:
            return self
        keep = {k: c for k, c in self.terms.items() if _fedosov_degree(k[0], k[2], self.dim) <= order}
        new_order = order if self.order is None else min(order, self.order)
        return WeylElement(keep, self.dim, new_order, self.param, self.floor, _trusted=True)

    def coefficient(self, key) -> GaussianRational:
        return self.terms.get(key, ZERO)

    def select(self, predicate):
        """Sub-sum of the terms whose key satisfies ``predicate``."""
        return self._same({k: c for k, c in self.terms.items() if predicate(k)})

    def _same(self, terms):
        return WeylElement(terms, self.dim, self.order, self.param, self.floor, _trusted=True)

    # arithmetic ---------------------------------------------------------
    def _combine_meta(self, other):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.param != other.param:
            if self.has_param() and other.has_param():
                raise ValueError("cannot mix hbar and lambda elements")
            param = self.param if self.has_param() else other.param
        else:
            param = self.param
        order = _min_order(self.order, other.order)
        floor = _max_floor(self.floor, other.floor)
        return order, param, floor

    def _lift(self, other):
        if isinstance(other, WeylElement):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, complex)):
            return WeylElement.const(other, self.dim, self.order, self.param)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        order, param, floor = self._combine_meta(other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            prev = acc.get(key)
            acc[key] = c if prev is None else prev + c
        return WeylElement._from_dict(acc, self.dim, order, param, floor)

    __radd__ = __add__

    def __neg__(self):
        return self._same({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor, h_shift: int = 0):
        """Multiply by ``factor * param**h_shift``."""
        factor = GaussianRational.coerce(factor)
        if not factor:
            return WeylElement({}, self.dim, self.order, self.param, self.floor, _trusted=True)
        terms = {(e, psi, h + h_shift): c * factor for (e, psi, h), c in self.terms.items()}
        return WeylElement._from_dict(terms, self.dim, self.order, self.param, self.floor)

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return superproduct(self, other)
        if isinstance(other, (int, Fraction, GaussianRational, complex)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, complex)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, complex)):
            return self.scale(1 / GaussianRational.coerce(other))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of an element")
        out = WeylElement.const(1, self.dim, self.order, self.param)
        for _ in range(n):
            out = out * self
        return out

    def map_param(self, factor):
        """Substitute ``param -> factor * param`` (``factor`` in Q(i))."""
        factor = GaussianRational.coerce(factor)
        return self._same({k: c * factor ** k[2] for k, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, complex)):
            other = self._lift(other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        if self.dim != other.dim or self.terms != other.terms:
            return False
        return not self.has_param() or self.param == other.param

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        from .exprio import print_canonical

        return f"WeylElement({print_canonical(self)!r}, dim={self.dim})"

    def __str__(self):
        from .exprio import print_canonical

        return print_canonical(self)


def _fedosov_degree(exps, h, dim) -> int:
    return sum(exps[2 * dim:]) + 2 * max(0, h)


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _max_floor(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def superproduct(a: WeylElement, b: WeylElement) -> WeylElement:
    """Supercommutative product; odd variables anticommute."""
    order, param, floor = a._combine_meta(b)
    acc: Dict[Key, GaussianRational] = {}
    for (ea, pa, ha), ca in a.terms.items():
        for (eb, pb, hb), cb in b.terms.items():
            sign = koszul_sign(pa, pb)
            if not sign:
                continue
            key = (tuple(i + j for i, j in zip(ea, eb)), pa | pb, ha + hb)
            c = ca * cb
            if sign < 0:
                c = -c
            prev = acc.get(key)
            acc[key] = c if prev is None else prev + c
    return WeylElement._from_dict(acc, a.dim, order, param, floor)


def partial(a: WeylElement, var) -> WeylElement:
    """Derivative in one variable; left super-derivative for ``psi``."""
    var = parse_var(var, a.dim)
    acc: Dict[Key, GaussianRational] = {}
    if var.kind == "psi":
        bit = 1 << var.slot
        below = bit - 1
        for (e, psi, h), c in a.terms.items():
            if psi & bit:
                if _popcount(psi & below) & 1:
                    c = -c
                acc[(e, psi ^ bit, h)] = c
    else:
        idx = KINDS.index(var.kind) * a.dim + var.slot
        for (e, psi, h), c in a.terms.items():
            n = e[idx]
            if n:
                e2 = list(e)
                e2[idx] = n - 1
                acc[(tuple(e2), psi, h)] = c * n
    return a._same(acc)


def restrict_00(a: WeylElement) -> WeylElement:
    """Set ``y = 0`` and ``psi = 0``."""
    n = a.dim
    return a.select(lambda k: k[1] == 0 and not any(k[0][2 * n:]))


def grading_of(key, dim) -> Grading:
    return Grading(sum(key[0][2 * dim:]), _popcount(key[1]))


def grade_split(a: WeylElement) -> Dict[Grading, WeylElement]:
    """Partition ``a`` into pieces homogeneous in (y-degree, psi-degree)."""
    parts: Dict[Grading, dict] = {}
    for key, c in a.terms.items():
        parts.setdefault(grading_of(key, a.dim), {})[key] = c
    return {g: a._same(t) for g, t in sorted(parts.items())}


def sum_elements(items: Iterable[WeylElement], dim, order=None, param="hbar") -> WeylElement:
    total = WeylElement.zero(dim, order, param)
    for item in items:
        total = total + item
    return total

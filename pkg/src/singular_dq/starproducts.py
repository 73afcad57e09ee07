"""The fiberwise Weyl product and the Moyal product, with super-brackets.

Both products are exponentials of a bidifferential operator that couples a
variable of the left factor with a variable of the right factor:

* Weyl (fiberwise), parameter ``hbar``: ``exp(-i*hbar/2 (d_y d_p~ - d_y~ d_p))``;
* Moyal (base), parameter ``lambda``:  ``exp(lambda (d_x d_p~ - d_x~ d_p))``.

Odd variables are inert.  For polynomial inputs the series terminates.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Tuple

from .superalgebra import (
    GaussianRational,
    I,
    WeylElement,
    _fedosov_degree,
    koszul_sign,
)

__all__ = [
    "Kind",
    "StarConfig",
    "WEYL",
    "MOYAL",
    "star",
    "commutator",
    "opposite_check",
    "lambda_to_hbar",
    "hbar_to_lambda",
    "flip_param",
]


class Kind(enum.Enum):
    WEYL_FIBERWISE = "weyl"
    MOYAL_BASE = "moyal"


@dataclass(frozen=True)
class StarConfig:
    """Which product, the sign of its parameter, and a cap on contractions."""

    kind: Kind = Kind.WEYL_FIBERWISE
    order: Optional[int] = None
    sign: int = 1

    def __post_init__(self):
        if self.order is not None and self.order < 0:
            raise ValueError("order must be >= 0")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def param(self) -> str:
        return "hbar" if self.kind is Kind.WEYL_FIBERWISE else "lambda"

    def opposite(self) -> "StarConfig":
        return replace(self, sign=-self.sign)


WEYL = StarConfig(Kind.WEYL_FIBERWISE)
MOYAL = StarConfig(Kind.MOYAL_BASE)

_MINUS_HALF_I = GaussianRational(0, Fraction(-1, 2))


def _couplings(cfg: StarConfig, dim: int):
    """(left exponent index, right exponent index, weight) triples."""
    if cfg.kind is Kind.WEYL_FIBERWISE:
        unit = _MINUS_HALF_I * cfg.sign
        left_kind, right_kind = 2, 1  # y with p~
    else:
        unit = GaussianRational(cfg.sign)
        left_kind, right_kind = 0, 1  # x with p~
    pairs = []
    for a in range(dim):
        pairs.append((left_kind * dim + a, right_kind * dim + a, unit))
        pairs.append((right_kind * dim + a, left_kind * dim + a, -unit))
    return pairs


_FACT = [factorial(n) for n in range(64)]


def _falling(n: int, k: int) -> int:
    return _FACT[n] // _FACT[n - k]


def star(
    cfg: StarConfig,
    f: WeylElement,
    g: WeylElement,
    max_degree: Optional[int] = None,
) -> WeylElement:
    """Star product ``f * g``.

    ``max_degree`` drops result terms above that Fedosov degree; it is an
    optimisation for truncated computations and never changes lower terms.
    """
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    dim = f.dim
    if cfg.kind is Kind.MOYAL_BASE:
        for e in (f, g):
            if e.depends_on("y") or e.depends_on("psi"):
                raise ValueError("Moyal product applied to an element with fiber variables")
    for e in (f, g):
        if e.has_param() and e.param != cfg.param:
            raise ValueError(f"{cfg.kind.value} product expects {cfg.param} coefficients, got {e.param}")
    pairs = _couplings(cfg, dim)
    cap = cfg.order
    order = f.order if g.order is None else (g.order if f.order is None else min(f.order, g.order))
    floor = f.floor if g.floor is None else (g.floor if f.floor is None else max(f.floor, g.floor))
    # weight powers are cached per (pair index, count)
    wpow: Dict[Tuple[int, int], GaussianRational] = {}
    acc: Dict = {}
    y0 = 2 * dim
    g_items = list(g.terms.items())
    for (ef, pf, hf), cf in f.terms.items():
        degf = sum(ef[y0:]) + 2 * max(0, hf)
        for (eg, pg, hg), cg in g_items:
            sign = koszul_sign(pf, pg)
            if not sign:
                continue
            if max_degree is not None and hf >= 0 and hg >= 0:
                if degf + sum(eg[y0:]) + 2 * hg > max_degree:
                    continue
            base = cf * cg
            if sign < 0:
                base = -base
            psi = pf | pg
            active = []
            for idx, (li, ri, w) in enumerate(pairs):
                m = min(ef[li], eg[ri])
                if m:
                    active.append((idx, li, ri, m))
            if not active:
                key = (tuple(a + b for a, b in zip(ef, eg)), psi, hf + hg)
                prev = acc.get(key)
                acc[key] = base if prev is None else prev + base
                continue
            ranges = [range(m + 1) for (_, _, _, m) in active]
            for counts in itertools.product(*ranges):
                total = sum(counts)
                if cap is not None and total > cap:
                    continue
                e1 = list(ef)
                e2 = list(eg)
                coeff = base
                num = 1
                den = 1
                for (idx, li, ri, _), k in zip(active, counts):
                    if not k:
                        continue
                    num *= _falling(ef[li], k) * _falling(eg[ri], k)
                    den *= _FACT[k]
                    e1[li] -= k
                    e2[ri] -= k
                    wk = wpow.get((idx, k))
                    if wk is None:
                        wk = pairs[idx][2] ** k
                        wpow[(idx, k)] = wk
                    coeff = coeff * wk
                coeff = coeff * Fraction(num, den)
                exps = tuple(a + b for a, b in zip(e1, e2))
                h = hf + hg + total
                if max_degree is not None and _fedosov_degree(exps, h, dim) > max_degree:
                    continue
                key = (exps, psi, h)
                prev = acc.get(key)
                acc[key] = coeff if prev is None else prev + coeff
    out = WeylElement._from_dict(acc, dim, order, cfg.param, floor)
    return out


def commutator(cfg: StarConfig, f: WeylElement, g: WeylElement, max_degree=None) -> WeylElement:
    """Super-bracket ``f*g - (-1)^{|f||g|} g*f``, extended bilinearly."""
    f_parts = [(0, p) for p in [f.parity_split()[0]] if p] + [(1, p) for p in [f.parity_split()[1]] if p]
    g_parts = [(0, p) for p in [g.parity_split()[0]] if p] + [(1, p) for p in [g.parity_split()[1]] if p]
    total = WeylElement.zero(f.dim, None, cfg.param)
    for pf, fp in f_parts:
        for pg, gp in g_parts:
            fg = star(cfg, fp, gp, max_degree)
            gf = star(cfg, gp, fp, max_degree)
            total = total + (fg + gf if pf and pg else fg - gf)
    order = f.order if g.order is None else (g.order if f.order is None else min(f.order, g.order))
    return total.with_order(order) if order is not None else total


def opposite_check(cfg: StarConfig, f: WeylElement, g: WeylElement) -> bool:
    """Check ``f *_{+} g == (-1)^{|f||g|} g *_{-} f`` (plain equality for even
    elements)."""
    plus = cfg if cfg.sign == 1 else cfg.opposite()
    minus = plus.opposite()
    lhs = star(plus, f, g)
    rhs = WeylElement.zero(f.dim, None, cfg.param)
    for pf, fp in enumerate(f.parity_split()):
        for pg, gp in enumerate(g.parity_split()):
            if fp and gp:
                term = star(minus, gp, fp)
                rhs = rhs + (-term if pf and pg else term)
    return lhs == rhs


# lambda = -(i/2) hbar, hbar = 2 i lambda
def lambda_to_hbar(e: WeylElement) -> WeylElement:
    return e.map_param(GaussianRational(0, Fraction(-1, 2))).with_param("hbar")


def hbar_to_lambda(e: WeylElement) -> WeylElement:
    return e.map_param(GaussianRational(0, 2)).with_param("lambda")


def flip_param(e: WeylElement) -> WeylElement:
    """Substitute the deformation parameter by its negative."""
    return e.map_param(-1)

"""Randomized invariant suites shared by the CLI ``selftest`` command and the
test-suite."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List

from . import exprio, fedosov, quotient
from .sampling import random_element
from .starproducts import MOYAL, WEYL, Kind, StarConfig, commutator, opposite_check, star
from .superalgebra import GaussianRational, WeylElement, restrict_00, superproduct


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    witness: str = ""

    @property
    def passed(self):
        return self.failures == 0


def _weyl_elem(rng, dim=2, deg=4, odd=False):
    kinds = ("x", "p", "y", "psi") if odd else ("x", "p", "y")
    return random_element(rng, dim, deg, kinds=kinds, param="hbar", param_powers=(0, 1), n_terms=3)


def _moyal_elem(rng, dim=2, deg=4):
    return random_element(rng, dim, deg, kinds=("x", "p"), param="lambda", param_powers=(0, 1), n_terms=3)


def _run(name, cases, rng, body) -> SuiteResult:
    fails = 0
    witness = ""
    for _ in range(cases):
        ok, w = body(rng)
        if not ok:
            fails += 1
            witness = witness or w
    return SuiteResult(name, cases, fails, witness)


def suite_superproduct(rng, cases):
    def body(r):
        a, b, c = (_weyl_elem(r, odd=True) for _ in range(3))
        assoc = superproduct(superproduct(a, b), c) == superproduct(a, superproduct(b, c))
        comm = True
        for pa, ea in enumerate(a.parity_split()):
            for pb, eb in enumerate(b.parity_split()):
                s = -1 if pa and pb else 1
                comm &= superproduct(ea, eb) == superproduct(eb, ea).scale(s)
        return assoc and comm, exprio.print_canonical(a)

    return _run("superproduct associativity / supercommutativity", cases, rng, body)


def suite_star_assoc(rng, cases):
    def body(r):
        ok = True
        f, g, h = (_moyal_elem(r) for _ in range(3))
        ok &= star(MOYAL, star(MOYAL, f, g), h) == star(MOYAL, f, star(MOYAL, g, h))
        f, g, h = (_weyl_elem(r) for _ in range(3))
        ok &= star(WEYL, star(WEYL, f, g), h) == star(WEYL, f, star(WEYL, g, h))
        return ok, exprio.print_canonical(f)

    return _run("star associativity (Moyal and Weyl)", cases, rng, body)


def suite_opposite(rng, cases):
    def body(r):
        f, g = _moyal_elem(r), _moyal_elem(r)
        return opposite_check(MOYAL, f, g), exprio.print_canonical(f)

    return _run("opposite symmetry f*_l g = g*_{-l} f", cases, rng, body)


def suite_operators(rng, cases):
    def body(r):
        a = _weyl_elem(r, odd=True)
        d, ds, dinv = fedosov.delta, fedosov.delta_star, fedosov.delta_inv
        ok = d(d(a)).is_zero() and ds(ds(a)).is_zero()
        ok &= a == d(dinv(a)) + dinv(d(a)) + restrict_00(a)
        return ok, exprio.print_canonical(a)

    return _run("delta^2 = delta*^2 = 0 and a = dd^-1 a + d^-1 da + a00", cases, rng, body)


def suite_normal_form(rng, cases):
    def body(r):
        f = _moyal_elem(r)
        return quotient.reassemble(quotient.to_normal_form(f)) == f, exprio.print_canonical(f)

    return _run("normal-form round trip", cases, rng, body)


def suite_roundtrip(rng, cases):
    def body(r):
        e = random_element(r, 2, 4, kinds=("x", "p", "y", "psi"), param="lambda",
                           param_powers=(-1, 0, 2), complex_=True)
        s = exprio.print_canonical(e)
        return exprio.parse_element(s, 2) == e, s

    return _run("parse/print round trip", cases, rng, body)


SUITES: Dict[str, Callable] = {
    "superproduct": suite_superproduct,
    "star": suite_star_assoc,
    "opposite": suite_opposite,
    "operators": suite_operators,
    "normal_form": suite_normal_form,
    "parser": suite_roundtrip,
}


def run_all(seed: int, cases: int = 20) -> List[SuiteResult]:
    out = []
    for name, fn in SUITES.items():
        out.append(fn(random.Random(f"{seed}:{name}"), cases))
    return out

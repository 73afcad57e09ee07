"""Seeded random elements for property checks and scenario instances."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .superalgebra import GaussianRational, WeylElement


def random_coeff(rng: random.Random, complex_: bool = False, span: int = 5) -> GaussianRational:
    re = Fraction(rng.randint(-span, span), rng.randint(1, 3))
    im = Fraction(rng.randint(-span, span), rng.randint(1, 3)) if complex_ else 0
    c = GaussianRational(re, im)
    return c if c else GaussianRational(1)


def random_element(
    rng: random.Random,
    dim: int,
    max_degree: int,
    kinds: Sequence[str] = ("x", "p"),
    slots: Optional[Sequence[int]] = None,
    n_terms: int = 4,
    param: str = "lambda",
    param_powers: Sequence[int] = (0,),
    odd: bool = False,
    complex_: bool = False,
    order: Optional[int] = None,
) -> WeylElement:
    """Sum of ``n_terms`` random monomials of total degree ``<= max_degree`` in
    the given variable kinds (and psi slots if ``odd``)."""
    slots = range(dim) if slots is None else slots
    offset = {"x": 0, "p": 1, "y": 2}
    even_vars = [offset[k] * dim + s for k in kinds if k != "psi" for s in slots]
    terms = {}
    for _ in range(n_terms):
        exps = [0] * (3 * dim)
        deg = rng.randint(0, max_degree)
        psi = 0
        if odd or "psi" in kinds:
            for s in slots:
                if deg and rng.random() < 0.3:
                    psi |= 1 << s
                    deg -= 1
        for _ in range(deg):
            if even_vars:
                exps[rng.choice(even_vars)] += 1
        h = rng.choice(list(param_powers))
        key = (tuple(exps), psi, h)
        terms[key] = terms.get(key, GaussianRational(0)) + random_coeff(rng, complex_)
    return WeylElement(terms, dim, order, param)

import random

import pytest

from singular_dq.fedosov import delta
from singular_dq.sampling import random_element
from singular_dq.starproducts import (
    MOYAL,
    WEYL,
    commutator,
    hbar_to_lambda,
    lambda_to_hbar,
    opposite_check,
    star,
)
from singular_dq.superalgebra import I

from conftest import E, L, oracle_star


def test_moyal_examples():
    assert star(MOYAL, L("x1"), L("p1")) == L("x1*p1 + lambda")
    assert star(MOYAL, L("p1"), L("x1")) == L("x1*p1 - lambda")
    assert star(MOYAL, L("x1"), L("x2")) == L("x1*x2")


def test_weyl_examples():
    assert star(WEYL, E("y1", 1), E("p1", 1)) == E("y1*p1 - i*hbar/2", 1)
    assert star(WEYL, E("p1", 1), E("y1", 1)) == E("y1*p1 + i*hbar/2", 1)


def test_commutator_examples():
    assert commutator(MOYAL, L("x1"), L("p1")) == L("2*lambda")
    # -(i/hbar)[p1 psi1, y1] = psi1 = delta(y1)
    val = commutator(WEYL, E("p1*psi1"), E("y1")).scale(complex_unit(-1), -1)
    assert val == E("psi1") == delta(E("y1"))
    rng = random.Random(4)
    for _ in range(20):
        f = random_element(rng, 2, 3, param="lambda")
        assert commutator(MOYAL, f, f).is_zero()


def complex_unit(k):
    return I * k


def test_delta_is_bracket_with_p_psi_100():
    rng = random.Random(5)
    gen = E("p1*psi1 + p2*psi2")
    for _ in range(100):
        a = random_element(rng, 2, 4, kinds=("x", "p", "y", "psi"), param="hbar",
                           param_powers=(0, 1))
        assert commutator(WEYL, gen, a).scale(complex_unit(-1), -1) == delta(a)


def test_matches_sympy_oracle():
    rng = random.Random(6)
    for _ in range(25):
        f = random_element(rng, 2, 4, param="lambda", param_powers=(0, 1))
        g = random_element(rng, 2, 4, param="lambda", param_powers=(0, 1))
        assert star(MOYAL, f, g) == oracle_star("moyal", f, g)
        assert star(MOYAL.opposite(), f, g) == oracle_star("moyal", f, g, sign=-1)
        f = random_element(rng, 2, 4, kinds=("x", "p", "y"), param="hbar")
        g = random_element(rng, 2, 4, kinds=("x", "p", "y"), param="hbar")
        assert star(WEYL, f, g) == oracle_star("weyl", f, g)


def test_associativity_200_both_products():
    rng = random.Random(7)
    for _ in range(200):
        f, g, h = (random_element(rng, 2, 4, param="lambda") for _ in range(3))
        assert star(MOYAL, star(MOYAL, f, g), h) == star(MOYAL, f, star(MOYAL, g, h))
        f, g, h = (random_element(rng, 2, 4, kinds=("x", "p", "y"), param="hbar") for _ in range(3))
        assert star(WEYL, star(WEYL, f, g), h) == star(WEYL, f, star(WEYL, g, h))


def test_opposite_symmetry():
    assert opposite_check(MOYAL, L("x1"), L("p1"))
    assert opposite_check(MOYAL, L("3"), L("x1*p2^2"))
    rng = random.Random(8)
    for _ in range(100):
        f, g = random_element(rng, 2, 4, param="lambda"), random_element(rng, 2, 4, param="lambda")
        assert opposite_check(MOYAL, f, g)


def test_per_order_hbar_bookkeeping():
    rng = random.Random(9)
    for _ in range(30):
        f = random_element(rng, 2, 3, kinds=("x", "p", "y"), param="hbar")
        g = random_element(rng, 2, 3, kinds=("x", "p", "y"), param="hbar")
        out = star(WEYL, f, g)
        zeroth = f * g
        assert out.select(lambda k: k[2] == 0) == zeroth
        # each hbar^k term lowers the combined y+p degree by exactly 2k
        for (exps, _, h), _c in out.terms.items():
            n = out.dim
            yp = sum(exps[n:])
            degs = {sum(a[n:]) + sum(b[n:]) for a, *_ in [k for k in f.terms] for b, *_ in [k for k in g.terms]}
            assert any(yp == d - 2 * h for d in degs)


def test_bridge_conversion_roundtrip():
    e = L("x1*p1 + 3*lambda^2 - lambda")
    assert hbar_to_lambda(lambda_to_hbar(e)) == e
    assert lambda_to_hbar(L("lambda")) == E("-i*hbar/2")


def test_errors():
    with pytest.raises(ValueError):
        star(MOYAL, L("y1"), L("p1"))
    with pytest.raises(ValueError):
        star(MOYAL, L("x1", 1), L("p1", 2))
    with pytest.raises(ValueError):
        star(MOYAL, E("hbar*x1"), L("p1"))

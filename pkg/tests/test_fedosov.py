import random
from fractions import Fraction

import pytest

from singular_dq import fedosov as F
from singular_dq.fedosov import ConnectionData
from singular_dq.sampling import random_element
from singular_dq.starproducts import MOYAL, WEYL, commutator, lambda_to_hbar, star
from singular_dq.superalgebra import I, WeylElement, partial, restrict_00

from conftest import E

G111 = ConnectionData.from_entries(2, {(0, 0, 0): E("x2")})
G122 = ConnectionData.from_entries(3, {(0, 1, 1): E("x3^2", 3)})
GMIX = ConnectionData.from_entries(
    3, {(0, 1, 1): E("x3^2", 3), (0, 2, 2): E("x2*x3", 3), (0, 1, 2): E("x2", 3)}
)
G2 = ConnectionData.from_entries(2, {(1, 0, 0): E("x1"), (0, 0, 1): E("x2")})
FLAT = ConnectionData.flat(2)


def ih(a, sign=1):
    return a.scale(I * sign, -1)


def ydeg(e, k):
    return e.select(lambda key: sum(key[0][2 * e.dim:]) == k and key[2] == 0)


def rand_w(rng, dim=2, deg=4):
    return random_element(rng, dim, deg, kinds=("x", "p", "y", "psi"), param="hbar",
                          param_powers=(0, 1), n_terms=4)


# -- connection data and curvature -------------------------------------------

def test_curvature_examples():
    assert F.curvature(FLAT).is_zero()
    R = F.curvature(G111)
    assert dict(R.entries) == {(0, 0, 0, 1): E("-1"), (0, 0, 1, 0): E("1")}
    one = ConnectionData.from_entries(1, {(0, 0, 0): E("x1^3 + 2", 1)})
    assert F.curvature(one).is_zero()


def test_curvature_antisymmetry():
    for conn in (G111, G122, GMIX, G2):
        R = F.curvature(conn)
        for (d, a, b, c), r in R.entries.items():
            assert R.entries[(d, a, c, b)] == -r


def test_connection_document(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("dim: 2\nchristoffel:\n  - {upper: 1, lower: [1, 2], poly: 'x1*x2'}\n")
    conn = F.load_connection(p)
    assert conn.gamma(0, 1, 0) == conn.gamma(0, 0, 1) == E("x1*x2")
    bad = {"dim": 2, "christoffel": [
        {"upper": 1, "lower": [1, 2], "poly": "x1"},
        {"upper": 1, "lower": [2, 1], "poly": "x2"}]}
    with pytest.raises(ValueError):
        F.connection_from_document(bad)
    with pytest.raises(ValueError):
        F.connection_from_document({"dim": 2, "christoffel": [{"upper": 1, "lower": [1, 2], "poly": "p1"}]})
    with pytest.raises(ValueError):
        F.connection_from_document({"dim": 0})
    with pytest.raises(ValueError):
        ConnectionData(2, {(0, 0, 1): E("x1")})  # missing symmetric partner


# -- delta calculus ------------------------------------------------------------

def test_operator_examples():
    assert F.delta(E("y1")) == E("psi1")
    assert F.delta_inv(E("psi1")) == E("y1")
    a = E("y1*psi2")
    half = (F.delta(F.delta_star(a)) + F.delta_star(F.delta(a))).scale(Fraction(1, 2))
    assert restrict_00(a) + half == a
    assert F.nabla(FLAT, E("x1^2")) == E("2*x1*psi1")


def test_delta_identities_100():
    rng = random.Random(11)
    for _ in range(100):
        a = rand_w(rng)
        assert F.delta(F.delta(a)).is_zero()
        assert F.delta_star(F.delta_star(a)).is_zero()
        assert a == F.delta(F.delta_inv(a)) + F.delta_inv(F.delta(a)) + restrict_00(a)


def test_nabla_squared_is_curvature_bracket():
    rng = random.Random(12)
    R = F.curvature_section(G111)
    for _ in range(50):
        a = rand_w(rng)
        assert F.nabla(G111, F.nabla(G111, a)) == ih(commutator(WEYL, R, a))


def test_nabla_via_christoffel_section():
    rng = random.Random(13)
    for conn in (G111, G2):
        Gam = F.christoffel_section(conn)
        for _ in range(30):
            a = rand_w(rng)
            assert F.nabla(conn, a) == F.d_op(a) + ih(commutator(WEYL, Gam, a))


# -- gamma ---------------------------------------------------------------------

def test_gamma_flat_is_zero():
    assert F.gamma_recursion(FLAT, 6).value.is_zero()


@pytest.mark.parametrize("conn", [G111, G122, GMIX, G2], ids=["G111", "G122", "Gmix", "G2"])
def test_gamma_flat_and_shape(conn):
    g = F.gamma_recursion(conn, 6)
    assert F.flatness_residual(conn, g).is_zero()
    assert F.delta_inv(g.value).is_zero()
    n = conn.dim
    for (exps, psi, h), _ in g.value.terms.items():
        assert bin(psi).count("1") == 1
        assert sum(exps[n:2 * n]) == 1
        assert h == 0


def test_zero_gamma_residual_is_minus_R():
    zero = F.GammaSeries(WeylElement.zero(2, 6), 6)
    assert F.flatness_residual(G111, zero) == -F.curvature_section(G111)
    assert F.flatness_residual(FLAT, F.GammaSeries(WeylElement.zero(2, 6), 6)).is_zero()


def test_gamma_truncation_consistent():
    g6 = F.gamma_recursion(G111, 6).value
    g8 = F.gamma_recursion(G111, 8).value
    assert g8.truncate(6) == g6


@pytest.mark.parametrize("conn", [G111, G122, GMIX, G2], ids=["G111", "G122", "Gmix", "G2"])
def test_gamma_degree_two_term(conn):
    g = F.gamma_recursion(conn, 6).value
    assert ydeg(g, 2) == F.gamma_leading_terms(conn)[0]


def _cov_derivative_term(conn):
    """1/12 (nabla_l R)^d_abc y^l y^a y^b psi^c p_d, built independently."""
    n = conn.dim
    R = F.curvature(conn).entries
    z = WeylElement.zero(n)

    def Rv(*k):
        return R.get(k, z)

    def G(*k):
        return conn.christoffel.get(k)

    v = lambda name: WeylElement.variable(name, n)
    out = z
    idx = range(n)
    for l in idx:
        for d in idx:
            for a in idx:
                for b in idx:
                    for c in idx:
                        t = partial(Rv(d, a, b, c), f"x{l + 1}")
                        for m in idx:
                            for sgn, g, r in ((1, G(d, l, m), Rv(m, a, b, c)),
                                              (-1, G(m, l, a), Rv(d, m, b, c)),
                                              (-1, G(m, l, b), Rv(d, a, m, c)),
                                              (-1, G(m, l, c), Rv(d, a, b, m))):
                                if g is not None and r:
                                    t = t + (g * r).scale(sgn)
                        if t:
                            out = out + t * v(f"y{l+1}") * v(f"y{a+1}") * v(f"y{b+1}") * v(f"psi{c+1}") * v(f"p{d+1}")
    return out.scale(Fraction(1, 12))


@pytest.mark.parametrize("conn", [G111, G122, GMIX, G2], ids=["G111", "G122", "Gmix", "G2"])
def test_gamma_degree_three_is_covariant_derivative_of_R(conn):
    g = F.gamma_recursion(conn, 6).value
    assert ydeg(g, 3) == _cov_derivative_term(conn)


def test_gamma_degree_three_plain_derivative_differs_when_christoffel_terms_survive():
    g = F.gamma_recursion(G111, 6).value
    diff = ydeg(g, 3) - F.gamma_leading_terms(G111)[1]
    assert diff == E("1/12*x2*p1*y1^3*psi2 - 1/12*x2*p1*y1^2*y2*psi1")


# -- flat sections ---------------------------------------------------------------

def test_lift_examples():
    g = F.gamma_recursion(FLAT, 6)
    assert F.flat_lift(FLAT, g, E("x1")).value == E("x1 + y1", order=6)
    assert F.flat_lift(FLAT, g, E("p1")).value == E("p1", order=6)


@pytest.mark.parametrize("conn", [G111, G122, GMIX], ids=["G111", "G122", "Gmix"])
def test_lift_flat_and_based(conn):
    g = F.gamma_recursion(conn, 6)
    a00 = E("p1^2*x2 + p2*x1 + p1*p2", conn.dim)
    sec = F.flat_lift(conn, g, a00)
    assert F.d_residual(conn, g, sec).is_zero()
    assert restrict_00(sec.value) == a00.with_order(6)


@pytest.mark.parametrize("conn", [G111, G122, GMIX], ids=["G111", "G122", "Gmix"])
def test_lift_low_degree_closed_form_has_minus_one_sixth(conn):
    # derived coefficient of R^d_abc y^a y^b p_d da00/dp_c in the flat lift
    g = F.gamma_recursion(conn, 6)
    n = conn.dim
    a00 = E("p1^2*x2 + p2*x1 + p1*p2", n)
    low = F.flat_lift(conn, g, a00).value.select(
        lambda k: sum(k[0][2 * n:]) <= 2 and k[2] == 0 and k[1] == 0)
    total, rterm = F.lift_leading_terms(conn, a00, Fraction(-1, 6))
    assert not rterm.is_zero()
    assert low == total


def test_lift_linearity():
    rng = random.Random(14)
    g = F.gamma_recursion(G111, 5)
    for _ in range(5):
        a = random_element(rng, 2, 3, param="hbar")
        b = random_element(rng, 2, 3, param="hbar")
        lhs = F.flat_lift(G111, g, a.scale(2) - b.scale(3)).value
        rhs = F.flat_lift(G111, g, a).value.scale(2) - F.flat_lift(G111, g, b).value.scale(3)
        assert lhs == rhs


# -- base product ----------------------------------------------------------------

def test_base_star_examples():
    g = F.gamma_recursion(G111, 6)
    f = E("x1^2 + x2")
    assert F.base_star(G111, g, E("1"), f) == f.with_order(6)
    assert F.base_star(G111, g, E("x1"), E("x2*x1")) == E("x1^2*x2", order=6)


def test_base_star_x_only_is_pointwise_curved():
    rng = random.Random(15)
    g = F.gamma_recursion(G111, 6)
    for _ in range(10):
        f = random_element(rng, 2, 3, kinds=("x",), param="hbar")
        h = random_element(rng, 2, 3, kinds=("x",), param="hbar")
        assert F.base_star(G111, g, f, h) == (f * h).with_order(6)


def test_base_star_flat_is_moyal():
    rng = random.Random(16)
    g = F.gamma_recursion(FLAT, 6)
    for _ in range(10):
        f = random_element(rng, 2, 3, param="hbar")
        h = random_element(rng, 2, 3, param="hbar")
        moy = lambda_to_hbar(star(MOYAL, f.with_param("lambda"), h.with_param("lambda")))
        assert F.base_star(FLAT, g, f, h) == moy.with_order(6)


def test_base_star_opposite_symmetry():
    rng = random.Random(17)
    gp = F.gamma_recursion(G111, 5)
    gm = F.gamma_recursion(G111, 5, sign=-1)
    for _ in range(5):
        f = random_element(rng, 2, 2, param="hbar")
        h = random_element(rng, 2, 2, param="hbar")
        assert F.base_star(G111, gp, f, h) == F.base_star(G111, gm, h, f)

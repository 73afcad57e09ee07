import random

import pytest

from singular_dq.exprio import (
    BinOp,
    ParseError,
    Pow,
    Sym,
    parse,
    parse_element,
    print_canonical,
)
from singular_dq.sampling import random_element
from singular_dq.superalgebra import WeylElement

from conftest import E, L


def test_tree_shape():
    t = parse("x1*p1 + lambda")
    assert isinstance(t, BinOp) and t.op == "+"
    assert isinstance(t.left, BinOp) and t.left.op == "*"
    assert t.right == Sym("lambda", 0, t.right.pos)


def test_precedence_and_associativity():
    assert parse_element("-x1^2", 1) == -E("x1", 1) ** 2
    assert parse_element("x1 - x1 - x1", 1) == -E("x1", 1)
    assert parse_element("2*3^2", 1) == E("18", 1)
    assert parse_element("(x1 + 1)^2", 1) == E("x1^2 + 2*x1 + 1", 1)


def test_laurent_power():
    e = parse_element("lambda^-1 * p2^2", 2)
    assert e.param == "lambda"
    ((exps, psi, h), c), = e.terms.items()
    assert h == -1 and exps == (0, 0, 0, 2, 0, 0)


@pytest.mark.parametrize(
    "src, fragment, column",
    [
        ("psi1^2", "odd variable", 5),
        ("x1^-1", "negative exponent", 3),
        ("x1 + ", "expected an operand", 6),
        ("(x1", "unbalanced", 4),
        ("x1 $ p1", "unexpected character", 4),
        ("foo", "unknown symbol", 1),
        ("lambda*hbar", "cannot mix", 8),
        ("x3", "exceeds dimension", 1),
        ("x1 / x2", "division only", 4),
        ("", "empty expression", 1),
        ("x1 x2", "unexpected token", 4),
    ],
)
def test_errors_carry_positions(src, fragment, column):
    with pytest.raises(ParseError) as info:
        parse_element(src, 2)
    assert fragment in str(info.value)
    assert info.value.column == column
    assert info.value.line == 1


def test_expected_set_reported():
    with pytest.raises(ParseError) as info:
        parse("x1 *")
    assert "SYMBOL" in info.value.expected


def test_multiline_position():
    with pytest.raises(ParseError) as info:
        parse("x1 +\n  * p1")
    assert (info.value.line, info.value.column) == (2, 3)


def test_print_examples():
    assert print_canonical(L("x1*p1 + lambda")) == "x1*p1 + lambda"
    assert print_canonical(WeylElement.zero(2)) == "0"
    assert print_canonical(E("psi2*psi1")) == "-psi1*psi2"
    assert print_canonical(E("(1/2 + 3*i)*x1 - i")) == "(1/2 + 3*i)*x1 - i"


def test_roundtrip_500():
    rng = random.Random(10)
    for k in range(500):
        e = random_element(
            rng, 2, 5, kinds=("x", "p", "y", "psi"),
            param="lambda" if k % 2 else "hbar", param_powers=(-2, 0, 1, 3),
            n_terms=rng.randint(0, 6), complex_=True,
        )
        s = print_canonical(e)
        back = parse_element(s, 2, param=e.param)
        assert back == e, s
        assert print_canonical(back) == s

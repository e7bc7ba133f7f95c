from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qident import ExprSyntaxError, Monomial, QSeriesError, expand, parse, render
from qident.expr import BinOp, Call, Poch, Pow, grid_hint


def test_theta_call():
    node = parse("f(q,q^3)")
    assert isinstance(node, Call) and node.name == "f"
    a, b = (m.at() for m in node.args)
    assert a == Monomial(1, 1) and b == Monomial(1, 3)


def test_quotient_tree():
    node = parse("(q;q)_inf * (q^2;q^2)_inf^-1")
    assert isinstance(node, BinOp) and node.op == "*"
    assert isinstance(node.left, Poch) and node.left.length is None
    assert isinstance(node.right, Pow)
    assert render(node) == "(q;q)_inf * (q^2;q^2)_inf^(-1)"


def test_unclosed_delimiter_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("(q;q_3")
    err = info.value
    assert (err.line_no, err.column) == (1, 1)
    assert "')'" in err.expected


@pytest.mark.parametrize("bad, col", [("q^", 3), ("1 +", 4), ("(q;q)_", 7), ("f(q)", 1), ("q $ 2", 3)])
def test_syntax_errors_carry_a_column(bad, col):
    with pytest.raises(ExprSyntaxError) as info:
        parse(bad)
    assert info.value.column == col


def test_multiline_position():
    with pytest.raises(ExprSyntaxError) as info:
        parse("1 +\n  (q;q")
    assert info.value.line_no == 2


def test_expand_examples():
    assert str(expand("psi(q)", 11)) == "1 + q + q^3 + q^6 + q^10 (+O(q^11))"
    assert str(expand("(q;q)_inf", 8)) == "1 - q - q^2 + q^5 + q^7 (+O(q^8))"
    assert str(expand("Psi(q,q)", 50)) == "1 (+O(q^50))"
    assert str(expand("f(q,q)", 10)) == "1 + 2*q + 2*q^4 + 2*q^9 (+O(q^10))"


def test_expand_product_oracle():
    # (q;q)_inf by multiplying out the finite product directly
    coeffs = {0: 1}
    for k in range(1, 30):
        new = dict(coeffs)
        for e, c in coeffs.items():
            if e + k < 30:
                new[e + k] = new.get(e + k, 0) - c
        coeffs = new
    s = expand("(q;q)_inf", 30)
    assert all(s.coefficient(n) == coeffs.get(n, 0) for n in range(30))


def test_sum_with_finite_pochhammers():
    rr1 = expand("sum(n>=0, q^(n^2) / (q;q)_n)", 40)
    prod = expand("(q^2,q^3,q^5;q^5)_inf / (q;q)_inf", 40)
    assert rr1.first_difference(prod) is None


def test_sum_starting_at_one_and_index_shift():
    a = expand("1 + sum(n>=1, q^n * (q;q)_(n-1))", 20)
    b = expand("1 + sum(n>=0, q^(n+1) * (q;q)_n)", 20)
    assert a.first_difference(b) is None


def test_half_integer_grid():
    node = parse("(q^(1/2);q)_inf")
    assert grid_hint(node) == 2
    s = expand(node, 5)
    assert s.grid_den == 2
    assert s.coefficient(Fraction(1, 2)) == -1


def test_exact_truncation_order():
    s = expand("1/(q;q)_inf", 17)
    assert s.order == 17


terms = st.sampled_from([
    "q", "q^2", "-q^3", "q^(1/2)", "2", "(q;q)_inf", "(-q;q^2)_inf", "(q,q^4,q^5;q^5)_inf",
    "(q^2;q^2)_5", "f(q,q^2)", "phi(-q)", "psi(q^3)", "fneg(q^2)", "Psi(q,q^2)",
    "sum(n>=0, q^(n^2) / (q;q)_n)", "sum(n>=1, (-1)^n * q^(n*(n+1)) / (q^2;q^2)_(2*n))",
])


@st.composite
def exprs(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(terms)
    op = draw(st.sampled_from(["+", "-", "*", "/", "^"]))
    a = draw(exprs(depth=depth - 1))
    if op == "^":
        return f"({a})^{draw(st.integers(-2, 3))}"
    b = draw(exprs(depth=depth - 1))
    return f"({a}) {op} ({b})"


@settings(max_examples=150, deadline=None)
@given(exprs())
def test_render_round_trip(text):
    node = parse(text)
    canon = render(node)
    assert parse(canon) == node
    assert render(parse(canon)) == canon


@settings(max_examples=25, deadline=None)
@given(exprs(depth=1))
def test_render_preserves_value(text):
    node = parse(text)
    try:
        want = expand(node, 12)
    except (QSeriesError, ZeroDivisionError):
        return  # e.g. division by a series with zero constant term
    assert expand(render(node), 12).first_difference(want) is None


def test_whitespace_insensitive():
    assert parse("( q ; q ) _ inf") == parse("(q;q)_inf")


def test_catalog_style_expression_is_integral():
    s = expand("(q^2,q^10,q^12;q^12)_inf * (q^8,q^16;q^24)_inf / psi(-q)", 60)
    assert s.is_integral()
    assert s.first_difference(expand("(q^2,q^10,q^12;q^12)_inf * (q^8,q^16;q^24)_inf", 60) / expand("psi(-q)", 60)) is None

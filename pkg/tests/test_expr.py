import cmath

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from grammar_cases import MALFORMED, VALID
from yangbaxter import expr
from yangbaxter.errors import (DivisionNearZero, ParseError, ReservedName, UnboundIdentifier)


@pytest.mark.parametrize("text, env, expected", VALID)
def test_valid_cases(text, env, expected):
    got = expr.evaluate(expr.parse(text), env)
    assert abs(got - expected) <= 1e-12 * max(1.0, abs(expected))


@pytest.mark.parametrize("text, offset", MALFORMED)
def test_malformed_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        expr.parse(text)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)


def test_power_tree_shape():
    node = expr.parse("2*t^2/(q-p)")
    assert node.kind == "div"
    num, den = node.children
    assert num.kind == "mul"
    assert num.children[1] == expr.Node("pow", children=(expr.Node("identifier", "t"),
                                                         expr.Node("number", 2)))
    assert den.kind == "sub"


def test_unary_minus_looser_than_power():
    assert expr.parse("-t^2") == expr.parse("-(t^2)")
    assert expr.parse("-t^2") != expr.parse("(-t)^2")


def test_left_associativity():
    assert expr.parse("a-b-c") == expr.parse("(a-b)-c")
    assert expr.parse("a/b*c") == expr.parse("(a/b)*c")


def test_spans_point_into_source():
    text = "k/(k - u)"
    node = expr.parse(text)
    lo, hi = node.children[1].span
    assert text[lo:hi] == "(k - u)"


def test_unbound_identifier_reports_name_and_span():
    with pytest.raises(UnboundIdentifier) as info:
        expr.evaluate(expr.parse("1 + zeta"), {})
    assert info.value.name == "zeta"
    assert info.value.span == (4, 8)


def test_imaginary_unit_cannot_be_rebound():
    with pytest.raises(ReservedName):
        expr.evaluate(expr.parse("i"), {"i": 2})
    assert expr.evaluate(expr.parse("i"), {}) == 1j


def test_division_near_zero_carries_span():
    with pytest.raises(DivisionNearZero) as info:
        expr.evaluate(expr.parse("u/(k-u)"), {"u": 2, "k": 2})
    assert info.value.span == (2, 7)
    assert abs(info.value.divisor) < 1e-12


def test_identifiers_excludes_imaginary_unit():
    assert expr.identifiers(expr.parse("q*i + u/k")) == {"q", "u", "k"}


def test_compile_expr_is_pure():
    consts = {"k": 2}
    f = expr.compile_expr("k/(k-u)", consts)
    assert f(0) == 1
    assert f(1) == 2
    assert consts == {"k": 2}
    assert f.node == expr.parse("k/(k-u)")


def test_complex_arithmetic():
    val = expr.evaluate(expr.parse("(1+i)^2 / i"), {})
    assert cmath.isclose(val, 2)


# -- property tests against Python's own evaluator ------------------------------

_atoms = st.one_of(
    st.integers(0, 9).map(str),
    st.sampled_from(["1.5", "0.25", "a", "b", "i"]),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, st.sampled_from("+-*/"), children).map(lambda t: f"{t[0]} {t[1]} {t[2]}"),
        children.map(lambda s: f"({s})"),
        children.map(lambda s: f"-{s}"),
        st.tuples(children, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
    )


expressions = st.recursive(_atoms, _extend, max_leaves=12)
values = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)


def _python_eval(text, env):
    return complex(eval(text.replace("^", "**"), {"__builtins__": {}}, {**env, "i": 1j}))


@given(expressions, values, values)
@settings(max_examples=300, deadline=None)
def test_matches_python_evaluator(text, a, b):
    env = {"a": a, "b": b}
    try:
        ours = expr.evaluate(expr.parse(text), env)
    except DivisionNearZero:
        assume(False)
    theirs = _python_eval(text, env)
    assume(cmath.isfinite(theirs))
    assert abs(ours - theirs) <= 1e-9 * max(1.0, abs(theirs))


@given(expressions)
@settings(max_examples=300, deadline=None)
def test_source_round_trip(text):
    node = expr.parse(text)
    assert expr.parse(expr.to_source(node)) == node


@given(expressions, expressions, values, values)
@settings(max_examples=200, deadline=None)
def test_sum_homomorphism(x, y, a, b):
    env = {"a": a, "b": b}
    try:
        vx = expr.evaluate(expr.parse(x), env)
        vy = expr.evaluate(expr.parse(y), env)
    except DivisionNearZero:
        assume(False)
    both = expr.evaluate(expr.parse(f"({x}) + ({y})"), env)
    assert abs(both - (vx + vy)) <= 1e-12 * max(1.0, abs(vx), abs(vy))

import math

import pytest
from hypothesis import given, settings, strategies as st

from cesarolab.weightlang import (Binary, Call, Const, Param, Unary, UnknownIdentifierError, Var,
                                  WeightDomainError, WeightSyntaxError, evaluate, parse, pretty)


def test_parse_shapes():
    i, n = Var("i"), Var("n")
    assert parse("i*n*exp(i*n)") == Binary("mul", Binary("mul", i, n), Unary("exp", Binary("mul", i, n)))
    assert parse("i") == i
    assert parse("n*log(log(i))") == Binary("mul", n, Unary("log", Unary("log", i)))


@pytest.mark.parametrize("src,value", [
    ("2+3*4", 14), ("2^3^2", 512), ("-2^2", -4), ("(1+2)*3", 9), ("8/2/2", 2), ("  1 -  2 - 3 ", -4),
])
def test_precedence(src, value):
    assert evaluate(parse(src), 1, 1) == value


def test_scalar_examples():
    assert evaluate(parse("i*n"), 3, 2) == 6
    assert evaluate(parse("i*n*exp(i*n)"), 1, 1) == pytest.approx(math.e, rel=1e-15)
    assert evaluate(parse("n*log(log(i))"), 2, 1) == pytest.approx(math.log(math.log(2)), rel=1e-15)


def test_syntax_error_offset():
    with pytest.raises(WeightSyntaxError) as err:
        parse("i*(n+")
    assert err.value.offset == 5


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as err:
        parse("i*q")
    assert err.value.name == "q" and err.value.offset == 2
    with pytest.raises(UnknownIdentifierError):
        parse("foo(i)")


def test_params_and_sequences():
    e = parse("alpha*log(i)", params=["alpha"])
    assert Param("alpha") in [e.left]
    assert evaluate(e, math.e, 1, {"alpha": 0.5}) == pytest.approx(0.5)
    t = parse("n*w(i)", sequences=["w"])
    assert isinstance(t.right, Call)
    assert evaluate(t, 2, 3, sequences={"w": [1.0, 4.0]}) == 12.0


@pytest.mark.parametrize("src,i", [("log(i-1)", 1), ("loglog(i)", 1), ("1/(i-1)", 1), ("(i-1)^0", 1)])
def test_domain_errors(src, i):
    with pytest.raises(WeightDomainError):
        evaluate(parse(src), i, 1)


def test_overflow_is_infinite():
    assert evaluate(parse("exp(exp(i))"), 10, 1) == math.inf


def test_evaluation_is_pure():
    e = parse("i*n+1")
    assert [evaluate(e, 2, 3) for _ in range(3)] == [7, 7, 7]
    assert e == parse("i*n+1")


leaves = st.one_of(st.sampled_from([Var("i"), Var("n")]),
                   st.integers(0, 9).map(lambda k: Const(float(k))))
exprs = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.tuples(st.sampled_from(["add", "sub", "mul", "div", "pow"]), kids, kids)
        .map(lambda t: Binary(*t)),
        st.tuples(st.sampled_from(["neg", "exp", "log"]), kids).map(lambda t: Unary(*t)),
    ),
    max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(exprs)
def test_pretty_round_trip(node):
    assert parse(pretty(node)) == node

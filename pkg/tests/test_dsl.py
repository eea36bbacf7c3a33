import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wehrl_nc import states as fk
from wehrl_nc.dsl import Primitive, Unary, evaluate, format_expr, parse
from wehrl_nc.errors import DegenerateInput, NcError, ParseError, SqueezingTooLarge


def test_parse_examples():
    assert parse("vac") == Primitive("vac")
    assert parse("A^2 S(0.5) vac") == Unary("A", (2,), Unary("S", (0.5,), Primitive("vac")))
    assert parse("  fock( 3 ) ") == Primitive("fock", (3,))
    assert parse("D(1,-2e-1) coh(+.5,0)") == Unary("D", (1.0, -0.2), Primitive("coh", (0.5, 0.0)))
    assert parse("A cat-(1)") == Unary("A", (1,), Primitive("cat-", (1.0,)))
    assert parse(b"thermal(1)") == Primitive("thermal", (1.0,))


def test_syntax_error_location():
    with pytest.raises(ParseError) as info:
        parse("S(0.5 fock(2)")
    assert info.value.offset == 6
    assert set(info.value.expected) == {")", ","}
    assert info.value.kind == "syntax-error"


@pytest.mark.parametrize(
    "text,offset",
    [("", 0), ("fock(", 5), ("fock(1.5)", 6), ("vac vac", 4), ("A^ vac", 3), ("S()", 2), ("cat*(1)", 0), ("coh(1)", 5)],
)
def test_syntax_errors(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_offsets_are_bytes():
    with pytest.raises(ParseError) as info:
        parse("S(0.5) évac")
    assert info.value.offset == 7
    with pytest.raises(ParseError):
        parse(b"\xff\xfe\xfd")


def test_non_finite_numbers_rejected():
    with pytest.raises(ParseError):
        parse("coh(1e400,0)")


def test_spans():
    expr = parse("A^2  S(0.5) vac")
    assert expr.span == (0, 3)
    assert expr.child.span == (5, 11)
    assert expr.child.child.span == (12, 15)


def test_evaluate_examples():
    st_ = evaluate("S(0.5) thermal(1)", dim=128)
    np.testing.assert_allclose(st_.matrix, fk.squeezed_thermal(1.0, 0.5, 128).matrix, atol=1e-14)
    a = evaluate("A S(0.3) vac", dim=64).amplitudes
    b = evaluate("S(0.3) fock(1)", dim=64).amplitudes
    np.testing.assert_allclose(a, b, atol=1e-10)
    with pytest.raises(DegenerateInput):
        evaluate("cat-(0)")


def test_operator_order():
    # a^dag^2 S(r)|0> and S(r) a^dag^2 |0> are different states
    a = evaluate("A^2 S(0.5) vac", dim=64).amplitudes
    b = evaluate("S(0.5) A^2 vac", dim=64).amplitudes
    assert np.abs(np.vdot(a, b)) < 0.99


def test_pure_and_mixed_results():
    assert isinstance(evaluate("D(1,0) S(0.2,1) coh(0.3,0.1)"), fk.FockVector)
    assert isinstance(evaluate("A^2 D(0.5,0) thermal(0.5)"), fk.DensityOperator)


def test_eval_errors_carry_span():
    with pytest.raises(SqueezingTooLarge) as info:
        evaluate("A  S(4) vac")
    assert info.value.span == (3, 7)
    with pytest.raises(NcError) as info:
        evaluate("S(0.3) fock(70)", dim=64)
    assert info.value.span == (7, 15)


def test_auto_dimension():
    st_ = evaluate("thermal(5)")
    assert st_.dim == 256 and st_.tail_mass <= fk.DEFAULT_TAIL_TOL
    assert evaluate("fock(100)").dim == 128


numbers = st.floats(allow_nan=False, allow_infinity=False, width=64)
uints = st.integers(min_value=0, max_value=10**6)
primitives = st.one_of(
    st.just(Primitive("vac")),
    uints.map(lambda m: Primitive("fock", (m,))),
    st.tuples(numbers, numbers).map(lambda a: Primitive("coh", a)),
    numbers.map(lambda x: Primitive("thermal", (x,))),
    numbers.map(lambda x: Primitive("cat+", (x,))),
    numbers.map(lambda x: Primitive("cat-", (x,))),
)
unaries = st.one_of(
    st.tuples(numbers, numbers).map(lambda a: ("D", a)),
    numbers.map(lambda r: ("S", (r,))),
    st.tuples(numbers, numbers).map(lambda a: ("S", a)),
    uints.map(lambda m: ("A", (m,))),
)


@st.composite
def expressions(draw):
    node = draw(primitives)
    for op, args in draw(st.lists(unaries, max_size=5)):
        node = Unary(op, args, node)
    return node


@settings(max_examples=300, deadline=None)
@given(expressions())
def test_round_trip(expr):
    text = format_expr(expr)
    assert parse(text) == expr
    assert format_expr(parse(text)) == text


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=40))
def test_parser_total_on_bytes(data):
    try:
        parse(data)
    except ParseError as err:
        assert 0 <= err.offset <= len(data)


def test_mutation_fuzz():
    seeds = [b"A^2 S(0.5) vac", b"D(1,-1) S(0.3,1.2) thermal(0.5)", b"cat-(1.5)", b"A coh(1,2)"]
    rng = random.Random(1234)
    parsed = 0
    for _ in range(5000):
        data = bytearray(rng.choice(seeds))
        for _ in range(rng.randrange(1, 4)):
            pos = rng.randrange(len(data) + 1)
            action = rng.randrange(3)
            if action == 0:
                data.insert(pos, rng.randrange(256))
            elif action == 1 and pos < len(data):
                del data[pos]
            elif pos < len(data):
                data[pos] = rng.randrange(256)
        try:
            expr = parse(bytes(data))
            parsed += 1
            assert parse(format_expr(expr)) == expr
        except ParseError as err:
            assert 0 <= err.offset <= len(data)
    assert parsed > 0

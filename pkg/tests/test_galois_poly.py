import pytest
from hypothesis import given, strategies as st

from dickson_steenrod.galois_poly import (AlgebraContext, ContextMismatchError, MixedDegreeError, ParseError,
                                          frobenius, linear_substitute, multiply, power)
from oracle import naive_from, naive_mul, naive_substitute, to_poly
from strategies import contexts, invertible_matrices, polynomials


@pytest.fixture
def c32():
    return AlgebraContext(3, 2)


@pytest.fixture
def c22():
    return AlgebraContext(2, 2)


def test_context_rejects_bad_input():
    with pytest.raises(ValueError):
        AlgebraContext(4, 2)
    with pytest.raises(ValueError):
        AlgebraContext(3, 0)
    assert AlgebraContext(2, 3).mode == "p=2"
    assert AlgebraContext(5, 1).mode == "odd-p"


def test_exterior_products(c32):
    x1, x2 = c32.x(1), c32.x(2)
    assert x1 * x2 == c32.parse("x1*x2")
    assert x2 * x1 == -(x1 * x2)
    assert x2 * x1 == c32.parse("2*x1*x2")
    assert (x1 * x1).is_zero()


def test_freshmans_dream(c22):
    s = c22.y(1) + c22.y(2)
    assert s * s == c22.parse("y1^2 + y2^2")


def test_no_exterior_at_two(c22):
    with pytest.raises(ValueError):
        c22.x(1)


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        AlgebraContext(3, 2).y(1) * AlgebraContext(3, 3).y(1)


def test_degrees(c32):
    assert c32.parse("x1*y2^3").degree() == 7
    assert AlgebraContext(2, 2).parse("y1*y2^3").degree() == 4
    with pytest.raises(MixedDegreeError):
        c32.parse("y1 + y1^2").degree()
    assert not c32.parse("y1 + x1").is_homogeneous()


def test_coefficients_reduced(c32):
    f = c32.parse("4*y1 + 3*y2")
    assert f == c32.y(1)
    assert str(c32.parse("y1 - y2")) == "y1 + 2*y2"


def test_power(c32, c22):
    assert power(c32.y(1), 3) == c32.parse("y1^3")
    assert power(c32.x(1), 2).is_zero()
    assert power(c32.y(1) + c32.x(1), 0) == c32.one()
    d22 = c22.parse("y1^2*y2 + y1*y2^2")
    assert power(d22, 2) == c22.parse("y1^4*y2^2 + y1^2*y2^4")
    assert power(d22, 2) == multiply(d22, d22)


def test_power_with_exterior_matches_repeated_product(c32):
    f = c32.parse("x1*y2 + y1^2 + x2")
    g = c32.one()
    for _ in range(5):
        g = g * f
    assert power(f, 5) == g


def test_frobenius_requires_pure_polynomial(c32):
    with pytest.raises(ValueError):
        frobenius(c32.x(1), 3)


def test_linear_substitute_examples(c22):
    f = c22.parse("y1*y2^2")
    assert linear_substitute(f, [[1, 0], [0, 1]]) == f
    assert linear_substitute(f, [[0, 1], [1, 0]]) == c22.parse("y2*y1^2")
    d21 = c22.parse("y1^2 + y1*y2 + y2^2")
    assert linear_substitute(d21, [[1, 1], [0, 1]]) == d21
    with pytest.raises(ValueError):
        linear_substitute(f, [[1, 1], [1, 1]])


def test_linear_substitute_exterior(c32):
    f = c32.parse("x1*x2")
    # x1 -> x2, x2 -> x1 flips the sign
    assert linear_substitute(f, [[0, 1], [1, 0]]) == -f


def test_parse_format_round_trip(c32):
    text = "2*x1*y2^3 + y1^4"
    f = c32.parse(text)
    assert c32.parse(str(f)) == f
    assert str(c32.parse(str(f))) == str(f)


def test_parse_errors(c32):
    with pytest.raises(ParseError) as e:
        c32.parse("y1 + z2")
    assert "column" in str(e.value)
    with pytest.raises(ParseError):
        c32.parse("y3")
    with pytest.raises(ParseError):
        c32.parse("y1 +")


def test_monomial_sign():
    ctx = AlgebraContext(5, 3)
    assert ctx.monomial((2, 1), (0, 0, 0)) == -ctx.monomial((1, 2), (0, 0, 0))
    assert ctx.monomial((3, 1, 2), (1, 0, 0)) == ctx.monomial((1, 2, 3), (1, 0, 0))
    assert ctx.monomial((1, 1), (0, 0, 0)).is_zero()


@given(st.data())
def test_multiply_matches_naive(data):
    ctx = data.draw(contexts())
    f = data.draw(polynomials(ctx))
    g = data.draw(polynomials(ctx))
    assert multiply(f, g) == to_poly(ctx, naive_mul(naive_from(f), naive_from(g), ctx.p))


@given(st.data())
def test_ring_axioms(data):
    ctx = data.draw(contexts())
    f, g, h = (data.draw(polynomials(ctx, max_terms=3, max_exp=3)) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f + g) - g == f


@given(st.data())
def test_frobenius_additive(data):
    ctx = data.draw(contexts())
    f = data.draw(polynomials(ctx, max_exp=3))
    g = data.draw(polynomials(ctx, max_exp=3))
    if f.has_exterior() or g.has_exterior():
        return
    p = ctx.p
    assert power(f + g, p) == power(f, p) + power(g, p)
    assert power(f, p) == frobenius(f, p)


@given(st.data())
def test_substitute_matches_naive(data):
    ctx = data.draw(contexts())
    f = data.draw(polynomials(ctx, max_exp=3))
    A = data.draw(invertible_matrices(ctx))
    assert linear_substitute(f, A) == to_poly(ctx, naive_substitute(naive_from(f), A, ctx.p))


@given(st.data())
def test_parse_round_trip(data):
    ctx = data.draw(contexts())
    f = data.draw(polynomials(ctx))
    assert ctx.parse(str(f)) == f

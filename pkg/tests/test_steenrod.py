import pytest
from hypothesis import given, strategies as st

from dickson_steenrod.dickson import DicksonWord, MuiIndex, generators
from dickson_steenrod.galois_poly import AlgebraContext, ParseError
from dickson_steenrod.steenrod import (AtomicOp, OpWord, apply_bockstein, apply_iterated, apply_power_op,
                                       apply_word, iterated_ops, parse_word)
from oracle import naive_bockstein, naive_from, naive_total_power, to_poly
from strategies import contexts, homogeneous, polynomials


def test_power_ops_on_generators():
    ctx = AlgebraContext(3, 2)
    y1, x1 = ctx.y(1), ctx.x(1)
    assert apply_power_op(0, y1) == y1
    assert apply_power_op(1, y1) == y1**3
    assert apply_power_op(2, y1).is_zero()
    assert apply_power_op(1, x1).is_zero()
    c2 = AlgebraContext(2, 2)
    assert apply_power_op(1, c2.y(1)) == c2.y(1) ** 2
    assert apply_power_op(2, c2.y(1)).is_zero()


def test_sq1_on_product():
    ctx = AlgebraContext(2, 2)
    assert apply_power_op(1, ctx.parse("y1*y2")) == ctx.parse("y1^2*y2 + y1*y2^2")


def test_bockstein_examples():
    ctx = AlgebraContext(3, 2)
    assert apply_bockstein(ctx.x(1)) == ctx.y(1)
    assert apply_bockstein(ctx.y(1)).is_zero()
    assert apply_bockstein(ctx.parse("x1*x2")) == ctx.parse("y1*x2") - ctx.parse("x1*y2")
    c2 = AlgebraContext(2, 1)
    assert apply_bockstein(c2.y(1)) == c2.y(1) ** 2


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        apply_power_op(-1, AlgebraContext(2, 1).y(1))


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2)])
def test_generator_action_cases(p, n):
    g = generators(p, n)
    for i in range(1, n):
        assert apply_power_op(p ** (n - i - 1), g.gen(i)) == g.gen(i + 1)
    assert apply_power_op(p ** (n - 1), g.gen(n)) == -(g.gen(n) * g.gen(1))


def test_iterated_order():
    assert [op.k for op in iterated_ops(2, 3, 3)] == [8, 4, 2]
    assert [op.k for op in iterated_ops(3, 2, 1)] == [9]
    with pytest.raises(ValueError):
        iterated_ops(2, 1, 3)
    with pytest.raises(ValueError):
        iterated_ops(2, 1, 0)


def test_iterated_fixture_first_step():
    g = generators(2, 3)
    f = g.evaluate(DicksonWord((12, 24, 6)))
    assert apply_iterated(3, 3, f) == g.evaluate(DicksonWord((12, 24, 8)))
    assert apply_word(parse_word("Sq^2 Sq^4 Sq^8", 2), f) == g.evaluate(DicksonWord((12, 24, 8)))


def test_iterated_single_block():
    g = generators(3, 2)
    f = g.evaluate(DicksonWord((1, 1)))
    assert apply_iterated(1, 1, f) == apply_power_op(3, f)


def test_bockstein_after_iterated_on_mui():
    # beta P(t-1, t) M_{n;i} L^{p-2} is d_{n,n} for t = i and 0 otherwise
    g = generators(3, 3)
    for i in range(1, 3):
        for t in range(1, 3):
            out = apply_bockstein(apply_iterated(t - 1, t, g.mui(MuiIndex((i,)))))
            assert out == (g.gen(3) if t == i else g.ctx.zero()), (i, t)


def test_apply_word_empty_and_fixtures():
    g = generators(2, 3)
    f = g.evaluate(DicksonWord((12, 24, 6)))
    assert apply_word(OpWord(), f) == f
    blocks = [(3, 3), (3, 2), (3, 1), (4, 3), (4, 2), (4, 1), (6, 3)]
    word = OpWord.from_blocks(2, blocks)
    assert word.format_blocks(2) == "Sq(2^6,3) Sq(2^4,1) Sq(2^4,2) Sq(2^4,3) Sq(2^3,1) Sq(2^3,2) Sq(2^3,3)"
    assert apply_word(word, f) == g.gen_power(3, 64)
    assert apply_word(word, g.evaluate(DicksonWord((20, 0, 22)))).is_zero()


def test_word_text():
    w = parse_word("Sq^2 Sq^4 Sq^8", 2)
    assert [op.k for op in w.applied] == [8, 4, 2]
    assert w.format(2) == "Sq^2 Sq^4 Sq^8"
    b = parse_word("b P^1 b", 3)
    assert b.applied[0] == AtomicOp.bockstein()
    assert b.format(3) == "b P^1 b"
    assert parse_word("b", 2).ops == (AtomicOp.power(1),)
    assert parse_word("", 3).ops == ()
    with pytest.raises(ParseError):
        parse_word("P^1", 2)
    with pytest.raises(ParseError):
        parse_word("Sq^2Sq^4", 2)
    with pytest.raises(ParseError):
        parse_word("Q^2", 3)


def test_word_blocks_validated():
    w = OpWord.from_blocks(3, [(1, 2)])
    assert [op.k for op in w.applied] == [3, 1]
    with pytest.raises(ValueError):
        OpWord(w.ops[:1], blocks=((1, 2),), p=3)
    assert w.then(OpWord.from_blocks(3, [(0, 1)])).blocks == ((1, 2), (0, 1))
    with pytest.raises(ValueError):
        parse_word("P^3", 3).format_blocks(3)


def test_atomic_op_validation():
    with pytest.raises(ValueError):
        AtomicOp("bockstein", 1)
    with pytest.raises(ValueError):
        AtomicOp("power")
    with pytest.raises(ValueError):
        AtomicOp("twist", 1)
    ctx = AlgebraContext(3, 2)
    assert AtomicOp.power(3).degree(ctx) == 12
    assert AtomicOp.bockstein().degree(ctx) == 1
    assert AtomicOp.power(3).degree(AlgebraContext(2, 2)) == 3


@given(st.data())
def test_power_op_matches_total_operation(data):
    ctx = data.draw(contexts())
    f = data.draw(polynomials(ctx, max_exp=5))
    k = data.draw(st.integers(0, 8))
    assert apply_power_op(k, f) == to_poly(ctx, naive_total_power(naive_from(f), k, ctx.p))


@given(st.data())
def test_bockstein_matches_naive(data):
    ctx = data.draw(contexts(odd=True))
    f = data.draw(polynomials(ctx))
    assert apply_bockstein(f) == to_poly(ctx, naive_bockstein(naive_from(f), ctx.p))


@given(st.data())
def test_degree_bookkeeping(data):
    ctx = data.draw(contexts())
    f = data.draw(homogeneous(ctx, nonzero=True))
    k = data.draw(st.integers(0, 4))
    g = apply_power_op(k, f)
    if not g.is_zero():
        step = k if not ctx.odd else 2 * k * (ctx.p - 1)
        assert g.degree() == f.degree() + step
    b = apply_bockstein(f)
    if not b.is_zero():
        assert b.degree() == f.degree() + 1


@given(st.data())
def test_sq_identities(data):
    ctx = AlgebraContext(2, data.draw(st.integers(1, 3)))
    f = data.draw(polynomials(ctx))
    sq = apply_power_op
    assert sq(1, sq(1, f)).is_zero()
    assert sq(1, sq(2, f)) == sq(3, f)


def test_block_text_round_trip():
    w = parse_word("Sq(2^6,3) Sq(2^4,1) Sq(2^3,3)", 2)
    assert w.blocks == ((3, 3), (4, 1), (6, 3))
    assert w.format_blocks(2) == "Sq(2^6,3) Sq(2^4,1) Sq(2^3,3)"
    assert w.ops == OpWord.from_blocks(2, [(3, 3), (4, 1), (6, 3)]).ops
    assert parse_word("P(p^1,2)", 3).format(3) == "P^1 P^3"
    assert parse_word("P(3^1,2)", 3).blocks == ((1, 2),)
    mixed = parse_word("b P(p^0,1)", 3)
    assert mixed.blocks is None and mixed.format(3) == "b P^1"
    for bad, p in [("P(5^1,1)", 3), ("Sq(2^1,3)", 2), ("P(p^1,1)", 2)]:
        with pytest.raises(ParseError):
            parse_word(bad, p)


def test_block_lemma_top_generator():
    # P(n-1+k, n) on d_{n,n}^{p^k} gives a unit times d_{n,n}^{2p^k}
    for p, n in [(2, 2), (2, 3), (3, 2)]:
        g = generators(p, n)
        for k in (0, 1):
            out = apply_iterated(n - 1 + k, n, g.gen_power(n, p**k))
            assert out in [g.gen_power(n, 2 * p**k).scale(u) for u in range(1, p)]

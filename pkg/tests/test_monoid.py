import itertools

import pytest
from hypothesis import given, strategies as st

from pcfilters.monoid import (
    INF, OrderIncompatible, OrderNotPartial, SizeCapExceeded, ZeroNotMinimal, add,
    adjoin_infinity, enumerate_partitions, extend_monoid, incomparable, leq, lift_free,
    make_monoid, minimal_elements, sinks,
)


def test_cyclic_wraparound():
    m = make_monoid([(3, 5)], check=False)
    assert len(m) == 8
    assert add(m, (6,), (4,)) == (5,)
    assert add(m, (2,), (1,)) == (3,)


def test_truncation_absorbs():
    m = make_monoid([(3, 1)])
    assert add(m, (2,), (2,)) == (3,)
    assert sinks(m) == {(3,)}


def test_direct_order_and_incomparable():
    m = make_monoid([(3, 1), (3, 1)])
    assert leq(m, (1, 0), (1, 2))
    assert incomparable(m, (1, 0), (0, 2))
    assert minimal_elements(m, [(1, 1), (2, 1), (0, 3)]) == {(1, 1), (0, 3)}


def test_lex_collapse_keeps_compatibility():
    m = make_monoid([(2, 1), (3, 1)], "lex")
    # once the first coordinate saturates the second is forgotten
    assert add(m, (1, 1), (1, 0)) == add(m, (2, 0), (0, 0))
    assert leq(m, (0, 3), (1, 0))


def test_periodic_factor_is_not_ordered_directly():
    with pytest.raises((OrderNotPartial, OrderIncompatible, ZeroNotMinimal)):
        make_monoid([(1, 2)])


def test_explicit_order_zero_not_minimal():
    m_pairs = [((1,), (0,))]
    with pytest.raises((ZeroNotMinimal, OrderNotPartial, OrderIncompatible)):
        make_monoid([(2, 1)], "explicit", m_pairs)


def test_explicit_order_not_compatible():
    with pytest.raises(OrderIncompatible):
        # 0 is below everything, nothing else is comparable
        make_monoid([(2, 1), (2, 1)], "explicit", lambda a, b: a == b or a == (0, 0))


def test_size_cap():
    with pytest.raises(SizeCapExceeded):
        make_monoid([(20, 1)] * 3, cap=1000)


def test_adjoin_infinity():
    m = adjoin_infinity(make_monoid([(2, 1)]))
    assert len(m) == 4
    assert add(m, (1,), INF) == INF
    assert leq(m, (2,), INF) and not leq(m, INF, (2,))


def test_lift_free_maps_onto():
    base = make_monoid([(2, 1)], "lex")
    lift, mu = lift_free(base, [4])
    assert set(mu.values()) == set(base.elements)
    assert leq(lift, (1,), (3,))


def test_extend_monoid_embeds():
    m = make_monoid([(2, 1)], "lex")
    ext, emb = extend_monoid(m, [(2, 1)])
    assert len(ext) == 9
    assert emb((1,)) == (1, 0)
    assert incomparable(ext, (1, 0), (0, 1))


def _naive_partitions(m, s, X, max_len):
    out = []
    for k in range(1, max_len + 1):
        for seq in itertools.product(sorted(X, key=m.idx), repeat=k):
            total = (0,) * len(m.factors)
            for x in seq:
                total = add(m, total, x)
            if total == s:
                out.append(seq)
    return out


@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
def test_partitions_match_naive(r1, r2, max_len, data):
    m = make_monoid([(r1, 1), (r2, 1)])
    X = data.draw(st.sets(st.sampled_from(m.elements[1:]), min_size=1, max_size=4))
    s = data.draw(st.sampled_from(m.elements))
    assert enumerate_partitions(m, s, X, max_len) == _naive_partitions(m, s, X, max_len)


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 1)), min_size=1, max_size=3),
       st.sampled_from(["direct", "lex"]))
def test_addition_is_commutative_associative_monotone(factors, order):
    m = make_monoid(factors, order)
    els = m.elements
    for a, b in itertools.product(els, repeat=2):
        assert add(m, a, b) == add(m, b, a)
        if leq(m, a, b):
            for c in els[:6]:
                assert leq(m, add(m, a, c), add(m, b, c))
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 200):
        assert add(m, add(m, a, b), c) == add(m, a, add(m, b, c))

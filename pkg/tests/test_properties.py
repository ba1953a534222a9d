"""Randomised property suites over groups of order at most 1024 and direct
ordered monoids of at most 64 elements."""

import random

import pytest
from hypothesis import assume, given, strategies as st

from pcfilters import pcgroup as pc
from pcfilters.closure import close
from pcfilters.faithful import (
    _alternate_lift, _elementary, _random_basis, is_filtered, is_fully_faithful, pi_map,
    preimage_genset,
)
from pcfilters.filters import (
    Filter, boundary, is_distributive, lattice_closure, ops, quotient_filter, validate_filter,
)
from pcfilters.inertia import inert_subgroups, minimal_inert, refresh_all, refresh_once
from pcfilters.lie import associated_lie, graded_basis
from pcfilters.monoid import make_monoid

import strategies as S
from oracles import Brute

pytestmark = pytest.mark.criterion(9)


@given(S.prefilters())
def test_a_closure_is_a_filter(case):
    _, p = case
    f = close(p, check=False)
    rep = validate_filter(f)
    assert rep.ok, rep.witness


@given(S.closed_filters())
def test_b_boundary_is_a_smaller_filter(case):
    _, f = case
    d = boundary(f)
    assert validate_filter(d).ok
    assert all(a <= b for a, b in zip(d.values, f.values))


@given(S.inert_filters())
def test_c_refresh_once_nu_and_parts(case):
    _, f = case
    H = minimal_inert(f)
    assume(H is not None)
    out = refresh_once(f, H, check=False)
    m, nu = f.monoid, out.nu
    o = ops(f.backend)
    for s in range(len(m)):
        row = m.row(s)
        for t in range(s, len(m)):
            assert o.leq(o.comm(nu[s], nu[t]), nu[row[t]])
    I, J = out.restricted
    keep = [s for s in range(len(m)) if s not in set(I) or s in J]
    assert all(out.values[s] == f.values[s] for s in keep)
    assert validate_filter(out).ok


@given(S.inert_filters())
def test_d_refresh_all_removes_inertia(case):
    _, f = case
    g = refresh_all(f)
    assert not inert_subgroups(g)
    assert set(f.values) <= set(g.values)


@given(st.one_of(S.closed_filters(max_size=24), S.inert_filters()))
def test_e_inert_free_pi_surjective(case):
    _, f = case
    if getattr(f.monoid, "free_model", False):
        f = refresh_all(f)
    assume(not inert_subgroups(f))
    # the surjection lives modulo the least value of the filter
    f = quotient_filter(f)
    c = pi_map(f)
    assert c.surjective
    assert c.contains_pcgs


@given(S.chain_filters(), st.integers(0, 2**32 - 1))
def test_f_fully_faithful_pi_bijective(case, seed):
    _, f = case
    assume(is_fully_faithful(f))
    L = associated_lie(f)
    basis = graded_basis(L)
    X = preimage_genset(basis)
    if _elementary(L) and seed % 2:
        rng = random.Random(seed)
        basis = _random_basis(L, rng)
        X = _alternate_lift(L, basis, rng)
        basis.entries = [(s, v, g) for (s, v, _), g in zip(basis.entries, X)]
    assume(is_filtered(X, f, check=False))
    c = pi_map(f, basis)
    target = boundary(f).values[f.monoid.zero]
    assert c.bijective
    assert c.size_lie == target.order


@given(S.closed_filters(max_size=32), st.integers(0, 2**32 - 1), st.integers(0, 2))
def test_g_filtered_implies_distributive_and_boundary(case, seed, extra):
    key, f = case
    assume(len(f.image()) <= 16)
    G = f.backend.group
    rng = random.Random(seed)
    X = preimage_genset(graded_basis(associated_lie(f)))
    elts = pc.enumerate_elements(G.whole())
    X = X + rng.sample(elts, extra)
    if not is_filtered(X, f, check=False):
        return
    assert is_distributive(lattice_closure(f)).ok
    assert is_filtered(X, boundary(f), check=False).ok


@st.composite
def subgroup_pairs(draw):
    key = draw(S.group_keys(max_order=128))
    G = S.group(key)
    elts = pc.enumerate_elements(G.whole())
    normal = draw(st.booleans())

    def one():
        k = draw(st.integers(1, 3))
        gens = [elts[draw(st.integers(0, len(elts) - 1))] for _ in range(k)]
        return G.subgroup(gens, normal_closure=normal)

    return G, one(), one(), normal


@given(subgroup_pairs())
def test_h_group_engine_matches_brute_force(case):
    G, A, B, normal = case
    br = Brute(G)
    a, b = br.of(A), br.of(B)
    assert len(a) == A.order and len(b) == B.order
    assert br.of(pc.join(A, B)) == br.join(a, b)
    assert br.of(pc.intersection(A, B)) == a & b
    if normal:
        assert pc.order(pc.join(A, B)) * pc.order(pc.intersection(A, B)) == A.order * B.order
        assert br.of(pc.commutator_subgroup(A, B)) == br.comm(a, b)
    for g in br.all_elements():
        assert (g in A) == (g in a)


@given(S.group_keys(), st.integers(0, 23))
def test_i_lower_central_lie_order(key, k):
    G = S.group(key)
    pool = S.normals(key)
    N = pool[k % len(pool)]
    if N.order < G.size and pc.is_normal(N):
        G, _ = G.quotient(N)
    ok, c = G.is_nilpotent()
    assert ok and c <= 4
    lcs = G.lower_central_series()
    m = make_monoid([(c + 1, 1)])
    b = S.PcBackend(G)
    f = Filter.from_function(m, b, lambda e: lcs[max(e[0], 1) - 1] if e[0] <= c else G.trivial())
    assert validate_filter(f).ok
    assert associated_lie(f).total_order() == G.size == len(pc.enumerate_elements(G.whole()))

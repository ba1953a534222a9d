import pytest

from pcfilters import fspec, groups
from pcfilters.backend import PcBackend
from pcfilters.closure import Prefilter, PrefilterInvalid, close, closure_by_partitions, validate_prefilter
from pcfilters.filters import Filter, boundary, is_progressive, minimal_member, validate_filter
from pcfilters.inertia import NotMinimalInert, NotProgressive, inert_subgroups, refresh_once
from pcfilters.lattice_table import SubgroupTable, validate_table
from pcfilters.lie import associated_lie, count_gl, enumerate_graded_bases
from pcfilters.monoid import make_monoid


def _doc(name):
    return fspec.load(str(fspec.bundled(name + ".fspec")))


def heis_lcs(p=3):
    G, subs = groups.heisenberg(p)
    b = PcBackend(G)
    m = make_monoid([(3, 1)])
    f = Filter.from_function(m, b, lambda e: [G.whole(), G.whole(), subs["Z"], G.trivial()][e[0]])
    return G, subs, f


def test_commutator_violation_is_reported():
    G, subs = groups.heisenberg(3)
    b = PcBackend(G)
    m = make_monoid([(3, 1)])
    f = Filter.from_function(m, b, lambda e: G.whole() if e[0] < 2 else G.trivial())
    rep = validate_filter(f)
    assert not rep.ok
    assert rep.witness[0] == "commutator"


def test_order_violation_is_reported():
    G, subs = groups.heisenberg(3)
    b = PcBackend(G)
    m = make_monoid([(3, 1)])
    f = Filter.from_function(m, b, lambda e: [G.whole(), subs["Z"], G.whole(), G.trivial()][e[0]])
    assert any(v[0] == "order" for v in validate_filter(f).violations)


def test_lcs_filter_boundary_and_lie():
    G, subs, f = heis_lcs()
    assert validate_filter(f).ok
    d = boundary(f)
    assert validate_filter(d).ok
    assert d.values[0] == G.whole()
    L = associated_lie(f)
    assert L.total_order() == 27
    assert minimal_member(f) == G.trivial()
    assert is_progressive(f)


def test_lie_bracket_alternating_and_jacobi():
    _, _, f = heis_lcs()
    L = associated_lie(f)
    basis = [L.basis_element(a) for a in range(L.rank())]
    zero = L.zero()
    for u in basis:
        assert L.bracket(u, u) == zero
        for v in basis:
            assert L.add(L.bracket(u, v), L.bracket(v, u)) == zero
            for w in basis:
                j = L.add(L.add(L.bracket(u, L.bracket(v, w)), L.bracket(v, L.bracket(w, u))),
                          L.bracket(w, L.bracket(u, v)))
                assert j == zero


def test_graded_bases_of_heisenberg_degree_one():
    _, _, f = heis_lcs()
    L = associated_lie(f)
    # GL(2,3) on the degree one part, 2 choices in degree two
    assert count_gl(2, 3) == 48
    assert len(enumerate_graded_bases(L)) == 48 * 2


def test_closure_agrees_with_partitions():
    G, subs = groups.heisenberg(3)
    b = PcBackend(G)
    m = make_monoid([(2, 1), (2, 1)])
    x = G.subgroup([G.gen(0)], normal_closure=True)
    y = G.subgroup([G.gen(1)], normal_closure=True)
    p = Prefilter(m, b, {m.idx((0, 0)): G.whole(), m.idx((1, 0)): x, m.idx((0, 1)): y})
    assert validate_prefilter(p).ok
    f = close(p)
    assert validate_filter(f).ok
    assert f.values == closure_by_partitions(p, 4).values


def test_prefilter_must_be_downward_closed():
    G, _ = groups.heisenberg(3)
    b = PcBackend(G)
    m = make_monoid([(3, 1)])
    p = Prefilter(m, b, {0: G.whole(), 2: G.whole()})
    assert not validate_prefilter(p).ok
    with pytest.raises(PrefilterInvalid):
        close(p)


def test_table_validation():
    good = SubgroupTable(["G", "N", "1"], {"G": 8, "N": 2, "1": 1}, {("N", "G"), ("1", "N")},
                         commutator={("G", "G"): "N"}, sections={("G", "N"): [2, 2]})
    assert validate_table(good).ok
    bad = SubgroupTable(["G", "N", "1"], {"G": 8, "N": 3, "1": 1}, {("N", "G"), ("1", "N")})
    assert not validate_table(bad).ok
    bad = SubgroupTable(["G", "N", "1"], {"G": 8, "N": 2, "1": 1}, {("N", "G"), ("1", "N")},
                        commutator={("G", "N"): "G"})
    assert not validate_table(bad).ok


def test_refresh_needs_progressive_filter():
    f = _doc("inert_boundary").filter
    assert inert_subgroups(f)
    with pytest.raises(NotProgressive):
        refresh_once(f)


def test_refresh_rejects_non_minimal():
    f = _doc("inert_boundary").filter
    G = f.backend.top()
    with pytest.raises(NotMinimalInert):
        refresh_once(f, G, free_model=True)

from pcfilters import fspec, groups
from pcfilters.faithful import (
    is_faithful_filter, is_filtered, is_weakly_filtered, pi_map,
    preimage_genset,
)
from pcfilters.lie import associated_lie, graded_basis

from oracles import Brute, brute_filtered, count_invertible


def _doc(name):
    return fspec.load(str(fspec.bundled(name + ".fspec")))


def test_weakly_filtered_is_weaker():
    d = _doc("z60")
    G = d.filter.backend.group
    X = [groups.element_of_cyclic(G, k) for k in (2, 3, 10, 15)]
    assert is_weakly_filtered(X, d.filter)
    assert not is_filtered(X, d.filter)


def test_filtered_matches_oracle():
    d = _doc("z60")
    f = d.filter
    G = f.backend.group
    br = Brute(G)
    sets = [br.of(v) for v in f.values]
    for ks in [(6, 10, 15, 30), (2, 3, 10, 15), (10, 15, 30), (5, 10, 15, 30)]:
        X = [groups.element_of_cyclic(G, k) for k in ks]
        assert bool(is_filtered(X, f)) == brute_filtered(X, sets, G)


def test_count_invertible_oracle():
    assert count_invertible(2, 3) == 48
    assert count_invertible(2, 2) == 6


def test_heis_pi_map():
    f = _doc("heis3").filter
    L = associated_lie(f)
    c = pi_map(f, graded_basis(L))
    assert c.bijective and c.size_lie == 27
    assert is_faithful_filter(f)
    X = preimage_genset(graded_basis(L))
    assert is_filtered(X, f)


"""Random groups, monoids and filters for the property suites."""

import random
import zlib
from functools import lru_cache

from hypothesis import strategies as st

from pcfilters import groups
from pcfilters.backend import PcBackend
from pcfilters.closure import Prefilter, close
from pcfilters.filters import Filter
from pcfilters.monoid import make_monoid
from pcfilters.pcgroup import enumerate_elements

BASES = {
    "heis2": lambda: groups.heisenberg(2),
    "heis3": lambda: groups.heisenberg(3),
    "heis5": lambda: groups.heisenberg(5),
    "ut42": lambda: groups.unitriangular(4, 2),
    "ut43": lambda: groups.unitriangular(4, 3),
    "ut52": lambda: groups.unitriangular(5, 2),
    "hk2": lambda: groups.hk_group(2),
    "hk3": lambda: groups.hk_group(3),
    "z60": lambda: groups.cyclic(60),
    "z36": lambda: groups.cyclic(36),
}
QUOTIENTS_PER_BASE = 4


@lru_cache(maxsize=None)
def base(name):
    G, subs = BASES[name]()
    return G


@lru_cache(maxsize=None)
def normals(key):
    """A deterministic list of normal subgroups, largest first."""
    G = group(key)
    rng = random.Random(zlib.crc32(key.encode()))
    found = set(G.lower_central_series())
    found.add(G.trivial())
    found.add(center(key))
    for g in G.gens():
        found.add(G.subgroup([g], normal_closure=True))
    elts = enumerate_elements(G.whole())
    for _ in range(10):
        found.add(G.subgroup(rng.sample(elts, rng.choice([1, 1, 2])), normal_closure=True))
    out = sorted(found, key=lambda H: H.key())
    return tuple(out[:24])


@lru_cache(maxsize=None)
def center(key):
    G = group(key)
    Z = G.trivial()
    for g in enumerate_elements(G.whole()):
        if g not in Z and all(G.commutator(g, h) == G.identity for h in G.gens()):
            Z = G.subgroup(list(Z.gens) + [g])
    return Z


@lru_cache(maxsize=None)
def group(key):
    """``name`` or ``name/k`` (quotient by the k-th proper normal subgroup)."""
    if "/" not in key:
        return base(key)
    name, k = key.split("/")
    G = base(name)
    # smallest normal subgroups first, so most quotients stay nonabelian
    proper = sorted((N for N in normals(name) if 1 < N.order < G.size), key=lambda N: N.order)
    Q, _ = G.quotient(proper[int(k) % len(proper)])
    return Q


def keys(max_order=1024):
    out = []
    for name in BASES:
        out.append(name)
        out.extend(f"{name}/{k}" for k in range(QUOTIENTS_PER_BASE))
    return [k for k in out if group(k).size <= max_order]


def backend(key):
    return PcBackend(group(key))


@st.composite
def group_keys(draw, max_order=1024):
    return draw(st.sampled_from(keys(max_order)))


@st.composite
def direct_monoids(draw, max_size=64, max_dim=3):
    d = draw(st.integers(1, max_dim))
    bounds = []
    size = 1
    for i in range(d):
        hi = max(1, min(6, max_size // size - 1))
        r = draw(st.integers(1, hi))
        bounds.append(r)
        size *= r + 1
    return make_monoid([(r, 1) for r in bounds], "direct")


def _below(draw, pool, top):
    cands = [H for H in pool if H <= top]
    return cands[draw(st.integers(0, len(cands) - 1))]


@st.composite
def prefilters(draw, max_order=1024, max_size=64):
    """Chains along the axes of a direct-ordered truncated free monoid.

    The domain is ``{0} ∪ {t e_i : t <= k_i}``, which is downward closed and
    generates the monoid.
    """
    key = draw(group_keys(max_order))
    m = draw(direct_monoids(max_size))
    b = backend(key)
    pool = normals(key)
    top = b.top() if draw(st.integers(0, 3)) else _below(draw, pool, b.top())
    values = {m.zero: top}
    for i, (r, _) in enumerate(m.factors):
        k = draw(st.integers(1, r))
        cur = top
        for t in range(1, k + 1):
            cur = _below(draw, pool, cur)
            e = [0] * len(m.factors)
            e[i] = t
            values[m.idx(tuple(e))] = cur
    return key, Prefilter(m, b, values)


@st.composite
def closed_filters(draw, max_order=1024, max_size=64):
    key, p = draw(prefilters(max_order, max_size))
    return key, close(p)


@st.composite
def inert_filters(draw, max_order=1024):
    """The lower central series on the first axis and central subgroups on
    the others; the central values usually end up inert."""
    key = draw(group_keys(max_order))
    G = group(key)
    b = backend(key)
    lcs = G.lower_central_series()
    c = len(lcs) - 1
    Z = center(key)
    central = [H for H in normals(key) if H <= Z and H.order > 1] or [Z]
    dims = draw(st.integers(1, 3))
    bounds = [c + 1]
    size = c + 2
    for _ in range(dims):
        r = draw(st.integers(2, 3))
        if size * (r + 1) > 64:
            break
        bounds.append(r)
        size *= r + 1
    m = make_monoid([(r, 1) for r in bounds], "direct")
    m.free_model = True
    axis = [None] + [central[draw(st.integers(0, len(central) - 1))] for _ in bounds[1:]]

    def value(e):
        support = [i for i, x in enumerate(e) if x]
        if not support:
            return b.top()
        if support == [0]:
            return lcs[e[0] - 1] if e[0] <= c else G.trivial()
        if len(support) == 1:
            return axis[support[0]]
        return G.trivial()

    return key, Filter.from_function(m, b, value)


@st.composite
def chain_filters(draw, max_order=1024):
    """Closures over ``C(r,1)`` with ``π_0 = π_1 = G`` and a descending chain after."""
    key = draw(group_keys(max_order))
    G = group(key)
    b = backend(key)
    c = len(G.lower_central_series()) - 1
    k = draw(st.integers(1, 3))
    r = max(k, c) + draw(st.integers(1, 3))
    m = make_monoid([(r, 1)])
    pool = normals(key)
    values = {0: b.top(), 1: b.top()}
    cur = b.top()
    for t in range(2, k + 1):
        cur = _below(draw, pool, cur)
        values[t] = cur
    return key, close(Prefilter(m, b, values))

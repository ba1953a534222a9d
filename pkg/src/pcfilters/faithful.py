"""Filtered and faithful generating sets, faithful filters, and the map
``π : L(φ) -> ∂φ_0`` built from lifts of a graded basis.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations, product

from . import pcgroup as pc
from .filters import (
    CapExceeded, Filter, Verdict, boundary, is_distributive, lattice_closure, ops,
)
from .inertia import inert_subgroups
from .lie import GradedBasis, associated_lie, enumerate_graded_bases, graded_basis

ENUM_CAP = 200_000


class PreconditionFailed(ValueError):
    pass


class NoInertRequired(UserWarning):
    pass


def _need_elements(f: Filter):
    if not f.backend.has_elements:
        raise TypeError("element-level checks need a pc group backend")
    return f.backend.group


def _distinct(f: Filter, cap: int | None) -> list:
    vals = f.image()
    if cap is not None and len(vals) > cap:
        raise CapExceeded(f"{len(vals)} distinct values exceed the cap {cap}")
    return vals


# -- generating sets ------------------------------------------------------

def is_weakly_filtered(X, f: Filter) -> Verdict:
    """``⟨φ_s ∩ X⟩ = φ_s`` for every index; witness is the first failing index."""
    G = _need_elements(f)
    X = [tuple(x) for x in X]
    m = f.monoid
    seen = {}
    for s in m.linear_extension():
        v = f.values[s]
        if v not in seen:
            seen[v] = G.subgroup([x for x in X if x in v]) == v
        if not seen[v]:
            return Verdict(False, [m.format(s)])
    return Verdict(True)


def _subsets(vals):
    for k in range(1, len(vals) + 1):
        yield from combinations(vals, k)


def _filtered_witnesses(X, f: Filter, cap: int | None):
    G = f.backend.group
    o = ops(f.backend)
    vals = _distinct(f, cap)
    inside = {v: frozenset(x for x in X if x in v) for v in vals}
    bad = []
    for S in _subsets(vals):
        meet = reduce(o.meet, S)
        common = frozenset.intersection(*(inside[v] for v in S))
        if G.subgroup(common) != meet:
            bad.append((f.backend.order(reduce(o.join, S)), "meet", S, meet, common))
        join = reduce(o.join, S)
        lhs = frozenset(x for x in X if x in join)
        rhs = frozenset.union(*(inside[v] for v in S))
        if lhs != rhs:
            bad.append((f.backend.order(join), "join", S, lhs, rhs))
    bad.sort(key=lambda w: (w[0], len(w[2]), [f.backend.key(v) for v in w[2]]))
    return bad


@dataclass
class FilteredWitness:
    """A subset ``S`` of image values where one of the two conditions fails.

    For ``kind == "join"``, ``lhs`` is ``(∏ S) ∩ X`` and ``rhs`` the union
    of the ``φ_s ∩ X``.  For ``kind == "meet"``, ``lhs`` is ``⋂ S`` and
    ``rhs`` the common elements of ``X``.
    """

    kind: str
    subset: tuple
    lhs: object
    rhs: object
    labels: list = field(default_factory=list)


def is_filtered(X, f: Filter, *, cap: int | None = 16, check: bool = True) -> Verdict:
    """Both lattice conditions over every nonempty set of image values.

    The witnesses are sorted by the order of the join of the subset, so
    the smallest failing configuration comes first.  With ``check`` a
    positive verdict also confirms that ``X`` is filtered by the boundary
    filter and that the lattice generated by the image is distributive.
    """
    _need_elements(f)
    X = [tuple(x) for x in X]
    bad = _filtered_witnesses(X, f, cap)
    lab = f.backend.label
    wit = [FilteredWitness(k, S, lhs, rhs, [lab(v) for v in S]) for _, k, S, lhs, rhs in bad]
    v = Verdict(not wit, wit)
    if v.ok and check:
        if _filtered_witnesses(X, boundary(f), cap):
            raise AssertionError("filtered set is not filtered by the boundary")
        if not is_distributive(lattice_closure(f, cap=cap)):
            raise AssertionError("filtered set but the lattice is not distributive")
    return v


def faithful_indices(x, f: Filter, dphi: Filter | None = None) -> list:
    """Indices ``s`` with ``x ∈ φ_s - ∂φ_s``."""
    d = dphi or boundary(f)
    x = tuple(x)
    return [s for s in range(len(f.monoid)) if x in f.values[s] and x not in d.values[s]]


def is_faithful_genset(X, f: Filter) -> Verdict:
    """Each element of ``X`` must sit in ``φ_s - ∂φ_s`` for exactly one ``s``.

    Witnesses are ``(element, [indices])`` for the offending elements.
    """
    G = _need_elements(f)
    d = boundary(f)
    m = f.monoid
    bad = []
    cert = {}
    for x in X:
        idx = faithful_indices(x, f, d)
        if len(idx) == 1:
            cert[tuple(x)] = m.format(idx[0])
        else:
            bad.append((G.format(tuple(x)), [m.format(s) for s in idx]))
    return Verdict(not bad, bad, cert)


def is_faithfully_filtered(X, f: Filter, *, cap: int | None = 16) -> Verdict:
    a = is_filtered(X, f, cap=cap)
    b = is_faithful_genset(X, f)
    return Verdict(a.ok and b.ok, list(a.witnesses) + list(b.witnesses))


def faithful_obstructions(f: Filter, *, cap: int = ENUM_CAP) -> list:
    """Indices whose layer ``φ_s - ∂φ_s`` has no element private to ``s``.

    A weakly filtered set must meet every nonempty layer, so any entry here
    rules out a faithful generating set.  Entries are ``(index, element,
    other indices holding that element)``.
    """
    G = _need_elements(f)
    d = boundary(f)
    m = f.monoid
    layers = {}
    for s in range(len(m)):
        if f.values[s] != d.values[s]:
            layers[s] = (f.values[s], d.values[s])
    out = []
    for s, (top, bot) in layers.items():
        shared = None
        private = False
        for x in pc.enumerate_elements(top, cap):
            if x in bot:
                continue
            others = [t for t, (a, b) in layers.items() if t != s and x in a and x not in b]
            if not others:
                private = True
                break
            if shared is None:
                shared = (x, others)
        if not private:
            x, others = shared
            out.append((m.format(s), G.format(x), [m.format(t) for t in others]))
    return out


# -- filters ---------------------------------------------------------------

def _antichains(m, idxs, cap):
    """Antichains of size at least two among ``idxs``, smallest first."""
    level = [(i,) for i in idxs]
    count = 0
    while level:
        nxt = []
        for chain in level:
            for j in idxs:
                if j <= chain[-1]:
                    continue
                if any(m.leq_i(i, j) or m.leq_i(j, i) for i in chain):
                    continue
                count += 1
                if count > cap:
                    raise CapExceeded(f"more than {cap} antichains")
                nxt.append(chain + (j,))
        yield from nxt
        level = nxt


def is_faithful_filter(f: Filter, *, cap: int | None = 16, antichain_cap: int = ENUM_CAP) -> Verdict:
    """``⋂ φ_s = ⋂ ∂φ_s`` for every antichain ``S`` of at least two indices.

    Indices with trivial value are skipped since both sides are then
    trivial.  Antichains with the same set of ``(φ_s, ∂φ_s)`` pairs are
    checked once.
    """
    o = ops(f.backend)
    d = boundary(f)
    _distinct(f, cap)
    m = f.monoid
    idxs = [s for s in m.linear_extension() if f.backend.order(f.values[s]) > 1]
    idxs.sort()
    lab = f.backend.label
    seen = set()
    for S in _antichains(m, idxs, antichain_cap):
        pairs = frozenset((f.values[s], d.values[s]) for s in S)
        if pairs in seen:
            continue
        seen.add(pairs)
        meet = reduce(o.meet, sorted({a for a, _ in pairs}, key=f.backend.key))
        dmeet = reduce(o.meet, sorted({b for _, b in pairs}, key=f.backend.key))
        if meet != dmeet:
            return Verdict(False, [([m.format(s) for s in S], lab(meet), lab(dmeet))])
    return Verdict(True)


def is_fully_faithful(f: Filter, *, cap: int | None = 16) -> Verdict:
    """Faithful, no inert subgroups and ``φ_0 = ∂φ_0``.

    Finite groups satisfy the descending chain condition, so that part
    always holds here.
    """
    reasons = []
    ff = is_faithful_filter(f, cap=cap)
    if not ff:
        reasons.append(("faithful", ff.witness))
    inert = inert_subgroups(f)
    if inert:
        reasons.append(("inert", [f.backend.label(h) for h in inert]))
    m = f.monoid
    if f.values[m.zero] != boundary(f).values[m.zero]:
        reasons.append(("zero", f.backend.label(f.values[m.zero])))
    return Verdict(not reasons, reasons)


# -- bases and the map π ------------------------------------------------------

def preimage_genset(basis: GradedBasis) -> list:
    return basis.lifts()


def _alternate_lift(L, basis: GradedBasis, rng: random.Random) -> list:
    # multiply each lift by a random element of the boundary at its index
    G = L.filter.backend.group
    out = []
    for s, _vec, g in basis.entries:
        bot = L.boundary.values[s]
        h = G.identity
        for gen, dep in zip(bot.gens, bot.depths):
            h = G.mul(h, G.pow(gen, rng.randrange(G.orders[dep])))
        out.append(G.mul(g, h))
    return out


def _random_basis(L, rng: random.Random) -> GradedBasis:
    from .lie import _lift, _rank_mod_p
    G = L.filter.backend.group
    entries = []
    for c in L.ordered_components():
        p = c.invariants[0]
        while True:
            vecs = [tuple(rng.randrange(p) for _ in range(c.rank)) for _ in range(c.rank)]
            if _rank_mod_p(vecs, p) == c.rank:
                break
        entries.extend((c.index, v, _lift(c, v, G)) for v in vecs)
    return GradedBasis(entries)


def _elementary(L) -> bool:
    """Every component is a vector space over a prime field."""
    for c in L.components.values():
        ps = set(c.invariants)
        if len(ps) != 1 or not pc._is_prime(ps.pop()):
            return False
    return True


@dataclass
class FullnessReport:
    full: bool
    degenerate: bool
    basis: GradedBasis
    witnesses: list = field(default_factory=list)
    alternates_checked: int = 0
    alternates_ok: bool = True

    def __bool__(self):
        return self.full


def is_full(f: Filter, L=None, *, samples: int = 5, seed: int = 0, cap: int | None = 16) -> FullnessReport:
    """Is a lift of the canonical graded basis filtered by ``f``?

    For fully faithful filters ``samples`` further random bases with random
    lifts are checked too, since then every such preimage must be filtered.
    """
    G = _need_elements(f)
    L = L or associated_lie(f)
    basis = graded_basis(L)
    X = preimage_genset(basis)
    zero = f.values[f.monoid.zero]
    dzero = L.boundary.values[f.monoid.zero]
    if not X:
        return FullnessReport(G.subgroup([]) == dzero, True, basis)
    v = is_filtered(X, f, cap=cap, check=False)
    rep = FullnessReport(v.ok, False, basis, list(v.witnesses))
    elementary = _elementary(L)
    if samples and elementary and zero == dzero and is_fully_faithful(f, cap=cap):
        rng = random.Random(seed)
        for _ in range(samples):
            B = _random_basis(L, rng)
            Y = _alternate_lift(L, B, rng)
            rep.alternates_checked += 1
            if not is_filtered(Y, f, cap=cap, check=False):
                rep.alternates_ok = False
    return rep


@dataclass
class BijectionCertificate:
    """Outcome of evaluating ``π`` on every element of ``L(φ)``."""

    order: list
    lifts: list
    size_lie: int
    size_target: int
    surjective: bool
    injective: bool
    contains_pcgs: bool
    lifts_are_pcgs: bool
    fully_faithful: bool
    inert_present: bool
    collisions: int = 0

    @property
    def bijective(self) -> bool:
        return self.surjective and self.injective

    def describe(self) -> str:
        terms = " * ".join(f"x[{lab}]^k" for lab in self.order)
        return f"sum k*y -> {terms}"


def _greedy_pcgs(G, lifts, target):
    # deepest lifts first; keep an element when it grows a normal chain
    N = G.trivial()
    chosen = []
    for g in reversed(lifts):
        if g in N:
            continue
        M = G.subgroup(chosen + [g])
        if pc.is_normal(N, M):
            chosen.append(g)
            N = M
    return chosen, N == target


def _orders(L, basis: GradedBasis) -> list:
    """Additive order of each basis vector."""
    out = []
    for s, vec, _g in basis.entries:
        inv = L.components[s].invariants
        support = [k for k, c in enumerate(vec) if c % inv[k]]
        if len(support) == 1 and vec[support[0]] == 1:
            out.append(inv[support[0]])
            continue
        ps = set(inv)
        if len(ps) != 1:
            raise ValueError("non-unit basis vectors need an elementary abelian component")
        out.append(ps.pop())
    return out


def pi_map(f: Filter, basis: GradedBasis | None = None, *, cap: int = ENUM_CAP) -> BijectionCertificate:
    """Evaluate ``Σ k_y y ↦ ∏ x_y^{k_y}`` on all of ``L(φ)``.

    The product runs over the basis in its given (ascending) order.  The
    image is built one factor at a time with duplicates dropped, so the
    work is bounded by ``|G|`` rather than ``|L(φ)|``; ``π`` is injective
    exactly when the image has ``|L(φ)|`` elements.
    """
    G = _need_elements(f)
    L = associated_lie(f)
    basis = basis or graded_basis(L)
    lifts = basis.lifts()
    target = L.boundary.values[f.monoid.zero]
    inert = bool(inert_subgroups(f))
    if inert:
        warnings.warn("inert subgroups present; surjectivity is not guaranteed", NoInertRequired)
    orders = _orders(L, basis)
    size = 1
    for p in orders:
        size *= p
    if G.size > cap:
        raise CapExceeded(f"|G| = {G.size} exceeds the enumeration cap {cap}")
    image = {G.identity}
    for g, p in zip(lifts, orders):
        powers = [G.pow(g, e) for e in range(p)]
        image = {G.mul(x, y) for x in image for y in powers}
    surjective = len(image) == target.order and all(x in target for x in image)
    injective = len(image) == size
    chosen, contains = _greedy_pcgs(G, lifts, target)
    if contains:
        contains = pc.is_pcgs(G, chosen, target)
    ff = bool(is_fully_faithful(f))
    lifts_pcgs = pc.is_pcgs(G, lifts, target)
    order = [f.monoid.format(s) for s in basis.indices()]
    return BijectionCertificate(order, lifts, size, target.order, surjective, injective,
                                contains, lifts_pcgs, ff, inert, size - len(image))


@dataclass
class CorrespondenceReport:
    bases: int
    distinct_pcgs: int
    all_pcgs: bool
    all_filtered: bool
    converse_checked: int
    converse_ok: bool

    def __bool__(self):
        return (self.all_pcgs and self.all_filtered and self.converse_ok
                and self.distinct_pcgs == self.bases)


def _image_is_basis(L, Y, dphi) -> bool:
    from .lie import _rank_mod_p
    per = {}
    for y in Y:
        idx = faithful_indices(y, L.filter, dphi)
        if len(idx) != 1 or idx[0] not in L.components:
            return False
        per.setdefault(idx[0], []).append(L.coords_of(idx[0], y))
    for s, c in L.components.items():
        vecs = per.get(s, [])
        if len(vecs) != c.rank or _rank_mod_p(vecs, c.invariants[0]) != c.rank:
            return False
    return sum(len(v) for v in per.values()) == len(Y)


def basis_pcgs_correspondence(f: Filter, sample_size: int | None = None, *, seed: int = 0,
                              cap: int = 10_000) -> CorrespondenceReport:
    """Lift graded bases to pcgs and push perturbed pcgs back to bases.

    Every basis (or a seeded sample of ``sample_size``) must lift to a
    filtered pcgs of ``∂φ_0``, and distinct bases to distinct sequences.
    Each lift, multiplied through by random boundary elements, is another
    filtered pcgs whose image must again be a graded basis.
    """
    G = _need_elements(f)
    if not is_fully_faithful(f):
        raise PreconditionFailed("the filter is not fully faithful")
    L = associated_lie(f)
    bases = enumerate_graded_bases(L, cap=cap)
    rng = random.Random(seed)
    if sample_size is not None and sample_size < len(bases):
        bases = rng.sample(bases, sample_size)
    target = L.boundary.values[f.monoid.zero]
    seqs = set()
    all_pcgs = all_filtered = conv_ok = True
    for B in bases:
        X = B.lifts()
        seqs.add(tuple(X))
        all_pcgs &= pc.is_pcgs(G, X, target)
        all_filtered &= bool(is_filtered(X, f, check=False))
        Y = _alternate_lift(L, B, rng)
        good = (pc.is_pcgs(G, Y, target) and bool(is_filtered(Y, f, check=False))
                and _image_is_basis(L, Y, L.boundary))
        conv_ok &= good
    return CorrespondenceReport(len(bases), len(seqs), all_pcgs, all_filtered, len(bases), conv_ok)


"""Inert subgroups of a filter and the refresh that removes them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from .backend import PcBackend
from .filters import Filter, boundary, is_progressive, minimal_member, ops, validate_filter
from .monoid import SizeCapExceeded, lift_free


class NotProgressive(ValueError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class NotMinimalInert(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class InertiaPersists(RuntimeError):
    """A refresh finished but the target subgroup is still inert."""

    def __init__(self, message, subgroup=None, indices=()):
        super().__init__(message)
        self.subgroup = subgroup
        self.indices = list(indices)


class IterationCapExceeded(RuntimeError):
    pass


@dataclass
class InertiaReport:
    """Strata ``levels[0] ⊆ levels[1] ⊆ ...`` of the image and the inert rest.

    ``witness[H]`` is the list of lower-level members whose join is the
    boundary at some index carrying ``H``.
    """

    levels: list
    terminal: list
    inert: list
    witness: dict = field(default_factory=dict)

    @property
    def inert_free(self) -> bool:
        return not self.inert


def _level_of(f: Filter, dphi: Filter):
    b = f.backend
    o = ops(b)
    base = minimal_member(f)
    current = [base]
    levels = [list(current)]
    witness = {base: []}
    image = f.image()
    while True:
        added = []
        for i, v in enumerate(f.values):
            if v in witness or v in added:
                continue
            target = dphi.values[i]
            below = [h for h in current if o.leq(h, target)]
            joined = reduce(o.join, below) if below else b.bottom() if b.kind == "pc" else None
            if joined is None:
                # table backends may lack a bottom; an empty join then fails
                continue
            if joined == target:
                added.append(v)
                witness[v] = below
        if not added:
            break
        current = current + sorted(added, key=b.key)
        levels.append(list(current))
    terminal = sorted(current, key=b.key)
    inert = [v for v in image if v not in witness]
    return levels, terminal, inert, witness


def b_sequence(f: Filter) -> InertiaReport:
    """Ascending strata of the image; anything never reached is inert."""
    levels, terminal, inert, witness = _level_of(f, boundary(f))
    return InertiaReport(levels, terminal, inert, witness)


def inert_subgroups(f: Filter) -> list:
    return b_sequence(f).inert


@dataclass
class PropCheck:
    agree: bool
    generated_side: bool
    strata_side: bool
    witness: object = None

    def __bool__(self):
        return self.agree


def check_prop_inert(f: Filter) -> PropCheck:
    """Compare "every boundary is a join of values at indices with
    ``φ_t ≠ ∂φ_t``" against "every value lies in the strata".
    """
    b = f.backend
    o = ops(b)
    d = boundary(f)
    m = f.monoid
    live = [f.values[t] for t in range(len(m)) if f.values[t] != d.values[t]]
    first_bad = None
    gen_ok = True
    for s in range(len(m)):
        target = d.values[s]
        below = [v for v in live if o.leq(v, target)]
        least = minimal_member(f)
        joined = reduce(o.join, below, least)
        if joined != target:
            gen_ok = False
            first_bad = m.format(s)
            break
    strata_ok = not b_sequence(f).inert
    return PropCheck(gen_ok == strata_ok, gen_ok, strata_ok, first_bad)


def _nilpotency_class(backend) -> int:
    if not isinstance(backend, PcBackend):
        raise NotNilpotent("refresh needs a pc group backend")
    ok, c = backend.group.is_nilpotent()
    if not ok:
        raise NotNilpotent("the group is not nilpotent")
    return c


def minimal_inert(f: Filter, inert=None):
    """Smallest inert subgroup: least order, ties by canonical key."""
    inert = inert_subgroups(f) if inert is None else inert
    if not inert:
        return None
    o = ops(f.backend)
    minimal = [h for h in inert if not any(k != h and o.leq(k, h) for k in inert)]
    return min(minimal, key=lambda h: (f.backend.order(h), f.backend.key(h)))


def restricted_generators(f: Filter, H) -> tuple[list, list]:
    """``I`` (indices carrying ``H``) and ``J ⊆ I``.

    ``J`` starts with the minimal elements of ``I`` and grows by the
    earliest remaining element of ``I`` in the linear extension until
    ``(M - I) ∪ J`` generates the monoid.
    """
    m = f.monoid
    I = [s for s in range(len(m)) if f.values[s] == H]
    Iset = set(I)
    J = [s for s in I if not any(t != s and t in Iset and m.leq_i(t, s) for t in I)]
    rest = [s for s in range(len(m)) if s not in Iset]
    order = [s for s in m.linear_extension() if s in Iset and s not in J]
    while len(m.generated(rest + J)) != len(m):
        if not order:
            raise RuntimeError("cannot generate the monoid")
        J.append(order.pop(0))
    return I, sorted(J)


def refresh_once(f: Filter, H=None, *, check: bool = True, free_model: bool = False) -> Filter:
    """Rebuild the filter on the indices carrying a minimal inert ``H``.

    ``ν_s`` joins left-normed commutators over sequences with parts in
    ``(M - I) ∪ J`` summing to ``s``; the result at ``s`` is the join of
    ``ν_t`` over ``t ⪰ s``.

    ``free_model`` declares that a truncated monoid stands in for ℕ^d, which
    lifts the progressiveness requirement; lifted monoids carry it already.
    """
    m, b = f.monoid, f.backend
    o = ops(b)
    c = _nilpotency_class(b)
    prog = is_progressive(f)
    free_model = free_model or getattr(m, "free_model", False)
    if not prog and not free_model:
        raise NotProgressive("filter has nontrivial values at sinks", prog.witnesses)
    inert = inert_subgroups(f)
    target = minimal_inert(f, inert)
    if H is None:
        H = target
    if H is None or H not in inert:
        raise NotMinimalInert("the subgroup is not inert")
    if any(k != H and o.leq(k, H) for k in inert):
        raise NotMinimalInert("a smaller inert subgroup lies below it")
    I, J = restricted_generators(f, H)
    Iset = set(I)
    parts = [s for s in range(len(m)) if s not in Iset or s in J]
    bottom = b.bottom()
    n = len(m)
    layer = [bottom] * n
    for x in parts:
        layer[x] = f.values[x]
    nu = list(layer)
    for _ in range(max(c - 1, 0)):
        nxt = [set() for _ in range(n)]
        for u in range(n):
            if layer[u] == bottom:
                continue
            row = m.row(u)
            for x in parts:
                cm = o.comm(layer[u], f.values[x])
                if cm != bottom:
                    nxt[row[x]].add(cm)
        layer = [reduce(o.join, sorted(s, key=b.key)) if s else bottom for s in nxt]
        for i, v in enumerate(layer):
            if v != bottom:
                nu[i] = o.join(nu[i], v)
    hat = []
    for s in range(n):
        ups = {nu[t] for t in m.up_set(s)}
        hat.append(reduce(o.join, sorted(ups, key=b.key)))
    out = Filter(m, b, hat)
    out.refreshed = H
    out.restricted = (I, J)
    out.nu = nu
    if check:
        rep = validate_filter(out, first_only=True)
        if not rep:
            raise AssertionError(f"refresh produced a non-filter: {rep.witness}")
        for s in parts:
            if out.values[s] != f.values[s]:
                raise AssertionError(f"refresh changed the value at {m.format(s)}")
        if H in inert_subgroups(out):
            raise InertiaPersists(f"{b.label(H)} is still inert after refresh", H,
                                  [m.format(s) for s in I])
    return out


def lift_filter(f: Filter, *, cap: int = 4096, raises: int = 2) -> tuple[Filter, bool]:
    """Transport ``f`` to a truncated free monoid that maps onto its monoid.

    Bounds start at ``index + class + 1`` per factor and are raised at most
    ``raises`` times, stopping early once every sink of the truncation
    carries the trivial subgroup.
    Returns the transported filter and a flag telling whether the
    truncation is adequate in that sense.
    """
    m, b = f.monoid, f.backend
    c = _nilpotency_class(b)
    bounds = [r + c + 1 for r, _ in m.factors]
    best = None
    for _ in range(raises + 1):
        try:
            lift, mu = lift_free(m, bounds, cap=cap, check_compatible=False)
        except SizeCapExceeded:
            break
        lift.free_model = True
        vals = [f.values[m.idx(mu[lift.elt(i)])] for i in range(len(lift))]
        out = Filter(lift, b, vals)
        out.projection = mu
        best = out
        if all(b.order(vals[i]) == 1 for i in range(len(lift)) if lift.is_sink_i(i)):
            return out, True
        bounds = [x + 1 for x in bounds]
    if best is None:
        raise SizeCapExceeded("no truncation fits under the cap", cap)
    return best, False


def refresh_all(f: Filter, *, cap: int | None = None, lift_cap: int = 4096,
                free_model: bool = False) -> Filter:
    """Refresh minimal inert subgroups until none remain.

    A filter that is not progressive is first lifted with
    :func:`lift_filter`, unless ``free_model`` says its monoid already
    stands in for ℕ^d.
    """
    _nilpotency_class(f.backend)
    free_model = free_model or getattr(f.monoid, "free_model", False)
    original = set(f.values)
    cur = f
    if not is_progressive(f) and not free_model:
        cur, adequate = lift_filter(f, cap=lift_cap)
        cur.truncation_adequate = adequate
    rounds = cap if cap is not None else max(len(original) ** 2, 1)
    for _ in range(rounds):
        inert = inert_subgroups(cur)
        if not inert:
            break
        cur = refresh_once(cur, minimal_inert(cur, inert), free_model=free_model)
    else:
        if inert_subgroups(cur):
            raise IterationCapExceeded(f"inert subgroups remain after {rounds} rounds")
    if not original <= set(cur.values):
        raise AssertionError("refresh lost part of the original image")
    return cur


def solvability_check(f: Filter) -> bool:
    """Does the derived series of ``∂φ_0`` reach the minimal member?"""
    b = f.backend
    d = boundary(f)
    cur = d.values[f.monoid.zero]
    least = minimal_member(f)
    seen = set()
    while cur not in seen:
        seen.add(cur)
        if cur == least:
            return True
        cur = b.commutator(cur, cur)
    return cur == least

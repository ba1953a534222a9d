"""Prefilters and their closure into filters."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from .filters import Filter, ops, validate_filter
from .monoid import Monoid, extend_monoid


class FixpointCapExceeded(RuntimeError):
    pass


class PrefilterInvalid(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class Prefilter:
    """A partial map ``X -> subgroups`` on a monoid, keyed by index."""

    def __init__(self, monoid: Monoid, backend, values: dict):
        self.monoid = monoid
        self.backend = backend
        self.values = {monoid.idx(k): v for k, v in values.items()}

    @property
    def domain(self) -> list:
        return sorted(self.values)

    def __getitem__(self, s):
        return self.values[self.monoid.idx(s)]


@dataclass
class PrefilterReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    @property
    def witness(self):
        return self.violations[0] if self.violations else None


def validate_prefilter(p: Prefilter) -> PrefilterReport:
    """Conditions: (a) ``0 ∈ X`` and ``X`` generates ``M``; (b) ``X`` is
    downward closed; (c) values are normal; (d) ``π`` reverses order on ``X``.
    """
    m, o = p.monoid, ops(p.backend)
    X = set(p.values)
    out = []
    if m.zero not in X:
        out.append(("a", "0 not in X"))
    elif len(m.generated(X)) != len(m):
        missing = sorted(set(range(len(m))) - m.generated(X))
        out.append(("a", f"X does not generate {m.format(missing[0])}"))
    for x in sorted(X):
        for y in m.down_set(x):
            if y not in X:
                out.append(("b", m.format(y), m.format(x)))
    for x in sorted(X):
        if not p.backend.is_normal(p.values[x]):
            out.append(("c", m.format(x)))
    for x in sorted(X):
        for y in sorted(X):
            if x != y and m.leq_i(x, y) and not o.leq(p.values[y], p.values[x]):
                out.append(("d", m.format(x), m.format(y)))
    return PrefilterReport(not out, out)


def close(p: Prefilter, class_hint: int | None = None, *, max_rounds: int = 256,
          check: bool = True) -> Filter:
    """The closure ``π̄_s``: join over sequences in ``X`` summing to ``s`` of
    the left-normed commutators of their values.

    Commutators of normal subgroups distribute over joins, so sequences of
    length ``k + 1`` are handled from the length-``k`` table.  With
    ``class_hint = c`` lengths stop at ``c``; otherwise the length tables are
    iterated until one repeats.
    """
    m, b = p.monoid, p.backend
    o = ops(b)
    bottom = b.bottom()
    if check:
        rep = validate_prefilter(p)
        if not rep:
            raise PrefilterInvalid(f"invalid prefilter: {rep.witness}", rep.witness)
    X = sorted(p.values)
    n = len(m)
    layer = [bottom] * n
    for x in X:
        layer[x] = p.values[x]
    total = list(layer)
    seen = {tuple(layer)}
    length = 1
    while class_hint is None or length < class_hint:
        if length >= max_rounds:
            raise FixpointCapExceeded(f"no fixpoint after {max_rounds} rounds")
        nxt = [set() for _ in range(n)]
        for u in range(n):
            cu = layer[u]
            if cu == bottom:
                continue
            row = m.row(u)
            for x in X:
                c = o.comm(cu, p.values[x])
                if c != bottom:
                    nxt[row[x]].add(c)
        layer = [reduce(o.join, sorted(s, key=b.key)) if s else bottom for s in nxt]
        length += 1
        key = tuple(layer)
        if key in seen:
            break
        seen.add(key)
        for i, v in enumerate(layer):
            if v != bottom:
                total[i] = o.join(total[i], v)
    out = Filter(m, b, total)
    if check:
        rep = validate_filter(out, first_only=True)
        if not rep:
            raise AssertionError(f"closure is not a filter: {rep.witness}")
    return out


def closure_by_partitions(p: Prefilter, max_len: int) -> Filter:
    """Literal evaluation over every sequence of length at most ``max_len``.

    Exponential; meant as a cross-check of :func:`close`.
    """
    from .monoid import enumerate_partitions

    m, b = p.monoid, p.backend
    o = ops(b)
    X = sorted(p.values)
    out = []
    for s in range(len(m)):
        acc = b.bottom()
        for seq in enumerate_partitions(m, s, X, max_len, as_indices=True):
            c = p.values[seq[0]]
            for x in seq[1:]:
                c = o.comm(c, p.values[x])
            acc = o.join(acc, c)
        out.append(acc)
    return Filter(m, b, out)


def _complete_downward(m: Monoid, values: dict, o) -> dict:
    # smallest values that keep the map order reversing
    values = dict(values)
    for x in sorted(values):
        for y in m.down_set(x):
            if y not in values:
                above = [values[z] for z in values if m.leq_i(y, z)]
                values[y] = reduce(o.join, above)
    return values


def insert_subgroup(f: Filter, insertions, extension=None, *, class_hint: int | None = None) -> Filter:
    """Refine ``f`` by placing new subgroups at new monoid indices.

    ``insertions`` is a list of ``(index, subgroup)`` pairs in the extended
    monoid.  ``extension`` lists the extra cyclic factors ``(r, s)`` appended
    under the product order; ``None`` keeps the monoid, in which case each
    index is overwritten.
    """
    b = f.backend
    o = ops(b)
    for s, H in insertions:
        if not b.is_normal(H):
            raise PrefilterInvalid(f"{b.label(H)} is not normal", s)
    if extension:
        ext, embed = extend_monoid(f.monoid, extension)
        values = {ext.idx(embed(f.monoid.elt(i))): v for i, v in enumerate(f.values)}
    else:
        ext = f.monoid
        values = dict(enumerate(f.values))
    for s, H in insertions:
        values[ext.idx(ext.canonical(s) if not isinstance(s, int) else s)] = H
    values = _complete_downward(ext, values, o)
    p = Prefilter(ext, b, values)
    rep = validate_prefilter(p)
    if not rep:
        raise PrefilterInvalid(f"insertion breaks the prefilter conditions: {rep.witness}", rep.witness)
    return close(p, class_hint)

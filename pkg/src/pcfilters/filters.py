"""Filters over finite monoids, their boundaries and the lattice they span."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

from .backend import PcBackend
from .lattice_table import SubgroupTable, TableBackend
from .monoid import Monoid


class CapExceeded(RuntimeError):
    """A closure grew beyond its configured cap."""


class NotMinimal(ValueError):
    """The subgroup handed to :func:`quotient_filter` is not the minimum of the image."""


class Filter:
    """A total map from monoid indices to normal subgroups.

    ``values[i]`` is the subgroup at ``monoid.elt(i)``.  Filters are
    treated as immutable.
    """

    def __init__(self, monoid: Monoid, backend, values):
        self.monoid = monoid
        self.backend = backend
        self.values = tuple(values)
        if len(self.values) != len(monoid):
            raise ValueError("a filter needs one value per monoid element")

    @classmethod
    def from_table(cls, monoid: Monoid, backend, table: dict, default=None) -> "Filter":
        """Build from ``{element: subgroup}``; missing indices get ``default``."""
        vals = [default] * len(monoid)
        for s, v in table.items():
            vals[monoid.idx(s)] = v
        if any(v is None for v in vals):
            missing = [monoid.elt(i) for i, v in enumerate(vals) if v is None]
            raise ValueError(f"no value and no default for {missing[:5]}")
        return cls(monoid, backend, vals)

    @classmethod
    def from_function(cls, monoid: Monoid, backend, fn) -> "Filter":
        return cls(monoid, backend, [fn(monoid.elt(i)) for i in range(len(monoid))])

    def __getitem__(self, s):
        return self.values[self.monoid.idx(s)]

    def __eq__(self, other):
        return isinstance(other, Filter) and self.monoid is other.monoid and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"Filter({self.monoid!r}, image={len(self.image())})"

    def image(self) -> list:
        """Distinct values, largest first."""
        return sorted(set(self.values), key=self.backend.key)

    def label(self, v) -> str:
        return self.backend.label(v)

    def table(self) -> list:
        """``(formatted index, label)`` rows in monoid order."""
        return [(self.monoid.format(i), self.label(v)) for i, v in enumerate(self.values)]


class _Ops:
    """Memoised backend arithmetic on subgroup values."""

    def __init__(self, backend):
        self.b = backend
        self._comm, self._join, self._meet, self._leq = {}, {}, {}, {}

    def comm(self, a, b):
        key = (a, b)
        if key not in self._comm:
            self._comm[key] = self._comm[(b, a)] = self.b.commutator(a, b)
        return self._comm[key]

    def join(self, a, b):
        if a == b:
            return a
        key = (a, b)
        if key not in self._join:
            self._join[key] = self._join[(b, a)] = self.b.join(a, b)
        return self._join[key]

    def meet(self, a, b):
        if a == b:
            return a
        key = (a, b)
        if key not in self._meet:
            self._meet[key] = self._meet[(b, a)] = self.b.meet(a, b)
        return self._meet[key]

    def leq(self, a, b) -> bool:
        if a == b:
            return True
        key = (a, b)
        if key not in self._leq:
            self._leq[key] = self.b.leq(a, b)
        return self._leq[key]


def ops(backend) -> _Ops:
    cached = getattr(backend, "_ops_cache", None)
    if cached is None:
        cached = _Ops(backend)
        try:
            backend._ops_cache = cached
        except AttributeError:
            pass
    return cached


@dataclass
class FilterReport:
    """Outcome of :func:`validate_filter`.

    Violations are tuples ``(kind, s, t)`` with formatted monoid indices;
    ``kind`` is ``"commutator"`` (``[φ_s, φ_t]`` escapes ``φ_{s+t}``),
    ``"order"`` (``s ⪯ t`` but ``φ_s`` does not contain ``φ_t``) or
    ``"normal"``.
    """

    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    @property
    def witness(self):
        return self.violations[0] if self.violations else None


def validate_filter(f: Filter, *, first_only: bool = False) -> FilterReport:
    """Check both filter axioms over every pair of indices, and normality."""
    m, o = f.monoid, ops(f.backend)
    vals = f.values
    out = []
    for v in set(vals):
        if not f.backend.is_normal(v):
            i = vals.index(v)
            out.append(("normal", m.format(i), None))
            if first_only:
                return FilterReport(False, out)
    n = len(m)
    for i in range(n):
        row = m.row(i)
        for j in range(i, n):
            if not o.leq(o.comm(vals[i], vals[j]), vals[row[j]]):
                out.append(("commutator", m.format(i), m.format(j)))
                if first_only:
                    return FilterReport(False, out)
    for i in range(n):
        for j in m.up_set(i):
            if j != i and not o.leq(vals[j], vals[i]):
                out.append(("order", m.format(i), m.format(j)))
                if first_only:
                    return FilterReport(False, out)
    return FilterReport(not out, out)


def boundary(f: Filter) -> Filter:
    """``∂φ_s``: the join of ``φ_{s+t}`` over all nonzero ``t``.

    Saturated indices are included, so at a sink the boundary contains the
    value itself.
    """
    m, o = f.monoid, ops(f.backend)
    bottom = None
    out = []
    for i in range(len(m)):
        row = m.row(i)
        terms = {f.values[row[j]] for j in range(len(m)) if j != m.zero}
        if not terms:
            if bottom is None:
                bottom = f.backend.bottom()
            out.append(bottom)
            continue
        out.append(reduce(o.join, sorted(terms, key=f.backend.key)))
    return Filter(m, f.backend, out)


@dataclass
class LatticeClosure:
    """Meet/join closure of a filter image with its covering relation.

    ``nodes`` is sorted largest first; ``edges`` holds ``(upper, lower)``
    index pairs into ``nodes``.
    """

    backend: object
    nodes: list
    edges: list

    def __contains__(self, x) -> bool:
        return x in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def labels(self) -> list:
        return [self.backend.label(x) for x in self.nodes]

    def to_dot(self, name: str = "lattice") -> str:
        lines = [f"digraph {name} {{", "  rankdir=TB;"]
        for k, x in enumerate(self.nodes):
            text = f"{self.backend.label(x)} ({self.backend.order(x)})"
            lines.append(f'  n{k} [label="{text}"];')
        for a, b in self.edges:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse_edges(backend, nodes: list) -> list:
    o = ops(backend)
    edges = []
    for a, x in enumerate(nodes):
        for b, y in enumerate(nodes):
            if a == b or not o.leq(y, x) or x == y:
                continue
            if not any(c not in (a, b) and o.leq(y, z) and o.leq(z, x) for c, z in enumerate(nodes)):
                edges.append((a, b))
    return edges


def close_family(backend, family, *, cap: int | None = 16, node_cap: int = 4096) -> LatticeClosure:
    """Closure of ``family`` under pairwise meets and joins (worklist)."""
    o = ops(backend)
    members = sorted(set(family), key=backend.key)
    if cap is not None and len(members) > cap:
        raise CapExceeded(f"{len(members)} distinct subgroups exceed the closure cap {cap}")
    seen = set(members)
    i = 0
    while i < len(members):
        a = members[i]
        for b in members[:i]:
            for c in (o.meet(a, b), o.join(a, b)):
                if c not in seen:
                    seen.add(c)
                    members.append(c)
                    if len(members) > node_cap:
                        raise CapExceeded(f"closure exceeded {node_cap} nodes")
        i += 1
    nodes = sorted(members, key=backend.key)
    return LatticeClosure(backend, nodes, hasse_edges(backend, nodes))


def lattice_closure(f: Filter, *, cap: int | None = 16, node_cap: int = 4096) -> LatticeClosure:
    """The complete meet/join closure of ``im(φ)``."""
    return close_family(f.backend, f.values, cap=cap, node_cap=node_cap)


@dataclass
class Verdict:
    """A yes/no answer carrying witnesses or a certificate."""

    ok: bool
    witnesses: list = field(default_factory=list)
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None


def is_distributive(lat: LatticeClosure) -> Verdict:
    """Check ``x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)`` on every triple."""
    o = ops(lat.backend)
    for x in lat.nodes:
        for y in lat.nodes:
            for z in lat.nodes:
                lhs = o.meet(x, o.join(y, z))
                rhs = o.join(o.meet(x, y), o.meet(x, z))
                if lhs != rhs:
                    lab = lat.backend.label
                    return Verdict(False, [(lab(x), lab(y), lab(z))])
    return Verdict(True)


def _nontrivial(backend, v) -> bool:
    return backend.order(v) > 1


def is_progressive(f: Filter) -> Verdict:
    """Every index with a nontrivial value must be semi-cancellative."""
    m = f.monoid
    bad = [m.format(i) for i in range(len(m))
           if _nontrivial(f.backend, f.values[i]) and m.is_sink_i(i)]
    return Verdict(not bad, bad)


def minimal_member(f: Filter):
    """The least value of the filter, which is the intersection of all values."""
    m, o = f.monoid, ops(f.backend)
    total = m.zero
    for i in range(len(m)):
        total = m.add_i(total, i)
    least = f.values[total]
    inter = reduce(o.meet, sorted(set(f.values), key=f.backend.key))
    if inter != least:
        raise AssertionError("filter image has no minimum; is the filter valid?")
    return least


def quotient_filter(f: Filter, H=None) -> Filter:
    """``μ_s = φ_s / H`` for the minimal member ``H``."""
    least = minimal_member(f)
    if H is None:
        H = least
    if H != least:
        raise NotMinimal("H is not the minimal member of the filter")
    b = f.backend
    if isinstance(b, PcBackend):
        Q, proj = b.group.quotient(H)
        cache = {}

        def image(v):
            if v not in cache:
                cache[v] = Q.subgroup([proj(g) for g in v.gens])
            return cache[v]

        names = {}
        for name, v in b.names.items():
            if b.leq(H, v) and b.is_normal(v):
                names.setdefault(f"{name}/{b.label(H)}" if b.order(H) > 1 else name, image(v))
        nb = PcBackend(Q, names)
        out = Filter(f.monoid, nb, [image(v) for v in f.values])
        out.projection = proj
        return out
    if isinstance(b, TableBackend):
        t = b.table
        if b.order(H) == 1:
            return f
        keep = [x for x in t.nodes if b.leq(H, x)]
        name = {x: f"{x}/{H}" for x in keep}
        nt = SubgroupTable([name[x] for x in keep], {name[x]: t.orders[x] // t.orders[H] for x in keep})
        nt.below = {(name[a], name[c]) for a, c in t.below if a in name and c in name}
        for x in keep:
            for y in keep:
                try:
                    nt.commutator[(name[x], name[y])] = name[b.join(b.commutator(x, y), H)]
                except KeyError:
                    pass
                if (x, y) in t.sections:
                    nt.sections[(name[x], name[y])] = list(t.sections[(x, y)])
        nb = TableBackend(nt)
        return Filter(f.monoid, nb, [name[v] for v in f.values])
    raise TypeError("unsupported backend")


def refines(rho: Filter, phi: Filter) -> Verdict:
    """Does ``ρ`` refine ``φ``?

    Requires ``im(φ) ⊆ im(ρ)`` and, for every index ``s`` of ``ρ``, some
    ``t`` with ``∂φ_t ≤ ρ_s ≤ φ_t``.  The certificate maps each ``s`` to
    the first such ``t`` in ``φ``'s monoid order.
    """
    o = ops(phi.backend)
    im_rho = set(rho.values)
    missing = [phi.label(v) for v in phi.image() if v not in im_rho]
    if missing:
        return Verdict(False, [("image", x) for x in missing])
    dphi = boundary(phi)
    cert = {}
    bad = []
    for i, v in enumerate(rho.values):
        for j, w in enumerate(phi.values):
            if o.leq(dphi.values[j], v) and o.leq(v, w):
                cert[rho.monoid.format(i)] = phi.monoid.format(j)
                break
        else:
            bad.append(("sandwich", rho.monoid.format(i)))
    return Verdict(not bad, bad, cert)

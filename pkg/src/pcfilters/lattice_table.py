"""Table-driven subgroup backend for groups without a pc presentation."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .backend import AbelianSection, SectionError


class MissingEntry(KeyError):
    """A lookup hit a pair the table does not define."""


@dataclass
class SubgroupTable:
    """Named nodes with orders, containment and operation tables.

    ``below`` holds pairs ``(a, b)`` meaning ``a <= b``; reflexive and
    transitive pairs are implied.  ``join``/``meet`` entries left out are
    derived from ``below``.  ``commutator`` is keyed by ordered pairs and
    ``sections`` by ``(H, K)``.
    """

    nodes: list
    orders: dict
    below: set = field(default_factory=set)
    join: dict = field(default_factory=dict)
    meet: dict = field(default_factory=dict)
    commutator: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)

    def leq_closure(self) -> set:
        rel = {(a, a) for a in self.nodes} | set(self.below)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in product(list(rel), repeat=2):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        return rel


@dataclass
class TableReport:
    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _bound(rel, nodes, a, b, upper: bool):
    if upper:
        cands = [c for c in nodes if (a, c) in rel and (b, c) in rel]
        best = [c for c in cands if all((c, d) in rel for d in cands)]
    else:
        cands = [c for c in nodes if (c, a) in rel and (c, b) in rel]
        best = [c for c in cands if all((d, c) in rel for d in cands)]
    return best[0] if len(best) == 1 else None


def validate_table(t: SubgroupTable) -> TableReport:
    """Exhaustive check of the table invariants."""
    nodes = list(t.nodes)
    for a in nodes:
        if a not in t.orders:
            return TableReport(False, a, "node without order")
    for a, b in t.below:
        if a not in nodes or b not in nodes:
            return TableReport(False, (a, b), "containment mentions unknown node")
    rel = t.leq_closure()
    for a, b in product(nodes, repeat=2):
        if a != b and (a, b) in rel and (b, a) in rel:
            return TableReport(False, (a, b), "containment is not antisymmetric")
        if (a, b) in rel and t.orders[b] % t.orders[a]:
            return TableReport(False, (a, b), "order of a subgroup does not divide the order of its overgroup")
    tops = [c for c in nodes if all((a, c) in rel for a in nodes)]
    if not tops:
        return TableReport(False, None, "no top node")
    for a, b in product(nodes, repeat=2):
        for table, upper, what in ((t.join, True, "join"), (t.meet, False, "meet")):
            want = _bound(rel, nodes, a, b, upper)
            got = table.get((a, b), table.get((b, a), want))
            if got is None or got != want:
                return TableReport(False, (what, a, b, got), f"{what} is not the least/greatest bound")
    for (a, b), c in t.commutator.items():
        if c not in nodes:
            return TableReport(False, (a, b, c), "commutator names an unknown node")
        if (b, a) in t.commutator and t.commutator[(b, a)] != c:
            return TableReport(False, (a, b, t.commutator[(b, a)], c), "commutator table is not symmetric")
        m = _bound(rel, nodes, a, b, False)
        if m is None or (c, m) not in rel:
            return TableReport(False, (a, b, c), "commutator is not below the meet")
    comm = dict(t.commutator)
    comm.update({(b, a): c for (a, b), c in t.commutator.items()})
    for (a, b), c in comm.items():
        for (a2, b2), c2 in comm.items():
            if (a, a2) in rel and (b, b2) in rel and (c, c2) not in rel:
                return TableReport(False, ((a, b), (a2, b2)), "commutator table is not monotone")
    for (h, k), inv in t.sections.items():
        if (k, h) not in rel:
            return TableReport(False, (h, k), "section K is not below H")
        size = 1
        for d in inv:
            size *= d
        if size * t.orders[k] != t.orders[h]:
            return TableReport(False, (h, k, list(inv)), "section invariants do not multiply to the index")
    return TableReport(True)


class TableBackend:
    """The subgroup interface answered from a validated :class:`SubgroupTable`."""

    kind = "table"
    has_elements = False

    def __init__(self, table: SubgroupTable, *, check: bool = True):
        if check:
            rep = validate_table(table)
            if not rep:
                raise ValueError(f"invalid subgroup table: {rep.reason} ({rep.witness})")
        self.table = table
        self.names = {a: a for a in table.nodes}
        self._rel = table.leq_closure()
        nodes = table.nodes
        self._top = next(c for c in nodes if all((a, c) in self._rel for a in nodes))
        bots = [c for c in nodes if all((c, a) in self._rel for a in nodes)]
        self._bottom = bots[0] if bots else None
        self._pos = {a: i for i, a in enumerate(nodes)}

    def top(self):
        return self._top

    def bottom(self):
        if self._bottom is None:
            raise MissingEntry("table has no bottom node")
        return self._bottom

    def lookup(self, name: str):
        if name not in self._pos:
            raise KeyError(name)
        return name

    def _pair(self, table: dict, a, b, upper: bool):
        if (a, b) in table:
            return table[(a, b)]
        if (b, a) in table:
            return table[(b, a)]
        got = _bound(self._rel, self.table.nodes, a, b, upper)
        if got is None:
            raise MissingEntry((a, b))
        return got

    def join(self, a, b):
        return self._pair(self.table.join, a, b, True)

    def meet(self, a, b):
        return self._pair(self.table.meet, a, b, False)

    def commutator(self, a, b):
        c = self.table.commutator
        if (a, b) in c:
            return c[(a, b)]
        if (b, a) in c:
            return c[(b, a)]
        if self._bottom is not None and self._bottom in (a, b) and self.table.orders[self._bottom] == 1:
            return self._bottom
        raise MissingEntry(("commutator", a, b))

    def leq(self, a, b) -> bool:
        return (a, b) in self._rel

    def order(self, a) -> int:
        return self.table.orders[a]

    def is_normal(self, a) -> bool:
        # table nodes are normal subgroups by construction
        return True

    def key(self, a):
        return (-self.table.orders[a], self._pos[a])

    def label(self, a) -> str:
        return a

    def section(self, H, K) -> AbelianSection:
        if H == K:
            return AbelianSection([])
        if (H, K) not in self.table.sections:
            if not self.leq(K, H):
                raise SectionError(f"{K} is not below {H}")
            raise MissingEntry(("section", H, K))
        return AbelianSection(list(self.table.sections[(H, K)]))

    def section_invariants(self, H, K) -> list:
        return list(self.section(H, K).invariants)


def table_from_subgroups(backend, subgroups, names: dict | None = None) -> SubgroupTable:
    """Freeze the arithmetic of a family of subgroups into a table.

    The family is closed under joins, meets and commutators first; section
    invariants are recorded for every abelian section.
    """
    members = list(dict.fromkeys(subgroups))
    seen = set(members)
    i = 0
    while i < len(members):
        a = members[i]
        for b in list(members[: i + 1]):
            for c in (backend.join(a, b), backend.meet(a, b), backend.commutator(a, b)):
                if c not in seen:
                    seen.add(c)
                    members.append(c)
        i += 1
    members.sort(key=backend.key)
    names = dict(names or {})
    known = getattr(backend, "_labels", {})
    label = {m: names.get(m) or known.get(m) or f"N{k}" for k, m in enumerate(members)}
    nodes = [label[m] for m in members]
    t = SubgroupTable(nodes, {label[m]: backend.order(m) for m in members})
    for a, b in product(members, repeat=2):
        if a != b and backend.leq(a, b):
            t.below.add((label[a], label[b]))
        t.join[(label[a], label[b])] = label[backend.join(a, b)]
        t.meet[(label[a], label[b])] = label[backend.meet(a, b)]
        t.commutator[(label[a], label[b])] = label[backend.commutator(a, b)]
        if backend.leq(b, a):
            try:
                t.sections[(label[a], label[b])] = backend.section_invariants(a, b)
            except SectionError:
                pass
    return t

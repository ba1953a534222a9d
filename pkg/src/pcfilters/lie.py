"""The graded Lie ring ``L(φ) = ⊕_{s≠0} φ_s/∂φ_s`` of a filter."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .backend import AbelianSection
from .filters import Filter, boundary


class CapExceeded(RuntimeError):
    pass


@dataclass
class Component:
    index: int
    label: str
    section: AbelianSection

    @property
    def invariants(self) -> list:
        return self.section.invariants

    @property
    def order(self) -> int:
        return self.section.size

    @property
    def rank(self) -> int:
        return len(self.section.invariants)


@dataclass
class GradedLieRing:
    """Components keyed by monoid index plus bracket structure constants.

    ``basis`` lists ``(index, k)`` pairs: the k-th cyclic generator of the
    component at ``index``, in ascending linear-extension order.
    ``constants[(a, b)]`` is the coordinate tuple of ``[basis[a], basis[b]]``
    in the component at ``index(a) + index(b)``; zero brackets are omitted.
    """

    filter: Filter
    boundary: Filter
    components: dict
    basis: list
    constants: dict = field(default_factory=dict)
    additive_only: bool = False
    module_action_omitted: bool = False

    @property
    def monoid(self):
        return self.filter.monoid

    def total_order(self) -> int:
        out = 1
        for c in self.components.values():
            out *= c.order
        return out

    def hilbert_data(self) -> dict:
        return {c.label: list(c.invariants) for c in self.ordered_components()}

    def ordered_components(self) -> list:
        order = self.monoid.linear_extension()
        return [self.components[i] for i in order if i in self.components]

    def rank(self) -> int:
        return len(self.basis)

    def zero(self) -> dict:
        return {}

    def basis_element(self, a: int) -> dict:
        s, k = self.basis[a]
        v = [0] * self.components[s].rank
        v[k] = 1
        return {s: tuple(v)}

    def _pos(self):
        if not hasattr(self, "_pos_cache"):
            self._pos_cache = {sk: a for a, sk in enumerate(self.basis)}
        return self._pos_cache

    def bracket(self, u: dict, v: dict) -> dict:
        """Bilinear extension of the structure constants.

        Elements are ``{index: coordinate tuple}`` dictionaries.
        """
        if self.additive_only:
            raise CapExceeded("no bracket data on this backend")
        pos = self._pos()
        out = {}
        m = self.monoid
        for s, cu in u.items():
            for t, cv in v.items():
                target = m.add_i(s, t)
                comp = self.components.get(target)
                if comp is None:
                    continue
                acc = list(out.get(target, (0,) * comp.rank))
                for i, x in enumerate(cu):
                    if not x:
                        continue
                    for j, y in enumerate(cv):
                        if not y:
                            continue
                        c = self.constants.get((pos[(s, i)], pos[(t, j)]))
                        if c:
                            for k, ck in enumerate(c):
                                acc[k] += x * y * ck
                inv = comp.invariants
                out[target] = tuple(a % d for a, d in zip(acc, inv))
        return {s: c for s, c in out.items() if any(c)}

    def add(self, u: dict, v: dict) -> dict:
        out = dict(u)
        for s, c in v.items():
            inv = self.components[s].invariants
            base = out.get(s, (0,) * len(inv))
            out[s] = tuple((a + b) % d for a, b, d in zip(base, c, inv))
        return {s: c for s, c in out.items() if any(c)}

    def scale(self, k: int, u: dict) -> dict:
        out = {}
        for s, c in u.items():
            inv = self.components[s].invariants
            out[s] = tuple((k * a) % d for a, d in zip(c, inv))
        return {s: c for s, c in out.items() if any(c)}

    def coords_of(self, s: int, g) -> tuple:
        """Image of ``g ∈ φ_s`` in ``L_s``."""
        return self.components[s].section.coords(g)


def associated_lie(f: Filter, *, dphi: Filter | None = None) -> GradedLieRing:
    """Components, lifts and structure constants of ``L(φ)``."""
    m, b = f.monoid, f.backend
    d = dphi or boundary(f)
    comps = {}
    for i in m.linear_extension():
        if i == m.zero:
            continue
        top, bot = f.values[i], d.values[i]
        if top == bot:
            continue
        sec = b.section(top, bot)
        if not sec.invariants:
            continue
        comps[i] = Component(i, m.format(i), sec)
    basis = [(i, k) for i in m.linear_extension() if i in comps for k in range(comps[i].rank)]
    L = GradedLieRing(f, d, comps, basis, additive_only=not b.has_elements,
                      module_action_omitted=f.values[m.zero] != d.values[m.zero])
    if not b.has_elements:
        return L
    G = b.group
    for a, (s, i) in enumerate(basis):
        x = comps[s].section.lifts[i]
        for c, (t, j) in enumerate(basis):
            target = m.add_i(s, t)
            comp = comps.get(target)
            if comp is None:
                continue
            y = comps[t].section.lifts[j]
            co = comp.section.coords(G.commutator(x, y))
            if any(co):
                L.constants[(a, c)] = co
    return L


@dataclass
class GradedBasis:
    """Ordered ``(index, vector, lift)`` triples; lifts are ``None`` on tables."""

    entries: list

    def __len__(self):
        return len(self.entries)

    def lifts(self) -> list:
        return [g for _, _, g in self.entries]

    def indices(self) -> list:
        return [s for s, _, _ in self.entries]


def _lift(comp: Component, vec, G):
    g = G.identity
    for lift, c in zip(comp.section.lifts, vec):
        if c:
            g = G.mul(g, G.pow(lift, c))
    return g


def graded_basis(L: GradedLieRing) -> GradedBasis:
    """The canonical basis: cyclic generators of each component, ascending."""
    out = []
    for s, k in L.basis:
        comp = L.components[s]
        vec = tuple(int(j == k) for j in range(comp.rank))
        lift = comp.section.lifts[k] if comp.section.lifts else None
        out.append((s, vec, lift))
    return GradedBasis(out)


def _rank_mod_p(rows, p: int) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c] % p:
                k = rows[r][c]
                rows[r] = [(x - k * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def ordered_bases(d: int, p: int):
    """Every ordered basis of ``F_p^d``, in lexicographic order."""
    vecs = list(product(range(p), repeat=d))

    def extend(prefix):
        if len(prefix) == d:
            yield tuple(prefix)
            return
        for v in vecs:
            if _rank_mod_p(prefix + [v], p) == len(prefix) + 1:
                yield from extend(prefix + [v])

    yield from extend([])


def count_gl(d: int, p: int) -> int:
    out = 1
    for i in range(d):
        out *= p**d - p**i
    return out


def enumerate_graded_bases(L: GradedLieRing, cap: int = 10_000) -> list:
    """All graded bases; each component must be elementary abelian."""
    comps = L.ordered_components()
    per = []
    total = 1
    for c in comps:
        ps = set(c.invariants)
        if len(ps) != 1:
            raise ValueError(f"component {c.label} is not elementary abelian")
        p = ps.pop()
        if any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"component {c.label} is not elementary abelian")
        per.append((c, p))
        total *= count_gl(c.rank, p)
    if total > cap:
        raise CapExceeded(f"{total} graded bases exceed the cap {cap}")
    G = L.filter.backend.group if L.filter.backend.has_elements else None
    choices = [list(ordered_bases(c.rank, p)) for c, p in per]
    out = []
    for combo in product(*choices):
        entries = []
        for (c, _p), vecs in zip(per, combo):
            for v in vecs:
                entries.append((c.index, v, _lift(c, v, G) if G is not None else None))
        out.append(GradedBasis(entries))
    return out

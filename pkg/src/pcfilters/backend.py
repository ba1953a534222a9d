"""Subgroup arithmetic behind a small common interface.

Filters, closures and Lie rings only ever ask for joins, meets,
commutators, containment, orders and abelian sections.  :class:`PcBackend`
answers these with a pc presentation; :class:`~pcfilters.lattice_table.TableBackend`
answers them from a finite table.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import pcgroup as pc
from .smith import smith_normal_form


class SectionError(ValueError):
    """Raised when ``H/K`` is not an abelian section."""


@dataclass
class AbelianSection:
    """``H/K`` as ``Z/d_1 + ... + Z/d_k`` with each ``d_i`` dividing the next.

    ``lifts[i]`` is an element of ``H`` mapping to the i-th basis vector; the
    map ``coords`` sends elements of ``H`` to coordinates.  Table sections
    carry only ``invariants``.
    """

    invariants: list
    lifts: list = field(default_factory=list)
    _coords: object = None

    @property
    def size(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    def coords(self, g) -> tuple:
        if self._coords is None:
            raise SectionError("this section has no element arithmetic")
        return self._coords(g)


def pc_section(H: pc.Subgroup, K: pc.Subgroup) -> AbelianSection:
    """Invariants, basis lifts and coordinate map of ``H/K``."""
    G = H.group
    if not K <= H:
        raise SectionError("K is not contained in H")
    if not pc.is_normal(K, H):
        raise SectionError("K is not normal in H")
    for a in H.gens:
        for b in H.gens:
            if G.commutator(a, b) not in K:
                raise SectionError("H/K is not abelian")
    kpiv = dict(zip(K.depths, K.gens))
    hpiv = dict(zip(H.depths, H.gens))
    free = [d for d in H.depths if d not in kpiv]
    col = {d: c for c, d in enumerate(free)}

    def raw(g):
        # exponents along the free pivots of H, reading off H/K
        g = tuple(g)
        x = [0] * len(free)
        for d in H.depths:
            e = g[d]
            if not e:
                continue
            if d in col:
                x[col[d]] = e
                piv = hpiv[d]
            else:
                piv = kpiv[d]
            g = G.mul(g, G.pow(piv, -e))
        if any(g):
            raise SectionError("element not in H")
        return x

    rel = []
    for d in free:
        row = [-v for v in raw(G.pow(hpiv[d], G.orders[d]))]
        row[col[d]] += G.orders[d]
        rel.append(row)
    if not free:
        return AbelianSection([], [], lambda g: ())
    D, _U, V, Vi = smith_normal_form(rel)
    diag = [D[i][i] for i in range(len(free))]
    keep = [i for i, d in enumerate(diag) if d != 1]
    invariants = [diag[i] for i in keep]
    lifts = []
    for i in keep:
        g = G.identity
        for d, c in zip(free, Vi[i]):
            g = G.mul(g, G.pow(hpiv[d], c))
        lifts.append(g)

    def coords(g):
        x = raw(g)
        return tuple(sum(x[r] * V[r][i] for r in range(len(free))) % diag[i] for i in keep)

    return AbelianSection(invariants, lifts, coords)


class PcBackend:
    """Subgroups of a :class:`~pcfilters.pcgroup.PcGroup`."""

    kind = "pc"
    has_elements = True

    def __init__(self, group: pc.PcGroup, names: dict | None = None):
        self.group = group
        self.names = dict(names or {})
        self._labels = {v: k for k, v in self.names.items()}
        self._sections = {}

    def top(self):
        return self.group.whole()

    def bottom(self):
        return self.group.trivial()

    def lookup(self, name: str):
        return self.names[name]

    def join(self, a, b):
        return pc.join(a, b)

    def meet(self, a, b):
        return pc.intersection(a, b)

    def commutator(self, a, b):
        return pc.commutator_subgroup(a, b)

    def leq(self, a, b) -> bool:
        return a <= b

    def order(self, a) -> int:
        return a.order

    def is_normal(self, a) -> bool:
        return pc.is_normal(a)

    def key(self, a):
        return a.key()

    def label(self, a) -> str:
        if a in self._labels:
            return self._labels[a]
        return repr(a)

    def section(self, H, K) -> AbelianSection:
        if (H, K) not in self._sections:
            self._sections[(H, K)] = pc_section(H, K)
        return self._sections[(H, K)]

    def section_invariants(self, H, K) -> list:
        return list(self.section(H, K).invariants)

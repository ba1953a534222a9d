"""Finite polycyclic groups given by power-commutator presentations.

Generators are numbered from 0 internally; words and printed output use
``g1 .. gn``.  Elements are exponent tuples in normal form
``g1^e1 ... gn^en``, and multiplication is collection from the left.
Relative orders must be prime, which keeps subgroup canonical forms simple
(every finite pc group has such a refined presentation).

Commutators follow ``[x, y] = x^-1 y^-1 x y``.  A relation ``comm j i = w``
(``j > i``) means ``[g_j, g_i] = w``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

DEFAULT_ENUM_CAP = 200_000


class GroupError(ValueError):
    pass


class UnknownGenerator(GroupError):
    pass


class PresentationError(GroupError):
    pass


class NotNormal(GroupError):
    pass


class CapExceeded(GroupError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


class PcGroup:
    """A pc presentation with prime relative orders.

    ``powers`` maps a generator ``i`` to the word equal to ``g_i^{m_i}``;
    ``comms`` maps ``(j, i)`` with ``j > i`` to the word equal to
    ``[g_j, g_i]``.  Words are sequences of ``(generator, exponent)`` pairs
    (0-based) or exponent vectors.  By default a commutator may only involve
    generators after ``g_j`` (a central-series presentation);
    ``general=True`` relaxes that to generators after ``g_i``.
    """

    def __init__(self, orders: Sequence[int], powers=None, comms=None, *, names=None,
                 general: bool = False, check: bool = True):
        self.orders = tuple(int(m) for m in orders)
        self.n = n = len(self.orders)
        for m in self.orders:
            if not _is_prime(m):
                raise PresentationError(f"relative order {m} is not prime")
        self.names = tuple(names) if names else tuple(f"g{i + 1}" for i in range(n))
        self.identity = (0,) * n
        self.general = general
        powers = dict(powers or {})
        comms = dict(comms or {})
        self._power_words = {}
        self._comm_words = {}
        for i, w in powers.items():
            w = self._word(w)
            if any(g <= i for g, e in w if e % self.orders[g]):
                raise PresentationError(f"power relation for g{i + 1} uses a generator of depth <= {i + 1}")
            self._power_words[i] = w
        for (j, i), w in comms.items():
            if not (0 <= i < j < n):
                raise PresentationError(f"commutator relation [g{j + 1}, g{i + 1}] needs j > i")
            w = self._word(w)
            floor = i if general else j
            if any(g <= floor for g, e in w if e % self.orders[g]):
                raise PresentationError(
                    f"commutator relation [g{j + 1}, g{i + 1}] uses generator of depth <= {floor + 1}")
            self._comm_words[(j, i)] = w
        self._build()
        self._cache_mul = lru_cache(maxsize=1 << 16)(self._mul_uncached)
        if check:
            report = self.check_consistency()
            if not report.ok:
                raise PresentationError(f"inconsistent presentation: {report.witness}")

    # -- words ----------------------------------------------------------
    def _word(self, w) -> list:
        if isinstance(w, tuple) and len(w) == self.n and all(isinstance(e, int) for e in w):
            return [(k, e) for k, e in enumerate(w) if e]
        out = []
        for item in w:
            g, e = item
            if not (0 <= g < self.n):
                raise UnknownGenerator(f"generator index {g + 1} out of range")
            out.append((int(g), int(e)))
        return out

    def gen(self, i: int) -> tuple:
        if not (0 <= i < self.n):
            raise UnknownGenerator(f"generator index {i + 1} out of range")
        v = [0] * self.n
        v[i] = 1
        return tuple(v)

    def gens(self) -> list:
        return [self.gen(i) for i in range(self.n)]

    def _build(self):
        n = self.n
        self._power = [None] * n
        self._conj = [[None] * n for _ in range(n)]
        self._conj_pow = [[None] * n for _ in range(n)]
        self._central_to = [set() for _ in range(n)]
        # Build bottom-up so that collection in G_{i+1} only uses finished data.
        for i in range(n - 1, -1, -1):
            self._power[i] = self._collect_in(self._power_words.get(i, []), i + 1)
            for j in range(i + 1, n):
                w = self._comm_words.get((j, i), [])
                c = self._collect_in([(j, 1)] + w, i + 1)
                self._conj[j][i] = c
                pw = [self.identity]
                for _ in range(1, self.orders[j]):
                    pw.append(self._mul_raw(pw[-1], c))
                self._conj_pow[j][i] = pw
                if not any(e % self.orders[g] for g, e in w):
                    self._central_to[i].add(j)

    def _collect_in(self, word, floor: int) -> tuple:
        x = self.identity
        for g, e in word:
            if g < floor:
                raise PresentationError("relation leaves its subgroup")
            x = self._mul_raw(x, self._gen_pow(g, e))
        return x

    def _gen_pow(self, g: int, e: int) -> tuple:
        m = self.orders[g]
        if e >= 0:
            x = self.identity
            for _ in range(e % m if self._power[g] == self.identity else e):
                x = self._mul_gen(x, g)
            return x
        return self._inv_raw(self._gen_pow(g, -e))

    # -- collection -------------------------------------------------------
    def _mul_gen(self, x: tuple, k: int) -> tuple:
        n = self.n
        tail = x[k + 1:]
        if any(tail):
            central = self._central_to[k]
            if all(j in central for j in range(k + 1, n) if x[j]):
                rest = (0,) * (k + 1) + tail
            else:
                rest = self.identity
                for j in range(k + 1, n):
                    e = x[j]
                    if e:
                        rest = self._mul_raw(rest, self._conj_pow[j][k][e])
        else:
            rest = self.identity
        e = x[k] + 1
        if e == self.orders[k]:
            e = 0
            if self._power[k] != self.identity:
                rest = self._mul_raw(self._power[k], rest)
        return x[:k] + (e,) + rest[k + 1:]

    def _mul_raw(self, a: tuple, b: tuple) -> tuple:
        if not any(b):
            return a
        if not any(a):
            return b
        x = a
        for k in range(self.n):
            e = b[k]
            if e:
                if not any(x[k + 1:]):
                    # nothing to move past: bump the exponent directly
                    s = x[k] + e
                    m = self.orders[k]
                    if s < m:
                        x = x[:k] + (s,) + x[k + 1:]
                        continue
                for _ in range(e):
                    x = self._mul_gen(x, k)
        return x

    def _mul_uncached(self, a: tuple, b: tuple) -> tuple:
        return self._mul_raw(a, b)

    def _inv_raw(self, a: tuple) -> tuple:
        i = next((k for k, e in enumerate(a) if e), None)
        if i is None:
            return self.identity
        e = a[i]
        r = (0,) * (i + 1) + a[i + 1:]
        m = self.orders[i]
        head = (0,) * i + (m - e,) + (0,) * (self.n - i - 1)
        out = self._mul_raw(self._inv_raw(r), head)
        if self._power[i] != self.identity:
            out = self._mul_raw(out, self._inv_raw(self._power[i]))
        return out

    # -- public arithmetic -----------------------------------------------
    def collect(self, word) -> tuple:
        """Normal form of a word given as ``(generator, exponent)`` pairs."""
        x = self.identity
        for g, e in word:
            if not (0 <= g < self.n):
                raise UnknownGenerator(f"generator index {g + 1} out of range")
            x = self.mul(x, self._gen_pow(g, e))
        return x

    def mul(self, a: tuple, b: tuple) -> tuple:
        return self._cache_mul(tuple(a), tuple(b))

    def inv(self, a: tuple) -> tuple:
        return self._inv_raw(tuple(a))

    def pow(self, a: tuple, k: int) -> tuple:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = self.identity
        base = tuple(a)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def commutator(self, a: tuple, b: tuple) -> tuple:
        return self.mul(self.inv(self.mul(b, a)), self.mul(a, b))

    def conjugate(self, a: tuple, b: tuple) -> tuple:
        """``b^-1 a b``."""
        return self.mul(self.inv(b), self.mul(a, b))

    def elt_order(self, a: tuple) -> int:
        k, x = 1, tuple(a)
        while any(x):
            x = self.mul(x, a)
            k += 1
        return k

    def format(self, a: tuple) -> str:
        parts = [self.names[k] if e == 1 else f"{self.names[k]}^{e}" for k, e in enumerate(a) if e]
        return "*".join(parts) if parts else "1"

    @property
    def size(self) -> int:
        out = 1
        for m in self.orders:
            out *= m
        return out

    # -- consistency --------------------------------------------------------
    def check_consistency(self) -> "ConsistencyReport":
        """Run the standard overlap tests; collect each word two ways."""
        n = self.n
        g = self.gens()
        mul = self._mul_raw

        def gp(i, e):
            v = [0] * n
            v[i] = e
            return tuple(v)

        for k in range(n):
            for j in range(k):
                for i in range(j):
                    lhs = mul(mul(g[k], g[j]), g[i])
                    rhs = mul(g[k], mul(g[j], g[i]))
                    if lhs != rhs:
                        return ConsistencyReport(False, ("associativity", k + 1, j + 1, i + 1))
        for j in range(n):
            mj = self.orders[j]
            for i in range(j):
                lhs = mul(self._power[j], g[i])
                rhs = mul(gp(j, mj - 1), mul(g[j], g[i]))
                if lhs != rhs:
                    return ConsistencyReport(False, ("power-left", j + 1, i + 1))
                mi = self.orders[i]
                lhs = mul(g[j], self._power[i])
                rhs = mul(mul(g[j], g[i]), gp(i, mi - 1))
                if lhs != rhs:
                    return ConsistencyReport(False, ("power-right", j + 1, i + 1))
            lhs = mul(g[j], self._power[j])
            rhs = mul(self._power[j], g[j])
            if lhs != rhs:
                return ConsistencyReport(False, ("power-power", j + 1))
        return ConsistencyReport(True, None)

    # -- subgroup machinery -----------------------------------------------
    def depth(self, a: tuple) -> int:
        for k, e in enumerate(a):
            if e:
                return k
        return self.n

    def _sift(self, table: dict, g: tuple) -> tuple:
        while True:
            d = self.depth(g)
            if d == self.n or d not in table:
                return g
            e = g[d]
            g = self.mul(g, self.pow(table[d], self.orders[d] - e))

    def _normalize_lead(self, g: tuple) -> tuple:
        d = self.depth(g)
        e = g[d]
        if e == 1:
            return g
        return self.pow(g, pow(e, -1, self.orders[d]))

    def _induced_table(self, gens: Iterable, table=None, normalizers=()) -> dict:
        table = dict(table or {})
        queue = [tuple(x) for x in gens]
        normalizers = [tuple(x) for x in normalizers]
        while queue:
            g = self._sift(table, queue.pop())
            if not any(g):
                continue
            g = self._normalize_lead(g)
            d = self.depth(g)
            table[d] = g
            queue.append(self.pow(g, self.orders[d]))
            for h in table.values():
                if h is not g:
                    queue.append(self.commutator(g, h))
            for x in normalizers:
                queue.append(self.commutator(g, x))
        return table

    def _canonical(self, table: dict) -> tuple:
        depths = sorted(table)
        elts = {d: table[d] for d in depths}
        for a_pos, d in enumerate(depths):
            g = elts[d]
            for d2 in depths[a_pos + 1:]:
                e = g[d2]
                if e:
                    g = self.mul(g, self.pow(elts[d2], self.orders[d2] - e))
            elts[d] = g
        # reducing deeper rows first would be equivalent; one pass from the
        # top suffices because later multipliers only touch deeper positions
        return tuple(elts[d] for d in depths)

    def subgroup(self, gens: Iterable = (), normal_closure: bool = False) -> "Subgroup":
        table = self._induced_table(gens, normalizers=self.gens() if normal_closure else ())
        return Subgroup(self, self._canonical(table))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.gens()))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, ())

    def lower_central_series(self) -> list:
        series = [self.whole()]
        while True:
            nxt = commutator_subgroup(series[-1], series[0])
            if nxt == series[-1]:
                return series
            series.append(nxt)

    def derived_series(self, start: "Subgroup | None" = None) -> list:
        series = [start or self.whole()]
        while True:
            nxt = commutator_subgroup(series[-1], series[-1])
            if nxt == series[-1]:
                return series
            series.append(nxt)

    def is_nilpotent(self) -> tuple[bool, int | None]:
        """``(True, c)`` with c the class, or ``(False, None)``."""
        lcs = self.lower_central_series()
        if lcs[-1].order == 1:
            return True, len(lcs) - 1
        return False, None

    def is_solvable(self) -> bool:
        return self.derived_series()[-1].order == 1

    def direct_square(self) -> "PcGroup":
        """``G x G`` with the first factor's generators first."""
        if getattr(self, "_square", None) is None:
            n = self.n
            powers = {}
            comms = {}
            for i in range(n):
                w = self._power_words.get(i, [])
                powers[i] = w
                powers[i + n] = [(g + n, e) for g, e in w]
            for (j, i), w in self._comm_words.items():
                comms[(j, i)] = w
                comms[(j + n, i + n)] = [(g + n, e) for g, e in w]
            self._square = PcGroup(self.orders * 2, powers, comms, general=self.general, check=False)
        return self._square

    def quotient(self, N: "Subgroup") -> tuple["PcGroup", callable]:
        """Presentation of ``G/N`` for normal ``N`` plus the projection map."""
        if not is_normal(N):
            raise NotNormal("quotient needs a normal subgroup")
        pivots = {self.depth(x) for x in N.gens}
        keep = [k for k in range(self.n) if k not in pivots]
        pos = {k: i for i, k in enumerate(keep)}

        def proj(g):
            r = reduce_mod(N, g)
            return tuple(r[k] for k in keep)

        def as_word(v):
            return [(pos[k], e) for k, e in enumerate(v) if e and k in pos]

        powers = {pos[k]: as_word(reduce_mod(N, self._power[k])) for k in keep}
        comms = {}
        for a, k in enumerate(keep):
            for j in keep[a + 1:]:
                c = reduce_mod(N, self.commutator(self.gen(j), self.gen(k)))
                if any(c):
                    comms[(pos[j], pos[k])] = as_word(c)
        Q = PcGroup([self.orders[k] for k in keep], powers, comms,
                    names=[self.names[k] for k in keep], general=True, check=False)
        return Q, proj


class ConsistencyReport:
    def __init__(self, ok: bool, witness):
        self.ok = ok
        self.witness = witness

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"ConsistencyReport(ok={self.ok}, witness={self.witness})"


def check_consistency(pres: PcGroup) -> ConsistencyReport:
    return pres.check_consistency()


class Subgroup:
    """A subgroup stored by its canonical induced generating sequence."""

    __slots__ = ("group", "gens", "_order", "_depths")

    def __init__(self, group: PcGroup, gens: tuple):
        self.group = group
        self.gens = tuple(gens)
        self._depths = tuple(group.depth(g) for g in self.gens)
        o = 1
        for d in self._depths:
            o *= group.orders[d]
        self._order = o

    @property
    def order(self) -> int:
        return self._order

    @property
    def depths(self) -> tuple:
        return self._depths

    def key(self):
        return (-self._order, self.gens)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.group is other.group and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __contains__(self, g) -> bool:
        return membership(g, self)

    def __le__(self, other: "Subgroup") -> bool:
        return all(g in other for g in self.gens)

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self != other

    def __repr__(self):
        inner = ", ".join(self.group.format(g) for g in self.gens)
        return f"<{inner}>"


def _same(H: Subgroup, K: Subgroup) -> PcGroup:
    if H.group is not K.group:
        raise GroupError("subgroups of different presentations")
    return H.group


def membership(g, H: Subgroup) -> bool:
    G = H.group
    table = dict(zip(H.depths, H.gens))
    return not any(G._sift(table, tuple(g)))


def equals(H: Subgroup, K: Subgroup) -> bool:
    return H == K


def order(H: Subgroup) -> int:
    return H.order


def reduce_mod(N: Subgroup, g) -> tuple:
    """Canonical representative of the coset ``gN`` (zero at N's pivots)."""
    G = N.group
    g = tuple(g)
    for d, x in zip(N.depths, N.gens):
        e = g[d]
        if e:
            g = G.mul(g, G.pow(x, G.orders[d] - e))
    return g


def is_normal(H: Subgroup, in_group: Subgroup | None = None) -> bool:
    G = H.group
    conj = in_group.gens if in_group is not None else G.gens()
    return all(membership(G.commutator(h, x), H) for h in H.gens for x in conj)


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    G = _same(H, K)
    if H <= K:
        return K
    if K <= H:
        return H
    table = dict(zip(H.depths, H.gens))
    return Subgroup(G, G._canonical(G._induced_table(K.gens, table=table)))


def commutator_subgroup(H: Subgroup, K: Subgroup) -> Subgroup:
    G = _same(H, K)
    comms = [G.commutator(h, k) for h in H.gens for k in K.gens]
    return G.subgroup(comms, normal_closure=True)


def intersection(H: Subgroup, K: Subgroup, *, fallback: bool = True,
                 cap: int = DEFAULT_ENUM_CAP) -> Subgroup:
    """Exact ``H ∩ K``.

    When one subgroup normalises the other the answer comes from an induced
    sequence of ``{(hk, h)}`` inside ``G x G``; the elements with trivial
    first coordinate project onto the intersection.  Otherwise the
    intersection is found by enumerating the smaller subgroup.
    """
    G = _same(H, K)
    if H <= K:
        return H
    if K <= H:
        return K
    if is_normal(K, H):
        return _layered_intersection(H, K)
    if is_normal(H, K):
        return _layered_intersection(K, H)
    if not fallback:
        raise NotNormal("neither subgroup normalises the other")
    return brute_intersection(H, K, cap=cap)


def _layered_intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    G = H.group
    GG = G.direct_square()
    n = G.n
    one = G.identity
    gens = [k + one for k in K.gens] + [h + h for h in H.gens]
    table = GG._induced_table(gens)
    inner = [table[d][n:] for d in sorted(table) if d >= n]
    return G.subgroup(inner)


def brute_intersection(H: Subgroup, K: Subgroup, *, cap: int = DEFAULT_ENUM_CAP) -> Subgroup:
    small, big = (H, K) if H.order <= K.order else (K, H)
    elts = [g for g in enumerate_elements(small, cap) if membership(g, big)]
    return H.group.subgroup(elts)


def enumerate_elements(H: Subgroup, cap: int = DEFAULT_ENUM_CAP) -> list:
    if H.order > cap:
        raise CapExceeded(f"subgroup of order {H.order} exceeds enumeration cap {cap}")
    G = H.group
    ranges = [range(G.orders[d]) for d in H.depths]
    powers = [[G.pow(g, e) for e in range(G.orders[d])] for g, d in zip(H.gens, H.depths)]
    out = []
    for exps in itertools.product(*ranges):
        x = G.identity
        for k, e in enumerate(exps):
            if e:
                x = G.mul(x, powers[k][e])
        out.append(x)
    return out


def lower_central_series(pres: PcGroup) -> list:
    return pres.lower_central_series()


def derived_series(pres: PcGroup) -> list:
    return pres.derived_series()


def is_nilpotent(pres: PcGroup):
    return pres.is_nilpotent()


def is_solvable(pres: PcGroup) -> bool:
    return pres.is_solvable()


def is_pcgs(pres: PcGroup, seq: Sequence, target: Subgroup | None = None) -> bool:
    """True if some ordering of ``seq`` is a polycyclic generating sequence.

    The chain ``⟨a_i, ..., a_k⟩`` must start at ``target`` (the whole group
    by default), be strictly decreasing, and each term must be normal in the
    one before.
    """
    seq = [tuple(x) for x in seq]
    if len(set(seq)) != len(seq):
        return False
    target = target or pres.whole()
    # each step of the chain drops at least one prime from the order
    length, n, q = 0, target.order, 2
    while n > 1:
        while n % q == 0:
            n //= q
            length += 1
        q += 1
    if len(seq) > length or pres.subgroup(seq) != target:
        return False
    memo = {}

    def ok(remaining: frozenset, top: Subgroup) -> bool:
        if not remaining:
            return top.order == 1
        if remaining in memo:
            return memo[remaining]
        result = False
        for a in sorted(remaining):
            rest = remaining - {a}
            sub = pres.subgroup(rest)
            if sub.order < top.order and is_normal(sub, top) and ok(rest, sub):
                result = True
                break
        memo[remaining] = result
        return result

    return ok(frozenset(seq), target)

"""Finite commutative pre-ordered monoids built from cyclic factors.

A cyclic monoid ``C(r, s)`` has elements ``0 .. r+s-1``; sums at or beyond
``r`` wrap with period ``s``.  ``C(r, 1)`` is ℕ truncated at ``r`` (the top
value absorbs everything), which is how infinite free monoids are modelled.

Elements are coordinate tuples.  Internally every element also has an
integer index into ``Monoid.elements`` (graded-lex order), and most
algorithms elsewhere in the package work with those indices.

>>> m = make_monoid([(3, 1), (3, 1)], "direct")
>>> len(m)
16
>>> add(m, (1, 0), (0, 1))
(1, 1)
>>> incomparable(m, (1, 0), (0, 2))
True
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Sequence

DEFAULT_CAP = 4096

INF = "inf"

ORDER_KINDS = ("direct", "lex", "discrete", "explicit", "algebraic")


class MonoidError(ValueError):
    """Base class for monoid construction failures."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class OrderNotPartial(MonoidError):
    pass


class OrderIncompatible(MonoidError):
    pass


class ZeroNotMinimal(MonoidError):
    pass


class SizeCapExceeded(MonoidError):
    pass


def _reduce(v: int, r: int, s: int) -> int:
    return v if v < r else r + (v - r) % s


class Monoid:
    """A finite commutative monoid with a partial order.

    Use :func:`make_monoid`, :func:`adjoin_infinity` or :func:`lift_free`
    rather than calling the constructor directly.
    """

    def __init__(self, factors, blocks, labels, combine, leq_fn, *, models_free=False,
                 description=""):
        self.factors: tuple[tuple[int, int], ...] = tuple(factors)
        self.blocks: tuple[tuple[str, int], ...] = tuple(blocks)
        self.elements: tuple = tuple(labels)
        self.index: dict = {e: i for i, e in enumerate(self.elements)}
        self._combine = combine
        self._rows: list = [None] * len(self.elements)
        n = len(self.elements)
        up = []
        for i, a in enumerate(self.elements):
            mask = 0
            for j, b in enumerate(self.elements):
                if leq_fn(a, b):
                    mask |= 1 << j
            up.append(mask)
        self._up = up
        self._down = None
        self.models_free = models_free
        self.description = description
        self.zero = self.index[self.elements[0]] if n else None
        self._linext = None

    # -- basic access -------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Monoid({self.description or self.factors}, size={len(self)})"

    def idx(self, elt) -> int:
        if isinstance(elt, int) and not isinstance(elt, bool):
            return elt
        key = tuple(elt) if isinstance(elt, list) else elt
        try:
            return self.index[key]
        except KeyError:
            raise KeyError(f"{elt!r} is not an element of {self!r}") from None

    def elt(self, i: int):
        return self.elements[i]

    def canonical(self, coords) -> tuple:
        """Canonical representative of an arbitrary coordinate vector."""
        return _canonical(self.factors, self.blocks, tuple(coords))

    # -- arithmetic and order on indices ------------------------------
    def add_i(self, i: int, j: int) -> int:
        row = self._rows[i]
        if row is None:
            a = self.elements[i]
            row = [self.index[self._combine(a, b)] for b in self.elements]
            self._rows[i] = row
        return row[j]

    def row(self, i: int) -> list:
        self.add_i(i, 0)
        return self._rows[i]

    def leq_i(self, i: int, j: int) -> bool:
        return bool((self._up[i] >> j) & 1)

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def up_set(self, i: int) -> list:
        return _bits(self._up[i])

    def down_set(self, i: int) -> list:
        return [j for j in range(len(self)) if (self._up[j] >> i) & 1]

    def is_sink_i(self, i: int) -> bool:
        row = self.row(i)
        return any(row[j] == i for j in range(len(self)) if j != self.zero)

    def linear_extension(self) -> list:
        """Element indices in an order extending the partial order.

        Ties are broken by graded-lex position, so for the direct order this
        is just ``range(len(self))``.
        """
        if self._linext is None:
            n = len(self)
            preds = [0] * n
            for i in range(n):
                for j in self.up_set(i):
                    if j != i:
                        preds[j] += 1
            import heapq

            ready = [i for i in range(n) if preds[i] == 0]
            heapq.heapify(ready)
            out = []
            while ready:
                i = heapq.heappop(ready)
                out.append(i)
                for j in self.up_set(i):
                    if j != i:
                        preds[j] -= 1
                        if preds[j] == 0:
                            heapq.heappush(ready, j)
            self._linext = out
        return list(self._linext)

    def generated(self, gens: Iterable[int]) -> set:
        """Indices of the submonoid generated by ``gens``."""
        gens = list(gens)
        seen = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.add_i(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    def unit_vectors(self) -> list:
        """Indices of the standard generators e_1 .. e_d (product monoids only)."""
        d = len(self.factors)
        out = []
        for k in range(d):
            v = [0] * d
            v[k] = 1
            out.append(self.idx(self.canonical(v)))
        return out

    def format(self, i: int) -> str:
        e = self.elements[i]
        if e == INF:
            return "inf"
        if all(c == 0 for c in e):
            return "0"
        if len(e) == 1:
            return str(e[0])
        nz = [k for k, c in enumerate(e) if c]
        if len(nz) == 1 and e[nz[0]] == 1 and len(e) > 1:
            return f"e{nz[0] + 1}"
        return "(" + ",".join(str(c) for c in e) + ")"


def _bits(mask: int) -> list:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def _canonical(factors, blocks, coords: tuple) -> tuple:
    v = [_reduce(c, r, s) for c, (r, s) in zip(coords, factors)]
    pos = 0
    for kind, count in blocks:
        if kind == "lex":
            fs = factors[pos:pos + count]
            if all(s == 1 for _, s in fs):
                for k in range(pos, pos + count):
                    if v[k] == factors[k][0]:
                        for l in range(k + 1, pos + count):
                            v[l] = 0
                        break
        pos += count
    return tuple(v)


def _normalize_blocks(order, nfactors: int) -> list:
    if isinstance(order, str):
        return [(order, nfactors)]
    blocks = [(str(k), int(c)) for k, c in order]
    if sum(c for _, c in blocks) != nfactors:
        raise MonoidError("order blocks do not cover the factor list")
    return blocks


def _block_leq(kind: str, a: tuple, b: tuple) -> bool:
    if kind == "direct":
        return all(x <= y for x, y in zip(a, b))
    if kind == "lex":
        return a <= b
    if kind == "discrete":
        return a == b or all(x == 0 for x in a)
    raise MonoidError(f"order kind {kind!r} cannot be used inside a block")


def validate_order(m: Monoid, *, compatibility: bool = True) -> None:
    """Raise if the order of ``m`` is not a compatible partial order with 0 minimal."""
    n = len(m)
    up = m._up
    for i in range(n):
        if not (up[i] >> i) & 1:
            raise OrderNotPartial("order is not reflexive", (m.elt(i),))
    for i in range(n):
        for j in _bits(up[i]):
            if j != i and (up[j] >> i) & 1:
                raise OrderNotPartial("order is not antisymmetric", (m.elt(i), m.elt(j)))
            if up[j] & ~up[i]:
                k = _bits(up[j] & ~up[i])[0]
                raise OrderNotPartial("order is not transitive", (m.elt(i), m.elt(j), m.elt(k)))
    z = m.zero
    for i in range(n):
        if not (up[z] >> i) & 1:
            raise ZeroNotMinimal("0 is not below every element", m.elt(i))
    if compatibility:
        for u in range(n):
            shift = m.row(u)
            for i in range(n):
                target = up[shift[i]]
                for j in _bits(up[i]):
                    if not (target >> shift[j]) & 1:
                        raise OrderIncompatible(
                            "order is not translation compatible",
                            (m.elt(i), m.elt(j), m.elt(u)),
                        )


def make_monoid(factors: Sequence, order="direct", relation=None, *, cap: int = DEFAULT_CAP,
                check: bool = True) -> Monoid:
    """Build a product of cyclic monoids with the requested order.

    ``order`` is one of ``direct``, ``lex``, ``discrete``, ``explicit``,
    ``algebraic``, or a list of ``(kind, count)`` blocks combined with the
    product order.  ``relation`` (for ``explicit``) is an iterable of
    ``(a, b)`` pairs meaning ``a ⪯ b``, or a predicate on two elements;
    reflexive pairs are always added.

    In a lexicographic block of truncated factors, coordinates after the
    first saturated one are forgotten; without this identification the
    lexicographic order on a truncation is not translation compatible.

    ``check=False`` skips validation, which is occasionally useful for
    looking at the arithmetic of monoids that carry no partial order at all
    (for example ``C(3, 5)``).
    """
    factors = tuple((int(r), int(s)) for r, s in factors)
    for r, s in factors:
        if r < 0 or s < 1:
            raise MonoidError(f"bad cyclic factor C({r},{s})")
    size = 1
    for r, s in factors:
        size *= r + s
    if size > cap:
        raise SizeCapExceeded(f"monoid would have {size} elements (cap {cap})", size)
    blocks = _normalize_blocks(order, len(factors))
    kinds = {k for k, _ in blocks}
    whole = None
    if kinds & {"explicit", "algebraic"}:
        if len(blocks) != 1:
            raise MonoidError("explicit and algebraic orders apply to the whole monoid")
        whole = blocks[0][0]
    for k in kinds:
        if k not in ORDER_KINDS:
            raise MonoidError(f"unknown order kind {k!r}")

    raw = itertools.product(*[range(r + s) for r, s in factors])
    labels = sorted({_canonical(factors, blocks, c) for c in raw}, key=lambda e: (sum(e), e))

    def combine(a, b):
        return _canonical(factors, blocks, tuple(x + y for x, y in zip(a, b)))

    if whole == "explicit":
        if callable(relation):
            pred = relation
        else:
            pairs = {(tuple(a), tuple(b)) for a, b in (relation or ())}
            pred = lambda a, b: a == b or (a, b) in pairs  # noqa: E731
        leq_fn = pred
    elif whole == "algebraic":
        def leq_fn(a, b):
            return any(combine(a, u) == b for u in labels)
    else:
        def leq_fn(a, b):
            pos = 0
            for kind, count in blocks:
                if not _block_leq(kind, a[pos:pos + count], b[pos:pos + count]):
                    return False
                pos += count
            return True

    free = all(s == 1 for _, s in factors) and kinds <= {"direct", "lex"}
    desc = " x ".join(f"C({r},{s})" for r, s in factors) + " " + " ".join(
        f"{k}:{c}" for k, c in blocks)
    m = Monoid(factors, blocks, labels, combine, leq_fn, models_free=free, description=desc)
    if check:
        validate_order(m)
    return m


def add(m: Monoid, a, b):
    return m.elt(m.add_i(m.idx(a), m.idx(b)))


def leq(m: Monoid, a, b) -> bool:
    return m.leq_i(m.idx(a), m.idx(b))


def incomparable(m: Monoid, a, b) -> bool:
    i, j = m.idx(a), m.idx(b)
    return not m.leq_i(i, j) and not m.leq_i(j, i)


def _ordered_parts(m: Monoid, X) -> list:
    if isinstance(X, (set, frozenset)):
        return sorted({m.idx(x) for x in X})
    out = []
    for x in X:
        i = m.idx(x)
        if i not in out:
            out.append(i)
    return out


def enumerate_partitions(m: Monoid, s, X, max_len: int, *, as_indices: bool = False) -> list:
    """All sequences over ``X`` of length at most ``max_len`` summing to ``s``.

    Shorter sequences come first; within a length, sequences are ordered
    lexicographically by the position of their parts in ``X`` (sets are
    taken in element order).
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    target = m.idx(s)
    parts = _ordered_parts(m, X)
    out = []
    layer = [((), m.zero)]
    for _ in range(max_len):
        nxt = []
        for seq, total in layer:
            for p in parts:
                nxt.append((seq + (p,), m.add_i(total, p)))
        layer = nxt
        out.extend(seq for seq, total in layer if total == target)
    if as_indices:
        return out
    return [tuple(m.elt(i) for i in seq) for seq in out]


def sinks(m: Monoid) -> set:
    return {m.elt(i) for i in range(len(m)) if m.is_sink_i(i)}


def is_semi_cancellative(m: Monoid, s) -> bool:
    return not m.is_sink_i(m.idx(s))


def minimal_elements(m: Monoid, I) -> set:
    idxs = {m.idx(x) for x in I}
    out = set()
    for i in idxs:
        if not any(j != i and m.leq_i(j, i) for j in idxs):
            out.add(m.elt(i))
    return out


def adjoin_infinity(m: Monoid, *, cap: int = DEFAULT_CAP) -> Monoid:
    """Add an absorbing top element ``INF`` to ``m``."""
    if len(m) + 1 > cap:
        raise SizeCapExceeded(f"monoid would have {len(m) + 1} elements (cap {cap})", len(m) + 1)
    if INF in m.index:
        raise MonoidError("monoid already has an adjoined top")
    old = m

    def combine(a, b):
        if a == INF or b == INF:
            return INF
        return old.elt(old.add_i(old.idx(a), old.idx(b)))

    def leq_fn(a, b):
        if b == INF:
            return True
        if a == INF:
            return False
        return old.leq_i(old.idx(a), old.idx(b))

    out = Monoid(m.factors, m.blocks, list(m.elements) + [INF], combine, leq_fn,
                 description=(m.description + " + inf"))
    validate_order(out)
    return out


def lift_free(m: Monoid, bounds: Sequence[int], *, cap: int = DEFAULT_CAP,
              check_compatible: bool = True) -> tuple[Monoid, dict]:
    """Truncated free monoid mapping onto ``m``.

    Returns ``(lift, mu)``; ``lift`` is ``∏ C(b_i, 1)`` ordered by
    ``s ⪯' t`` iff ``mu(s) ≺ mu(t)``, or ``mu(s) = mu(t)`` and ``s ≤ t``
    coordinatewise.  ``mu`` maps lift elements to elements of ``m`` by
    reducing each coordinate in its cyclic factor.  It is additive for sums
    that stay below the truncation bounds.
    """
    if INF in m.index:
        raise MonoidError("cannot lift a monoid with an adjoined top")
    bounds = tuple(int(b) for b in bounds)
    if len(bounds) != len(m.factors):
        raise MonoidError("one bound per cyclic factor is required")
    size = 1
    for b in bounds:
        size *= b + 1
    if size > cap:
        raise SizeCapExceeded(f"lift would have {size} elements (cap {cap})", size)
    for b, (r, s) in zip(bounds, m.factors):
        if s == 1 and b < r:
            raise MonoidError("bound below the index of a truncated factor")
    labels = sorted(itertools.product(*[range(b + 1) for b in bounds]), key=lambda e: (sum(e), e))
    mu = {e: m.canonical(e) for e in labels}

    def combine(a, b):
        return tuple(min(x + y, bd) for x, y, bd in zip(a, b, bounds))

    def leq_fn(a, b):
        i, j = m.idx(mu[a]), m.idx(mu[b])
        if i == j:
            return all(x <= y for x, y in zip(a, b))
        return m.leq_i(i, j) and not m.leq_i(j, i)

    lift = Monoid([(b, 1) for b in bounds], [("explicit", len(bounds))], labels, combine, leq_fn,
                  description="lift of " + m.description)
    validate_order(lift, compatibility=check_compatible)
    return lift, mu


def extend_monoid(m: Monoid, new_factors: Sequence, *, cap: int = DEFAULT_CAP) -> tuple[Monoid, Callable]:
    """Product of ``m`` with extra truncated factors under the product order.

    Returns the new monoid and the embedding ``m -> m x 0``.
    """
    if INF in m.index or any(k in ("explicit", "algebraic") for k, _ in m.blocks):
        raise MonoidError("only block-ordered product monoids can be extended")
    new_factors = [tuple(f) for f in new_factors]
    ext = make_monoid(list(m.factors) + new_factors,
                      list(m.blocks) + [("direct", len(new_factors))], cap=cap)
    pad = (0,) * len(new_factors)
    return ext, (lambda e: tuple(e) + pad)

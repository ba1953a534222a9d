"""Brute-force reference implementations used only by the tests.

Everything here works on explicit element sets, so it shares no code with
the pc-group machinery it checks beyond group multiplication (which is
itself checked against matrices in ``test_pcgroup.py``).
"""

from __future__ import annotations

from functools import reduce
from itertools import chain, combinations, product


# -- matrices over F_p ---------------------------------------------------

def mat_id(d):
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def mat_mul(a, b, p):
    d = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(d)) % p for j in range(d)) for i in range(d))


def mat_pow(a, e, p):
    out = mat_id(len(a))
    for _ in range(e):
        out = mat_mul(out, a, p)
    return out


def elementary(d, i, j):
    m = [list(r) for r in mat_id(d)]
    m[i - 1][j - 1] = 1
    return tuple(tuple(r) for r in m)


def ut_matrix(G, vec, d, p):
    """Matrix of a pc element of ``unitriangular(d, p)``."""
    pos = {k: ij for ij, k in G.positions.items()}
    out = mat_id(d)
    for k, e in enumerate(vec):
        if e:
            out = mat_mul(out, mat_pow(elementary(d, *pos[k]), e, p), p)
    return out


def heis_matrix(vec, p):
    x, y, z = elementary(3, 1, 2), elementary(3, 2, 3), elementary(3, 1, 3)
    out = mat_id(3)
    for g, e in zip((x, y, z), vec):
        out = mat_mul(out, mat_pow(g, e, p), p)
    return out


# -- subgroups as element sets ---------------------------------------------

class Brute:
    """Subgroup arithmetic on frozensets of elements of a pc group."""

    def __init__(self, G):
        self.G = G
        self._cache = {}

    def gen(self, gens):
        G = self.G
        gens = [tuple(g) for g in gens]
        key = frozenset(gens)
        if key in self._cache:
            return self._cache[key]
        out = {G.identity}
        frontier = [G.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = G.mul(a, g)
                    if b not in out:
                        out.add(b)
                        nxt.append(b)
            frontier = nxt
        res = frozenset(out)
        self._cache[key] = res
        return res

    def of(self, H):
        """Element set of a pc ``Subgroup``."""
        return self.gen(H.gens)

    def join(self, A, B):
        return self.gen(set(A) | set(B))

    def meet(self, A, B):
        return frozenset(A) & frozenset(B)

    def comm(self, A, B):
        """``[A, B]`` for normal ``A`` and ``B``: generated by all commutators."""
        G = self.G
        return self.gen({G.commutator(a, b) for a in A for b in B})

    def normal_closure(self, N):
        G = self.G
        return self.gen({G.mul(G.mul(G.inv(g), n), g) for g in self.all_elements() for n in N})

    def all_elements(self):
        return self.gen(self.G.gens())


def brute_commutator_elements(G, A, B):
    return Brute(G).comm(A, B)


# -- filters -------------------------------------------------------------------

def brute_validate(m, sets, G):
    """Check the two filter axioms on element sets; returns the first failure."""
    n = len(m)
    for s in range(n):
        for t in range(n):
            c = brute_commutator_elements(G, sets[s], sets[t])
            if not c <= sets[m.add_i(s, t)]:
                return ("commutator", s, t)
            if m.leq_i(s, t) and not sets[t] <= sets[s]:
                return ("order", s, t)
    return None


def brute_boundary(m, sets, G):
    br = Brute(G)
    out = []
    for s in range(len(m)):
        acc = frozenset([G.identity])
        for t in range(len(m)):
            if t != m.zero:
                acc = br.join(acc, sets[m.add_i(s, t)])
        out.append(acc)
    return out


def brute_closure(m, prefilter_sets, G, max_len):
    """Join over all sequences in the domain summing to ``s`` of the
    left-normed commutators, evaluated on element sets."""
    br = Brute(G)
    X = sorted(prefilter_sets)
    out = [frozenset([G.identity]) for _ in range(len(m))]
    layer = {(x,): prefilter_sets[x] for x in X}
    for _ in range(max_len):
        for seq, S in layer.items():
            s = reduce(m.add_i, seq)
            out[s] = br.join(out[s], S)
        nxt = {}
        for seq, S in layer.items():
            if len(S) == 1:
                continue
            for x in X:
                nxt[seq + (x,)] = brute_commutator_elements(G, S, prefilter_sets[x])
        layer = nxt
        if not layer:
            break
    return out


def brute_strata(values, bounds, br):
    """Members reached by the strata, trying every subset ``B`` of the
    current level as a generating family for a boundary."""
    least = min(values, key=len)
    current = {least}
    while True:
        new = set(current)
        members = sorted(current, key=len)
        for v, d in zip(values, bounds):
            if v in new:
                continue
            for B in chain.from_iterable(combinations(members, k) for k in range(len(members) + 1)):
                gen = br.gen(set().union(*B)) if B else frozenset([br.G.identity])
                if gen == d:
                    new.add(v)
                    break
        if new == current:
            return current
        current = new


def brute_filtered(X, value_sets, G):
    """Both lattice conditions for every nonempty set of distinct values."""
    br = Brute(G)
    X = [tuple(x) for x in X]
    vals = list(dict.fromkeys(value_sets))
    for k in range(1, len(vals) + 1):
        for S in combinations(vals, k):
            meet = reduce(lambda a, b: a & b, S)
            common = reduce(lambda a, b: a & b, (frozenset(x for x in X if x in v) for v in S))
            if br.gen(common) != meet:
                return False
            join = reduce(br.join, S)
            lhs = {x for x in X if x in join}
            rhs = set().union(*({x for x in X if x in v} for v in S))
            if lhs != rhs:
                return False
    return True


def count_invertible(d, p):
    """Invertible ``d x d`` matrices over F_p, by determinant."""
    def det(m):
        if len(m) == 1:
            return m[0][0] % p
        return sum((-1) ** j * m[0][j] * det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m))) % p

    n = 0
    for entries in product(range(p), repeat=d * d):
        m = [list(entries[i * d:(i + 1) * d]) for i in range(d)]
        if det(m):
            n += 1
    return n

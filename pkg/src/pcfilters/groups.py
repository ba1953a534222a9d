"""Ready-made pc presentations for the groups used throughout the examples.

Each constructor returns ``(group, subgroups)`` where ``subgroups`` maps
names to :class:`~pcfilters.pcgroup.Subgroup` objects.
"""

from __future__ import annotations

from .pcgroup import PcGroup, Subgroup


def _factor(n: int) -> list:
    out, k = [], 2
    while k * k <= n:
        while n % k == 0:
            out.append(k)
            n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def cyclic(n: int):
    """ℤ/n refined along its prime factors (smallest first).

    ``g1`` is the element 1; ``g_{i+1} = g_i^{p_i}``.  Subgroups are named
    ``<d>`` for each divisor ``d`` of ``n`` (``<n>`` is the trivial one).
    """
    primes = _factor(n)
    k = len(primes)
    powers = {i: [(i + 1, 1)] for i in range(k - 1)}
    G = PcGroup(primes, powers, {}, names=[f"g{i + 1}" for i in range(k)])
    subs = {}
    for d in range(1, n + 1):
        if n % d == 0:
            subs[f"<{d}>"] = G.subgroup([element_of_cyclic(G, d)])
    subs["G"] = G.whole()
    return G, subs


def element_of_cyclic(G: PcGroup, k: int) -> tuple:
    """The element ``k`` of a group built by :func:`cyclic`."""
    return G.pow(G.gen(0), k)


def unitriangular(d: int, p: int):
    """Upper unitriangular ``d x d`` matrices over F_p.

    Generator order: the elementary matrices ``I + E_ij`` sorted by
    ``j - i`` and then by ``i``.  ``positions`` maps ``(i, j)`` (1-based) to
    the generator index.
    """
    pos_list = [(i, i + w) for w in range(1, d) for i in range(1, d - w + 1)]
    index = {ij: k for k, ij in enumerate(pos_list)}
    comms = {}

    # [I+E_ij, I+E_jk] = I+E_ik, and the reverse order gives the inverse.
    def comm(a, b):
        (i, j), (k, l) = a, b
        if j == k:
            return [(index[(i, l)], 1)]
        if l == i:
            return [(index[(k, j)], p - 1)]
        return []

    for b, ij_b in enumerate(pos_list):
        for a in range(b):
            w = comm(ij_b, pos_list[a])
            if w:
                comms[(b, a)] = w
    names = [f"x{i}{j}" for i, j in pos_list]
    G = PcGroup([p] * len(pos_list), {}, comms, names=names)
    G.positions = index
    subs = {"G": G.whole()}
    for c, term in enumerate(G.lower_central_series()[1:], start=2):
        subs[f"gamma{c}"] = term
    subs["1"] = G.trivial()
    return G, subs


def pattern_subgroup(G: PcGroup, entries) -> Subgroup:
    """Subgroup generated by the elementary matrices at ``entries``."""
    return G.subgroup([G.gen(G.positions[ij]) for ij in entries])


def heisenberg(p: int):
    """UT(3, p) with ``x = I+E12``, ``y = I+E23``, ``z = I+E13``.

    With these matrices ``[y, x] = z^-1``, so ``y*x`` collects to
    ``x*y*z^-1``.
    """
    G = PcGroup([p, p, p], {}, {(1, 0): [(2, p - 1)]}, names=["x", "y", "z"])
    subs = {"G": G.whole(), "Z": G.subgroup([G.gen(2)]), "1": G.trivial()}
    return G, subs


def hk_group(p: int):
    """Order p^5 group of block matrices ``[[I2, aI2, (x,y)], [0, I2, (b,c)], [0, 0, 1]]``.

    Generators ``a, b, c, x, y`` in that order; ``H<k>`` is generated by
    ``x * y^k`` for ``k = 0 .. p-1``.
    """
    comms = {(1, 0): [(3, p - 1)], (2, 0): [(4, p - 1)]}
    G = PcGroup([p] * 5, {}, comms, names=["a", "b", "c", "x", "y"])
    subs = {"G": G.whole()}
    for c, term in enumerate(G.lower_central_series()[1:], start=2):
        subs[f"gamma{c}"] = term
    for k in range(p):
        subs[f"H{k}"] = G.subgroup([G.collect([(3, 1), (4, k)])])
    subs["1"] = G.trivial()
    return G, subs


def genus3(p: int):
    """Thirteen-generator class-2 group of exponent p with its named characteristic subgroups."""
    g13 = [(12, 1)]
    comms = {(9, 5): [(10, 1)], (9, 6): [(11, 1)]}
    for j, i in [(1, 0), (3, 2), (5, 4), (7, 6), (9, 8)]:
        comms[(j, i)] = g13
    G = PcGroup([p] * 13, {}, comms)

    def span(*idx):
        return G.subgroup([G.gen(i - 1) for i in idx])

    g2 = (11, 12, 13)
    subs = {
        "G": G.whole(),
        "J1": span(*range(1, 10), *g2),
        "J2": span(1, 2, 3, 4, 5, 8, 9, *g2),
        "J3": span(5, 8, 9, *g2),
        "J4": span(9, *g2),
        "gamma2": span(*g2),
        "H": span(13),
        "1": G.trivial(),
        "E": span(5, 6, 7, 8, 9, 10, *g2),
        "S": span(1, 2, 3, 4, *g2),
        "SJ4": span(1, 2, 3, 4, 9, *g2),
        "J1capE": span(5, 6, 7, 8, 9, *g2),
    }
    return G, subs

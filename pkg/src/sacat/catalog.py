"""Every group of order at most 16, up to isomorphism.

Candidates come from cyclic groups, direct products and semidirect products
``N ⋊ C_k`` over all automorphisms of N; they are deduplicated by fingerprint
and explicit isomorphism search.  The per-order counts are checked against the
known sequence.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import CatalogIncomplete
from .groups import (
    FiniteGroup,
    Subgroup,
    builtin,
    cyclic,
    direct_product,
    enumerate_morphisms,
    find_isomorphism,
    group_fingerprint,
    quotient,
    semidirect_cyclic,
)

CATALOG_MAX = 16
KNOWN_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1,
                12: 5, 13: 1, 14: 2, 15: 1, 16: 14}

# preferred names, tried before generic constructions
NAMED = ["C4", "C2xC2", "C6", "S3", "C8", "C4xC2", "C2xC2xC2", "D4", "Q8", "C9", "C3xC3",
         "C10", "D5", "C12", "C6xC2", "D6", "A4", "Dic3", "C14", "D7", "C15", "C16",
         "C8xC2", "C4xC4", "C4xC2xC2", "C2xC2xC2xC2", "D8", "Q16", "C2xD4", "C2xQ8"]


def _special(n: int) -> list[FiniteGroup]:
    if n != 16:
        return []
    C8 = cyclic(8)
    sd = semidirect_cyclic(C8, 2, [(3 * x) % 8 for x in range(8)], label="SD16")
    m16 = semidirect_cyclic(C8, 2, [(5 * x) % 8 for x in range(8)], label="M16")
    P = direct_product(cyclic(4), builtin("D4"))
    # identify the central involutions: (2, r^2) with r^2 at index 2 of D4
    Z = Subgroup(P, [0, 2 * 8 + 2])
    cp, _ = quotient(P, Z, label="C4oD4")
    return [sd, m16, cp]


def _automorphisms(N: FiniteGroup) -> list[tuple[int, ...]]:
    return [tuple(int(v) for v in phi.map) for phi in enumerate_morphisms(N, N)
            if phi.is_bijective]


def _aut_order_divides(aut: tuple[int, ...], k: int) -> bool:
    cur = list(range(len(aut)))
    for _ in range(k):
        cur = [aut[c] for c in cur]
    return cur == list(range(len(aut)))


class _Bucketed:
    def __init__(self):
        self.groups: list[FiniteGroup] = []
        self._by_fp: dict[tuple, list[FiniteGroup]] = {}

    def add(self, G: FiniteGroup) -> bool:
        fp = group_fingerprint(G)
        bucket = self._by_fp.setdefault(fp, [])
        if any(find_isomorphism(G, H) is not None for H in bucket):
            return False
        bucket.append(G)
        self.groups.append(G)
        return True


@lru_cache(maxsize=None)
def groups_of_order(n: int) -> tuple[FiniteGroup, ...]:
    """All isomorphism types of order n (n <= 16), each with a readable label."""
    if n < 1 or n > CATALOG_MAX:
        raise CatalogIncomplete(f"catalog covers orders 1..{CATALOG_MAX}, not {n}")
    found = _Bucketed()
    for name in NAMED:
        G = builtin(name)
        if G.order == n:
            found.add(G)
    for G in _special(n):
        found.add(G)
    found.add(cyclic(n))
    for d in range(2, n):
        if n % d:
            continue
        for G in groups_of_order(d):
            for H in groups_of_order(n // d):
                if G.order > 1 and H.order > 1:
                    found.add(direct_product(G, H))
        k = n // d
        for N in groups_of_order(d):
            for aut in _automorphisms(N):
                if _aut_order_divides(aut, k):
                    found.add(semidirect_cyclic(N, k, aut, label=f"{N.label}:C{k}"))
    out = tuple(found.groups)
    if len(out) != KNOWN_COUNTS[n]:
        raise CatalogIncomplete(f"found {len(out)} groups of order {n}, expected {KNOWN_COUNTS[n]}")
    return out


def catalog(max_order: int = CATALOG_MAX) -> list[FiniteGroup]:
    """All groups of order 1..max_order, smallest first."""
    return [G for n in range(1, max_order + 1) for G in groups_of_order(n)]

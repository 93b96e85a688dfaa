"""H1 and H2 of finite groups from the normalized bar complex.

Chains in degree k are integer combinations of k-tuples of non-identity
elements.  A pair ``(x, y)`` has index ``(x-1)*(n-1) + (y-1)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable

import numpy as np

from .abelian import (
    AbMorphism,
    CokernelPresentation,
    FinAb,
    IntMatrix,
    _certify_cokernel,
    abelian_structure,
    modular_cokernel,
    reduce_cokernel,
    subquotient_structure,
)
from .errors import NotACycle, OrderCapExceeded
from .groups import FiniteGroup, GroupMorphism, Subgroup, commutator_subgroup, quotient

CERTIFIED_CAP = int(os.environ.get("SACAT_CAP_ORDER", "24"))
UNCERTIFIED_CAP = 60


def pair_index(n: int, x: int, y: int) -> int:
    return (x - 1) * (n - 1) + (y - 1)


def pair_of(n: int, idx: int) -> tuple[int, int]:
    a, b = divmod(idx, n - 1)
    return a + 1, b + 1


def d2_column(G: FiniteGroup, x: int, y: int) -> dict[int, int]:
    """Boundary of [x|y] = [y] - [xy] + [x] over element indices (identity dropped)."""
    out: dict[int, int] = {}
    xy = G.mul(x, y)
    for e, s in ((y, 1), (xy, -1), (x, 1)):
        if e:
            out[e - 1] = out.get(e - 1, 0) + s
    return {k: v for k, v in out.items() if v}


def d3_columns(G: FiniteGroup) -> Iterable[dict[int, int]]:
    """Boundaries of all non-degenerate triples, in lexicographic order."""
    n = G.order
    T = G.table
    m = n - 1
    for x in range(1, n):
        Tx = T[x]
        for y in range(1, n):
            xy = int(Tx[y])
            Ty = T[y]
            for z in range(1, n):
                yz = int(Ty[z])
                col: dict[int, int] = {}
                # [y|z] - [xy|z] + [x|yz] - [x|y]
                k = (y - 1) * m + (z - 1)
                col[k] = col.get(k, 0) + 1
                if xy:
                    k = (xy - 1) * m + (z - 1)
                    col[k] = col.get(k, 0) - 1
                if yz:
                    k = (x - 1) * m + (yz - 1)
                    col[k] = col.get(k, 0) + 1
                k = (x - 1) * m + (y - 1)
                col[k] = col.get(k, 0) - 1
                yield {k: v for k, v in col.items() if v}


class BarSegment:
    """Degrees 1..3 of the normalized bar complex of a group."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        n = group.order
        self.n1 = n - 1
        self.n2 = (n - 1) ** 2
        self.n3 = (n - 1) ** 3

    @property
    def d2(self) -> IntMatrix:
        G = self.group
        ent = {}
        for x in range(1, G.order):
            for y in range(1, G.order):
                j = pair_index(G.order, x, y)
                for i, v in d2_column(G, x, y).items():
                    ent[(i, j)] = v
        return IntMatrix(self.n1, self.n2, ent)

    @property
    def d3(self) -> IntMatrix:
        ent = {}
        for j, col in enumerate(d3_columns(self.group)):
            for i, v in col.items():
                ent[(i, j)] = v
        return IntMatrix(self.n2, self.n3, ent)

    def boundary2(self, chain: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        n = self.group.order
        for idx, c in chain.items():
            x, y = pair_of(n, idx)
            for i, v in d2_column(self.group, x, y).items():
                out[i] = out.get(i, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def check_complex(self) -> bool:
        """d2·d3 = 0, column by column."""
        n = self.group.order
        for col in d3_columns(self.group):
            if self.boundary2(col):
                return False
        return True


def _tree_expressions(G: FiniteGroup) -> tuple[list[int], np.ndarray]:
    """Rewrite every bar pair in terms of pairs ``[s|y]`` with ``s`` a generator.

    Returns the generator list S and an array ``E`` of shape (n, n, |S|(n-1))
    with ``[x|y] = sum_g E[x, y, g] [s_g|y_g]`` modulo the image of d3.  Uses the
    relations ``d3[s|x'|y]`` along a BFS tree ``x = s x'``.
    """
    n = G.order
    S = list(G.generating_set)
    m = len(S) * (n - 1)
    E = np.zeros((n, n, m), dtype=np.int64)
    ys = np.arange(1, n)
    parent: dict[int, tuple[int, int]] = {}
    seen, frontier = {0}, [0]
    order: list[int] = []
    while frontier:
        nxt = []
        for xp in frontier:
            for si, s in enumerate(S):
                x = G.mul(s, xp)
                if x not in seen:
                    seen.add(x)
                    parent[x] = (si, xp)
                    order.append(x)
                    nxt.append(x)
        frontier = nxt
    for x in order:
        si, xp = parent[x]
        E[x] = E[xp]
        base = si * (n - 1)
        prod = G.table[xp, ys]
        live = prod != 0
        E[x, ys[live], base + prod[live] - 1] += 1
        if xp:
            E[x, ys, base + xp - 1] -= 1
    return S, E


@lru_cache(maxsize=64)
def _coker_d3(G: FiniteGroup, modulus: int | None) -> CokernelPresentation:
    n = G.order
    q = modulus
    S, E = _tree_expressions(G)
    m = E.shape[2]
    T = G.table
    rels = []
    inner = np.arange(1, n)
    yy, zz = np.meshgrid(inner, inner, indexing="ij")
    yy, zz = yy.ravel(), zz.ravel()
    for x in range(1, n):
        R = E[yy, zz] - E[T[x, yy], zz] + E[x, T[yy, zz]] - E[x, yy]
        if q:
            R %= q
        R = R[R.any(axis=1)]
        if len(R):
            rels.append(np.unique(R, axis=0))
    R = np.unique(np.concatenate(rels), axis=0) if rels else np.zeros((0, m), dtype=np.int64)
    pp = _prime_powers(q) if q else []
    if len(pp) == 1:
        small = modular_cokernel(R.T, *pp[0])
    else:
        small = reduce_cokernel(
            m, ({int(g): int(r[g]) for g in np.flatnonzero(r)} for r in R), modulus=q
        )
    # compose: ambient pair -> generator rows -> summand coordinates
    gen_pair = [pair_index(n, S[g // (n - 1)], g % (n - 1) + 1) for g in range(m)]
    flat = E[1:, 1:].reshape((n - 1) ** 2, m).astype(object)
    coords = (flat @ small.coords.T).T if len(small.factors) else np.zeros((0, (n - 1) ** 2), dtype=object)
    coords = np.array(
        [[int(v) % d if d else int(v) for v in row] for row, d in zip(coords, small.factors)],
        dtype=object,
    ).reshape(len(small.factors), (n - 1) ** 2)
    lifts = [{gen_pair[g]: v for g, v in lift.items()} for lift in small.lifts]
    pres = CokernelPresentation((n - 1) ** 2, list(small.factors), coords, lifts)
    if q is None:
        _certify_cokernel(pres, list(d3_columns(G)))
    return pres


def coker_d3(G: FiniteGroup, modulus: int | None = None) -> CokernelPresentation:
    """Presentation of ``C2 / im d3`` (optionally tensored with Z/modulus)."""
    if G.order == 1:
        return CokernelPresentation(0, [], np.zeros((0, 0), dtype=object), [])
    return _coker_d3(G, modulus)


# ---------------------------------------------------------------------- H1

@dataclass
class H1Result:
    structure: FinAb
    projection: GroupMorphism  # Y -> Ab(Y) concrete
    abelianization: FiniteGroup
    coords: dict[int, tuple[int, ...]]  # element of Y -> invariant coordinates

    def of(self, y: int) -> tuple[int, ...]:
        return self.coords[int(y)]


@lru_cache(maxsize=256)
def h1(Y: FiniteGroup) -> H1Result:
    """Abelianization Y/[Y,Y] in invariant-factor form with the unit Y -> Ab(Y)."""
    D = commutator_subgroup(Y)
    Q, proj = quotient(Y, D, label=f"Ab({Y.label})")
    A, gens, qcoords = abelian_structure(Q)
    coords = {y: qcoords[int(proj.map[y])] for y in range(Y.order)}
    wit = subquotient_structure(Y, Y.whole, D).witness
    return H1Result(FinAb(A.factors, witness=wit), proj, Q, coords)


def induced_h1(f: GroupMorphism) -> AbMorphism:
    """H1(f): images of the invariant generators of Ab(source)."""
    hs, ht = h1(f.source), h1(f.target)
    src = hs.structure
    gens = src.witness.generators
    cols = [ht.of(f(g)) for g in gens]
    M = [[cols[j][i] for j in range(src.rank)] for i in range(ht.structure.rank)]
    return AbMorphism(src, ht.structure, M)


# ---------------------------------------------------------------------- H2

@dataclass
class HomologyGroup:
    """H2 with integral cycle representatives of its invariant generators."""

    group: FiniteGroup
    structure: FinAb
    cycle_basis: list[dict[int, int]]  # sparse chains over pair indices
    certified: bool
    _pres: CokernelPresentation
    _torsion_rows: list[int]
    _to_inv: list[list[int]]

    def coordinates(self, cycle: dict[int, int]) -> tuple[int, ...]:
        """Class of an integral 2-cycle in invariant coordinates."""
        if not self._pres.factors and self.structure.rank:
            raise OrderCapExceeded("cycle coordinates need the certified presentation")
        raw = self._pres.coordinates(cycle)
        tors = [raw[r] for r in self._torsion_rows]
        out = [sum(row[k] * tors[k] for k in range(len(tors))) for row in self._to_inv]
        return self.structure.reduce(out)


def _h2_from_presentation(Y: FiniteGroup, pres: CokernelPresentation, certified: bool,
                          modulus: int | None) -> HomologyGroup:
    from .abelian import finab_from_orders

    torsion_rows = [i for i, d in enumerate(pres.factors) if d != 0 and d != modulus]
    free = [i for i, d in enumerate(pres.factors) if d == 0 or d == modulus]
    if len(free) != Y.order - 1:
        raise NotACycle(
            f"expected {Y.order - 1} free summands in C2/im d3, found {len(free)}")
    orders = [pres.factors[i] for i in torsion_rows]
    S, to_inv, from_inv = finab_from_orders(orders)
    seg = BarSegment(Y)
    basis = []
    for t in range(S.rank):
        chain: dict[int, int] = {}
        for k, r in enumerate(torsion_rows):
            c = from_inv[k][t]
            if c:
                for idx, v in pres.lifts[r].items():
                    chain[idx] = chain.get(idx, 0) + c * v
        chain = {k: v for k, v in chain.items() if v}
        if certified and seg.boundary2(chain):
            raise NotACycle("torsion lift is not a cycle")
        basis.append(chain)
    return HomologyGroup(Y, S, basis, certified, pres, torsion_rows, to_inv)


@lru_cache(maxsize=128)
def h2(Y: FiniteGroup, cap: int | None = None, uncertified: bool = False) -> HomologyGroup:
    """Schur multiplier H2(Y; Z) = ker d2 / im d3 as the torsion of C2/im d3.

    Up to ``cap`` (default 24) the computation is exact over Z.  Beyond it,
    with ``uncertified=True``, each p-part is read from C2/im d3 tensored
    with Z/p^(v+1), v = v_p(|Y|), relying on |Y|·H2 = 0.
    """
    cap = CERTIFIED_CAP if cap is None else cap
    if Y.order <= cap:
        return _h2_from_presentation(Y, coker_d3(Y), True, None)
    if not uncertified:
        raise OrderCapExceeded(f"|Y| = {Y.order} exceeds certified cap {cap}")
    if Y.order > UNCERTIFIED_CAP:
        raise OrderCapExceeded(f"|Y| = {Y.order} exceeds cap {UNCERTIFIED_CAP}")
    return _h2_modular(Y)


def _prime_powers(n: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _h2_modular(Y: FiniteGroup) -> HomologyGroup:
    """Uncertified H2: combine p-parts computed modulo p^(v_p|Y| + 1)."""
    from .abelian import finab_from_orders

    orders: list[int] = []
    chains: list[dict[int, int]] = []
    for p, v in _prime_powers(Y.order):
        q = p ** (v + 1)
        part = _h2_from_presentation(Y, coker_d3(Y, q), False, q)
        orders += list(part.structure.factors)
        chains += part.cycle_basis
    S, to_inv, from_inv = finab_from_orders(orders)
    basis = []
    for t in range(S.rank):
        chain: dict[int, int] = {}
        for k, ch in enumerate(chains):
            c = from_inv[k][t]
            for idx, val in ch.items():
                chain[idx] = chain.get(idx, 0) + c * val
        basis.append({k: v for k, v in chain.items() if v})
    pres = CokernelPresentation(0, [], np.zeros((0, 0), dtype=object), [])
    return HomologyGroup(Y, S, basis, False, pres, [], [])


def induced_h2(f: GroupMorphism) -> AbMorphism:
    """H2(f): push each cycle representative through f, then read coordinates."""
    hs, ht = h2(f.source), h2(f.target)
    n = f.target.order
    cols = []
    for chain in hs.cycle_basis:
        img: dict[int, int] = {}
        for idx, c in chain.items():
            x, y = pair_of(f.source.order, idx)
            fx, fy = f(x), f(y)
            if fx and fy:
                k = pair_index(n, fx, fy)
                img[k] = img.get(k, 0) + c
        cols.append(ht.coordinates({k: v for k, v in img.items() if v}))
    M = [[cols[j][i] for j in range(hs.structure.rank)] for i in range(ht.structure.rank)]
    return AbMorphism(hs.structure, ht.structure, M)


def section_of(f: GroupMorphism) -> np.ndarray:
    """Deterministic set-section: smallest preimage of each element."""
    s = np.full(f.target.order, -1, dtype=np.int64)
    for x in range(f.source.order - 1, -1, -1):
        s[f.map[x]] = x
    s[0] = 0
    return s


def homology_transgression(e, section: np.ndarray | None = None) -> AbMorphism:
    """Connecting map H2(Y) -> K/[K,X] of an extension ``e``.

    A cycle sum n_i (y_i, y'_i) goes to the product of
    ``(s(y_i) s(y'_i) s(y_i y'_i)^-1)^(n_i)`` read in K/[K,X].
    """
    X, Y = e.total, e.base
    s = section_of(e.proj) if section is None else np.asarray(section)
    target = e.kernel_mod_commutator()
    wit = target.witness
    H = h2(Y)
    cols = []
    for chain in H.cycle_basis:
        acc = [0] * target.rank
        for idx, c in chain.items():
            y1, y2 = pair_of(Y.order, idx)
            k = X.prod(int(s[y1]), int(s[y2]), X.inv(int(s[Y.mul(y1, y2)])))
            if k not in wit.top.members:
                raise NotACycle("section defect left the kernel")
            co = wit.coords(k)
            for i in range(target.rank):
                acc[i] += c * co[i]
        cols.append(target.reduce(acc))
    M = [[cols[j][i] for j in range(H.structure.rank)] for i in range(target.rank)]
    return AbMorphism(H.structure, FinAb(target.factors), M)

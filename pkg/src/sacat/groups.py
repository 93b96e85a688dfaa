"""Finite groups as Cayley tables.

Elements are the integers ``0 .. order-1`` and ``0`` is always the identity.
Every object here is immutable once built; tables are read-only numpy arrays.
"""

from __future__ import annotations

import re
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    ClosureTooLarge,
    ForeignSubgroup,
    NoIdentity,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotClosed,
    NotNormal,
    ParseError,
    UnsupportedName,
)

CLOSURE_CAP = 5000


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of ``a*b``.  Construct through
    :func:`from_cayley_table` (validating) or the builders below.
    """

    def __init__(self, table, label: str = "G", _checked: bool = False):
        if not _checked:
            g = from_cayley_table(table, label=label)
            table = g.table
        self.table = _frozen(table)
        self.order = int(self.table.shape[0])
        inv = np.argmin(self.table, axis=1)  # identity 0 is the row minimum
        self.inverse = _frozen(inv)
        self.label = label

    def __repr__(self):
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def __len__(self):
        return self.order

    @property
    def identity(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def prod(self, *xs: int) -> int:
        r = 0
        for x in xs:
            r = int(self.table[r, x])
        return r

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inverse[a]), -k
        r, base = 0, a
        while k:
            if k & 1:
                r = int(self.table[r, base])
            base = int(self.table[base, base])
            k >>= 1
        return r

    def commutator(self, a: int, b: int) -> int:
        """``a^-1 b^-1 a b``."""
        return self.prod(self.inv(a), self.inv(b), a, b)

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = int(self.table[x, a])
                k += 1
            orders[a] = k
        orders.flags.writeable = False
        return orders

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    @cached_property
    def generating_set(self) -> tuple[int, ...]:
        """Greedy generators: the smallest index not yet generated, repeatedly."""
        return tuple(greedy_generators(self, ()))

    def closure(self, gens: Iterable[int], start: Iterable[int] = (0,)) -> frozenset[int]:
        return _closure(self.table, list(gens), set(start))

    def subgroup(self, gens: Iterable[int]) -> "Subgroup":
        return Subgroup(self, self.closure(gens), _checked=True)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order), _checked=True)

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,), _checked=True)

    def to_json(self) -> dict:
        return {"label": self.label, "order": self.order, "table": self.table.tolist()}


def _closure(table: np.ndarray, gens: list[int], elems: set[int]) -> frozenset[int]:
    gens = [g for g in gens if g != 0]
    if not gens:
        return frozenset(elems | {0})
    elems = set(elems) | {0}
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def greedy_generators(G: FiniteGroup, start: Sequence[int]) -> list[int]:
    """Extend ``start`` greedily (smallest index first) until it generates G."""
    gens = list(start)
    current = G.closure(gens)
    for a in range(G.order):
        if len(current) == G.order:
            break
        if a not in current:
            gens.append(a)
            current = _closure(G.table, gens, set(current))
    return gens[len(start):]


# ---------------------------------------------------------------- validation

def from_cayley_table(table, label: str = "G") -> FiniteGroup:
    """Validate a square table and return a group with identity at index 0."""
    try:
        T = np.array(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotClosed(f"table is not a rectangular integer array: {exc}") from None
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise NotClosed(f"table must be a non-empty square array, got shape {T.shape}")
    n = T.shape[0]
    bad = np.argwhere((T < 0) | (T >= n))
    if bad.size:
        i, j = bad[0]
        raise NotClosed(f"entry table[{i}][{j}] = {T[i, j]} is outside 0..{n - 1}")
    ar = np.arange(n)
    ident = [e for e in range(n) if np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)]
    if not ident:
        raise NoIdentity("no two-sided identity element")
    e = ident[0]
    if e != 0:
        perm = ar.copy()
        perm[0], perm[e] = e, 0  # perm[new] = old
        T = relabel_table(T, perm)
    left = T[T, :]  # left[a, b, c] = (a b) c
    right = T[ar[:, None, None], T[None, :, :]]  # a (b c)
    diff = np.argwhere(left != right)
    if diff.size:
        a, b, c = diff[0]
        raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})")
    for a in range(n):
        if not np.any(T[a] == 0) or not np.any(T[:, a] == 0):
            raise NoInverse(f"element {a} has no inverse")
        b = int(np.argmax(T[a] == 0))
        if T[b, a] != 0:
            raise NoInverse(f"element {a} has no two-sided inverse")
    return FiniteGroup(T, label=label, _checked=True)


def relabel_table(T: np.ndarray, perm: np.ndarray) -> np.ndarray:
    """Table in new labels, where ``perm[new] = old``."""
    perm = np.asarray(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv[T[perm[:, None], perm[None, :]]]


# --------------------------------------------------------------- subgroups

class Subgroup:
    """A subset of a parent group that is closed under products and inverses."""

    def __init__(self, parent: FiniteGroup, elements: Iterable[int], _checked: bool = False):
        elems = tuple(sorted(set(int(x) for x in elements)))
        self.parent = parent
        self.elements = elems
        self.members = frozenset(elems)
        if not _checked:
            self._validate()

    def _validate(self):
        G = self.parent
        if 0 not in self.members:
            raise ForeignSubgroup("subset does not contain the identity")
        idx = np.array(self.elements)
        prods = G.table[idx[:, None], idx[None, :]]
        if not np.isin(prods, idx).all():
            raise ForeignSubgroup("subset is not closed under multiplication")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.members

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self):
        return hash(self.members)

    def __le__(self, other: "Subgroup"):
        return self.members <= other.members

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent.label})"

    def is_normal(self) -> bool:
        G = self.parent
        for g in G.generating_set:
            gi = G.inv(g)
            for x in self.elements:
                if G.prod(gi, x, g) not in self.members:
                    return False
        return True

    def as_group(self, label: str | None = None) -> tuple[FiniteGroup, "GroupMorphism"]:
        """The subgroup as a standalone group plus its inclusion morphism."""
        idx = np.array(self.elements)
        pos = {x: i for i, x in enumerate(self.elements)}
        sub = self.parent.table[idx[:, None], idx[None, :]]
        T = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if len(idx) else sub
        H = FiniteGroup(T, label=label or f"sub({self.parent.label})", _checked=True)
        return H, GroupMorphism(H, self.parent, idx, _checked=True)


def _own(G: FiniteGroup, S: Subgroup) -> Subgroup:
    if not isinstance(S, Subgroup) or S.parent is not G:
        raise ForeignSubgroup(f"{S!r} is not a subgroup of {G.label}")
    return S


def commutator_subgroup(G: FiniteGroup, A: Subgroup | None = None,
                        B: Subgroup | None = None) -> Subgroup:
    """The subgroup generated by all ``a^-1 b^-1 a b`` with a in A and b in B."""
    A = G.whole if A is None else _own(G, A)
    B = G.whole if B is None else _own(G, B)
    T, I = G.table, G.inverse
    a = np.array(A.elements)
    b = np.array(B.elements)
    comm = T[T[I[a][:, None], I[b][None, :]], T[a[:, None], b[None, :]]]
    return G.subgroup(np.unique(comm).tolist())


def center(G: FiniteGroup) -> Subgroup:
    gens = np.array(G.generating_set, dtype=np.int64)
    if gens.size == 0:
        return G.whole
    commuting = (G.table[:, gens] == G.table[gens, :].T).all(axis=1)
    return Subgroup(G, np.flatnonzero(commuting).tolist(), _checked=True)


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    s = np.array(list(S), dtype=np.int64)
    if s.size == 0:
        return G.whole
    ok = (G.table[:, s] == G.table[s, :].T).all(axis=1)
    return Subgroup(G, np.flatnonzero(ok).tolist(), _checked=True)


def quotient(G: FiniteGroup, N: Subgroup, label: str | None = None
             ) -> tuple[FiniteGroup, "GroupMorphism"]:
    """The coset group G/N with its canonical projection.

    Cosets are numbered by their smallest element, so the identity coset is 0.
    """
    _own(G, N)
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.label}")
    n_idx = np.array(N.elements)
    coset_min = G.table[:, n_idx].min(axis=1)
    reps = np.unique(coset_min)
    which = {int(r): i for i, r in enumerate(reps)}
    proj = np.array([which[int(m)] for m in coset_min], dtype=np.int64)
    T = proj[G.table[reps[:, None], reps[None, :]]]
    Q = FiniteGroup(T, label=label or f"{G.label}/N{N.order}", _checked=True)
    return Q, GroupMorphism(G, Q, proj, _checked=True)


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, found by joining cyclic subgroups until nothing new appears."""
    cyclic = {G.closure([a]) for a in range(G.order)}
    found = set(cyclic)
    frontier = set(cyclic)
    cyc = sorted(cyclic, key=lambda s: (len(s), sorted(s)))
    while frontier:
        new = set()
        for S in frontier:
            for C in cyc:
                if C <= S:
                    continue
                J = _closure(G.table, sorted(C | S), set(S))
                if J not in found:
                    new.add(J)
        found |= new
        frontier = new
    return [Subgroup(G, s, _checked=True)
            for s in sorted(found, key=lambda s: (len(s), sorted(s)))]


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    return [S for S in all_subgroups(G) if S.is_normal()]


# ---------------------------------------------------------------- morphisms

class GroupMorphism:
    """A homomorphism given by the image of every element."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, mapping,
                 _checked: bool = False):
        m = _frozen(mapping)
        if m.shape != (source.order,):
            raise NotAHomomorphism(
                f"map has {m.shape} entries, expected {source.order}")
        self.source, self.target, self.map = source, target, m
        if not _checked:
            if m.size and (m.min() < 0 or m.max() >= target.order):
                raise NotAHomomorphism("map leaves the target group")
            if m[0] != 0:
                raise NotAHomomorphism("identity is not sent to the identity")
            lhs = m[source.table]
            rhs = target.table[m[:, None], m[None, :]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                a, b = bad[0]
                raise NotAHomomorphism(f"f({a}*{b}) != f({a})*f({b})")

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __repr__(self):
        return f"GroupMorphism({self.source.label} -> {self.target.label})"

    def __eq__(self, other):
        return (isinstance(other, GroupMorphism) and other.source is self.source
                and other.target is self.target and np.array_equal(other.map, self.map))

    def __hash__(self):
        return hash(self.map.tobytes())

    def compose(self, first: "GroupMorphism") -> "GroupMorphism":
        """``self ∘ first``."""
        return GroupMorphism(first.source, self.target, self.map[first.map], _checked=True)

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.source.order

    @property
    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.order

    @property
    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and self.is_injective

    def inverse(self) -> "GroupMorphism":
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.source.order)
        return GroupMorphism(self.target, self.source, inv, _checked=True)

    def to_json(self) -> dict:
        return {"map": self.map.tolist()}


def identity_morphism(G: FiniteGroup) -> GroupMorphism:
    return GroupMorphism(G, G, np.arange(G.order), _checked=True)


def trivial_morphism(G: FiniteGroup, H: FiniteGroup) -> GroupMorphism:
    return GroupMorphism(G, H, np.zeros(G.order, dtype=np.int64), _checked=True)


def kernel(h: GroupMorphism) -> Subgroup:
    return Subgroup(h.source, np.flatnonzero(h.map == 0).tolist(), _checked=True)


def image(h: GroupMorphism) -> Subgroup:
    return Subgroup(h.target, np.unique(h.map).tolist(), _checked=True)


def enumerate_morphisms(G: FiniteGroup, H: FiniteGroup,
                        constraints: Mapping[int, int] | None = None,
                        candidates=None) -> Iterator[GroupMorphism]:
    """Yield every homomorphism ``G -> H`` honouring the pinned images.

    ``candidates``, when given, is a callable ``x -> iterable of allowed images``
    applied to each free generator.  Generators are the pinned elements followed
    by greedy generators; images are tried in ascending order.
    """
    constraints = dict(constraints or {})
    pinned = sorted(x for x in constraints if x != 0)
    if constraints.get(0, 0) != 0:
        return
    free = greedy_generators(G, pinned)
    gens = pinned + free
    ordH = H.element_orders
    phi = np.full(G.order, -1, dtype=np.int64)
    phi[0] = 0
    TG, TH = G.table, H.table

    def extend(phi, k, img):
        # defines phi on <gens[:k+1]> given phi on <gens[:k]>; False on conflict
        phi = phi.copy()
        g = gens[k]
        imgs = [int(phi[x]) for x in gens[:k]] + [img]
        queue = [int(x) for x in np.flatnonzero(phi >= 0)]
        new = []
        for x in queue:  # old elements only need the new generator edge
            y = int(TG[x, g])
            v = int(TH[phi[x], img])
            if phi[y] < 0:
                phi[y] = v
                new.append(y)
            elif phi[y] != v:
                return None
        while new:
            nxt = []
            for x in new:
                px = phi[x]
                for gi, hi in zip(gens[:k + 1], imgs):
                    y = int(TG[x, gi])
                    v = int(TH[px, hi])
                    if phi[y] < 0:
                        phi[y] = v
                        nxt.append(y)
                    elif phi[y] != v:
                        return None
            new = nxt
        return phi

    def options(k):
        g = gens[k]
        if g in constraints:
            return [constraints[g]]
        allowed = np.flatnonzero(G.element_orders[g] % ordH == 0).tolist()
        if candidates is not None:
            keep = set(int(c) for c in candidates(g))
            allowed = [h for h in allowed if h in keep]
        return allowed

    def rec(phi, k):
        if k == len(gens):
            if all(phi[x] == v for x, v in constraints.items()):
                yield GroupMorphism(G, H, phi, _checked=True)
            return
        for img in options(k):
            nphi = extend(phi, k, img)
            if nphi is None:
                continue
            if any(nphi[x] >= 0 and nphi[x] != v for x, v in constraints.items()):
                continue
            yield from rec(nphi, k + 1)

    yield from rec(phi, 0)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> GroupMorphism | None:
    """Brute-force isomorphism search (generator images restricted by order)."""
    if G.order != H.order or group_fingerprint(G) != group_fingerprint(H):
        return None
    ordG, ordH = G.element_orders, H.element_orders

    def same_order(x):
        return np.flatnonzero(ordH == ordG[x]).tolist()

    for phi in enumerate_morphisms(G, H, candidates=same_order):
        if phi.is_bijective:
            return phi
    return None


def group_fingerprint(G: FiniteGroup) -> tuple:
    """Cheap isomorphism invariant: order statistics paired with centralizer sizes."""
    T = G.table
    stats = []
    ords = G.element_orders
    for a in range(G.order):
        cent = int(np.count_nonzero(T[a, :] == T[:, a]))
        sq = int(ords[T[a, a]])
        stats.append((int(ords[a]), cent, sq))
    comm = commutator_subgroup(G)
    return (G.order, tuple(sorted(stats)), center(G).order, comm.order,
            len(normal_subgroups(G)) if G.order <= 64 else -1)


# ----------------------------------------------------------------- builders

def cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, label=f"C{n}", _checked=True)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element r^i s^j has index j*n + i."""
    size = 2 * n
    T = np.empty((size, size), dtype=np.int64)
    for x, y in product(range(size), repeat=2):
        j, i = divmod(x, n)
        l, k = divmod(y, n)
        T[x, y] = ((j + l) % 2) * n + (i + (k if j == 0 else -k)) % n
    return FiniteGroup(T, label=f"D{n}", _checked=True)


def dicyclic(order: int) -> FiniteGroup:
    """Dicyclic group of the given order (Q8 for 8); a^i x^j has index j*2m + i."""
    if order % 4 or order < 4:
        raise UnsupportedName(f"dicyclic order must be a multiple of 4, got {order}")
    m = order // 4
    n2 = 2 * m
    T = np.empty((order, order), dtype=np.int64)
    for x, y in product(range(order), repeat=2):
        j, i = divmod(x, n2)
        l, k = divmod(y, n2)
        e = i + (k if j == 0 else -k)
        if j and l:
            e += m
            s = 0
        else:
            s = j + l
        T[x, y] = s * n2 + e % n2
    return FiniteGroup(T, label=f"Q{order}", _checked=True)


def direct_product(G: FiniteGroup, H: FiniteGroup, label: str | None = None) -> FiniteGroup:
    """Element (g, h) has index g*|H| + h."""
    n, m = G.order, H.order
    T = (G.table[:, None, :, None] * m + H.table[None, :, None, :]).reshape(n * m, n * m)
    return FiniteGroup(T, label=label or f"{G.label}x{H.label}", _checked=True)


def product_projections(G: FiniteGroup, H: FiniteGroup, P: FiniteGroup
                        ) -> tuple[GroupMorphism, GroupMorphism]:
    idx = np.arange(P.order)
    return (GroupMorphism(P, G, idx // H.order, _checked=True),
            GroupMorphism(P, H, idx % H.order, _checked=True))


def semidirect_cyclic(N: FiniteGroup, n: int, aut: Sequence[int],
                      label: str | None = None) -> FiniteGroup:
    """``N ⋊ C_n`` where the generator of C_n acts by the automorphism ``aut``.

    Element (x, i) has index i*|N| + x and (x,i)(y,j) = (x·aut^i(y), i+j).
    """
    aut = np.asarray(aut)
    m = N.order
    powers = [np.arange(m)]
    for _ in range(n - 1):
        powers.append(aut[powers[-1]])
    if not np.array_equal(aut[powers[-1]], np.arange(m)):
        raise ValueError("automorphism order does not divide n")
    size = m * n
    T = np.empty((size, size), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            block = N.table[:, powers[i]]  # x * aut^i(y)
            T[i * m:(i + 1) * m, j * m:(j + 1) * m] = ((i + j) % n) * m + block
    return FiniteGroup(T, label=label or f"{N.label}:C{n}")


def permutation_closure(gens: Sequence[Sequence[int]], label: str = "perm",
                        cap: int = CLOSURE_CAP) -> FiniteGroup:
    """Closure of permutation generators; (p·q)(i) = p(q(i))."""
    degree = max((len(g) for g in gens), default=1)
    gens = [tuple(g) + tuple(range(len(g), degree)) for g in gens]
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(degree))
                if q not in index:
                    if len(elems) >= cap:
                        raise ClosureTooLarge(f"closure exceeds {cap} elements")
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(elems)
    arr = np.array(elems, dtype=np.int64)
    T = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        pa = arr[a]
        for b in range(n):
            T[a, b] = index[tuple(pa[arr[b]])]
    G = FiniteGroup(T, label=label, _checked=True)
    G.permutations = arr
    return G


def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
    """``"(0 1 2)(3 4)"`` -> permutation tuple."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*\d+(\s+\d+)*\s*\))+|\(\s*\)", text):
        raise ParseError(f"bad cycle notation: {text!r}")
    cycles = [[int(t) for t in c.split()] for c in re.findall(r"\(([^)]*)\)", text)]
    pts = [p for c in cycles for p in c]
    if len(pts) != len(set(pts)):
        raise ParseError(f"cycles are not disjoint: {text!r}")
    deg = max([degree or 0] + [p + 1 for p in pts])
    perm = list(range(deg))
    for c in cycles:
        for i, p in enumerate(c):
            perm[p] = c[(i + 1) % len(c)]
    return tuple(perm)


def symmetric(n: int, cap: int = CLOSURE_CAP) -> FiniteGroup:
    if n <= 1:
        return permutation_closure([], label=f"S{n}")
    gens = [parse_cycles("(" + " ".join(map(str, range(n))) + ")"), parse_cycles("(0 1)", n)]
    return permutation_closure(gens, label=f"S{n}", cap=cap)


def alternating(n: int, cap: int = CLOSURE_CAP) -> FiniteGroup:
    if n <= 2:
        return permutation_closure([], label=f"A{n}")
    if n == 3:
        return permutation_closure([parse_cycles("(0 1 2)")], label="A3", cap=cap)
    start = 0 if n % 2 else 1
    long = "(" + " ".join(map(str, range(start, n))) + ")"
    return permutation_closure([parse_cycles(long, n), parse_cycles("(0 1 2)", n)],
                               label=f"A{n}", cap=cap)


_FACTOR = re.compile(r"(C|D|Q|S|A|Dic)(\d+)")


def _builtin_factor(tok: str, cap: int) -> FiniteGroup:
    if tok.startswith("perm:"):
        body = tok[5:].strip()
        parts = [p for p in body.split(",")]
        if not body or any(not p.strip() for p in parts):
            raise ParseError(f"empty permutation list in {tok!r}")
        perms = [parse_cycles(p) for p in parts]
        return permutation_closure(perms, label=tok, cap=cap)
    m = _FACTOR.fullmatch(tok)
    if not m:
        raise UnsupportedName(f"unknown group name {tok!r}")
    kind, n = m.group(1), int(m.group(2))
    if n == 0:
        raise UnsupportedName(f"{tok!r}: size must be positive")
    size = {"C": n, "D": 2 * n, "Q": n, "Dic": 4 * n}.get(kind, 0)
    if size > cap:
        raise ClosureTooLarge(f"{tok} has order {size}, above cap {cap}")
    if kind == "C":
        return cyclic(n)
    if kind == "D":
        return dihedral(n)
    if kind == "Q":
        if n < 8 or n % 4:
            raise UnsupportedName(f"Q{n}: order must be a multiple of 4 and at least 8")
        return dicyclic(n)
    if kind == "Dic":
        G = dicyclic(4 * n)
        G.label = tok
        return G
    if n > 6:
        raise UnsupportedName(f"{tok}: symmetric/alternating groups supported up to degree 6")
    return symmetric(n, cap) if kind == "S" else alternating(n, cap)


def builtin(spec: str, cap: int = CLOSURE_CAP) -> FiniteGroup:
    """Parse the group DSL: ``C<n>``, ``D<n>``, ``Q8``, ``S<n>``, ``A<n>``,
    ``perm:(0 1 2),(0 1)`` and ``x``-separated direct products."""
    if not isinstance(spec, str) or not spec.strip():
        raise ParseError("empty group spec")
    spec = spec.strip()
    tokens = spec.split("x")
    if any(not t.strip() for t in tokens):
        raise ParseError(f"dangling product in {spec!r}")
    G = None
    for tok in tokens:
        F = _builtin_factor(tok.strip(), cap)
        if G is None:
            G = F
        else:
            if G.order * F.order > cap:
                raise ClosureTooLarge(f"product {spec!r} exceeds cap {cap}")
            G = direct_product(G, F)
    G.label = spec
    return G

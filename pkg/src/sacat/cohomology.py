"""H¹ and H² with trivial finite abelian coefficients.

Normalized 2-cocycles Y x Y -> Z/m are exactly the homomorphisms
``C2/im d3 -> Z/m``, so a presentation of ``coker(d3) ⊗ Z/m`` gives Z² directly;
coboundaries are ``c ∘ d2``.  Coefficients ``⊕ Z/m_j`` are handled one cyclic
factor at a time and reassembled in invariant form.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .abelian import (
    AbMorphism,
    CokernelPresentation,
    FinAb,
    HomGroup,
    abelian_structure,
    finab_from_orders,
    hom_group,
    reduce_cokernel,
)
from .errors import KernelMismatch, NotACocycle, NotCentral, SolverCapExceeded
from .extensions import Extension, make_extension
from .groups import FiniteGroup, GroupMorphism, builtin, enumerate_morphisms
from .homology import HomologyGroup, coker_d3, h1, h2, pair_of, section_of

SOLVER_CAP = int(os.environ.get("SACAT_SOLVER_CAP", str(60 * 60 * 2)))


# ------------------------------------------------------------ coefficients

@lru_cache(maxsize=None)
def _concrete(factors: tuple[int, ...]) -> FiniteGroup:
    return FinAb(factors).concrete()


@dataclass(frozen=True, eq=False)
class CoefficientGroup:
    """A finite abelian group with a fixed Cayley-table realization.

    Element ``i`` of ``concrete`` has coordinates ``structure.element(i)``.
    """

    structure: FinAb
    concrete: FiniteGroup

    @classmethod
    def of(cls, A: "FinAb | Sequence[int] | str") -> "CoefficientGroup":
        if isinstance(A, str):
            return identify(builtin(A))[0]
        if not isinstance(A, FinAb):
            A = FinAb(tuple(A))
        return cls(FinAb(A.factors), _concrete(A.factors))

    @property
    def factors(self) -> tuple[int, ...]:
        return self.structure.factors

    @property
    def order(self) -> int:
        return self.structure.order

    def element(self, i: int) -> tuple[int, ...]:
        return self.structure.element(int(i))

    def index(self, c: Sequence[int]) -> int:
        return self.structure.index(c)

    def coords_table(self) -> np.ndarray:
        """``(|A|, rank)`` array of coordinates of every element."""
        return np.array([self.element(i) for i in range(self.order)],
                        dtype=np.int64).reshape(self.order, self.structure.rank)

    def __eq__(self, other):
        return isinstance(other, CoefficientGroup) and other.structure == self.structure

    def __hash__(self):
        return hash(self.structure)

    def __str__(self):
        return str(self.structure)


def standard_coefficients(G: FiniteGroup) -> CoefficientGroup:
    """The CoefficientGroup whose ``concrete`` is G itself."""
    if G.is_abelian:
        S, _, _ = abelian_structure(G)
        A = CoefficientGroup.of(S)
        if A.concrete is G:
            return A
    raise KernelMismatch(f"{G.label} is not a standard coefficient group")


def identify(G: FiniteGroup) -> tuple[CoefficientGroup, GroupMorphism]:
    """An abelian group as coefficients, with the isomorphism onto them."""
    if not G.is_abelian:
        raise KernelMismatch(f"{G.label} is not abelian")
    S, _, coords = abelian_structure(G)
    A = CoefficientGroup.of(S)
    iso = GroupMorphism(G, A.concrete, [A.index(coords[x]) for x in range(G.order)])
    return A, iso


# --------------------------------------------------------------- cocycles

class Cocycle2:
    """A normalized 2-cocycle; ``values[x, y]`` holds coordinates in A."""

    def __init__(self, base: FiniteGroup, coeff: CoefficientGroup, values, check: bool = True):
        n, r = base.order, coeff.structure.rank
        v = np.asarray(values, dtype=np.int64).reshape(n, n, r)
        mods = np.array(coeff.factors, dtype=np.int64)
        self.base, self.coeff = base, coeff
        self.values = v % mods if r else v
        self.values.setflags(write=False)
        if check:
            self._validate()

    def _validate(self):
        v, T = self.values, self.base.table
        if v[0].any() or v[:, 0].any():
            raise NotACocycle("cocycle is not normalized")
        if not v.size:
            return
        n = self.base.order
        mods = np.array(self.coeff.factors, dtype=np.int64)
        for x in range(n):
            # f(x,y) + f(xy,z) - f(y,z) - f(x,yz) over all y, z
            lhs = v[x][:, None, :] + v[T[x]] - v - v[x][T]
            if (lhs % mods).any():
                raise NotACocycle("cocycle identity fails")

    @classmethod
    def zero(cls, Y: FiniteGroup, A: CoefficientGroup) -> "Cocycle2":
        return cls(Y, A, np.zeros((Y.order, Y.order, A.structure.rank), dtype=np.int64),
                   check=False)

    @classmethod
    def coboundary(cls, Y: FiniteGroup, A: CoefficientGroup, c) -> "Cocycle2":
        """δc(x, y) = c(x) + c(y) - c(xy) for ``c`` of shape (|Y|, rank)."""
        c = np.asarray(c, dtype=np.int64).reshape(Y.order, A.structure.rank)
        c = c - c[0]
        return cls(Y, A, c[:, None, :] + c[None, :, :] - c[Y.table], check=False)

    def value(self, x: int, y: int) -> tuple[int, ...]:
        return tuple(int(a) for a in self.values[x, y])

    def index_table(self) -> np.ndarray:
        """``(|Y|, |Y|)`` table of A element indices."""
        idx = np.zeros(self.values.shape[:2], dtype=np.int64)
        for d, col in zip(self.coeff.factors, np.moveaxis(self.values, 2, 0)):
            idx = idx * d + col
        return idx

    def _same(self, other: "Cocycle2"):
        if other.base is not self.base or other.coeff != self.coeff:
            raise KernelMismatch("cocycles live over different groups")

    def __add__(self, other: "Cocycle2") -> "Cocycle2":
        self._same(other)
        return Cocycle2(self.base, self.coeff, self.values + other.values, check=False)

    def __neg__(self) -> "Cocycle2":
        return Cocycle2(self.base, self.coeff, -self.values, check=False)

    def __sub__(self, other: "Cocycle2") -> "Cocycle2":
        return self + (-other)

    def scale(self, k: int) -> "Cocycle2":
        return Cocycle2(self.base, self.coeff, k * self.values, check=False)

    def __eq__(self, other):
        return (isinstance(other, Cocycle2) and other.base is self.base
                and other.coeff == self.coeff and np.array_equal(other.values, self.values))

    def __hash__(self):
        return hash(self.values.tobytes())

    def is_zero(self) -> bool:
        return not self.values.any()

    def to_json(self) -> dict:
        return {"base": self.base.label, "coeff": list(self.coeff.factors),
                "values": self.index_table().tolist()}


# ---------------------------------------------------------- cyclic solver

class _CyclicPart:
    """H²(Y, Z/m).

    With ``coker(d3) ⊗ Z/m ≅ ⊕ Z/d_i`` a cocycle is determined by the values
    ``f(lift_i) = (m/d_i) ψ_i``; ψ ranges over ``⊕ Z/d_i`` and coboundaries
    δe_x span the relations of H².
    """

    def __init__(self, Y: FiniteGroup, m: int):
        self.Y, self.m = Y, m
        n = Y.order
        pres = coker_d3(Y, m) if n > 1 else CokernelPresentation(
            0, [], np.zeros((0, 0), dtype=object), [])
        self.pres = pres
        d = [int(x) for x in pres.factors]
        self.d = d
        self.step = [m // x for x in d]
        rels: list[dict[int, int]] = [{i: di} for i, di in enumerate(d)]
        for x in range(1, n):
            rels.append({})
        for i, lift in enumerate(pres.lifts):
            bd: dict[int, int] = {}
            for idx, c in lift.items():
                a, b = pair_of(n, idx)
                for e, s in ((b, 1), (Y.mul(a, b), -1), (a, 1)):
                    if e:
                        bd[e] = bd.get(e, 0) + s * c
            for x, c in bd.items():
                c %= m
                assert c % self.step[i] == 0
                if c:
                    rels[len(d) + x - 1][i] = c // self.step[i]
        self.h = reduce_cokernel(len(d), rels)
        assert self.h.free_rank == 0
        # dense coordinate rows scaled into Z/m
        self._coords = (np.array(pres.coords, dtype=np.int64).reshape(len(d), -1) % m
                        if d else np.zeros((0, (n - 1) ** 2), dtype=np.int64))
        self._gen_tables: dict[int, np.ndarray] = {}

    @property
    def orders(self) -> list[int]:
        return list(self.h.factors)

    def psi(self, f: np.ndarray) -> list[int]:
        """Z² coordinates of the (n, n) cocycle table ``f`` over Z/m."""
        n = self.Y.order
        out = []
        for i, lift in enumerate(self.pres.lifts):
            val = 0
            for idx, c in lift.items():
                a, b = pair_of(n, idx)
                val += c * int(f[a, b])
            val %= self.m
            if val % self.step[i]:
                raise NotACocycle("values do not vanish on boundaries")
            out.append(val // self.step[i])
        return out

    def class_coords(self, f: np.ndarray) -> list[int]:
        return self.h.coordinates(self.psi(f)) if self.d else []

    def table(self, psi: Sequence[int]) -> np.ndarray:
        n = self.Y.order
        out = np.zeros((n, n), dtype=np.int64)
        if not self.d:
            return out
        w = np.array([int(p) * s % self.m for p, s in zip(psi, self.step)], dtype=np.int64)
        out[1:, 1:] = ((w @ self._coords) % self.m).reshape(n - 1, n - 1)
        return out

    def generator_table(self, t: int) -> np.ndarray:
        if t not in self._gen_tables:
            psi = [0] * len(self.d)
            for i, c in self.h.lifts[t].items():
                psi[i] = c
            self._gen_tables[t] = self.table(psi)
        return self._gen_tables[t]


@dataclass
class CohomologyGroup2:
    """H²(Y, A) with a cocycle for every invariant generator."""

    base: FiniteGroup
    coeff: CoefficientGroup
    structure: FinAb
    representatives: list[Cocycle2]
    _parts: list[_CyclicPart] = field(repr=False)
    _to_inv: list[list[int]] = field(repr=False)
    _from_inv: list[list[int]] = field(repr=False)

    @property
    def order(self) -> int:
        return self.structure.order

    def class_of(self, f: Cocycle2) -> tuple[int, ...]:
        if f.base is not self.base or f.coeff != self.coeff:
            raise KernelMismatch("cocycle does not match this cohomology group")
        raw: list[int] = []
        for j, part in enumerate(self._parts):
            raw += part.class_coords(f.values[:, :, j])
        return self.structure.reduce(
            [sum(r[k] * raw[k] for k in range(len(raw))) for r in self._to_inv])

    def is_coboundary(self, f: Cocycle2) -> bool:
        return not any(self.class_of(f))

    def cocycle(self, coords: Sequence[int]) -> Cocycle2:
        """The canonical cocycle of a class given in invariant coordinates."""
        n = self.base.order
        raw = [sum(row[t] * int(coords[t]) for t in range(self.structure.rank))
               for row in self._from_inv]
        vals = np.zeros((n, n, self.coeff.structure.rank), dtype=np.int64)
        k = 0
        for j, part in enumerate(self._parts):
            for t in range(len(part.orders)):
                if raw[k]:
                    vals[:, :, j] += raw[k] * part.generator_table(t)
                k += 1
        return Cocycle2(self.base, self.coeff, vals, check=False)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return self.structure.elements()

    def coboundary_witness(self, f: Cocycle2) -> np.ndarray | None:
        """Some c with δc = f (shape (|Y|, rank)), or None if f is not a coboundary."""
        if not self.is_coboundary(f):
            return None
        return _solve_coboundary(self.base, self.coeff, f)

    def to_json(self, reps: bool = False) -> dict:
        out = {"group": self.base.label, "coeff": str(self.coeff),
               "h2": self.structure.to_json()}
        if reps:
            out["reps"] = [r.to_json()["values"] for r in self.representatives]
        return out


def _solve_coboundary(Y: FiniteGroup, A: CoefficientGroup, f: Cocycle2) -> np.ndarray | None:
    """Search c on generators; c(s x') = c(s) + c(x') - f(s, x') fixes the rest."""
    n, r = Y.order, A.structure.rank
    gens = list(Y.generating_set)
    kcoef = np.zeros((n, len(gens)), dtype=np.int64)
    const = np.zeros((n, r), dtype=np.int64)
    seen, frontier = {0}, [0]
    while frontier:
        nxt = []
        for xp in frontier:
            for si, s in enumerate(gens):
                x = Y.mul(s, xp)
                if x not in seen:
                    seen.add(x)
                    kcoef[x] = kcoef[xp]
                    kcoef[x, si] += 1
                    const[x] = const[xp] - f.values[s, xp]
                    nxt.append(x)
        frontier = nxt
    space = A.order ** len(gens)
    if space > 10 ** 6:
        raise SolverCapExceeded(f"coboundary search space {space} too large")
    target = f.values
    mods = np.array(A.factors, dtype=np.int64)
    for choice in product(range(A.order), repeat=len(gens)):
        vals = np.array([A.element(i) for i in choice], dtype=np.int64).reshape(len(gens), r)
        c = (kcoef @ vals + const) % mods if r else kcoef @ vals
        if np.array_equal(Cocycle2.coboundary(Y, A, c).values, target):
            return c
    return None


def h2_cohomology(Y: FiniteGroup, A: CoefficientGroup) -> CohomologyGroup2:
    """H²(Y, A) for trivial action, one cyclic factor of A at a time."""
    if Y.order ** 2 * max(1, A.structure.rank) > SOLVER_CAP:
        raise SolverCapExceeded(
            f"|Y|^2 * {A.structure.rank} exceeds the solver cap {SOLVER_CAP}")
    return _h2_cohomology(Y, A.structure.factors)


@lru_cache(maxsize=256)
def _h2_cohomology(Y: FiniteGroup, factors: tuple[int, ...]) -> CohomologyGroup2:
    A = CoefficientGroup.of(factors)
    parts = [_CyclicPart(Y, m) for m in factors]
    orders = [d for p in parts for d in p.orders]
    S, to_inv, from_inv = finab_from_orders(orders)
    H = CohomologyGroup2(Y, A, S, [], parts, to_inv, from_inv)
    H.representatives = [H.cocycle([int(t == u) for u in range(S.rank)]) for t in range(S.rank)]
    for rep in H.representatives:
        rep._validate()
    return H


# --------------------------------------------------------------------- H¹

@dataclass
class H1Cohomology:
    """H¹(X, A) = Hom(H₁X, A) with explicit homomorphisms X -> A."""

    group: FiniteGroup
    coeff: CoefficientGroup
    hom: HomGroup

    @property
    def structure(self) -> FinAb:
        return self.hom.structure

    def morphism(self, coords: Sequence[int]) -> GroupMorphism:
        phi = self.hom.morphism(coords)
        ab = h1(self.group)
        A = self.coeff
        return GroupMorphism(self.group, A.concrete,
                             [A.index(phi(ab.of(x))) for x in range(self.group.order)])

    def morphisms(self) -> Iterator[GroupMorphism]:
        for c in self.structure.elements():
            yield self.morphism(c)


def h1_cohomology(X: FiniteGroup, A: CoefficientGroup) -> H1Cohomology:
    return H1Cohomology(X, A, hom_group(h1(X).structure, A.structure))


# ------------------------------------------------- extensions and cocycles

def cocycle_of_extension(e: Extension, identification: GroupMorphism | None = None
                         ) -> Cocycle2:
    """Factor set of a central extension along the minimal-preimage section.

    ``identification`` maps ``e.embedding.source`` isomorphically onto some
    ``A.concrete``; without it the coefficients of ``e`` are used, or the kernel
    is identified with its invariant form.
    """
    if not e.is_central:
        raise NotCentral("the kernel is not central")
    K = e.embedding.source
    if identification is None:
        if e.coefficients is not None:
            A = e.coefficients
            identification = GroupMorphism(K, A.concrete, np.arange(K.order), _checked=True)
        else:
            A, identification = identify(K)
    else:
        if identification.source is not K or not identification.is_bijective:
            raise KernelMismatch("identification is not an isomorphism from the kernel")
        A = standard_coefficients(identification.target)
    X, Y = e.total, e.base
    s = section_of(e.proj)
    back = np.full(X.order, -1, dtype=np.int64)
    back[e.embedding.map] = np.arange(K.order)
    n = Y.order
    sy = s[:, None]
    sy2 = s[None, :]
    prod_ = X.table[X.table[sy, sy2], X.inverse[s[Y.table]]]
    kvals = back[prod_]
    if (kvals < 0).any():
        raise KernelMismatch("section defect left the kernel")
    coords = A.coords_table()
    vals = coords[identification.map[kvals]]
    return Cocycle2(Y, A, vals.reshape(n, n, A.structure.rank))


def extension_of_cocycle(f: Cocycle2, label: str | None = None) -> Extension:
    """Total group A x Y with (a, y)(a', y') = (a + a' + f(y, y'), y y').

    The pair (a, y) has index ``y * |A| + a``.
    """
    A, Y = f.coeff, f.base
    na, ny = A.order, Y.order
    fa = f.index_table()
    TA = A.concrete.table
    a = np.arange(na * ny) % na
    y = np.arange(na * ny) // na
    asum = TA[TA[a[:, None], a[None, :]], fa[y[:, None], y[None, :]]]
    table = Y.table[y[:, None], y[None, :]] * na + asum
    X = FiniteGroup(table, label=label or f"E({Y.label},{A})", _checked=True)
    proj = GroupMorphism(X, Y, y, _checked=True)
    emb = GroupMorphism(A.concrete, X, np.arange(na), _checked=True)
    return make_extension(proj, emb, A)


# --------------------------------------------------------- connecting maps

def restriction_to_kernel(e: Extension, phi: GroupMorphism) -> AbMorphism:
    """φ∘k as a map K/[K,X] -> A, for φ: X -> A.concrete with A abelian."""
    A = standard_coefficients(phi.target)
    Q = e.kernel_mod_commutator()
    for x in e.kernel_commutator().elements:
        if phi(x) != 0:
            raise NotCentral("φ does not kill [K,X]")
    cols = [A.element(phi(g)) for g in Q.witness.generators]
    M = [[cols[j][i] for j in range(Q.rank)] for i in range(A.structure.rank)]
    return AbMorphism(FinAb(Q.factors), A.structure, M)


def kmod_morphism(e: Extension, a: AbMorphism, A: CoefficientGroup) -> GroupMorphism:
    """The group map K -> A.concrete of ``a`` precomposed with K -> K/[K,X]."""
    wit = e.kernel_mod_commutator().witness
    K = e.embedding.source
    return GroupMorphism(K, A.concrete,
                         [A.index(a(wit.coords(int(e.embedding.map[k])))) for k in range(K.order)])


def cohomology_transgression(e: Extension, a: AbMorphism,
                             H: CohomologyGroup2 | None = None) -> tuple[int, ...]:
    """Class in H²(Y, A) of the pushout of the central reflection of e along a."""
    from .extensions import central_reflection, pushout_along

    A = CoefficientGroup.of(a.target)
    H = H or h2_cohomology(e.base, A)
    refl, comparison = central_reflection(e)
    # a as a map on the reflected kernel, read through the comparison
    wit = e.kernel_mod_commutator().witness
    K2 = refl.embedding.source
    emb2 = refl.embedding.map
    pre = {int(comparison(x)): x for x in e.kernel.elements}
    amap = [A.index(a(wit.coords(pre[int(emb2[k])]))) for k in range(K2.order)]
    pushed = pushout_along(refl, GroupMorphism(K2, A.concrete, amap), A)
    return H.class_of(cocycle_of_extension(pushed))


def extends_to_total(e: Extension, a: AbMorphism) -> GroupMorphism | None:
    """A homomorphism X -> A restricting to ``a`` on K, if one exists."""
    A = CoefficientGroup.of(a.target)
    wit = e.kernel_mod_commutator().witness
    pins = {x: A.index(a(wit.coords(x))) for x in e.kernel.elements}
    return next(enumerate_morphisms(e.total, A.concrete, pins), None)


def inflation(f: GroupMorphism, c: Cocycle2) -> Cocycle2:
    """Precompose a cocycle over Y with ``f x f`` for f: X -> Y."""
    if f.target is not c.base:
        raise KernelMismatch("cocycle is not over the target of f")
    m = f.map
    return Cocycle2(f.source, c.coeff, c.values[m[:, None], m[None, :]], check=False)


def pairing_to_hom(c: Cocycle2, homology: HomologyGroup | None = None) -> AbMorphism:
    """Evaluate a cocycle on the H₂ cycle representatives: H²(Y, A) -> Hom(H₂Y, A)."""
    Y, A = c.base, c.coeff
    H = homology or h2(Y)
    n = Y.order
    cols = []
    for chain in H.cycle_basis:
        acc = np.zeros(A.structure.rank, dtype=object)
        for idx, k in chain.items():
            x, y = pair_of(n, idx)
            acc += k * c.values[x, y].astype(object)
        cols.append(A.structure.reduce(acc))
    M = [[cols[j][i] for j in range(H.structure.rank)] for i in range(A.structure.rank)]
    return AbMorphism(H.structure, A.structure, M)

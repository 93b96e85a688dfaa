"""Central extensions as data: centrality, reflection, pushout, pullback,
equivalence, classification and the Baer sum.

An extension is a surjection ``proj: X -> Y`` together with an injective
``embedding: K -> X`` whose image is the kernel.  When the kernel is identified
with a coefficient group A, ``embedding.source`` is ``A.concrete`` and
``coefficients`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator

import numpy as np

from .abelian import FinAb, subquotient_structure
from .errors import BaseMismatch, KernelMismatch, NotCentral, NotSurjective
from .groups import (
    FiniteGroup,
    GroupMorphism,
    Subgroup,
    center,
    commutator_subgroup,
    direct_product,
    enumerate_morphisms,
    identity_morphism,
    kernel,
    quotient,
)
from .homology import section_of

if TYPE_CHECKING:
    from .cohomology import CoefficientGroup


@dataclass(eq=False)
class Extension:
    total: FiniteGroup
    base: FiniteGroup
    proj: GroupMorphism
    kernel: Subgroup
    embedding: GroupMorphism
    coefficients: "CoefficientGroup | None" = None
    _kmod: FinAb | None = field(default=None, repr=False)

    def __repr__(self):
        return (f"Extension({self.total.label} -> {self.base.label}, "
                f"|K| = {self.kernel.order})")

    @property
    def is_central(self) -> bool:
        return self.kernel.members <= center(self.total).members

    def section(self) -> np.ndarray:
        return section_of(self.proj)

    def kernel_commutator(self) -> Subgroup:
        """[K, X]."""
        return commutator_subgroup(self.total, self.kernel, self.total.whole)

    def kernel_mod_commutator(self) -> FinAb:
        """K/[K,X] with a witness reading cosets of kernel elements."""
        if self._kmod is None:
            self._kmod = subquotient_structure(self.total, self.kernel, self.kernel_commutator())
        return self._kmod

    def to_json(self) -> dict:
        out = {
            "total": self.total.to_json(),
            "base": self.base.to_json(),
            "proj": self.proj.to_json(),
            "kernel": list(self.kernel.elements),
            "kernel_identification": self.embedding.to_json(),
        }
        if self.coefficients is not None:
            out["coeff"] = list(self.coefficients.structure.factors)
        return out


def make_extension(f: GroupMorphism, embedding: GroupMorphism | None = None,
                   coefficients: "CoefficientGroup | None" = None) -> Extension:
    """Package a surjection as an extension of its target by its kernel."""
    if not f.is_surjective:
        raise NotSurjective(f"{f!r} is not surjective")
    K = kernel(f)
    if embedding is None:
        if coefficients is not None:
            raise KernelMismatch("coefficients given without an embedding")
        _, embedding = K.as_group(label=f"ker({f.source.label})")
    else:
        if embedding.target is not f.source:
            raise KernelMismatch("embedding does not land in the total group")
        if not embedding.is_injective or set(embedding.map.tolist()) != K.members:
            raise KernelMismatch("embedding is not an isomorphism onto the kernel")
        if coefficients is not None and embedding.source is not coefficients.concrete:
            raise KernelMismatch("embedding source is not the coefficient group")
    return Extension(f.source, f.target, f, K, embedding, coefficients)


def _require_central(e: Extension):
    if not e.is_central:
        raise NotCentral("the kernel is not central")


def _same_coefficients(e1: Extension, e2: Extension):
    if e1.base is not e2.base:
        raise BaseMismatch("extensions have different base groups")
    if e1.embedding.source is not e2.embedding.source:
        raise KernelMismatch("kernels are not identified with the same group")


# ------------------------------------------------------------- centrality

@dataclass
class Cooperator:
    """``map[a, x] = left(a) * right(x)``, a homomorphism K x X -> X."""

    left: GroupMorphism
    right: GroupMorphism
    map: np.ndarray

    def __call__(self, a: int, x: int) -> int:
        return int(self.map[a, x])


def is_central_huq(e: Extension) -> tuple[bool, Cooperator | None]:
    """k cooperates with 1_X iff K is central; the cooperator is checked exhaustively."""
    if not e.is_central:
        return False, None
    X, k = e.total, e.embedding
    K = k.source
    phi = X.table[k.map[:, None], np.arange(X.order)[None, :]]
    # phi((a,x)(b,y)) == phi(a,x) phi(b,y) for all a, b, x, y
    lhs = phi[K.table[:, None, :, None], X.table[None, :, None, :]]
    rhs = X.table[phi[:, :, None, None], phi[None, None, :, :]]
    if not np.array_equal(lhs, rhs):
        return False, None
    return True, Cooperator(k, identity_morphism(X), phi)


@dataclass
class SmithWitness:
    relation: np.ndarray  # boolean |X| x |X|: u R x iff u x^-1 in K
    equivalence: dict[str, bool]
    double_relation_size: int
    generated_size_bound_ok: bool
    pullback_certificates: list[dict]


def is_central_smith(e: Extension) -> tuple[bool, SmithWitness]:
    """Smith centrality of R_k = {(k(a) x, x)} with the total relation on X.

    The candidate double relation is C = {(k(a)x, x, k(a)y, y)}.  It is
    generated by (k(a),1,k(a),1), (x,x,1,1) and (1,1,y,y), so it is a double
    relation exactly when those right translates stay inside C.  Each of the
    four squares is then certified by cardinality and fiber bijection.
    """
    X = e.total
    n = X.order
    inK = np.zeros(n, dtype=bool)
    inK[list(e.kernel.elements)] = True
    T, I = X.table, X.inverse
    R = inK[T[:, I]]  # R[u, x] = u x^-1 in K
    reflexive = bool(R.diagonal().all())
    symmetric = bool((R == R.T).all())
    Ri = R.astype(np.int64)
    transitive = bool(((Ri @ Ri > 0) <= R).all())
    equivalence = {"reflexive": reflexive, "symmetric": symmetric, "transitive": transitive}

    def member(u, x, v, y):
        a = T[u, I[x]]
        return inK[a] & (a == T[v, I[y]])

    kgens = list(e.kernel.as_group()[0].generating_set)
    kgens = [e.kernel.elements[g] for g in kgens]
    xgens = list(X.generating_set)
    tgens = ([(g, 0, g, 0) for g in kgens] + [(g, g, 0, 0) for g in xgens]
             + [(0, 0, g, g) for g in xgens])
    a_idx, x_idx, y_idx = np.meshgrid(np.array(e.kernel.elements), np.arange(n), np.arange(n),
                                      indexing="ij")
    u = T[a_idx, x_idx].ravel()
    v = T[a_idx, y_idx].ravel()
    x, y = x_idx.ravel(), y_idx.ravel()
    closed = all(member(T[u, t0], T[x, t1], T[v, t2], T[y, t3]).all()
                 for t0, t1, t2, t3 in tgens)
    size = int(u.size)
    nR, nN = int(R.sum()), n * n
    coord = {"u": u, "x": x, "v": v, "y": y}
    certs = []
    # (R edge, total-relation edge, shared vertex coordinate)
    for r_edge, n_edge, shared in ((("u", "x"), ("u", "v"), "u"), (("v", "y"), ("u", "v"), "v"),
                                   (("u", "x"), ("x", "y"), "x"), (("v", "y"), ("x", "y"), "y")):
        keys = {c: coord[c] for c in set(r_edge) | set(n_edge)}
        code = np.zeros(size, dtype=np.int64)
        for c in sorted(keys):
            code = code * n + keys[c]
        injective = len(np.unique(code)) == size
        expected = nR * nN // n
        certs.append({"square": f"C->R{r_edge}, C->N{n_edge} over {shared}",
                      "corner": size, "expected": expected,
                      "ok": bool(closed and injective and size == expected)})
    ok = reflexive and symmetric and transitive and closed and all(c["ok"] for c in certs)
    return ok, SmithWitness(R, equivalence, size, closed, certs)


@dataclass
class NormalityReport:
    checked: int
    violations: list[tuple[int, ...]]

    @property
    def ok(self) -> bool:
        return not self.violations


def subobjects_of_kernel_are_normal(e: Extension) -> NormalityReport:
    from .groups import all_subgroups

    _require_central(e)
    K = e.embedding.source
    subs = all_subgroups(K)
    bad = []
    for S in subs:
        img = Subgroup(e.total, [e.embedding(x) for x in S.elements], _checked=True)
        if not img.is_normal():
            bad.append(img.elements)
    return NormalityReport(len(subs), bad)


# ------------------------------------------------------------ constructions

def central_reflection(e: Extension) -> tuple[Extension, GroupMorphism]:
    """X/[K,X] over Y, with the comparison X -> X/[K,X]."""
    KX = e.kernel_commutator()
    if KX.order == 1:
        return e, identity_morphism(e.total)
    Q, q = quotient(e.total, KX, label=f"{e.total.label}/[K,X]")
    pm = np.zeros(Q.order, dtype=np.int64)
    pm[q.map] = e.proj.map
    refl = make_extension(GroupMorphism(Q, e.base, pm, _checked=True))
    assert refl.is_central
    return refl, q


def pushout_along(e: Extension, a: GroupMorphism, A: "CoefficientGroup | None" = None
                  ) -> Extension:
    """Push a central extension out along ``a: K -> A`` with A abelian.

    Form X x A, then divide by the image of the kernel of [k, 1] : K x A -> X x A,
    that is by {(k(b), -a(b))}.  The new kernel is the copy of A.
    """
    from .cohomology import standard_coefficients

    _require_central(e)
    if a.source is not e.embedding.source:
        raise KernelMismatch("a is not defined on the kernel")
    A = A or standard_coefficients(a.target)
    X, na = e.total, A.order
    P = direct_product(X, A.concrete, label=f"{X.label}x{A}")
    AI = A.concrete.inverse
    N = Subgroup(P, [int(e.embedding(b)) * na + int(AI[a(b)])
                     for b in range(a.source.order)])
    Q, q = quotient(P, N, label=f"{X.label}+{A}")
    pm = np.zeros(Q.order, dtype=np.int64)
    pm[q.map] = np.repeat(e.proj.map, na)
    emb = GroupMorphism(A.concrete, Q, q.map[np.arange(na)], _checked=True)
    return make_extension(GroupMorphism(Q, e.base, pm, _checked=True), emb, A)


def _fiber_product(f: GroupMorphism, g: GroupMorphism, label: str
                   ) -> tuple[FiniteGroup, np.ndarray, np.ndarray, dict[int, int]]:
    """X1 x_Y X2 with its element list; pair (x1, x2) is keyed x1*|X2| + x2 in ``pos``."""
    m = g.source.order
    left, right = np.nonzero(f.map[:, None] == g.map[None, :])
    code = left * m + right
    at = np.full(f.source.order * m, -1, dtype=np.int64)
    at[code] = np.arange(len(code))
    T = at[f.source.table[np.ix_(left, left)] * m + g.source.table[np.ix_(right, right)]]
    P = FiniteGroup(T, label=label, _checked=True)
    return P, left, right, {int(c): i for i, c in enumerate(code)}


def pullback_along(e: Extension, w: GroupMorphism) -> Extension:
    """X x_Y Y' -> Y' for ``w: Y' -> Y``; the kernel is K x 1."""
    if w.target is not e.base:
        raise BaseMismatch("w does not land in the base of e")
    X, Yp = e.total, w.source
    m = Yp.order
    P, _, right, pos = _fiber_product(e.proj, w, f"{X.label}x_{e.base.label}{Yp.label}")
    proj = GroupMorphism(P, Yp, right, _checked=True)
    emb = GroupMorphism(e.embedding.source, P,
                        [pos[int(e.embedding(b)) * m] for b in range(e.embedding.source.order)],
                        _checked=True)
    return make_extension(proj, emb, e.coefficients)


def split_extension(Y: FiniteGroup, A: "CoefficientGroup") -> Extension:
    from .cohomology import Cocycle2, extension_of_cocycle

    return extension_of_cocycle(Cocycle2.zero(Y, A), label=f"{Y.label}x{A}")


def inverse_extension(e: Extension) -> Extension:
    """Pushout along -1 on the coefficients."""
    from .cohomology import standard_coefficients

    A = e.coefficients or standard_coefficients(e.embedding.source)
    neg = GroupMorphism(A.concrete, A.concrete, A.concrete.inverse, _checked=True)
    return pushout_along(e, neg, A)


def baer_sum(e1: Extension, e2: Extension) -> Extension:
    """(X1 x_Y X2) / {(k1(a), k2(-a))} over Y with kernel A.

    Every coset has exactly one member (x1, s2(y)) for a fixed section s2 of e2,
    so the quotient is built on the elements of X1.  Multiplying two such
    members leaves s2(y) s2(y') = k2(f2(y, y')) s2(yy') in the second slot, and
    that kernel factor moves across to the first slot as k1(f2(y, y')).
    """
    from .cohomology import standard_coefficients

    _same_coefficients(e1, e2)
    _require_central(e1)
    _require_central(e2)
    A = e1.coefficients or standard_coefficients(e1.embedding.source)
    X1, X2, Y = e1.total, e2.total, e1.base
    s2 = section_of(e2.proj)
    back = np.full(X2.order, -1, dtype=np.int64)
    back[e2.embedding.map] = np.arange(A.order)
    f2 = back[X2.table[X2.table[s2[:, None], s2[None, :]], X2.inverse[s2[Y.table]]]]
    p1, k1 = e1.proj.map, e1.embedding.map
    T = X1.table[X1.table, k1[f2[p1[:, None], p1[None, :]]]]
    Q = FiniteGroup(T, label=f"({X1.label}+{X2.label})", _checked=True)
    emb = GroupMorphism(A.concrete, Q, k1, _checked=True)
    return make_extension(GroupMorphism(Q, Y, p1, _checked=True), emb, A)


# ------------------------------------------------------------ equivalence

@dataclass
class EquivalenceWitness:
    iso: GroupMorphism


def are_equivalent(e1: Extension, e2: Extension, fix_kernel: bool = True
                   ) -> EquivalenceWitness | None:
    """An isomorphism X1 -> X2 over Y, fixing the coefficients pointwise.

    With ``fix_kernel=False`` the kernel only has to map onto the kernel.
    """
    _same_coefficients(e1, e2)
    X1, X2 = e1.total, e2.total
    if X1.order != X2.order:
        return None
    fibers: dict[int, list[int]] = {}
    for x in range(X2.order):
        fibers.setdefault(e2.proj(x), []).append(x)
    pins = ({int(e1.embedding(b)): int(e2.embedding(b)) for b in range(e1.embedding.source.order)}
            if fix_kernel else {})

    def cand(x):
        return fibers[e1.proj(x)]

    for phi in enumerate_morphisms(X1, X2, pins, candidates=cand):
        if phi.is_bijective and np.array_equal(e2.proj.map[phi.map], e1.proj.map):
            return EquivalenceWitness(phi)
    return None


# ---------------------------------------------------------- classification

@dataclass
class ExtensionClass:
    coords: tuple[int, ...]
    extension: Extension


PAIRWISE_LIMIT = 32


def classify_central(Y: FiniteGroup, A: "CoefficientGroup") -> list[ExtensionClass]:
    """One extension per class of H²(Y, A), in the order of ``H.elements()``.

    Distinctness is asserted through the class of each rebuilt factor set, and
    by direct isomorphism search when there are at most PAIRWISE_LIMIT classes.
    """
    from .cohomology import cocycle_of_extension, extension_of_cocycle, h2_cohomology

    H = h2_cohomology(Y, A)
    out = []
    for c in H.elements():
        e = extension_of_cocycle(H.cocycle(c))
        assert H.class_of(cocycle_of_extension(e)) == c
        out.append(ExtensionClass(c, e))
    if len(out) <= PAIRWISE_LIMIT:
        for i in range(len(out)):
            for j in range(i):
                assert are_equivalent(out[i].extension, out[j].extension) is None
    return out


def iter_classes(Y: FiniteGroup, A: "CoefficientGroup") -> Iterator[ExtensionClass]:
    """Lazy variant of classify_central without the pairwise search."""
    from .cohomology import extension_of_cocycle, h2_cohomology

    H = h2_cohomology(Y, A)
    for c in H.elements():
        yield ExtensionClass(c, extension_of_cocycle(H.cocycle(c)))

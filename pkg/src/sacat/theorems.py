"""Exact sequences and perfect groups.

Every sequence is assembled from library maps and then certified element by
element: at each internal node the image of the incoming arrow is compared with
the kernel of the outgoing one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .abelian import TRIVIAL, AbMorphism, FinAb, ext_data, hom_group
from .cohomology import (
    CoefficientGroup,
    Cocycle2,
    cocycle_of_extension,
    cohomology_transgression,
    extension_of_cocycle,
    h1_cohomology,
    h2_cohomology,
    inflation,
    pairing_to_hom,
    restriction_to_kernel,
)
from .errors import NotComposable, NotPerfect
from .extensions import (
    Extension,
    classify_central,
    make_extension,
    pullback_along,
    split_extension,
)
from .groups import FiniteGroup, GroupMorphism, commutator_subgroup, enumerate_morphisms
from .homology import HomologyGroup, h1, h2, homology_transgression, induced_h1, induced_h2


# -------------------------------------------------------------- exactness

@dataclass
class FiveTermReport:
    name: str
    labels: list[str]
    nodes: list[FinAb]
    arrows: list[AbMorphism]
    verdicts: list[dict]
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v["exact"] for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "sequence": self.name,
            "labels": self.labels,
            "nodes": [list(n.factors) for n in self.nodes],
            "orders": [n.order for n in self.nodes],
            "arrows": [a.matrix for a in self.arrows],
            "verdicts": self.verdicts,
            "notes": self.notes,
            "result": "PASS" if self.passed else "FAIL",
        }


def _zero_into(B: FinAb) -> AbMorphism:
    return TRIVIAL.zero_map(B)


def check_exactness(nodes: Sequence[FinAb], arrows: Sequence[AbMorphism],
                    labels: Sequence[str] | None = None, name: str = "sequence"
                    ) -> FiveTermReport:
    """im = ker at every internal node, with a witness element on failure."""
    nodes, arrows = list(nodes), list(arrows)
    if len(arrows) != len(nodes) - 1:
        raise NotComposable("need exactly one arrow between consecutive nodes")
    for i, a in enumerate(arrows):
        if a.source != nodes[i] or a.target != nodes[i + 1]:
            raise NotComposable(f"arrow {i} is {a.source} -> {a.target}, "
                                f"expected {nodes[i]} -> {nodes[i + 1]}")
    labels = list(labels) if labels else [str(n) for n in nodes]
    verdicts = []
    for i in range(1, len(nodes) - 1):
        im = arrows[i - 1].image_set()
        ker = arrows[i].kernel_set()
        v = {"node": i, "label": labels[i], "exact": im == ker,
             "image_order": len(im), "kernel_order": len(ker)}
        if im != ker:
            w = sorted(im - ker) or sorted(ker - im)
            v["witness"] = list(w[0])
            v["witness_in"] = "image, not kernel" if im - ker else "kernel, not image"
        verdicts.append(v)
    return FiveTermReport(name, labels, nodes, arrows, verdicts)


def _matrix(cols: list[Sequence[int]], source: FinAb, target: FinAb) -> AbMorphism:
    M = [[int(cols[j][i]) for j in range(source.rank)] for i in range(target.rank)]
    return AbMorphism(source, target, M)


# ---------------------------------------------------- Stallings-Stammbach

def stallings_stammbach(e: Extension) -> FiveTermReport:
    """H₂X -> H₂Y -> K/[K,X] -> H₁X -> H₁Y -> 0."""
    X, Y = e.total, e.base
    hx, hy = h2(X), h2(Y)
    KK = e.kernel_mod_commutator()
    KKplain = FinAb(KK.factors)
    h1x, h1y = h1(X), h1(Y)
    incl = _matrix([h1x.of(g) for g in KK.witness.generators], KKplain, h1x.structure)
    arrows = [
        induced_h2(e.proj),
        homology_transgression(e),
        incl,
        induced_h1(e.proj),
        h1y.structure.zero_map(TRIVIAL),
    ]
    nodes = [hx.structure, hy.structure, KKplain, h1x.structure, h1y.structure, TRIVIAL]
    labels = ["H2(X)", "H2(Y)", "K/[K,X]", "H1(X)", "H1(Y)", "0"]
    return check_exactness(nodes, arrows, labels, name="stallings")


# --------------------------------------------------------- Hochschild-Serre

def hochschild_serre(e: Extension, A: CoefficientGroup) -> FiveTermReport:
    """0 -> H¹Y -> H¹X -> Hom(K/[K,X], A) -> H²(Y,A) -> H²(X,A)."""
    X, Y = e.total, e.base
    c1y, c1x = h1_cohomology(Y, A), h1_cohomology(X, A)
    KK = FinAb(e.kernel_mod_commutator().factors)
    homK = hom_group(KK, A.structure)
    HY, HX = h2_cohomology(Y, A), h2_cohomology(X, A)
    h1f = induced_h1(e.proj)

    # H¹f: precompose with H₁f
    cols = [c1x.hom.coordinates(phi.compose(h1f)) for phi in c1y.hom.basis]
    a1 = _matrix(cols, c1y.structure, c1x.structure)
    cols = [homK.coordinates(restriction_to_kernel(e, c1x.morphism(_unit(c1x.structure, t))))
            for t in range(c1x.structure.rank)]
    a2 = _matrix(cols, c1x.structure, homK.structure)
    cols = [cohomology_transgression(e, a, HY) for a in homK.basis]
    a3 = _matrix(cols, homK.structure, HY.structure)
    cols = [HX.class_of(inflation(e.proj, rep)) for rep in HY.representatives]
    a4 = _matrix(cols, HY.structure, HX.structure)
    nodes = [TRIVIAL, c1y.structure, c1x.structure, homK.structure, HY.structure, HX.structure]
    arrows = [_zero_into(c1y.structure), a1, a2, a3, a4]
    labels = ["0", "H1(Y,A)", "H1(X,A)", "Hom(K/[K,X],A)", "H2(Y,A)", "H2(X,A)"]
    return check_exactness(nodes, arrows, labels, name="hochschild-serre")


def _unit(S: FinAb, t: int) -> tuple[int, ...]:
    return tuple(int(i == t) for i in range(S.rank))


# --------------------------------------------------- universal coefficients

def ext_to_h2(Y: FiniteGroup, A: CoefficientGroup, coords: Sequence[int]) -> Cocycle2:
    """Ext class -> abelian extension of H₁Y by A -> pullback along Y ->> H₁Y."""
    ab = h1(Y)
    data = ext_data(ab.structure, A.structure)
    g = data.cocycle(coords)
    Q = ab.abelianization
    qcoords = {}
    for y in range(Y.order):
        qcoords[int(ab.projection(y))] = ab.of(y)
    vals = np.array([[g(qcoords[p], qcoords[q]) for q in range(Q.order)] for p in range(Q.order)],
                    dtype=np.int64).reshape(Q.order, Q.order, A.structure.rank)
    abelian_ext = extension_of_cocycle(Cocycle2(Q, A, vals))
    return cocycle_of_extension(pullback_along(abelian_ext, ab.projection))


def universal_coefficients(Y: FiniteGroup, A: CoefficientGroup,
                           homology: HomologyGroup | None = None) -> FiveTermReport:
    """0 -> Ext(H₁Y, A) -> H²(Y, A) -> Hom(H₂Y, A); surjectivity is recorded."""
    H2 = homology or h2(Y)
    E = ext_data(h1(Y).structure, A.structure)
    HC = h2_cohomology(Y, A)
    homH = hom_group(H2.structure, A.structure)
    cols = [HC.class_of(ext_to_h2(Y, A, _unit(E.structure, t))) for t in range(E.structure.rank)]
    left = _matrix(cols, E.structure, HC.structure)
    cols = [homH.coordinates(pairing_to_hom(rep, H2)) for rep in HC.representatives]
    right = _matrix(cols, HC.structure, homH.structure)
    nodes = [TRIVIAL, E.structure, HC.structure, homH.structure]
    arrows = [_zero_into(E.structure), left, right]
    rep = check_exactness(nodes, arrows, ["0", "Ext(H1Y,A)", "H2(Y,A)", "Hom(H2Y,A)"],
                          name="uct")
    rep.notes["pairing_surjective"] = right.is_surjective
    return rep


# ---------------------------------------------------------------- perfect

def is_perfect(Y: FiniteGroup) -> bool:
    by_commutator = commutator_subgroup(Y).order == Y.order
    by_h1 = h1(Y).structure.order == 1
    assert by_commutator == by_h1
    return by_commutator


def morphisms_over(e: Extension, g: Extension) -> list[GroupMorphism]:
    """All homomorphisms X_e -> X_g commuting with the projections to Y."""
    if e.base is not g.base:
        raise ValueError("extensions over different bases")
    fibers: dict[int, list[int]] = {}
    for x in range(g.total.order):
        fibers.setdefault(g.proj(x), []).append(x)
    out = []
    for phi in enumerate_morphisms(e.total, g.total, candidates=lambda x: fibers[e.proj(x)]):
        if np.array_equal(g.proj.map[phi.map], e.proj.map):
            out.append(phi)
    return out


def splits(e: Extension) -> bool:
    """Whether some homomorphism Y -> X is a section of the projection."""
    fibers: dict[int, list[int]] = {}
    for x in range(e.total.order):
        fibers.setdefault(e.proj(x), []).append(x)
    for s in enumerate_morphisms(e.base, e.total, candidates=lambda y: fibers[y]):
        if np.array_equal(e.proj.map[s.map], np.arange(e.base.order)):
            return True
    return False


@dataclass
class UCEResult:
    extension: Extension
    kernel_structure: FinAb
    certified: bool
    checks: dict

    def to_json(self) -> dict:
        return {
            "group": self.extension.base.label,
            "total_order": self.extension.total.order,
            "kernel": list(self.kernel_structure.factors),
            "certified": self.certified,
            "checks": self.checks,
        }


SAMPLE_COEFFS = ("C2", "C3", "C4", "C2xC2")


def universal_central_extension(Y: FiniteGroup, uncertified: bool = False,
                                sample: Iterable[Extension] | None = None) -> UCEResult:
    """The class of H²(Y, H₂Y) pairing to the identity of H₂Y, as an extension."""
    if not is_perfect(Y):
        raise NotPerfect(f"{Y.label} is not perfect")
    H = h2(Y, uncertified=uncertified)
    A = CoefficientGroup.of(H.structure)
    HC = h2_cohomology(Y, A)
    homH = hom_group(H.structure, A.structure)
    ident = H.structure.identity()
    chosen = None
    for c in HC.elements():
        f = HC.cocycle(c)
        if pairing_to_hom(f, H) == ident:
            chosen = f
            break
    assert chosen is not None, "no class pairs to the identity"
    e = extension_of_cocycle(chosen, label=f"UCE({Y.label})")
    X = e.total
    checks = {
        "total_perfect": commutator_subgroup(X).order == X.order,
        "central": e.is_central,
        "split": splits(e) if Y.order > 1 else True,
        "kernel_matches_h2": FinAb(A.factors) == H.structure,
        "hom_order": homH.structure.order,
    }
    if sample is None:
        sample = [split_extension(Y, CoefficientGroup.of(a)) for a in SAMPLE_COEFFS]
        if Y.order > 1:
            for a in SAMPLE_COEFFS:
                sample += [cl.extension for cl in classify_central(Y, CoefficientGroup.of(a))]
    counts = [len(morphisms_over(e, g)) for g in sample]
    checks["initiality_sample"] = len(counts)
    checks["initiality_counts"] = counts
    checks["initial"] = all(c == 1 for c in counts)
    return UCEResult(e, H.structure, H.certified, checks)


@dataclass
class PerfectCaseVerdict:
    group: str
    coeff: str
    perfect: bool
    h2_order: int
    hom_order: int
    bijective: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def perfect_case_isomorphism(Y: FiniteGroup, A: CoefficientGroup,
                             homology: HomologyGroup | None = None) -> PerfectCaseVerdict:
    """Whether the pairing H²(Y, A) -> Hom(H₂Y, A) is a bijection."""
    H2 = homology or h2(Y)
    HC = h2_cohomology(Y, A)
    homH = hom_group(H2.structure, A.structure)
    cols = [homH.coordinates(pairing_to_hom(rep, H2)) for rep in HC.representatives]
    pairing = _matrix(cols, HC.structure, homH.structure)
    bij = HC.order == homH.structure.order and pairing.is_injective
    return PerfectCaseVerdict(Y.label, str(A), is_perfect(Y), HC.order, homH.structure.order, bij)


def projectivity_witness(Y: FiniteGroup, coeffs: Iterable[str] = SAMPLE_COEFFS
                         ) -> PerfectCaseVerdict | None:
    """A coefficient group for which the pairing fails to be bijective, if any."""
    for a in coeffs:
        v = perfect_case_isomorphism(Y, CoefficientGroup.of(a))
        if not v.bijective:
            return v
    return None

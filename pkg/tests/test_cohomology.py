import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import enumerate_classes
from sacat.abelian import AbMorphism, FinAb
from sacat.cohomology import (
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
from sacat.errors import KernelMismatch, NotACocycle, NotCentral
from sacat.extensions import make_extension, split_extension
from sacat.groups import (
    GroupMorphism,
    Subgroup,
    builtin,
    center,
    commutator_subgroup,
    find_isomorphism,
    quotient,
)


def quotient_ext(X, N):
    return make_extension(quotient(X, N)[1])


@pytest.mark.parametrize("Y, A, order", [
    ("C1", "C2", 1), ("C2", "C2", 2), ("C2xC2", "C2", 8), ("S3", "C3", 1), ("S3", "C2", 2),
    ("C3", "C3", 3), ("C4", "C2", 2), ("Q8", "C2", 4), ("D4", "C2", 8), ("C2", "C4", 2),
])
def test_h2_orders(Y, A, order):
    assert h2_cohomology(builtin(Y), CoefficientGroup.of(A)).order == order


@pytest.mark.parametrize("X, A, order", [("C3", "C2", 1), ("S3", "C2", 2), ("Q8", "C2", 4),
                                         ("C4", "C4", 4), ("A4", "C3", 3)])
def test_h1_orders(X, A, order):
    H = h1_cohomology(builtin(X), CoefficientGroup.of(A))
    assert H.structure.order == order
    assert len({tuple(f.map.tolist()) for f in H.morphisms()}) == order


SMALL_PAIRS = [(y, a) for y in ("C2", "C3", "C4", "C2xC2", "S3", "C6", "D4", "Q8")
               for a in ("C2", "C3", "C4", "C2xC2") if builtin(y).order * builtin(a).order <= 32]


@pytest.mark.parametrize("y, a", SMALL_PAIRS)
def test_classes_match_enumerated_factor_sets(y, a):
    Y, A = builtin(y), CoefficientGroup.of(a)
    H = h2_cohomology(Y, A)
    en = enumerate_classes(Y, A.factors, budget=300_000)
    assert H.order == len(en.classes)
    rows = {en.normalize(H.cocycle(c).index_table()) for c in H.elements()}
    assert rows == set(en.classes)


def test_split_extension_has_zero_class():
    Y, A = builtin("S3"), CoefficientGroup.of("C2")
    e = split_extension(Y, A)
    assert cocycle_of_extension(e).is_zero()


def test_c4_over_c2():
    C4 = builtin("C4")
    e = quotient_ext(C4, Subgroup(C4, [0, 2]))
    f = cocycle_of_extension(e)
    H = h2_cohomology(e.base, f.coeff)
    assert H.class_of(f) == (1,)
    rebuilt = extension_of_cocycle(H.cocycle((1,)))
    assert find_isomorphism(rebuilt.total, C4) is not None


@pytest.mark.parametrize("y, a", [p for p in SMALL_PAIRS if builtin(p[0]).order * builtin(p[1]).order <= 16])
def test_round_trip(y, a):
    Y, A = builtin(y), CoefficientGroup.of(a)
    H = h2_cohomology(Y, A)
    for c in H.elements():
        e = extension_of_cocycle(H.cocycle(c))
        assert e.is_central
        assert H.class_of(cocycle_of_extension(e)) == c


def test_non_central_rejected():
    S3 = builtin("S3")
    A3 = commutator_subgroup(S3)
    with pytest.raises(NotCentral):
        cocycle_of_extension(quotient_ext(S3, A3))


def test_cocycle_validation():
    Y, A = builtin("C3"), CoefficientGroup.of("C2")
    bad = np.zeros((3, 3, 1), dtype=np.int64)
    bad[1, 1, 0] = 1
    with pytest.raises(NotACocycle):
        Cocycle2(Y, A, bad)
    unnormalized = np.zeros((3, 3, 1), dtype=np.int64)
    unnormalized[0, 1, 0] = 1
    with pytest.raises(NotACocycle):
        Cocycle2(Y, A, unnormalized)


def test_class_of_checks_base():
    A = CoefficientGroup.of("C2")
    H = h2_cohomology(builtin("C2"), A)
    with pytest.raises(KernelMismatch):
        H.class_of(Cocycle2.zero(builtin("C2"), A))


@st.composite
def cochains(draw):
    y = draw(st.sampled_from(["C2xC2", "S3", "C4", "D4"]))
    a = draw(st.sampled_from(["C2", "C4", "C2xC2"]))
    Y, A = builtin(y), CoefficientGroup.of(a)
    c = draw(st.lists(st.integers(0, 11), min_size=Y.order * A.structure.rank,
                      max_size=Y.order * A.structure.rank))
    return Y, A, np.array(c).reshape(Y.order, A.structure.rank)


@given(cochains())
def test_coboundaries_are_trivial_and_witnessed(data):
    Y, A, c = data
    H = h2_cohomology(Y, A)
    f = Cocycle2.coboundary(Y, A, c)
    Cocycle2(Y, A, f.values)  # passes validation
    assert H.is_coboundary(f)
    w = H.coboundary_witness(f)
    assert Cocycle2.coboundary(Y, A, w) == f


@given(cochains(), st.data())
def test_class_of_is_additive(data, draw):
    Y, A, c = data
    H = h2_cohomology(Y, A)
    u = draw.draw(st.sampled_from(list(H.elements())))
    v = draw.draw(st.sampled_from(list(H.elements())))
    f = H.cocycle(u) + H.cocycle(v) + Cocycle2.coboundary(Y, A, c)
    assert H.class_of(f) == H.structure.add(u, v)
    assert H.class_of(-H.cocycle(u)) == H.structure.neg(u)


def test_nontrivial_classes_have_no_witness():
    Y, A = builtin("C2xC2"), CoefficientGroup.of("C2")
    H = h2_cohomology(Y, A)
    for c in H.elements():
        assert (H.coboundary_witness(H.cocycle(c)) is None) == any(c)


def test_inflation_kills_c4_class():
    C4 = builtin("C4")
    e = quotient_ext(C4, Subgroup(C4, [0, 2]))
    f = cocycle_of_extension(e)
    inflated = inflation(e.proj, f)
    assert h2_cohomology(C4, f.coeff).is_coboundary(inflated)


def test_inflation_along_identity():
    Y, A = builtin("D4"), CoefficientGroup.of("C2")
    H = h2_cohomology(Y, A)
    ident = GroupMorphism(Y, Y, np.arange(Y.order))
    for c in H.elements():
        assert H.class_of(inflation(ident, H.cocycle(c))) == c


def test_restriction_to_kernel():
    Q8 = builtin("Q8")
    e = quotient_ext(Q8, center(Q8))
    A = CoefficientGroup.of("C2")
    # every homomorphism Q8 -> C2 kills the centre
    for phi in h1_cohomology(Q8, A).morphisms():
        assert not any(restriction_to_kernel(e, phi).matrix[0])
    C4 = builtin("C4")
    e = quotient_ext(C4, Subgroup(C4, [0, 2]))
    A4 = CoefficientGroup.of("C4")
    gen = next(phi for phi in h1_cohomology(C4, A4).morphisms() if len(set(phi.map.tolist())) == 4)
    r = restriction_to_kernel(e, gen)
    assert r.is_injective


def test_transgression_of_c4():
    C4 = builtin("C4")
    e = quotient_ext(C4, Subgroup(C4, [0, 2]))
    K = e.kernel_mod_commutator()
    ident = AbMorphism(FinAb(K.factors), FinAb((2,)), [[1]])
    assert cohomology_transgression(e, ident) == (1,)
    zero = AbMorphism(FinAb(K.factors), FinAb((2,)), [[0]])
    assert cohomology_transgression(e, zero) == (0,)


def test_pairing_on_klein_group():
    # H2(C2xC2) = C2, so half of the eight classes pair non-trivially
    Y, A = builtin("C2xC2"), CoefficientGroup.of("C2")
    H = h2_cohomology(Y, A)
    images = [pairing_to_hom(H.cocycle(c)).matrix for c in H.elements()]
    assert sum(1 for m in images if any(itertools.chain(*m))) == 4


@given(st.sampled_from(["C2xC2", "D4", "Q8", "C4xC2"]), st.sampled_from(["C2", "C4"]), st.data())
def test_pairing_is_additive(y, a, data):
    Y, A = builtin(y), CoefficientGroup.of(a)
    H = h2_cohomology(Y, A)
    els = list(H.elements())
    u, v = data.draw(st.sampled_from(els)), data.draw(st.sampled_from(els))
    total = pairing_to_hom(H.cocycle(u) + H.cocycle(v))
    pu, pv = pairing_to_hom(H.cocycle(u)), pairing_to_hom(H.cocycle(v))
    for x in pu.source.elements():
        assert pu.target.add(pu(x), pv(x)) == total(x)

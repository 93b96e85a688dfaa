import pytest
from hypothesis import given
from hypothesis import strategies as st

from sacat.abelian import AbMorphism, FinAb
from sacat.cohomology import CoefficientGroup
from sacat.errors import NotComposable, NotPerfect
from sacat.extensions import make_extension
from sacat.groups import Subgroup, builtin, center, normal_subgroups, quotient
from sacat.theorems import (
    check_exactness,
    hochschild_serre,
    is_perfect,
    perfect_case_isomorphism,
    projectivity_witness,
    splits,
    stallings_stammbach,
    universal_central_extension,
    universal_coefficients,
)


def quotient_ext(X, N):
    return make_extension(quotient(X, N)[1])


def test_exactness_of_identity_sequence():
    A = FinAb((2, 4))
    ident = A.identity()
    zero_in = FinAb(()).zero_map(A)
    zero_out = A.zero_map(FinAb(()))
    rep = check_exactness([FinAb(()), A, A, FinAb(())], [zero_in, ident, zero_out])
    assert rep.passed


def test_exactness_failure_has_witness():
    A = FinAb((2,))
    zero = AbMorphism(A, A, [[0]])
    ident = AbMorphism(A, A, [[1]])
    assert check_exactness([A, A, A], [ident, zero]).passed
    rep = check_exactness([A, A, A], [ident, ident])
    v = rep.verdicts[0]
    assert not rep.passed and v["witness_in"] == "image, not kernel"
    assert v["image_order"] == 2 and v["kernel_order"] == 1
    rep = check_exactness([A, A, A], [zero, zero])
    v = rep.verdicts[0]
    assert not v["exact"] and v["witness"] == [1] and v["witness_in"] == "kernel, not image"


def test_exactness_rejects_mismatched_arrows():
    A, B = FinAb((2,)), FinAb((3,))
    with pytest.raises(NotComposable):
        check_exactness([A, B], [A.identity()])
    with pytest.raises(NotComposable):
        check_exactness([A, A, A], [A.identity()])


EXTENSIONS = [("C4", "Z"), ("Q8", "Z"), ("D4", "Z"), ("S3", "A3"), ("A4", "V"), ("C2xQ8", "Z"),
              ("Dic3", "Z"), ("D6", "Z")]


def _ext(spec, which):
    X = builtin(spec)
    if which == "Z":
        return quotient_ext(X, center(X))
    size = {"A3": 3, "V": 4}[which]
    return quotient_ext(X, next(N for N in normal_subgroups(X) if N.order == size))


@pytest.mark.parametrize("spec, which", EXTENSIONS)
def test_stallings_stammbach(spec, which):
    rep = stallings_stammbach(_ext(spec, which))
    assert rep.passed, rep.to_json()
    assert len(rep.verdicts) == 4


@pytest.mark.parametrize("spec, which", EXTENSIONS)
@pytest.mark.parametrize("a", ["C2", "C3", "C4"])
def test_hochschild_serre(spec, which, a):
    rep = hochschild_serre(_ext(spec, which), CoefficientGroup.of(a))
    assert rep.passed, rep.to_json()


def test_q8_sequence_orders():
    rep = stallings_stammbach(_ext("Q8", "Z"))
    assert [n.order for n in rep.nodes] == [1, 2, 2, 4, 4, 1]


@given(st.sampled_from(["C2", "C4", "C2xC2", "S3", "D4", "Q8", "A4", "C3xC3", "C2xC2xC2"]),
       st.sampled_from(["C2", "C3", "C4", "C2xC2", "C6"]))
def test_universal_coefficients(y, a):
    rep = universal_coefficients(builtin(y), CoefficientGroup.of(a))
    assert rep.passed
    assert rep.notes["pairing_surjective"]
    o = [n.order for n in rep.nodes]
    assert o[2] == o[1] * len(rep.arrows[2].image_set())


@pytest.mark.parametrize("spec, perfect", [("C1", True), ("C5", False), ("S3", False),
                                           ("A5", True), ("A4", False)])
def test_is_perfect(spec, perfect):
    assert is_perfect(builtin(spec)) == perfect


def test_uce_requires_perfect():
    with pytest.raises(NotPerfect):
        universal_central_extension(builtin("S3"))


def test_uce_of_trivial_group():
    res = universal_central_extension(builtin("C1"))
    assert res.extension.total.order == 1
    assert res.checks["initial"] and res.checks["total_perfect"]


def test_c2_is_a_witness_outside_the_perfect_case():
    v = projectivity_witness(builtin("C2"))
    assert v is not None and not v.perfect and not v.bijective
    assert (v.h2_order, v.hom_order) == (2, 1)


def test_perfect_case_for_trivial_group():
    v = perfect_case_isomorphism(builtin("C1"), CoefficientGroup.of("C4"))
    assert v.perfect and v.bijective


def test_splits():
    C4 = builtin("C4")
    assert not splits(quotient_ext(C4, Subgroup(C4, [0, 2])))
    S3 = builtin("S3")
    A3 = next(N for N in normal_subgroups(S3) if N.order == 3)
    assert splits(quotient_ext(S3, A3))

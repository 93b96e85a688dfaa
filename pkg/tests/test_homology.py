import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sacat.abelian import finab_from_orders
from sacat.errors import OrderCapExceeded
from sacat.extensions import make_extension
from sacat.groups import GroupMorphism, Subgroup, builtin, center, direct_product, quotient
from sacat.homology import (
    BarSegment,
    coker_d3,
    d3_columns,
    h1,
    h2,
    homology_transgression,
    induced_h1,
    induced_h2,
)

# Schur multipliers of small groups (classical values)
SCHUR = {
    "C1": (), "C2": (), "C4": (), "C2xC2": (2,), "S3": (), "D4": (2,), "Q8": (),
    "C2xC2xC2": (2, 2, 2), "C4xC4": (4,), "A4": (2,), "D6": (2,), "Dic3": (),
    "C3xC3": (3,), "D5": (), "Q16": (), "D8": (2,), "S4": (2,), "C2xQ8": (2, 2),
}


@pytest.mark.parametrize("spec, factors", sorted(SCHUR.items()))
def test_schur_multipliers(spec, factors):
    H = h2(builtin(spec))
    assert H.structure.factors == factors
    assert H.certified


@pytest.mark.parametrize("spec, factors", [("C4", (4,)), ("S3", (2,)), ("A5", ()),
                                           ("Q8", (2, 2)), ("C2xC4", (2, 4))])
def test_h1(spec, factors):
    assert h1(builtin(spec)).structure.factors == factors


def test_cycle_representatives_are_cycles():
    for spec in ("C2xC2", "D4", "C2xC2xC2", "A4"):
        G = builtin(spec)
        H = h2(G)
        seg = BarSegment(G)
        for k, chain in enumerate(H.cycle_basis):
            assert not seg.boundary2(chain)
            unit = tuple(int(i == k) for i in range(H.structure.rank))
            assert H.coordinates(chain) == unit


def test_boundaries_have_zero_class():
    G = builtin("D4")
    H = h2(G)
    for col in list(d3_columns(G))[:200]:
        assert not any(H.coordinates(col))


def test_certified_cap_and_uncertified_path():
    A5 = builtin("A5")
    with pytest.raises(OrderCapExceeded):
        h2(A5)
    S5 = builtin("S5")
    with pytest.raises(OrderCapExceeded):
        h2(S5, uncertified=True)


def test_modular_path_agrees_on_small_groups():
    from sacat.homology import _h2_modular

    for spec in ("D4", "C2xC2xC2", "A4", "C4xC4", "C3xC3", "D6"):
        G = builtin(spec)
        assert _h2_modular(G).structure == h2(G).structure


def test_uncertified_coordinates_refused():
    from sacat.homology import _h2_modular

    H = _h2_modular(builtin("C2xC2"))
    assert not H.certified
    with pytest.raises(OrderCapExceeded):
        H.coordinates({})


def test_induced_h1_examples():
    S3 = builtin("S3")
    ident = GroupMorphism(S3, S3, np.arange(6))
    f = induced_h1(ident)
    assert f.matrix == [[1]]
    C4, C2 = builtin("C4"), builtin("C2")
    red = GroupMorphism(C4, C2, [0, 1, 0, 1])
    assert induced_h1(red).is_surjective
    inc = GroupMorphism(C2, C4, [0, 2])
    g = induced_h1(inc)
    assert g.is_injective and g((1,)) == (2,)


def _ext(X, N):
    Q, p = quotient(X, N)
    return make_extension(p)


def test_transgression_examples():
    C4 = builtin("C4")
    e = _ext(C4, Subgroup(C4, [0, 2]))
    t = homology_transgression(e)
    assert t.source.order == 1
    Q8 = builtin("Q8")
    t = homology_transgression(_ext(Q8, center(Q8)))
    assert t.source.factors == (2,) and t.is_injective and t.is_surjective


@given(st.integers(0, 2**32 - 1))
def test_transgression_section_independent(seed):
    rng = random.Random(seed)
    D4 = builtin("D4")
    e = _ext(D4, center(D4))
    fibers = {}
    for x in range(D4.order):
        fibers.setdefault(int(e.proj.map[x]), []).append(x)
    s = np.array([rng.choice(fibers[y]) for y in range(e.base.order)])
    s[0] = 0
    assert homology_transgression(e, s) == homology_transgression(e)


def kunneth_h2(G, H):
    """H2(GxH) = H2G + H2H + H1G (x) H1H."""
    tensor = [np.gcd(a, b) for a in h1(G).structure.factors for b in h1(H).structure.factors]
    orders = list(h2(G).structure.factors) + list(h2(H).structure.factors) + \
        [int(t) for t in tensor if t > 1]
    return finab_from_orders(orders)[0]


@given(st.sampled_from(["C2", "C3", "C4", "S3"]), st.sampled_from(["C2", "C3", "C2xC2"]))
def test_kunneth(g, h):
    G, H = builtin(g), builtin(h)
    if G.order * H.order > 24:
        return
    assert h2(direct_product(G, H)).structure == kunneth_h2(G, H)


@given(st.sampled_from(["C2xC2", "D4", "Q8", "C4xC2"]))
def test_induced_h2_identity(spec):
    G = builtin(spec)
    ident = GroupMorphism(G, G, np.arange(G.order))
    f = induced_h2(ident)
    for x in f.source.elements():
        assert f(x) == x


def test_coker_presentation_free_rank():
    G = builtin("S3")
    pres = coker_d3(G)
    assert pres.free_rank == G.order - 1

import itertools

import pytest

from sacat.catalog import KNOWN_COUNTS, catalog, groups_of_order
from sacat.groups import find_isomorphism, group_fingerprint


@pytest.mark.parametrize("n", sorted(KNOWN_COUNTS))
def test_counts(n):
    groups = groups_of_order(n)
    assert len(groups) == KNOWN_COUNTS[n]
    assert all(G.order == n for G in groups)


@pytest.mark.parametrize("n", [4, 6, 8, 9, 12])
def test_pairwise_non_isomorphic(n):
    for G, H in itertools.combinations(groups_of_order(n), 2):
        assert find_isomorphism(G, H) is None


def test_catalog_is_ordered_and_complete():
    cat = catalog()
    assert len(cat) == sum(KNOWN_COUNTS.values())
    assert [G.order for G in cat] == sorted(G.order for G in cat)
    assert len({G.label for G in cat}) == len(cat)


def test_order_16_fingerprints_mostly_distinct():
    # fingerprints are cheap invariants; isomorphism search settles any collisions
    groups = groups_of_order(16)
    seen = {}
    for G in groups:
        seen.setdefault(group_fingerprint(G), []).append(G)
    for bucket in seen.values():
        for G, H in itertools.combinations(bucket, 2):
            assert find_isomorphism(G, H) is None

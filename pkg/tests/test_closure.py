"""Generation fixed point: the two operations, the catalog, provenance."""

import itertools

import pytest
from hypothesis import given, strategies as st

from identity_lab import (
    SizeGuardError,
    UsageError,
    catalog_from_json,
    catalog_to_json,
    duplicate,
    generate_catalog,
    member_of_catalog,
    permute,
    replay_trace,
    restrict,
    s_k,
    to_json,
    to_pairs,
    trivial,
)
from identity_lab.closure import _gpd
from identity_lab.core import identity_from_subsets, mask_of


def test_duplicate_at_full_overlap_is_identity():
    s = s_k(3)
    assert duplicate(s, s.n) == s
    assert duplicate(trivial(2), 2) == trivial(2)


def test_duplicate_pairs_uncovered_subsets_with_their_copies():
    # no stored classes in, one orbit out: {0,1} ~ {0,1'}
    d = duplicate(trivial(2), 1)
    assert d.n == 3
    assert d.classes == frozenset({frozenset({mask_of((0, 1)), mask_of((0, 2))})})


def test_duplicate_keeps_cross_pairs_singleton():
    # elements 0,1 copied to 2,3; pairs meeting both halves stay singleton
    d = duplicate(trivial(2), 0)
    assert to_json(d) == {
        "n": 4,
        "flavor": "pairs",
        "classes": [[[0, 1], [2, 3]]],
    }


def test_duplicate_expansion_above_a_common_part():
    d = duplicate(trivial(3), 1)
    assert to_json(d)["classes"] == [
        [[0, 1], [0, 3]],
        [[0, 2], [0, 4]],
        [[1, 2], [3, 4]],
    ]


def test_restrict_relabels_order_preserving():
    s = s_k(3)
    r = restrict(s, (0, 3, 4, 5))
    assert r.n == 4
    # kept pairs {0,3},{0,4} stay a class under relabel 3->1, 4->2
    assert to_json(r)["classes"] == [[[0, 1], [0, 2]]]


def test_restrict_drops_collapsed_classes():
    s = identity_from_subsets(3, "pairs", [[[0, 1], [1, 2]]])
    assert restrict(s, (0, 1)) == trivial(2)


def test_restrict_accepts_masks_and_iterables():
    s = s_k(3)
    assert restrict(s, (0, 1, 2)) == restrict(s, mask_of((0, 1, 2)))


def test_restrict_rejects_empty_keep():
    with pytest.raises(UsageError):
        restrict(trivial(3), ())


def test_catalog_counts(cat4, cat6):
    assert len(generate_catalog(1)) == 1
    assert len(generate_catalog(2)) == 2
    assert len(cat4) == 15
    by = {}
    for s in cat6.members():
        by[s.n] = by.get(s.n, 0) + 1
    assert by == {1: 1, 2: 1, 3: 2, 4: 11, 5: 151, 6: 4096}
    assert len(cat6) == 4262


def test_catalog_guard_and_usage():
    with pytest.raises(SizeGuardError):
        generate_catalog(9)
    with pytest.raises(UsageError):
        generate_catalog(0)
    with pytest.raises(UsageError):
        generate_catalog(3, "partial")


def test_monotone_generation(cat4, cat6):
    small = {s for s in cat6.members() if s.n <= 4}
    assert small == set(cat4.members())


def test_restrict_then_duplicate_recovers(cat4):
    # keeping exactly the originals undoes any duplication
    for s in cat4.members():
        for m in range(s.n + 1):
            assert restrict(duplicate(s, m), range(s.n)) == s


_CAT4_MEMBERS = generate_catalog(4).members()


@given(
    data=st.data(),
    idx=st.integers(min_value=0, max_value=len(_CAT4_MEMBERS) - 1),
)
def test_bounded_step_equals_duplicate_then_restrict(data, idx):
    s = _CAT4_MEMBERS[idx]
    m = data.draw(st.integers(min_value=0, max_value=s.n))
    tail = list(range(m, s.n))
    bset = set(data.draw(st.lists(st.sampled_from(tail), unique=True))) if tail else set()
    dset = set(
        data.draw(st.lists(st.sampled_from(sorted(set(tail) - bset)), unique=True))
    ) if set(tail) - bset else set()
    rset = sorted(bset | dset)
    keep = [x for x in range(s.n) if x not in dset]
    keep += [s.n + (r - m) for r in rset]
    assert _gpd(s, m, bset, dset) == restrict(duplicate(s, m), keep)


def test_traces_replay(cat6):
    for s, entry in cat6.entries.items():
        assert replay_trace(entry.trace) == s


def test_traces_replay_full(full5):
    for s, entry in full5.entries.items():
        assert replay_trace(entry.trace, "full") == s


def test_member_queries(cat6):
    assert member_of_catalog(cat6, trivial(6), ordered=True)
    assert not member_of_catalog(cat6, s_k(3), ordered=True)
    assert not member_of_catalog(cat6, s_k(3), ordered=False)


def test_member_unordered_sees_relabelings(cat6):
    mem = next(s for s in cat6.members() if s.n == 5 and s.classes)
    pi = (4, 0, 3, 1, 2)
    moved = permute(mem, pi)
    assert member_of_catalog(cat6, moved, ordered=False)


def test_member_rejects_oversized_query(cat4):
    with pytest.raises(SizeGuardError):
        member_of_catalog(cat4, trivial(5), ordered=True)


def test_full_catalog_counts_and_projection(full5, cat6):
    assert len(full5) == 166
    by = {}
    for s in full5.members():
        by[s.n] = by.get(s.n, 0) + 1
    assert by == {1: 1, 2: 1, 3: 2, 4: 11, 5: 151}
    pairs5 = {s for s in cat6.members() if s.n <= 5}
    assert {to_pairs(s) for s in full5.members()} == pairs5


def test_catalog_json_round_trip(cat4, full5):
    for cat in (cat4, full5):
        back = catalog_from_json(catalog_to_json(cat))
        assert back.max_n == cat.max_n and back.flavor == cat.flavor
        assert set(back.members()) == set(cat.members())
        for s in cat.members():
            assert back.entries[s].trace == cat.entries[s].trace


def test_duplicate_full_flavor_small():
    from identity_lab import trivial_full, validate

    d = duplicate(trivial_full(2), 1)
    assert d.flavor == "full" and d.n == 3
    assert validate(d) is None
    # pair layer agrees with the pairs-flavor expansion
    assert to_pairs(d) == duplicate(trivial(2), 1)

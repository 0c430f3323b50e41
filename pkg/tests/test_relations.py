from itertools import product
from math import comb

import pytest

import oracles as orc
from helpers import R, as_pairs
from intrel import families as fam
from intrel import relations as rel
from intrel.config import EnumerationLimitError, set_enumeration_limit


def rels(n):
    return list(rel.all_relations(n))


# --- construction -----------------------------------------------------------------

def test_from_pairs_keeps_exact_pairs():
    r = rel.from_pairs(3, [(1, 2), (1, 3), (3, 2)])
    assert r.pairs() == [(1, 2), (1, 3), (3, 2)]
    assert (1, 1) in r and (2, 1) not in r


def test_from_pairs_empty_and_diagonal():
    assert rel.from_pairs(0, []) == rel.empty(0)
    assert rel.from_pairs(2, [(1, 1), (1, 2)]) == rel.from_pairs(2, [(1, 2)])
    assert rel.from_pairs(2, [(1, 2), (1, 2)]) == R(2, "12")


@pytest.mark.parametrize("pair", [(0, 1), (1, 4), (3, 0)])
def test_from_pairs_rejects_out_of_range(pair):
    with pytest.raises(rel.RelationError, match=str(pair[0])):
        rel.from_pairs(3, [pair])


def test_direct_construction_validates_rows():
    with pytest.raises(rel.RelationError):
        rel.IntegerRelation(2, (1, 0))  # bit on the diagonal
    with pytest.raises(rel.RelationError):
        rel.IntegerRelation(2, (0,))


def test_codes_enumerate_irel_bijectively():
    for n in range(4):
        got = {rel.from_code(n, c) for c in range(rel.relation_count(n))}
        assert len(got) == 1 << (n * (n - 1))
        assert {as_pairs(r) for r in got} == set(orc.relations(n))


def test_json_round_trip_and_label():
    r = R(3, "12 13 32")
    assert rel.IntegerRelation.from_json(r.to_json()) == r
    assert r.to_json() == {"n": 3, "pairs": [[1, 2], [1, 3], [3, 2]]}
    assert r.label() == "12_13_32"
    assert rel.empty(2).label() == "02"
    with pytest.raises(rel.RelationError):
        rel.IntegerRelation.from_json({"pairs": []})


def test_enumeration_ceiling(monkeypatch):
    with pytest.raises(EnumerationLimitError):
        next(rel.all_relations(6))
    monkeypatch.setenv("INTREL_ENUM_LIMIT", "2")
    with pytest.raises(EnumerationLimitError):
        next(rel.all_relations(3))
    set_enumeration_limit(3)
    try:
        assert sum(1 for _ in rel.all_relations(3)) == 64
    finally:
        set_enumeration_limit(None)


# --- increasing / decreasing parts --------------------------------------------------

def test_inc_dec_examples():
    r = R(3, "12 32")
    assert rel.inc(r) == R(3, "12") and rel.dec(r) == R(3, "32")
    full = rel.full(2)
    assert rel.inc(full) == R(2, "12") and rel.dec(full) == R(2, "21")


def test_inc_dec_of_a_seven_element_total_order():
    p = fam.from_permutation((2, 7, 5, 1, 3, 4, 6))
    assert len(rel.inc(p)) == 12 and len(rel.dec(p)) == 9


def test_inc_dec_partition_exhaustive():
    for r in rels(3):
        i, d = rel.inc(r), rel.dec(r)
        assert rel.union(i, d) == r and rel.intersection(i, d) == rel.empty(3)


# --- weak order ---------------------------------------------------------------------

def test_weak_le_examples():
    assert rel.weak_le(R(2, "12"), R(2, "21"))
    assert not rel.weak_le(rel.empty(2), R(2, "12"))
    with pytest.raises(rel.RelationError):
        rel.weak_le(rel.empty(2), rel.empty(3))


def test_weak_le_matches_oracle():
    for n in range(4):
        rs = rels(n)
        for r, s in product(rs, rs):
            assert rel.weak_le(r, s) == orc.weak_le(as_pairs(r), as_pairs(s))


def test_bounds_are_chains():
    for n in range(4):
        lo, hi = rel.increasing_chain(n), rel.decreasing_chain(n)
        assert all(rel.weak_le(lo, r) and rel.weak_le(r, hi) for r in rels(n))


def _brute_meet_join(rs, r, s):
    lower = [t for t in rs if orc.weak_le(t, r) and orc.weak_le(t, s)]
    upper = [t for t in rs if orc.weak_le(r, t) and orc.weak_le(s, t)]
    glb = [t for t in lower if all(orc.weak_le(u, t) for u in lower)]
    lub = [t for t in upper if all(orc.weak_le(t, u) for u in upper)]
    return glb, lub


@pytest.mark.parametrize("n", [2, 3])
def test_meet_join_are_brute_force_bounds(n):
    rs = orc.relations(n)
    by_pairs = {as_pairs(r): r for r in rels(n)}
    step = 1 if n == 2 else 7  # every pair at n=2, a spread sample of all 64^2 at n=3
    pairs = list(product(rs, rs))[::step]
    for r, s in pairs:
        glb, lub = _brute_meet_join(rs, r, s)
        assert len(glb) == 1 and len(lub) == 1
        assert as_pairs(rel.meet(by_pairs[r], by_pairs[s])) == glb[0]
        assert as_pairs(rel.join(by_pairs[r], by_pairs[s])) == lub[0]


def test_meet_join_examples():
    assert rel.meet(R(2, "12"), R(2, "21")) == R(2, "12")
    assert rel.join(R(2, "12"), R(2, "21")) == R(2, "21")


def test_rank_is_a_grading():
    for r in rels(3):
        for s in rel.weak_covers(r):
            assert rel.weak_rank(s) == rel.weak_rank(r) + 1
            assert rel.weak_le(r, s) and r != s


def test_weak_interval_is_a_cube():
    for r, s in product(rels(2), rels(2)):
        if rel.weak_le(r, s):
            got = set(rel.weak_interval(r, s))
            assert got == {t for t in rels(2) if rel.weak_le(r, t) and rel.weak_le(t, s)}
            assert len(got) == 2 ** (rel.weak_rank(s) - rel.weak_rank(r))


# --- restriction, shuffle, convolution ---------------------------------------------------

def test_restriction_standardizes():
    t = R(3, "12 13 32")
    assert rel.restriction(t, (1, 3)) == R(2, "12")
    assert rel.restriction(t, (2, 3)) == R(2, "21")
    for r in rels(3):
        for xs in [(1,), (1, 2), (2, 3), (1, 3), (1, 2, 3)]:
            assert as_pairs(rel.restriction(r, xs)) == orc.restrict(as_pairs(r), xs)


def test_shift_moves_labels():
    assert rel.shift(R(2, "21"), 2) == {(4, 3)}


def test_shifted_shuffle_matches_definition():
    for m, n in [(0, 2), (1, 1), (1, 2), (2, 1)]:
        for r, s in product(rels(m), rels(n)):
            got = [as_pairs(t) for t in rel.shifted_shuffle(r, s)]
            assert sorted(got, key=sorted) == sorted(orc.shuffle(as_pairs(r), m, as_pairs(s), n), key=sorted)
            assert len(got) == 2 ** (2 * m * n)


def test_under_over_products_are_the_interval_ends():
    r, s = R(2, "12"), rel.empty(1)
    assert rel.under_product(r, s) == R(3, "12 13 23")
    assert rel.over_product(r, s) == R(3, "12 31 32")
    assert rel.under_product(rel.empty(2), rel.empty(1)) == R(3, "13 23")


def test_convolution_matches_definition():
    for m, n in [(0, 1), (1, 1), (1, 2), (2, 1)]:
        for r, s in product(rels(m), rels(n)):
            got = sorted((as_pairs(t) for t in rel.convolution(r, s)), key=sorted)
            assert got == sorted(orc.convolution(as_pairs(r), m, as_pairs(s), n), key=sorted)
            assert len(got) == comb(m + n, m)


def test_poset_shuffle_is_filtered_shuffle():
    for m, n in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]:
        for r, s in product(fam.all_posets(m), fam.all_posets(n)):
            want = sorted(t for t in rel.shifted_shuffle(r, s) if rel.is_poset(t))
            assert sorted(rel.poset_shuffle(r, s)) == want
    with pytest.raises(rel.RelationError):
        list(rel.poset_shuffle(R(2, "12 21"), rel.empty(1)))


# --- cuts and indecomposability ---------------------------------------------------------

def test_total_cuts_of_the_worked_relation():
    cuts = rel.total_cuts(R(3, "12 13 32"))
    assert {c.x for c in cuts} == {(1, 2, 3), (1,), (1, 3), ()}
    for c in cuts:
        assert sorted(c.x + c.y) == [1, 2, 3]


def test_total_cuts_match_oracle():
    for n in range(4):
        for r in rels(n):
            assert {c.x for c in rel.total_cuts(r)} == set(orc.total_cuts(as_pairs(r), n))


def test_under_indecomposable_matches_oracle():
    for n in range(1, 4):
        for r in rels(n):
            assert rel.is_under_indecomposable(r) == (not orc.under_decomposable(as_pairs(r), n))
    with pytest.raises(rel.RelationError):
        rel.is_under_indecomposable(rel.empty(0))


def test_over_indecomposable_by_reversal():
    # reversing the labels swaps increasing and decreasing pairs, hence under and over
    for n in range(1, 4):
        for r in rels(n):
            rev = rel.from_pairs(n, [(n + 1 - u, n + 1 - v) for u, v in r.pairs()])
            assert rel.is_over_indecomposable(r) == rel.is_under_indecomposable(rev)


def test_primitive_cuts_are_prefix_total_cuts():
    for r in rels(3):
        prefixes = {len(c.x) for c in rel.total_cuts(r) if c.x == tuple(range(1, len(c.x) + 1))}
        assert set(rel.primitive_cuts(r)) == prefixes


# --- posets ---------------------------------------------------------------------------------

def test_is_poset_matches_oracle():
    for n in range(4):
        for r in rels(n):
            assert rel.is_poset(r) == orc.is_poset(as_pairs(r), n)


def test_transitive_closure():
    assert rel.transitive_closure(R(3, "12 23")) == R(3, "12 13 23")
    for r in rels(3):
        c = rel.transitive_closure(r)
        assert rel.is_transitive(c) and rel.is_subset(r, c)

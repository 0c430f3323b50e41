from itertools import permutations

import pytest

from helpers import R
from intrel import families as fam
from intrel import projections as proj
from intrel import relations as rel
from intrel.families import FamilyTag as T

SIX = rel.from_pairs(6, [
    (1, 2), (1, 4), (1, 5), (3, 5),
    (6, 5), (6, 4), (6, 2), (6, 1), (4, 2), (3, 2),
])


def posets(n):
    return fam.all_posets(n)


def test_deletions_on_the_six_element_poset():
    assert proj.iwoip_increasing_deletion(SIX) == rel.from_pairs(
        6, [(1, 2), (6, 5), (6, 4), (6, 2), (6, 1), (4, 2), (3, 2)])
    assert proj.dwoip_decreasing_deletion(SIX) == rel.from_pairs(
        6, [(1, 2), (1, 4), (1, 5), (3, 5), (6, 5), (6, 4), (6, 2), (4, 2), (3, 2)])
    assert proj.woip_deletion(SIX) == rel.from_pairs(
        6, [(1, 2), (6, 5), (6, 4), (6, 2), (4, 2), (3, 2)])


def test_toip_deletion_of_a_total_order_is_its_bst():
    sigma = (2, 7, 5, 1, 3, 4, 6)
    assert proj.toip_deletion(fam.from_permutation(sigma)) == fam.from_binary_tree(fam.bst_insert(sigma))


def test_toip_deletion_of_an_interval_is_the_tamari_interval():
    s, t = (1, 3, 2, 4), (3, 4, 2, 1)
    got = proj.toip_deletion(fam.from_interval(s, t))
    assert got == fam.from_tree_interval(fam.bst_insert(s), fam.bst_insert(t))
    assert fam.is_in_family(got, T.TOIP)


@pytest.mark.parametrize("name", sorted(proj.MAPS))
def test_maps_are_idempotent_projections(name):
    f = proj.MAPS[name]
    for n in range(4):
        for p in posets(n):
            image = f(p)
            assert fam.is_in_family(image, proj.IMAGES[name])
            assert f(image) == image
        for q in fam.family_members(n, proj.IMAGES[name]):
            if name not in ("WOEPid", "WOEPdd"):
                assert f(q) == q


def test_increasing_and_decreasing_deletions_commute():
    i, d = proj.iwoip_increasing_deletion, proj.dwoip_decreasing_deletion
    for n in range(5):
        for p in posets(n):
            assert i(d(p)) == d(i(p))


def test_woep_maps_are_extensions_of_the_deletions():
    for p in posets(4):
        assert fam.is_in_family(proj.woep_id(p), T.WOEP)
        assert rel.is_subset(proj.iwoip_increasing_deletion(p), proj.woep_id(p))
        assert rel.is_subset(proj.dwoip_decreasing_deletion(p), proj.woep_dd(p))


def _brute_fiber(f, target, n):
    return {p for p in posets(n) if f(p) == target}


def test_woep_fiber_conditions_characterize_fibers():
    for n in range(4):
        for target in fam.family_members(n, T.WOEP):
            fid = _brute_fiber(proj.woep_id, target, n)
            fdd = _brute_fiber(proj.woep_dd, target, n)
            for p in posets(n):
                assert proj.woep_id_fiber_condition(p, target) == (p in fid)
                assert proj.woep_dd_fiber_condition(p, target) == (p in fdd)


def test_fiber_condition_needs_the_weak_order_hypothesis():
    # the chain condition alone holds vacuously here, yet the empty poset maps to 21
    p, target = rel.empty(2), R(2, "12")
    assert proj.woep_id(p) == R(2, "21")
    assert not rel.inc(rel.difference(p, target))
    assert not proj.woep_id_fiber_condition(p, target)


def test_bst_fibers_partition_s4():
    sizes = [len(list(proj.fiber("TOIPd", fam.from_binary_tree(t), T.WOEP))) for t in fam.all_binary_trees(4)]
    assert sum(sizes) == 24 and len(sizes) == 14


def test_fiber_rejects_targets_outside_the_image():
    with pytest.raises(proj.ProjectionError):
        proj.fiber("TOIPd", R(3, "12 13 32"), T.WOEP)


def test_projection_compatibility_small():
    for n in range(5):
        for s in permutations(range(1, n + 1)):
            assert proj.projection_compatibility("permutation", s)
        for b in fam.all_ordered_partitions(n):
            assert proj.projection_compatibility("partition", b)
    with pytest.raises(proj.ProjectionError):
        proj.projection_compatibility("tree", None)


def test_map_names_and_errors():
    assert proj.map_name("woip-d") == "WOIPd"
    assert proj.map_name("toipd") == "TOIPd"
    with pytest.raises(proj.ProjectionError):
        proj.map_name("nothing")
    with pytest.raises(proj.ProjectionError):
        proj.project("WOIPd", R(2, "12 21"))

from collections import Counter
from itertools import product

import pytest

import oracles as orc
from helpers import R, as_pairs
from intrel import algebra as alg
from intrel import families as fam
from intrel import relations as rel
from intrel.algebra import F, ModuleElement, TensorElement

E0 = rel.empty(0)


def rels(n):
    return list(rel.all_relations(n))


def support(element):
    return {r for r, _ in element.items()}


# --- worked examples ------------------------------------------------------------

def test_product_of_a_chain_and_a_point_is_the_full_interval():
    got = F(R(2, "12")) * F(rel.empty(1))
    lo, hi = R(3, "12 13 23"), R(3, "12 31 32")
    assert len(got) == 16
    assert support(got) == set(rel.weak_interval(lo, hi))
    assert all(c == 1 for _, c in got.items())


def test_poset_product_keeps_six_terms():
    got = F(R(2, "12"), "IPos") * F(rel.empty(1), "IPos")
    expected = {
        R(3, "12 13 23"), R(3, "12 13"), R(3, "12 13 32"),
        R(3, "12 32"), R(3, "12 31 32"), R(3, "12"),
    }
    assert support(got) == expected
    lo, hi = R(3, "12 13 23"), R(3, "12 31 32")
    assert expected == {t for t in fam.all_posets(3) if rel.weak_le(lo, t) and rel.weak_le(t, hi)}


def test_coproduct_of_the_worked_relation():
    t = R(3, "12 13 32")
    got = alg.f_coproduct(F(t))
    assert got.terms == {
        (t, E0): 1,
        (rel.empty(1), R(2, "21")): 1,
        (R(2, "12"), rel.empty(1)): 1,
        (E0, t): 1,
    }


def test_compatibility_computation_has_coefficient_two():
    point = F(rel.empty(1))
    square = point * point
    assert support(square) == set(rels(2))
    lhs = alg.f_coproduct(square)
    assert lhs.coefficient((rel.empty(1), rel.empty(1))) == 2
    assert lhs == alg.f_coproduct(point) * alg.f_coproduct(point)
    assert len(lhs) == 9


def test_e_and_h_of_the_empty_pair():
    assert alg.e_from(rel.empty(2)) == F(rel.empty(2)) + F(R(2, "21"))
    assert alg.h_from(rel.empty(2)) == F(rel.empty(2)) + F(R(2, "12"))


def test_e_basis_product_example():
    lhs = alg.e_from(rel.empty(2)) * alg.e_from(rel.empty(1))
    assert lhs == alg.e_from(R(3, "13 23"))
    native = ModuleElement.of(rel.empty(2), "E") * ModuleElement.of(rel.empty(1), "E")
    assert native == ModuleElement.of(R(3, "13 23"), "E")


# --- product and coproduct against the oracles ------------------------------------

def test_product_matches_definition():
    for m, n in [(0, 2), (1, 1), (2, 1), (1, 2)]:
        for r, s in product(rels(m), rels(n)):
            got = {as_pairs(t): c for t, c in (F(r) * F(s)).items()}
            want = Counter(orc.shuffle(as_pairs(r), m, as_pairs(s), n))
            assert got == dict(want)


def test_coproduct_matches_definition():
    for n in range(4):
        for t in rels(n):
            got = {((as_pairs(x), x.n), (as_pairs(y), y.n)): c for (x, y), c in alg.f_coproduct(F(t)).items()}
            assert got == dict(orc.coproduct(as_pairs(t), n))


def test_unit_and_counit():
    one = ModuleElement.one()
    for r in rels(2):
        assert one * F(r) == F(r) == F(r) * one
        delta = alg.f_coproduct(F(r))
        assert delta.coefficient((r, E0)) == 1 and delta.coefficient((E0, r)) == 1


def test_hopf_compatibility_small():
    for carrier in alg.CARRIERS:
        pool = [r for k in range(3) for r in rels(k) if carrier == "IRel" or rel.is_poset(r)]
        for r, s in product(pool, pool):
            if r.n + s.n <= 3:
                assert alg.hopf_compatible(r, s, carrier)


def test_coassociativity_small():
    assert all(alg.is_coassociative_at(t) for k in range(4) for t in rels(k))


# --- E / H bases ---------------------------------------------------------------------

def test_change_of_basis_round_trips():
    for basis in ("E", "H"):
        for carrier in alg.CARRIERS:
            pool = [r for r in rels(3) if carrier == "IRel" or rel.is_poset(r)]
            for r in pool[::5]:
                x = ModuleElement.of(r, basis, carrier)
                assert alg.from_f(alg.to_f(x), basis) == x


def test_e_basis_leading_term_is_r():
    for r in rels(3):
        e = alg.e_from(r)
        assert e.coefficient(r) == 1
        assert all(rel.weak_le(r, t) for t in support(e))


def test_multiplicativity_small():
    for r, s in product(rels(2), rels(1)):
        assert alg.e_product_check(r, s) and alg.h_product_check(r, s)
        assert alg.e_product_check(s, r) and alg.h_product_check(s, r)


def test_unital_infinitesimal_small():
    for r, s in product(rels(1), rels(2)):
        assert alg.unital_infinitesimal_holds(r, s)
        assert alg.unital_infinitesimal_holds(s, r)


def test_primitive_elements_are_the_indecomposables():
    for t in rels(3):
        reduced = alg.bar_coproduct_e(t, reduced=True)
        assert (len(reduced) == 0) == rel.is_under_indecomposable(t)


# --- counting indecomposables -----------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_indecomposable_count_matches_brute_force(n):
    want = orc.count_indecomposables(n)
    assert alg.count_indecomposables(n) == want
    assert alg.count_indecomposables(n, over=True) == want
    assert alg.inclusion_exclusion_in(n) == want


def test_indecomposable_series_identity():
    assert alg.series_identity_holds(5)


def test_compositions():
    assert list(alg.compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]


# --- element plumbing -------------------------------------------------------------

def test_module_json_round_trip():
    x = 3 * F(R(2, "12")) - F(rel.empty(1))
    assert ModuleElement.from_json(x.to_json()) == x
    t = alg.f_coproduct(F(R(3, "12 13 32")))
    assert TensorElement.from_json(t.to_json()) == t


def test_mixing_bases_or_carriers_is_an_error():
    with pytest.raises(alg.AlgebraError):
        F(rel.empty(1)) + ModuleElement.of(rel.empty(1), "E")
    with pytest.raises(alg.AlgebraError):
        F(rel.empty(1)) * F(rel.empty(1), "IPos")
    with pytest.raises(alg.AlgebraError):
        F(R(2, "12 21"), "IPos")
    with pytest.raises(alg.AlgebraError):
        ModuleElement({rel.empty(1): 1}, "G")


def test_coefficients_are_exact_and_bounded():
    big = F(rel.empty(1)).scale(2 ** 62)
    assert big.coefficient(rel.empty(1)) == 2 ** 62
    with pytest.raises(alg.CoefficientOverflow):
        big + big
    with pytest.raises(alg.CoefficientOverflow):
        big * F(rel.empty(1)).scale(4)


def test_zero_terms_vanish():
    x = F(rel.empty(1)) - F(rel.empty(1))
    assert not x and len(x) == 0

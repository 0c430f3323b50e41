"""Exhaustive verification suites run by ``intrel verify``.

Each check takes ``n_max`` and returns ``None`` on success or a JSON-ready
counterexample on failure.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import comb

from . import algebra as alg
from . import families as fam
from . import family_algebras as fa
from . import projections as proj
from . import relations as rel
from .families import FamilyTag

SUITES = ("lattice", "hopf", "bases", "families", "projections", "subalgebras")


@dataclass
class VerificationReport:
    suite: str
    checks_run: int = 0
    failures: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "checks_run": self.checks_run,
            "failures": [{"check": c, "counterexample": x} for c, x in self.failures],
            "wall_time": round(self.wall_time, 3),
        }


def _j(*rs):
    return [r.to_json() if isinstance(r, rel.IntegerRelation) else r for r in rs]


def _rels_upto(n):
    for k in range(n + 1):
        yield from rel.all_relations(k)


def _pairs_upto(total, posets_only=False):
    source = fam.all_posets if posets_only else (lambda k: list(rel.all_relations(k)))
    for m in range(total + 1):
        for n in range(total - m + 1):
            for r in source(m):
                for s in source(n):
                    yield r, s


# --- lattice -------------------------------------------------------------------

def check_lattice_axioms(n_max):
    for n in range(min(n_max, 3) + 1):
        rs = list(rel.all_relations(n))
        for r in rs:
            if rel.meet(r, r) != r or rel.join(r, r) != r:
                return _j(r)
            for s in rs:
                m, j = rel.meet(r, s), rel.join(r, s)
                if m != rel.meet(s, r) or j != rel.join(s, r):
                    return _j(r, s)
                if rel.meet(r, j) != r or rel.join(r, m) != r:
                    return _j(r, s)
                if not (rel.weak_le(m, r) and rel.weak_le(r, j)):
                    return _j(r, s)
        if n <= 2:
            for a, b, c in product(rs, repeat=3):
                if rel.meet(rel.meet(a, b), c) != rel.meet(a, rel.meet(b, c)):
                    return _j(a, b, c)
                if rel.join(rel.join(a, b), c) != rel.join(a, rel.join(b, c)):
                    return _j(a, b, c)
    return None


def check_shuffle_characterization(n_max):
    for r, s in _pairs_upto(n_max):
        m, n = r.n, s.n
        shuffle = set(rel.shifted_shuffle(r, s))
        interval = set(rel.weak_interval(rel.under_product(r, s), rel.over_product(r, s)))
        if shuffle != interval or len(shuffle) != 4 ** (m * n):
            return _j(r, s)
        for t in shuffle:
            if rel.restriction(t, range(1, m + 1)) != r or rel.restriction(t, range(m + 1, m + n + 1)) != s:
                return _j(r, s, t)
    return None


def check_convolution(n_max):
    for r, s in _pairs_upto(n_max):
        conv = list(rel.convolution(r, s))
        if len(set(conv)) != comb(r.n + s.n, r.n):
            return _j(r, s)
        both = rel.is_poset(r) and rel.is_poset(s)
        for t in conv:
            if rel.is_poset(t) != both:
                return _j(r, s, t)
    return None


def check_restriction_functorial(n_max):
    n = min(n_max, 3)
    for r in rel.all_relations(n):
        for xmask in range(1 << n):
            xs = [i + 1 for i in range(n) if xmask >> i & 1]
            for ymask in range(1 << len(xs)):
                ys = [xs[i] for i in range(len(xs)) if ymask >> i & 1]
                inner = rel.restriction(rel.restriction(r, xs), rel.standardize(ys, xs))
                if inner != rel.restriction(r, ys):
                    return _j(r, xs, ys)
    return None


def check_upper_ideal(n_max):
    for n in range(1, min(n_max, 4) + 1):
        for r in rel.all_relations(n):
            if rel.is_under_indecomposable(r):
                for s in rel.weak_covers(r):
                    if not rel.is_under_indecomposable(s):
                        return _j(r, s)
    return None


# --- hopf ----------------------------------------------------------------------

def check_associativity(n_max):
    for carrier in alg.CARRIERS:
        source = fam.all_posets if carrier == "IPos" else (lambda k: list(rel.all_relations(k)))
        for sizes in product(range(n_max + 1), repeat=3):
            if sum(sizes) > n_max:
                continue
            for a, b, c in product(*(source(k) for k in sizes)):
                fa_, fb, fc = (alg.F(x, carrier) for x in (a, b, c))
                if (fa_ * fb) * fc != fa_ * (fb * fc):
                    return _j(carrier, a, b, c)
    return None


def check_coassociativity(n_max):
    for r in _rels_upto(n_max):
        if not alg.is_coassociative_at(r):
            return _j(r)
    return None


def check_hopf_compatibility(n_max):
    for carrier in alg.CARRIERS:
        for r, s in _pairs_upto(n_max, posets_only=carrier == "IPos"):
            if not alg.hopf_compatible(r, s, carrier):
                return _j(carrier, r, s)
    return None


def check_grading(n_max):
    for r, s in _pairs_upto(min(n_max, 3)):
        if (alg.F(r) * alg.F(s)).degrees() - {r.n + s.n}:
            return _j(r, s)
    for r in _rels_upto(min(n_max, 3)):
        if any(x.n + y.n != r.n for (x, y) in alg.f_coproduct(alg.F(r)).support()):
            return _j(r)
    return None


def check_interval_products(n_max):
    total = min(n_max, 3)
    for m in range(1, total):
        for n in range(1, total - m + 1):
            rs, ss = list(rel.all_relations(m)), list(rel.all_relations(n))
            for r, r2 in product(rs, rs):
                if not rel.weak_le(r, r2):
                    continue
                left = alg.ModuleElement({u: 1 for u in rel.weak_interval(r, r2)})
                for s, s2 in product(ss, ss):
                    if not rel.weak_le(s, s2):
                        continue
                    right = alg.ModuleElement({v: 1 for v in rel.weak_interval(s, s2)})
                    expected = alg.ModuleElement(
                        {t: 1 for t in rel.weak_interval(rel.under_product(r, s), rel.over_product(r2, s2))}
                    )
                    if left * right != expected:
                        return _j(r, r2, s, s2)
    return None


# --- bases ---------------------------------------------------------------------

def check_multiplicative_bases(n_max):
    for r, s in _pairs_upto(n_max):
        if not (alg.e_product_check(r, s) and alg.h_product_check(r, s)):
            return _j(r, s)
    for r, s in _pairs_upto(min(n_max, 3), posets_only=True):
        if not (alg.e_product_check(r, s, "IPos") and alg.h_product_check(r, s, "IPos")):
            return _j("IPos", r, s)
    return None


def check_unital_infinitesimal(n_max):
    for r, s in _pairs_upto(min(n_max, 3)):
        if r.n and s.n and not alg.unital_infinitesimal_holds(r, s):
            return _j(r, s)
    return None


def check_primitive_elements(n_max):
    for r in _rels_upto(n_max):
        if r.n and (not alg.bar_coproduct_e(r, reduced=True)) != rel.is_under_indecomposable(r):
            return _j(r)
    return None


def check_indecomposable_counts(n_max):
    for n in range(1, min(n_max, 5) + 1):
        a, b = alg.count_indecomposables(n), alg.inclusion_exclusion_in(n)
        if a != b or alg.count_indecomposables(n, over=True) != a:
            return {"n": n, "enumerated": a, "inclusion_exclusion": b}
    return None


# --- families ------------------------------------------------------------------

def check_containments(n_max):
    for n in range(min(n_max, 5) + 1):
        for p in fam.all_posets(n):
            tags = set(fam.families_of(p))
            rules = [
                (FamilyTag.WOEP, FamilyTag.WOIP), (FamilyTag.WOFP, FamilyTag.WOIP),
                (FamilyTag.TOEP, FamilyTag.TOIP), (FamilyTag.TOFP, FamilyTag.TOIP),
            ]
            if any(a in tags and b not in tags for a, b in rules):
                return _j(p)
            both = FamilyTag.IWOIP in tags and FamilyTag.DWOIP in tags
            if (FamilyTag.WOIP in tags) != both:
                return _j(p)
    return None


def check_filter_construct(n_max):
    for tag in FamilyTag:
        if tag is FamilyTag.IRel:
            continue
        for n in range(min(n_max, 5) + 1):
            if set(fam.enumerate_family(n, tag, "filter")) != set(fam.enumerate_family(n, tag, "construct")):
                return {"family": tag.value, "n": n}
    return None


def check_order_isomorphisms(n_max):
    for n in range(min(n_max, 4) + 1):
        perms = list(fam.all_permutations(n))
        for s, t in product(perms, perms):
            if fam.permutation_le(s, t) != rel.weak_le(fam.from_permutation(s), fam.from_permutation(t)):
                return {"permutations": [s, t]}
        trees = fam.all_binary_trees(n)
        for a, b in product(trees, trees):
            if fam.tamari_le(a, b) != rel.weak_le(fam.from_binary_tree(a), fam.from_binary_tree(b)):
                return {"trees": [fam.tree_to_json(a), fam.tree_to_json(b)]}
    n = min(n_max, 3)
    perms = list(fam.all_permutations(n))
    intervals = [(s, t) for s in perms for t in perms if fam.permutation_le(s, t)]
    for (s, s2), (t, t2) in product(intervals, intervals):
        lhs = rel.weak_le(fam.from_interval(s, s2), fam.from_interval(t, t2))
        if lhs != (fam.permutation_le(s, t) and fam.permutation_le(s2, t2)):
            return {"intervals": [s, s2, t, t2]}
    return None


def check_extensions(n_max):
    for n in range(min(n_max, 4) + 1):
        perms = list(fam.all_permutations(n))
        for s, t in product(perms, perms):
            if fam.permutation_le(s, t):
                p = fam.from_interval(s, t)
                if fam.minle(p) != fam.from_permutation(s) or fam.maxle(p) != fam.from_permutation(t):
                    return {"interval": [s, t]}
                exts = fam.linear_extensions(p)
                if sorted(exts) != sorted(w for w in perms if fam.permutation_le(s, w) and fam.permutation_le(w, t)):
                    return {"interval": [s, t]}
    return None


# --- projections ---------------------------------------------------------------

def check_projection_maps(n_max):
    for n in range(min(n_max, 4) + 1):
        for p in fam.all_posets(n):
            for name, f in proj.MAPS.items():
                image = f(p)
                if not fam.is_in_family(image, proj.IMAGES[name]) or f(image) != image:
                    return _j(name, p)
            i, d = proj.iwoip_increasing_deletion, proj.dwoip_decreasing_deletion
            if i(d(p)) != d(i(p)):
                return _j("commutation", p)
    return None


def check_restriction_compatibility(n_max):
    names = ("IWOIPid", "DWOIPdd", "WOIPd", "WOEPid", "WOEPdd")
    for n in range(1, min(n_max, 4) + 1):
        for p in fam.all_posets(n):
            for q in range(1, n + 1):
                for r in range(q, n + 1):
                    span = range(q, r + 1)
                    for name in names:
                        f = proj.MAPS[name]
                        if f(rel.restriction(p, span)) != rel.restriction(f(p), span):
                            return _j(name, p, [q, r])
    return None


def check_cut_compatibility(n_max):
    for n in range(min(n_max, 4) + 1):
        for p in fam.all_posets(n):
            d = proj.woip_deletion(p)
            cuts = rel.total_cuts(p)
            if cuts != rel.total_cuts(d):
                return _j("WOIPd", p)
            for cut in cuts:
                for side in (cut.x, cut.y):
                    if proj.woip_deletion(rel.restriction(p, side)) != rel.restriction(d, side):
                        return _j("WOIPd", p, list(side))
            for name in ("WOEPid", "WOEPdd"):
                image_cuts = set(rel.total_cuts(proj.MAPS[name](p)))
                if not set(cuts) <= image_cuts:
                    return _j(name, p)
    return None


def check_woep_fibers(n_max):
    for n in range(min(n_max, 4) + 1):
        targets = fam.family_members(n, FamilyTag.WOEP)
        for p in fam.all_posets(n):
            a, b = proj.woep_id(p), proj.woep_dd(p)
            for t in targets:
                if (a == t) != proj.woep_id_fiber_condition(p, t):
                    return _j("WOEPid", p, t)
                if (b == t) != proj.woep_dd_fiber_condition(p, t):
                    return _j("WOEPdd", p, t)
    return None


def check_fiber_partition(n_max):
    for n in range(min(n_max, 4) + 1):
        for sub in fa.SUBALGEBRAS.values():
            domain = fam.family_members(n, sub.domain)
            parts = proj.fiber_partition(sub.map_name, n, sub.domain)
            flat = [p for part in parts.values() for p in part]
            if len(flat) != len(set(flat)) or set(flat) != set(domain):
                return {"subalgebra": sub.name, "n": n}
            if set(parts) != set(fam.family_members(n, sub.basis)):
                return {"subalgebra": sub.name, "n": n, "problem": "image is not the whole family"}
    return None


def check_insertions(n_max):
    for n in range(min(n_max + 2, 6) + 1):
        for s in fam.all_permutations(n):
            if not proj.projection_compatibility("permutation", s):
                return {"permutation": s}
    for n in range(min(n_max + 1, 5) + 1):
        for b in fam.all_ordered_partitions(n):
            if not proj.projection_compatibility("partition", b):
                return {"partition": b}
    for n in range(min(n_max, 4) + 1):
        perms = list(fam.all_permutations(n))
        for s, t in product(perms, perms):
            if fam.permutation_le(s, t) and not proj.projection_compatibility("interval", (s, t)):
                return {"interval": [s, t]}
    return None


# --- subalgebras ---------------------------------------------------------------

def _members_upto(total, tag):
    return {k: sorted(fam.family_members(k, tag)) for k in range(total + 1)}


def check_quotients(n_max):
    for tag in fa.QUOTIENT_FAMILIES:
        members = _members_upto(n_max, tag)
        for m in range(n_max + 1):
            for n in range(n_max - m + 1):
                for r in members[m]:
                    for s in members[n]:
                        a = fa.FamilyElement.of(tag.value, "quotient", r)
                        b = fa.FamilyElement.of(tag.value, "quotient", s)
                        ab = a * b
                        lo, hi = rel.under_product(r, s), rel.over_product(r, s)
                        interval = {t for t in members[m + n] if rel.weak_le(lo, t) and rel.weak_le(t, hi)}
                        if ab.terms != {t: 1 for t in interval}:
                            return _j(tag.value, "interval", r, s)
                        if m + n <= min(n_max, 3):
                            lhs = fa.coproduct(ab)
                            rhs = _tensor_mul(fa.coproduct(a), fa.coproduct(b), tag.value)
                            if lhs.terms != rhs:
                                return _j(tag.value, "compatibility", r, s)
    return None


def _tensor_mul(p, q, family):
    out = {}
    for (a, b), c1 in p.terms.items():
        for (c, d), c2 in q.terms.items():
            left = fa.FamilyElement.of(family, "quotient", a) * fa.FamilyElement.of(family, "quotient", c)
            right = fa.FamilyElement.of(family, "quotient", b) * fa.FamilyElement.of(family, "quotient", d)
            for x, cx in left.terms.items():
                for y, cy in right.terms.items():
                    out[(x, y)] = out.get((x, y), 0) + c1 * c2 * cx * cy
    return {k: v for k, v in out.items() if v}


def check_subalgebra_closure(n_max):
    for sub in fa.SUBALGEBRAS.values():
        members = _members_upto(n_max, sub.basis)
        for m in range(n_max + 1):
            for n in range(n_max - m + 1):
                for r in members[m]:
                    for s in members[n]:
                        try:
                            got = fa.subalgebra_product(sub.name, r, s)
                        except fa.ClosureViolation as exc:
                            return _j(sub.name, r, s, str(exc))
                        lo, hi = rel.under_product(r, s), rel.over_product(r, s)
                        interval = {t: 1 for t in members[m + n] if rel.weak_le(lo, t) and rel.weak_le(t, hi)}
                        if got.terms != interval:
                            return _j(sub.name, "interval", r, s)
        for k in range(n_max + 1):
            for t in members[k]:
                try:
                    fa.subalgebra_coproduct(sub.name, t)
                except fa.ClosureViolation as exc:
                    return _j(sub.name, t, str(exc))
    return None


def check_quotient_subalgebra_isomorphism(n_max):
    for name, tag in (("WOIP", FamilyTag.WOIP), ("WOEPid", FamilyTag.WOEP), ("WOEPdd", FamilyTag.WOEP)):
        members = _members_upto(n_max, tag)
        for m in range(n_max + 1):
            for n in range(n_max - m + 1):
                for r in members[m]:
                    for s in members[n]:
                        quo = fa.FamilyElement.of(tag.value, "quotient", r) * fa.FamilyElement.of(tag.value, "quotient", s)
                        if quo.terms != fa.subalgebra_product(name, r, s).terms:
                            return _j(name, r, s)
        for k in range(n_max + 1):
            for t in members[k]:
                quo = fa.coproduct(fa.FamilyElement.of(tag.value, "quotient", t))
                if quo.terms != fa.subalgebra_coproduct(name, t).terms:
                    return _j(name, t)
    return None


def check_classical_isomorphisms(n_max):
    for pairing in ("MR", "Chapoton", "LodayRonco", "ChapotonSchroder"):
        if not fa.isomorphism_check(pairing, min(n_max, 4)):
            return {"pairing": pairing}
    return None


def check_toep_permutation_level(n_max):
    if not fa.toep_closure_permutation_level(min(n_max + 2, 6)):
        return {"max_total": min(n_max + 2, 6)}
    return None


def check_tamari_refusal(n_max):
    w = fa.refusal_witness()
    if not w["in_convolution"] or not all(w["factors_in_families"].values()) or any(w["relation_in_families"].values()):
        return {"witness": str(w)}
    for tag in fa.TAMARI_FAMILIES:
        try:
            fa.quotient_family(tag)
        except fa.TamariQuotientRefused:
            continue
        return {"family": tag.value}
    return None


CHECKS = {
    "lattice": [
        ("lattice-axioms", check_lattice_axioms),
        ("shuffle-characterization", check_shuffle_characterization),
        ("convolution", check_convolution),
        ("restriction-functorial", check_restriction_functorial),
        ("upper-ideal", check_upper_ideal),
    ],
    "hopf": [
        ("associativity", check_associativity),
        ("coassociativity", check_coassociativity),
        ("hopf-compatibility", check_hopf_compatibility),
        ("grading", check_grading),
        ("interval-products", check_interval_products),
    ],
    "bases": [
        ("multiplicative-bases", check_multiplicative_bases),
        ("unital-infinitesimal", check_unital_infinitesimal),
        ("primitive-elements", check_primitive_elements),
        ("indecomposable-counts", check_indecomposable_counts),
    ],
    "families": [
        ("containments", check_containments),
        ("filter-construct", check_filter_construct),
        ("order-isomorphisms", check_order_isomorphisms),
        ("extensions", check_extensions),
    ],
    "projections": [
        ("maps", check_projection_maps),
        ("restriction-compatibility", check_restriction_compatibility),
        ("cut-compatibility", check_cut_compatibility),
        ("woep-fibers", check_woep_fibers),
        ("fiber-partition", check_fiber_partition),
        ("insertions", check_insertions),
    ],
    "subalgebras": [
        ("quotients", check_quotients),
        ("closure", check_subalgebra_closure),
        ("quotient-vs-subalgebra", check_quotient_subalgebra_isomorphism),
        ("classical-isomorphisms", check_classical_isomorphisms),
        ("toep-permutation-level", check_toep_permutation_level),
        ("tamari-refusal", check_tamari_refusal),
    ],
}


def _run_one(args):
    suite, check_id, n_max = args
    fn = dict(CHECKS[suite])[check_id]
    try:
        return fn(n_max)
    except Exception as exc:  # a crash is a failure, reported with its message
        return {"error": f"{type(exc).__name__}: {exc}"}


def run_suite(suite: str, n_max: int = 3, jobs: int = 1) -> VerificationReport:
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in CHECKS:
            raise ValueError(f"unknown suite {name!r}")
    tasks = [(name, cid, n_max) for name in names for cid, _ in CHECKS[name]]
    start = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    report = VerificationReport(suite)
    report.checks_run = len(tasks)
    report.failures = [(f"{s}/{cid}", res) for (s, cid, _), res in zip(tasks, results) if res is not None]
    report.wall_time = time.perf_counter() - start
    return report

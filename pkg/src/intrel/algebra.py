"""The Hopf algebra of integer relations and its poset quotient.

Elements are sparse exact-integer combinations.  Coefficients are kept
within signed 64-bit range and overflow raises instead of wrapping.
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Callable, Iterable, Iterator

import numpy as np

from . import relations as rel
from .config import check_limit
from .relations import IntegerRelation

BASES = ("F", "E", "H")
CARRIERS = ("IRel", "IPos")
INT64_MIN, INT64_MAX = -(1 << 63), (1 << 63) - 1


class CoefficientOverflow(ArithmeticError):
    pass


class AlgebraError(ValueError):
    pass


def _checked(c: int) -> int:
    if not INT64_MIN <= c <= INT64_MAX:
        raise CoefficientOverflow(f"coefficient {c} does not fit in 64 bits")
    return c


class _Combination:
    """Shared sparse-dict arithmetic for module and tensor elements."""

    __slots__ = ("basis", "carrier", "_terms")

    def __init__(self, terms=None, basis: str = "F", carrier: str = "IRel"):
        if basis not in BASES:
            raise AlgebraError(f"unknown basis {basis!r}")
        if carrier not in CARRIERS:
            raise AlgebraError(f"unknown carrier {carrier!r}")
        self.basis = basis
        self.carrier = carrier
        clean = {}
        for key, c in dict(terms or {}).items():
            if not isinstance(c, (int, np.integer)):
                raise AlgebraError(f"coefficient {c!r} is not an integer")
            c = _checked(int(c))
            if c:
                self._validate_key(key)
                clean[key] = c
        self._terms = clean

    def _validate_key(self, key):
        raise NotImplementedError

    def _like(self, terms):
        return type(self)(terms, self.basis, self.carrier)

    def _compatible(self, other):
        if type(other) is not type(self):
            raise AlgebraError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if (self.basis, self.carrier) != (other.basis, other.carrier):
            raise AlgebraError(
                f"mixed basis/carrier: {self.basis}/{self.carrier} vs {other.basis}/{other.carrier}"
            )

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: self._sort_key(kv[0]))

    def coefficient(self, key) -> int:
        return self._terms.get(key, 0)

    def support(self) -> set:
        return set(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.items())

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.basis, self.carrier, self._terms) == (other.basis, other.carrier, other._terms)

    def __hash__(self):
        return hash((self.basis, self.carrier, frozenset(self._terms.items())))

    def __add__(self, other):
        self._compatible(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = _checked(out.get(k, 0) + c)
        return self._like(out)

    def __neg__(self):
        return self._like({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return self._like({k: _checked(c * v) for k, v in self._terms.items()})

    def __rmul__(self, c):
        if isinstance(c, int):
            return self.scale(c)
        return NotImplemented


class ModuleElement(_Combination):
    """Sparse combination of relations (of any sizes) in one basis."""

    __slots__ = ()

    def _validate_key(self, key):
        if not isinstance(key, IntegerRelation):
            raise AlgebraError(f"module keys must be relations, got {key!r}")
        if self.carrier == "IPos" and not rel.is_poset(key):
            raise AlgebraError(f"{key!r} is not a poset but the carrier is IPos")

    @staticmethod
    def _sort_key(r):
        return r.key

    @classmethod
    def of(cls, r: IntegerRelation, basis: str = "F", carrier: str = "IRel", coeff: int = 1):
        return cls({r: coeff}, basis, carrier)

    @classmethod
    def one(cls, basis: str = "F", carrier: str = "IRel"):
        return cls.of(rel.empty(0), basis, carrier)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, ModuleElement):
            return product(self, other)
        return NotImplemented

    def degrees(self) -> set:
        return {r.n for r in self._terms}

    def __repr__(self):
        body = " + ".join(f"{c}*{self.basis}[{r.label()}]" for r, c in self.items()) or "0"
        return f"<{self.carrier} {body}>"

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "carrier": self.carrier,
            "terms": [{"rel": r.to_json(), "coeff": c} for r, c in self.items()],
        }

    @classmethod
    def from_json(cls, data) -> "ModuleElement":
        try:
            terms = defaultdict(int)
            for t in data["terms"]:
                terms[IntegerRelation.from_json(t["rel"])] += int(t["coeff"])
            return cls(terms, data.get("basis", "F"), data.get("carrier", "IRel"))
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed module element JSON: {exc}") from None


class TensorElement(_Combination):
    """Sparse combination of ordered pairs of relations."""

    __slots__ = ()

    def _validate_key(self, key):
        if not (isinstance(key, tuple) and len(key) == 2
                and all(isinstance(k, IntegerRelation) for k in key)):
            raise AlgebraError(f"tensor keys must be pairs of relations, got {key!r}")
        if self.carrier == "IPos" and not all(rel.is_poset(k) for k in key):
            raise AlgebraError(f"{key!r} has a non-poset factor but the carrier is IPos")

    @staticmethod
    def _sort_key(pair):
        return (pair[0].key, pair[1].key)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if isinstance(other, TensorElement):
            return tensor_product(self, other)
        return NotImplemented

    def __repr__(self):
        b = self.basis
        body = " + ".join(f"{c}*{b}[{x.label()}]⊗{b}[{y.label()}]" for (x, y), c in self.items())
        return f"<{self.carrier} {body or '0'}>"

    def to_json(self) -> dict:
        return {
            "basis": self.basis,
            "carrier": self.carrier,
            "terms": [
                {"left": x.to_json(), "right": y.to_json(), "coeff": c}
                for (x, y), c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data) -> "TensorElement":
        try:
            terms = defaultdict(int)
            for t in data["terms"]:
                key = (IntegerRelation.from_json(t["left"]), IntegerRelation.from_json(t["right"]))
                terms[key] += int(t["coeff"])
            return cls(terms, data.get("basis", "F"), data.get("carrier", "IRel"))
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed tensor element JSON: {exc}") from None


def F(r: IntegerRelation, carrier: str = "IRel") -> ModuleElement:
    return ModuleElement.of(r, "F", carrier)


# --- product and coproduct in the F basis ------------------------------------

def shuffle_terms(r: IntegerRelation, s: IntegerRelation, carrier: str) -> Iterator[IntegerRelation]:
    """Support of F_r . F_s: the shifted shuffle, minus non-posets on IPos."""
    if carrier == "IPos":
        return rel.poset_shuffle(r, s)
    return rel.shifted_shuffle(r, s)


def _bilinear(a, b, pair_terms: Callable) -> dict:
    out = defaultdict(int)
    for r, cr in a._terms.items():
        for s, cs in b._terms.items():
            c = _checked(cr * cs)
            for t in pair_terms(r, s):
                out[t] = _checked(out[t] + c)
    return out


def _unit_coefficient(a: ModuleElement):
    """c when a == c * F_(empty relation), else None."""
    if len(a._terms) == 1:
        (r, c), = a._terms.items()
        if r.n == 0:
            return c
    return None


def f_product(a: ModuleElement, b: ModuleElement) -> ModuleElement:
    a._compatible(b)
    if a.basis != "F":
        raise AlgebraError("f_product expects F-basis elements")
    # the empty relation is the unit; skip the one-term shuffles
    for unit, other in ((a, b), (b, a)):
        c = _unit_coefficient(unit)
        if c is not None:
            return other.scale(c)
    return ModuleElement(_bilinear(a, b, lambda r, s: shuffle_terms(r, s, a.carrier)), "F", a.carrier)


def product(a: ModuleElement, b: ModuleElement) -> ModuleElement:
    """Product in the basis shared by a and b.

    E and H are multiplicative: E^r . E^s = E^(r under s), H^r . H^s = H^(r over s).
    """
    a._compatible(b)
    if a.basis == "F":
        return f_product(a, b)
    glue = rel.under_product if a.basis == "E" else rel.over_product
    return ModuleElement(_bilinear(a, b, lambda r, s: (glue(r, s),)), a.basis, a.carrier)


def coproduct_terms(t: IntegerRelation) -> Iterator[tuple]:
    for cut in rel.total_cuts(t):
        yield rel.restriction(t, cut.x), rel.restriction(t, cut.y)


def f_coproduct(a: ModuleElement) -> TensorElement:
    if a.basis != "F":
        raise AlgebraError("f_coproduct expects an F-basis element")
    out = defaultdict(int)
    for t, c in a._terms.items():
        for pair in coproduct_terms(t):
            out[pair] = _checked(out[pair] + c)
    # on IPos no deletion is needed: restrictions of posets are posets, and
    # TensorElement validation would flag a violation
    return TensorElement(out, "F", a.carrier)


def tensor_product(p: TensorElement, q: TensorElement) -> TensorElement:
    """(a⊗b)·(c⊗d) = (a·c)⊗(b·d), extended bilinearly."""
    p._compatible(q)
    basis, carrier = p.basis, p.carrier
    out = defaultdict(int)
    for (a, b), c1 in p._terms.items():
        for (c, d), c2 in q._terms.items():
            left = product(ModuleElement.of(a, basis, carrier), ModuleElement.of(c, basis, carrier))
            right = product(ModuleElement.of(b, basis, carrier), ModuleElement.of(d, basis, carrier))
            k = _checked(c1 * c2)
            for x, cx in left._terms.items():
                for y, cy in right._terms.items():
                    out[(x, y)] = _checked(out[(x, y)] + k * cx * cy)
    return TensorElement(out, basis, carrier)


def tensor(a: ModuleElement, b: ModuleElement) -> TensorElement:
    a._compatible(b)
    out = {}
    for x, cx in a._terms.items():
        for y, cy in b._terms.items():
            out[(x, y)] = _checked(cx * cy)
    return TensorElement(out, a.basis, a.carrier)


def hopf_compatible(r: IntegerRelation, s: IntegerRelation, carrier: str = "IRel") -> bool:
    """Check Δ(F_r · F_s) = Δ(F_r) · Δ(F_s) exactly."""
    fr, fs = F(r, carrier), F(s, carrier)
    return f_coproduct(fr * fs) == f_coproduct(fr) * f_coproduct(fs)


def iterated_coproduct(t: IntegerRelation, left_first: bool) -> dict:
    """(Δ⊗id)Δ F_t when left_first, else (id⊗Δ)Δ F_t, as a dict over triples."""
    out = defaultdict(int)
    for x, y in coproduct_terms(t):
        if left_first:
            for x1, x2 in coproduct_terms(x):
                out[(x1, x2, y)] += 1
        else:
            for y1, y2 in coproduct_terms(y):
                out[(x, y1, y2)] += 1
    return dict(out)


def is_coassociative_at(t: IntegerRelation) -> bool:
    return iterated_coproduct(t, True) == iterated_coproduct(t, False)


# --- multiplicative bases ----------------------------------------------------

def _carrier_filter(carrier: str):
    return rel.is_poset if carrier == "IPos" else (lambda t: True)


@lru_cache(maxsize=4096)
def e_from(r: IntegerRelation, carrier: str = "IRel") -> ModuleElement:
    """E^r in the F basis: sum of F over the weak-order up-set of r."""
    check_limit(r.n)
    keep = _carrier_filter(carrier)
    top = rel.decreasing_chain(r.n)
    return ModuleElement({t: 1 for t in rel.weak_interval(r, top) if keep(t)}, "F", carrier)


@lru_cache(maxsize=4096)
def h_from(r: IntegerRelation, carrier: str = "IRel") -> ModuleElement:
    """H^r in the F basis: sum of F over the weak-order down-set of r."""
    check_limit(r.n)
    keep = _carrier_filter(carrier)
    bottom = rel.increasing_chain(r.n)
    return ModuleElement({t: 1 for t in rel.weak_interval(bottom, r) if keep(t)}, "F", carrier)


def to_f(a: ModuleElement) -> ModuleElement:
    """Expand an E- or H-basis element in the F basis."""
    if a.basis == "F":
        return a
    expand = e_from if a.basis == "E" else h_from
    out = ModuleElement({}, "F", a.carrier)
    for r, c in a.items():
        out = out + expand(r, a.carrier).scale(c)
    return out


def from_f(a: ModuleElement, basis: str) -> ModuleElement:
    """Rewrite an F-basis element in the E or H basis by triangular elimination.

    E^r = F_r + (terms strictly above r), so peeling off terms from the bottom
    of the weak order inverts the change of basis on any carrier.
    """
    if a.basis != "F":
        raise AlgebraError("from_f expects an F-basis element")
    if basis == "F":
        return a
    expand = e_from if basis == "E" else h_from
    sign = 1 if basis == "E" else -1
    rest = a
    out = {}
    while rest:
        r = min(rest.support(), key=lambda t: (t.n, sign * rel.weak_rank(t), t.key))
        c = rest.coefficient(r)
        out[r] = c
        rest = rest - expand(r, a.carrier).scale(c)
    return ModuleElement(out, basis, a.carrier)


def e_product_check(r: IntegerRelation, s: IntegerRelation, carrier: str = "IRel") -> bool:
    lhs = e_from(r, carrier) * e_from(s, carrier)
    return lhs == e_from(rel.under_product(r, s), carrier)


def h_product_check(r: IntegerRelation, s: IntegerRelation, carrier: str = "IRel") -> bool:
    lhs = h_from(r, carrier) * h_from(s, carrier)
    return lhs == h_from(rel.over_product(r, s), carrier)


def bar_coproduct_e(t: IntegerRelation, reduced: bool = False, carrier: str = "IRel") -> TensorElement:
    """Sum over primitive cuts i of E^(t on [i]) ⊗ E^(t on the rest)."""
    out = defaultdict(int)
    for i in rel.primitive_cuts(t):
        if reduced and i in (0, t.n):
            continue
        key = (rel.restriction(t, range(1, i + 1)), rel.restriction(t, range(i + 1, t.n + 1)))
        out[key] += 1
    return TensorElement(out, "E", carrier)


def bar_coproduct(a: ModuleElement, reduced: bool = False) -> TensorElement:
    if a.basis != "E":
        raise AlgebraError("bar_coproduct is defined on the E basis")
    out = TensorElement({}, "E", a.carrier)
    for t, c in a.items():
        out = out + bar_coproduct_e(t, reduced, a.carrier).scale(c)
    return out


def unital_infinitesimal_holds(r: IntegerRelation, s: IntegerRelation) -> bool:
    """Reduced coproduct of E^r.E^s against (x⊗1)·Δ'(y) + Δ'(x)·(1⊗y) + x⊗y."""
    x, y = ModuleElement.of(r, "E"), ModuleElement.of(s, "E")
    one = ModuleElement.one("E")
    lhs = bar_coproduct(x * y, reduced=True)
    rhs = (tensor(x, one) * bar_coproduct(y, reduced=True)
           + bar_coproduct(x, reduced=True) * tensor(one, y)
           + tensor(x, y))
    return lhs == rhs


# --- indecomposables ---------------------------------------------------------

def compositions(n: int) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def inclusion_exclusion_in(n: int) -> int:
    """Indecomposables from relation counts: sum over compositions of n."""
    if n < 1:
        raise AlgebraError("n must be positive")
    total = 0
    for parts in compositions(n):
        term = 1
        for p in parts:
            term *= rel.relation_count(p)
        total += (-1) ** (len(parts) + 1) * term
    return total


def _prefix_masks(n: int, i: int):
    """Code masks of the increasing and decreasing pairs crossing the prefix cut at i."""
    need = forbid = 0
    for k, (u, v) in enumerate(rel.off_diagonal(n)):
        if u < i <= v:
            need |= 1 << k
        elif v < i <= u:
            forbid |= 1 << k
    return need, forbid


def count_indecomposables(n: int, over: bool = False) -> int:
    """Count under- (or over-) indecomposable relations of IRel_n by vectorized sweep."""
    if n < 1:
        raise AlgebraError("n must be positive")
    check_limit(n)
    bits = n * (n - 1)
    codes = np.arange(1 << bits, dtype=np.uint64)
    decomposable = np.zeros(codes.shape, dtype=bool)
    for i in range(1, n):
        need, forbid = _prefix_masks(n, i)
        if over:
            need, forbid = forbid, need
        need_, forbid_ = np.uint64(need), np.uint64(forbid)
        decomposable |= ((codes & need_) == need_) & ((codes & forbid_) == 0)
    return int(codes.size - np.count_nonzero(decomposable))


def series_identity_holds(max_degree: int = 5) -> bool:
    """1/(1 - I(x)) = R(x) up to max_degree, using the enumerated I_n."""
    ind = [0] + [count_indecomposables(k) for k in range(1, max_degree + 1)]
    inverse = [1] + [0] * max_degree
    for d in range(1, max_degree + 1):
        inverse[d] = sum(ind[k] * inverse[d - k] for k in range(1, d + 1))
    return all(inverse[d] == rel.relation_count(d) for d in range(max_degree + 1))


def weak_order_minimal(rs: Iterable[IntegerRelation]) -> list:
    rs = list(rs)
    return sorted(r for r in rs if not any(s != r and rel.weak_le(s, r) for s in rs))


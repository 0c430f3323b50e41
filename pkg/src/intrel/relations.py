"""Integer binary relations on [n] and the weak order lattice.

A relation is stored as one bitmask per row: bit ``v`` of ``rows[u]`` says
that ``u+1`` is related to ``v+1``.  The diagonal is implied and never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .config import check_limit


class RelationError(ValueError):
    """Malformed relation input or incompatible operands."""


def _full(k: int) -> int:
    return (1 << k) - 1


@dataclass(frozen=True)
class IntegerRelation:
    n: int
    rows: tuple

    def __post_init__(self):
        if self.n < 0 or len(self.rows) != self.n:
            raise RelationError(f"expected {self.n} rows, got {len(self.rows)}")
        mask = _full(self.n)
        for u, row in enumerate(self.rows):
            if row & ~mask or row >> u & 1:
                raise RelationError(f"row {u + 1} has bits outside [n] or on the diagonal")

    @cached_property
    def key(self) -> tuple:
        """Canonical sort key: (n, row-major bit string read as a binary number)."""
        n = self.n
        code = 0
        for row in self.rows:
            for v in range(n):
                code = code << 1 | (row >> v & 1)
        return (n, code)

    def __lt__(self, other: "IntegerRelation") -> bool:
        return self.key < other.key

    def __contains__(self, pair) -> bool:
        u, v = pair
        if u == v:
            return 1 <= u <= self.n
        return 1 <= u <= self.n and 1 <= v <= self.n and bool(self.rows[u - 1] >> (v - 1) & 1)

    def pairs(self) -> list:
        """Off-diagonal pairs, 1-based, in canonical order."""
        return [(u + 1, v + 1) for u, row in enumerate(self.rows) for v in range(self.n) if row >> v & 1]

    def __len__(self) -> int:
        return sum(bin(row).count("1") for row in self.rows)

    def __repr__(self) -> str:
        return f"IntegerRelation(n={self.n}, pairs={self.pairs()})"

    def label(self) -> str:
        """Compact text label such as ``12_13_32`` (``0n`` for the empty relation)."""
        ps = self.pairs()
        if not ps:
            return f"0{self.n}"
        if self.n < 10:
            return "_".join(f"{u}{v}" for u, v in ps)
        return "_".join(f"{u}.{v}" for u, v in ps)

    def to_json(self) -> dict:
        return {"n": self.n, "pairs": [list(p) for p in self.pairs()]}

    @classmethod
    def from_json(cls, data) -> "IntegerRelation":
        try:
            n = data["n"]
            pairs = data["pairs"]
        except (KeyError, TypeError):
            raise RelationError("relation JSON needs keys 'n' and 'pairs'") from None
        if not isinstance(n, int) or n < 0:
            raise RelationError(f"bad size {n!r}")
        return from_pairs(n, [tuple(p) for p in pairs])


_new = object.__new__
_set = object.__setattr__


def _make(n: int, rows: tuple) -> IntegerRelation:
    """Build without validation; for internal generators whose rows are known good."""
    r = _new(IntegerRelation)
    _set(r, "n", n)
    _set(r, "rows", rows)
    return r


@dataclass(frozen=True)
class TotalCut:
    x: tuple
    y: tuple


def from_pairs(n: int, pairs: Iterable) -> IntegerRelation:
    rows = [0] * n
    for pair in pairs:
        try:
            u, v = pair
        except (TypeError, ValueError):
            raise RelationError(f"not a pair: {pair!r}") from None
        if not (isinstance(u, int) and isinstance(v, int) and 1 <= u <= n and 1 <= v <= n):
            raise RelationError(f"pair {tuple(pair)!r} is out of range for n={n}")
        if u != v:
            rows[u - 1] |= 1 << (v - 1)
    return IntegerRelation(n, tuple(rows))


def empty(n: int) -> IntegerRelation:
    return IntegerRelation(n, (0,) * n)


def full(n: int) -> IntegerRelation:
    m = _full(n)
    return IntegerRelation(n, tuple(m & ~(1 << u) for u in range(n)))


def increasing_chain(n: int) -> IntegerRelation:
    """1 < 2 < ... < n as a total order."""
    return IntegerRelation(n, tuple(_full(n) & ~_full(u + 1) for u in range(n)))


def decreasing_chain(n: int) -> IntegerRelation:
    return IntegerRelation(n, tuple(_full(u) for u in range(n)))


# Off-diagonal positions in row-major order; a "code" is an int whose bits
# follow this order, giving a bijection between range(2**(n*(n-1))) and IRel_n.
def off_diagonal(n: int) -> list:
    return [(u, v) for u in range(n) for v in range(n) if u != v]


def from_code(n: int, code: int) -> IntegerRelation:
    rows = [0] * n
    for i, (u, v) in enumerate(off_diagonal(n)):
        if code >> i & 1:
            rows[u] |= 1 << v
    return IntegerRelation(n, tuple(rows))


def relation_count(n: int) -> int:
    return 1 << (n * (n - 1))


def all_relations(n: int) -> Iterator[IntegerRelation]:
    """Every relation of IRel_n, subject to the enumeration ceiling."""
    check_limit(n)
    cells = off_diagonal(n)
    for bits in product((0, 1), repeat=len(cells)):
        rows = [0] * n
        for (u, v), b in zip(cells, bits):
            if b:
                rows[u] |= 1 << v
        yield _make(n, tuple(rows))


def _same_size(r: IntegerRelation, s: IntegerRelation) -> None:
    if r.n != s.n:
        raise RelationError(f"size mismatch: {r.n} vs {s.n}")


def _inc_rows(r):
    return [row & ~_full(u + 1) for u, row in enumerate(r.rows)]


def _dec_rows(r):
    return [row & _full(u) for u, row in enumerate(r.rows)]


def inc(r: IntegerRelation) -> IntegerRelation:
    return IntegerRelation(r.n, tuple(_inc_rows(r)))


def dec(r: IntegerRelation) -> IntegerRelation:
    return IntegerRelation(r.n, tuple(_dec_rows(r)))


def union(r: IntegerRelation, s: IntegerRelation) -> IntegerRelation:
    _same_size(r, s)
    return IntegerRelation(r.n, tuple(a | b for a, b in zip(r.rows, s.rows)))


def intersection(r: IntegerRelation, s: IntegerRelation) -> IntegerRelation:
    _same_size(r, s)
    return IntegerRelation(r.n, tuple(a & b for a, b in zip(r.rows, s.rows)))


def difference(r: IntegerRelation, s: IntegerRelation) -> IntegerRelation:
    _same_size(r, s)
    return IntegerRelation(r.n, tuple(a & ~b for a, b in zip(r.rows, s.rows)))


def is_subset(r: IntegerRelation, s: IntegerRelation) -> bool:
    _same_size(r, s)
    return all(a & ~b == 0 for a, b in zip(r.rows, s.rows))


def weak_le(r: IntegerRelation, s: IntegerRelation) -> bool:
    """r <= s iff r has more increasing and fewer decreasing pairs than s."""
    _same_size(r, s)
    for u, (a, b) in enumerate(zip(r.rows, s.rows)):
        low = _full(u)
        if (b & ~a) & ~low:  # increasing pair of s missing from r
            return False
        if (a & ~b) & low:  # decreasing pair of r missing from s
            return False
    return True


def meet(r: IntegerRelation, s: IntegerRelation) -> IntegerRelation:
    _same_size(r, s)
    rows = []
    for u, (a, b) in enumerate(zip(r.rows, s.rows)):
        low = _full(u)
        rows.append(((a | b) & ~low) | (a & b & low))
    return IntegerRelation(r.n, tuple(rows))


def join(r: IntegerRelation, s: IntegerRelation) -> IntegerRelation:
    _same_size(r, s)
    rows = []
    for u, (a, b) in enumerate(zip(r.rows, s.rows)):
        low = _full(u)
        rows.append((a & b & ~low) | ((a | b) & low))
    return IntegerRelation(r.n, tuple(rows))


def weak_rank(r: IntegerRelation) -> int:
    """Rank in the graded lattice IRel_n: missing increasing plus present decreasing pairs."""
    n = r.n
    total_inc = n * (n - 1) // 2
    return total_inc - len(inc(r)) + len(dec(r))


def weak_covers(r: IntegerRelation) -> list:
    """Upper covers of r in the weak order: drop one increasing or add one decreasing pair."""
    out = []
    for u, row in enumerate(r.rows):
        for v in range(r.n):
            if v == u:
                continue
            bit = 1 << v
            if v > u and row & bit:
                out.append(_with_row(r, u, row & ~bit))
            elif v < u and not row & bit:
                out.append(_with_row(r, u, row | bit))
    return out


def _with_row(r, u, row):
    rows = list(r.rows)
    rows[u] = row
    return IntegerRelation(r.n, tuple(rows))


def _check_positions(n: int, xs: Sequence[int]) -> list:
    xs = list(xs)
    if sorted(set(xs)) != xs:
        xs = sorted(set(xs))
    for x in xs:
        if not (isinstance(x, int) and 1 <= x <= n):
            raise RelationError(f"position {x!r} is out of range for n={n}")
    return xs


def restriction(r: IntegerRelation, xs: Iterable[int]) -> IntegerRelation:
    """Restrict r to the positions xs and standardize them to 1..len(xs)."""
    xs = _check_positions(r.n, xs)
    rows = []
    for x in xs:
        src = r.rows[x - 1]
        row = 0
        for j, y in enumerate(xs):
            if src >> (y - 1) & 1:
                row |= 1 << j
        rows.append(row)
    return _make(len(xs), tuple(rows))


def standardize(xs: Iterable[int], within: Sequence[int]) -> list:
    """Replace each element of xs by its rank (1-based) inside the sorted ``within``."""
    index = {x: i + 1 for i, x in enumerate(sorted(within))}
    return sorted(index[x] for x in xs)


def shift(r: IntegerRelation, m: int) -> frozenset:
    return frozenset((u + m, v + m) for u, v in r.pairs())


def _juxtapose(r: IntegerRelation, s: IntegerRelation) -> list:
    m = r.n
    return list(r.rows) + [row << m for row in s.rows]


def under_product(r: IntegerRelation, s: IntegerRelation) -> IntegerRelation:
    """r, shifted s, and every increasing pair between them."""
    m, n = r.n, s.n
    rows = _juxtapose(r, s)
    cross = _full(n) << m
    for u in range(m):
        rows[u] |= cross
    return IntegerRelation(m + n, tuple(rows))


def over_product(r: IntegerRelation, s: IntegerRelation) -> IntegerRelation:
    """r, shifted s, and every decreasing pair between them."""
    m, n = r.n, s.n
    rows = _juxtapose(r, s)
    for u in range(m, m + n):
        rows[u] |= _full(m)
    return IntegerRelation(m + n, tuple(rows))


def shifted_shuffle(r: IntegerRelation, s: IntegerRelation) -> Iterator[IntegerRelation]:
    """All relations on [m+n] restricting to r on [m] and to s on the rest.

    Yields 2**(2mn) relations: every choice of increasing cross pairs I and
    decreasing cross pairs D.
    """
    m, n = r.n, s.n
    base = _juxtapose(r, s)
    size = 1 << (m * n)
    mask_n, mask_m = _full(n), _full(m)
    for i_bits in range(size):
        rows = base[:]
        for u in range(m):
            rows[u] |= (i_bits >> (u * n) & mask_n) << m
        for d_bits in range(size):
            out = rows[:]
            for k in range(n):
                out[m + k] |= d_bits >> (k * m) & mask_m
            yield _make(m + n, tuple(out))


def total_cuts(t: IntegerRelation) -> list:
    """Every (X, Y) with X x Y inside t and no pair of t going from Y to X.

    Trivial cuts are included.  Cuts are listed by increasing bitmask of X.
    """
    n = t.n
    everything = _full(n)
    cuts = []
    for xmask in range(1 << n):
        ymask = everything & ~xmask
        ok = True
        for u in range(n):
            row = t.rows[u]
            if xmask >> u & 1:
                if row & ymask != ymask:
                    ok = False
                    break
            elif row & xmask:
                ok = False
                break
        if ok:
            cuts.append(
                TotalCut(
                    tuple(u + 1 for u in range(n) if xmask >> u & 1),
                    tuple(u + 1 for u in range(n) if ymask >> u & 1),
                )
            )
    return cuts


def _glue(r: IntegerRelation, s: IntegerRelation, xs: Sequence[int]) -> IntegerRelation:
    """The relation with cut (xs, rest) whose restrictions are r and s."""
    N = r.n + s.n
    xset = set(xs)
    ys = [p for p in range(1, N + 1) if p not in xset]
    ymask = sum(1 << (y - 1) for y in ys)
    rows = [0] * N
    for i, x in enumerate(xs):
        row = ymask
        src = r.rows[i]
        for j, x2 in enumerate(xs):
            if src >> j & 1:
                row |= 1 << (x2 - 1)
        rows[x - 1] = row
    for i, y in enumerate(ys):
        row = 0
        src = s.rows[i]
        for j, y2 in enumerate(ys):
            if src >> j & 1:
                row |= 1 << (y2 - 1)
        rows[y - 1] = row
    return _make(N, tuple(rows))


def convolution(r: IntegerRelation, s: IntegerRelation) -> Iterator[IntegerRelation]:
    """All relations with a total cut (X, Y) restricting to r on X and s on Y."""
    N = r.n + s.n
    for xs in combinations(range(1, N + 1), r.n):
        yield _glue(r, s, xs)


def _prefix_cut(t: IntegerRelation, i: int, over: bool = False) -> bool:
    left, right = _full(i), _full(t.n) & ~_full(i)
    for u, row in enumerate(t.rows):
        if u < i:
            if row & right != (0 if over else right):
                return False
        elif row & left != (left if over else 0):
            return False
    return True


def primitive_cuts(t: IntegerRelation) -> list:
    """Every i such that ([i], [n] minus [i]) is a total cut of t."""
    return [i for i in range(t.n + 1) if _prefix_cut(t, i)]


def over_primitive_cuts(t: IntegerRelation) -> list:
    """Every i such that t = over_product(t restricted to [i], the rest)."""
    return [i for i in range(t.n + 1) if _prefix_cut(t, i, over=True)]


def is_under_indecomposable(t: IntegerRelation) -> bool:
    if t.n == 0:
        raise RelationError("indecomposability is undefined for the empty relation of size 0")
    return primitive_cuts(t) == [0, t.n]


def is_over_indecomposable(t: IntegerRelation) -> bool:
    if t.n == 0:
        raise RelationError("indecomposability is undefined for the empty relation of size 0")
    return over_primitive_cuts(t) == [0, t.n]


def is_antisymmetric(t: IntegerRelation) -> bool:
    for u, row in enumerate(t.rows):
        for v in range(u + 1, t.n):
            if row >> v & 1 and t.rows[v] >> u & 1:
                return False
    return True


def is_transitive(t: IntegerRelation) -> bool:
    rows = t.rows
    for u, row in enumerate(rows):
        allowed = row | (1 << u)
        r = row
        while r:
            low = r & -r
            v = low.bit_length() - 1
            if rows[v] & ~allowed:
                return False
            r ^= low
    return True


def is_poset(t: IntegerRelation) -> bool:
    return is_antisymmetric(t) and is_transitive(t)


def transitive_closure(t: IntegerRelation) -> IntegerRelation:
    rows = list(t.rows)
    n = t.n
    for k in range(n):
        bit = 1 << k
        for u in range(n):
            if rows[u] & bit:
                rows[u] |= rows[k]
    return IntegerRelation(n, tuple(row & ~(1 << u) for u, row in enumerate(rows)))


def transpose(t: IntegerRelation) -> IntegerRelation:
    rows = [0] * t.n
    for u, v in t.pairs():
        rows[v - 1] |= 1 << (u - 1)
    return IntegerRelation(t.n, tuple(rows))


def are_comparable(t: IntegerRelation, a: int, b: int) -> bool:
    return (a, b) in t or (b, a) in t


def weak_interval(lo: IntegerRelation, hi: IntegerRelation) -> Iterator[IntegerRelation]:
    """Every t with lo <= t <= hi.  IRel_n is boolean, so intervals are cubes."""
    _same_size(lo, hi)
    if not weak_le(lo, hi):
        return
    # free cells: increasing pairs of lo absent from hi, decreasing pairs of hi absent from lo
    free = [(u, v) for u in range(lo.n) for v in range(lo.n)
            if (lo.rows[u] ^ hi.rows[u]) >> v & 1]
    base = list(lo.rows)
    for bits in product((0, 1), repeat=len(free)):
        rows = base[:]
        for (u, v), b in zip(free, bits):
            if b:
                rows[u] ^= 1 << v
        yield _make(lo.n, tuple(rows))


def poset_shuffle(r: IntegerRelation, s: IntegerRelation) -> Iterator[IntegerRelation]:
    """The posets among shifted_shuffle(r, s), for posets r and s.

    Each cross pair is either unrelated or related in one direction, so only
    3**(mn) candidates are tested instead of 4**(mn).
    """
    if not (is_poset(r) and is_poset(s)):
        raise RelationError("poset_shuffle needs two posets")
    m, n = r.n, s.n
    base = _juxtapose(r, s)
    cells = [(a, b) for a in range(m) for b in range(m, m + n)]
    for choice in product((0, 1, 2), repeat=len(cells)):
        rows = base[:]
        for (a, b), c in zip(cells, choice):
            if c == 1:
                rows[a] |= 1 << b
            elif c == 2:
                rows[b] |= 1 << a
        t = _make(m + n, tuple(rows))
        if is_transitive(t):
            yield t

"""Poset families and their classical avatars.

Classical objects are plain tuples:

* permutation: tuple of the values 1..n in one-line notation;
* ordered partition: tuple of sorted tuples (blocks), e.g. ((1, 2, 5), (3, 7), (4, 6));
* binary tree: ``None`` for a leaf, ``(left, right)`` for a node;
* Schröder tree: ``None`` for a leaf, a tuple of at least two children for a node.

Tree vertices (angles for Schröder trees) are labeled in inorder.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterator, Optional

import numpy as np

from . import relations as rel
from .config import check_limit
from .relations import IntegerRelation, RelationError

CONSTRUCT_LIMIT = 8


class FamilyTag(str, enum.Enum):
    IRel = "IRel"
    IPos = "IPos"
    WOEP = "WOEP"
    IWOIP = "IWOIP"
    DWOIP = "DWOIP"
    WOIP = "WOIP"
    WOFP = "WOFP"
    TOEP = "TOEP"
    TOIP = "TOIP"
    TOFP = "TOFP"

    def __str__(self):
        return self.value


class FamilyError(ValueError):
    pass


def family(tag) -> FamilyTag:
    try:
        return FamilyTag(str(tag))
    except ValueError:
        raise FamilyError(f"unknown family {tag!r}; expected one of {[t.value for t in FamilyTag]}") from None


# --- recognizers ---------------------------------------------------------------

def _has(p: IntegerRelation, a: int, b: int) -> bool:
    return bool(p.rows[a - 1] >> (b - 1) & 1)


def _comparable(p, a, b):
    return _has(p, a, b) or _has(p, b, a)


def _triples(n):
    return combinations(range(1, n + 1), 3)


def is_total(p: IntegerRelation) -> bool:
    return all(_comparable(p, a, b) for a, b in combinations(range(1, p.n + 1), 2))


def _iwoip_ok(p):
    return all(not _has(p, a, c) or _has(p, a, b) or _has(p, b, c) for a, b, c in _triples(p.n))


def _dwoip_ok(p):
    return all(not _has(p, c, a) or _has(p, b, a) or _has(p, c, b) for a, b, c in _triples(p.n))


def _wofp_ok(p):
    for a, b, c in _triples(p.n):
        if _comparable(p, a, c):
            continue
        if _has(p, a, b) != _has(p, c, b) or _has(p, b, a) != _has(p, b, c):
            return False
    return True


def _toip_ok(p):
    for a, b, c in _triples(p.n):
        if _has(p, a, c) and not _has(p, b, c):
            return False
        if _has(p, c, a) and not _has(p, b, a):
            return False
    return True


def _incomparable_pairs(p):
    return [(a, c) for a, c in combinations(range(1, p.n + 1), 2) if not _comparable(p, a, c)]


def _toep_ok(p):
    return all(
        any(_has(p, a, b) and _has(p, c, b) for b in range(a + 1, c))
        for a, c in _incomparable_pairs(p)
    )


def _tofp_ok(p):
    for a, c in _incomparable_pairs(p):
        between = range(a + 1, c)
        if any(not _has(p, b, a) and not _has(p, b, c) for b in between):
            continue
        if all(_has(p, b, a) and _has(p, b, c) for b in between):
            continue
        return False
    return True


_CONDITIONS = {
    FamilyTag.IPos: (),
    FamilyTag.WOEP: (is_total,),
    FamilyTag.IWOIP: (_iwoip_ok,),
    FamilyTag.DWOIP: (_dwoip_ok,),
    FamilyTag.WOIP: (_iwoip_ok, _dwoip_ok),
    FamilyTag.WOFP: (_iwoip_ok, _dwoip_ok, _wofp_ok),
    FamilyTag.TOIP: (_toip_ok,),
    FamilyTag.TOEP: (_toip_ok, _toep_ok),
    FamilyTag.TOFP: (_toip_ok, _tofp_ok),
}


def is_in_family(p: IntegerRelation, tag) -> bool:
    tag = family(tag)
    if tag is FamilyTag.IRel:
        return True
    if not rel.is_poset(p):
        return False
    return all(cond(p) for cond in _CONDITIONS[tag])


def families_of(p: IntegerRelation) -> list:
    return [t for t in FamilyTag if is_in_family(p, t)]


# --- permutations --------------------------------------------------------------

def check_permutation(sigma) -> tuple:
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise FamilyError(f"{sigma!r} is not a permutation of 1..{len(sigma)}")
    return sigma


def parse_permutation(text: str) -> tuple:
    """'2751346' or '2,7,5,1,3,4,6' -> (2, 7, 5, 1, 3, 4, 6)."""
    text = text.strip()
    parts = text.split(",") if "," in text else list(text)
    return check_permutation(int(x) for x in parts if x.strip())


def inversions(sigma) -> frozenset:
    """Pairs of values a < b with b written before a."""
    pos = {v: i for i, v in enumerate(sigma)}
    return frozenset((a, b) for a, b in combinations(range(1, len(sigma) + 1), 2) if pos[a] > pos[b])


def permutation_le(sigma, tau) -> bool:
    return inversions(sigma) <= inversions(tau)


def all_permutations(n: int) -> Iterator[tuple]:
    return permutations(range(1, n + 1))


def from_permutation(sigma) -> IntegerRelation:
    """The total order sigma(1) < sigma(2) < ... < sigma(n)."""
    sigma = check_permutation(sigma)
    n = len(sigma)
    rows = [0] * n
    for i, u in enumerate(sigma):
        for v in sigma[i + 1:]:
            rows[u - 1] |= 1 << (v - 1)
    return IntegerRelation(n, tuple(rows))


def to_permutation(p: IntegerRelation) -> tuple:
    if not is_in_family(p, FamilyTag.WOEP):
        raise FamilyError(f"{p!r} is not a total order")
    # in a total order, an element's number of successors fixes its position
    by_rank = sorted(range(1, p.n + 1), key=lambda u: -bin(p.rows[u - 1]).count("1"))
    return tuple(by_rank)


def from_interval(sigma, sigma_prime) -> IntegerRelation:
    """Poset whose linear extensions are the weak-order interval [sigma, sigma']."""
    if not permutation_le(sigma, sigma_prime):
        raise FamilyError(f"{tuple(sigma)} is not below {tuple(sigma_prime)} in the weak order")
    return rel.union(rel.inc(from_permutation(sigma_prime)), rel.dec(from_permutation(sigma)))


def linear_extensions(p: IntegerRelation) -> list:
    return [s for s in all_permutations(p.n) if rel.is_subset(p, from_permutation(s))]


# --- ordered partitions --------------------------------------------------------

def check_ordered_partition(blocks) -> tuple:
    blocks = tuple(tuple(sorted(b)) for b in blocks)
    flat = [x for b in blocks for x in b]
    if any(not b for b in blocks) or sorted(flat) != list(range(1, len(flat) + 1)):
        raise FamilyError(f"{blocks!r} is not an ordered partition of 1..{len(flat)}")
    return blocks


def parse_ordered_partition(text: str) -> tuple:
    """'125|37|46' -> ((1, 2, 5), (3, 7), (4, 6)).  Blocks may use commas."""
    blocks = []
    for chunk in text.strip().split("|"):
        items = chunk.split(",") if "," in chunk else list(chunk)
        blocks.append(tuple(int(x) for x in items if x.strip()))
    return check_ordered_partition(blocks)


def all_ordered_partitions(n: int) -> Iterator[tuple]:
    def rec(remaining):
        if not remaining:
            yield ()
            return
        items = sorted(remaining)
        for k in range(1, len(items) + 1):
            for first in combinations(items, k):
                for rest in rec(remaining - set(first)):
                    yield (first,) + rest

    return rec(set(range(1, n + 1)))


def from_ordered_partition(blocks) -> IntegerRelation:
    """u < v iff the block of u comes before the block of v."""
    blocks = check_ordered_partition(blocks)
    n = sum(len(b) for b in blocks)
    rows = [0] * n
    later = 0
    for b in reversed(blocks):
        for u in b:
            rows[u - 1] = later
        for u in b:
            later |= 1 << (u - 1)
    return IntegerRelation(n, tuple(rows))


def restrict_ordered_partition(blocks, values) -> tuple:
    """Keep the given values, drop emptied blocks (labels unchanged)."""
    values = set(values)
    out = tuple(tuple(x for x in b if x in values) for b in blocks)
    return tuple(b for b in out if b)


# --- binary trees --------------------------------------------------------------

def tree_size(t) -> int:
    if t is None:
        return 0
    return 1 + tree_size(t[0]) + tree_size(t[1])


@lru_cache(maxsize=None)
def all_binary_trees(n: int) -> tuple:
    if n == 0:
        return (None,)
    return tuple(
        (left, right)
        for k in range(n)
        for left in all_binary_trees(k)
        for right in all_binary_trees(n - 1 - k)
    )


def _tree_pairs(t, offset, out):
    """Collect (descendant, ancestor) pairs; return the labels of the subtree."""
    if t is None:
        return []
    left = _tree_pairs(t[0], offset, out)
    root = offset + len(left) + 1
    right = _tree_pairs(t[1], root, out)
    out.extend((i, root) for i in left)
    out.extend((i, root) for i in right)
    return left + [root] + right


def from_binary_tree(t) -> IntegerRelation:
    """i < j iff vertex i is a descendant of vertex j."""
    pairs = []
    labels = _tree_pairs(t, 0, pairs)
    return rel.from_pairs(len(labels), pairs)


def to_binary_tree(p: IntegerRelation):
    if not is_in_family(p, FamilyTag.TOEP):
        raise FamilyError(f"{p!r} is not a binary tree poset")

    def build(lo, hi):
        if lo > hi:
            return None
        root = next(j for j in range(lo, hi + 1)
                    if all(i == j or _has(p, i, j) for i in range(lo, hi + 1)))
        return (build(lo, root - 1), build(root + 1, hi))

    return build(1, p.n)


def bst_insert(sigma):
    """Binary search tree insertion of sigma, read from right to left."""
    sigma = check_permutation(sigma)
    children = {}

    def insert(node, x):
        side = 0 if x < node else 1
        child = children[node][side]
        if child is None:
            children[node][side] = x
            children[x] = [None, None]
        else:
            insert(child, x)

    if not sigma:
        return None
    root = sigma[-1]
    children[root] = [None, None]
    for x in reversed(sigma[:-1]):
        insert(root, x)

    def freeze(v):
        if v is None:
            return None
        left, right = children[v]
        return (freeze(left), freeze(right))

    return freeze(root)


def right_rotations(t) -> list:
    """Trees obtained by one right rotation ((A, B), C) -> (A, (B, C)) anywhere in t."""
    if t is None:
        return []
    left, right = t
    out = []
    if left is not None:
        out.append((left[0], (left[1], right)))
    out.extend((l2, right) for l2 in right_rotations(left))
    out.extend((left, r2) for r2 in right_rotations(right))
    return out


def left_rotations(t) -> list:
    if t is None:
        return []
    left, right = t
    out = []
    if right is not None:
        out.append(((left, right[0]), right[1]))
    out.extend((l2, right) for l2 in left_rotations(left))
    out.extend((left, r2) for r2 in left_rotations(right))
    return out


@lru_cache(maxsize=None)
def tamari_up_set(t) -> frozenset:
    """Everything reachable from t by right rotations (t included)."""
    seen = {t}
    frontier = [t]
    while frontier:
        nxt = []
        for s in frontier:
            for u in right_rotations(s):
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return frozenset(seen)


def tamari_le(t, t_prime) -> bool:
    if tree_size(t) != tree_size(t_prime):
        return False
    if tree_size(t) > CONSTRUCT_LIMIT:
        raise FamilyError(f"Tamari comparison is limited to size {CONSTRUCT_LIMIT}")
    return t_prime in tamari_up_set(t)


def from_tree_interval(t, t_prime) -> IntegerRelation:
    """Poset of the Tamari interval [t, t']: increasing part of t', decreasing part of t."""
    if not tamari_le(t, t_prime):
        raise FamilyError("the first tree is not below the second in the Tamari order")
    return rel.union(rel.inc(from_binary_tree(t_prime)), rel.dec(from_binary_tree(t)))


def tamari_intervals(n: int) -> Iterator[tuple]:
    for t in all_binary_trees(n):
        for u in sorted(tamari_up_set(t), key=repr):
            yield t, u


# --- Schröder trees ------------------------------------------------------------

def schroder_size(s) -> int:
    if s is None:
        return 0
    return len(s) - 1 + sum(schroder_size(c) for c in s)


def check_schroder(s):
    if s is None:
        return None
    if not isinstance(s, (tuple, list)) or len(s) < 2:
        raise FamilyError(f"Schröder nodes need at least two children, got {s!r}")
    return tuple(check_schroder(c) for c in s)


@lru_cache(maxsize=None)
def all_schroder_trees(n: int) -> tuple:
    """Schröder trees with n angles."""
    if n == 0:
        return (None,)
    out = []
    for k in range(2, n + 2):  # number of children
        rest = n - (k - 1)
        for sizes in _weak_compositions(rest, k):
            for kids in product(*(all_schroder_trees(z) for z in sizes)):
                out.append(tuple(kids))
    return tuple(out)


def _weak_compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def _schroder_pairs(s, offset, out):
    if s is None:
        return []
    labels = []
    child_labels = []
    cursor = offset
    angles = []
    for idx, child in enumerate(s):
        got = _schroder_pairs(child, cursor, out)
        child_labels.append(got)
        labels.extend(got)
        cursor += len(got)
        if idx < len(s) - 1:
            cursor += 1
            angles.append(cursor)
            labels.append(cursor)
    for t, j in enumerate(angles):
        for i in child_labels[t] + child_labels[t + 1]:
            out.append((i, j))
    return labels


def from_schroder_tree(s) -> IntegerRelation:
    """i < j iff angle i lies in a child directly left or right of angle j."""
    s = check_schroder(s)
    pairs = []
    labels = _schroder_pairs(s, 0, pairs)
    return rel.from_pairs(len(labels), pairs)


def binary_as_schroder(t):
    if t is None:
        return None
    return (binary_as_schroder(t[0]), binary_as_schroder(t[1]))


def schroder_insert(blocks):
    """Schröder tree of an ordered partition: the last block labels the root angles."""
    blocks = check_ordered_partition(blocks)

    def build(values, part):
        if not values:
            return None
        root = sorted(part[-1])
        gaps = []
        lo = min(values) - 1
        for b in root + [max(values) + 1]:
            gaps.append([v for v in values if lo < v < b])
            lo = b
        rest = part[:-1]
        return tuple(build(g, restrict_ordered_partition(rest, g)) for g in gaps)

    n = sum(len(b) for b in blocks)
    return build(list(range(1, n + 1)), blocks)


# --- extensions ----------------------------------------------------------------

def maxle(p: IntegerRelation) -> IntegerRelation:
    """Weak-order maximal linear extension: orient each incomparable a < b as b before a."""
    if not is_in_family(p, FamilyTag.IWOIP):
        raise FamilyError(f"{p!r} is not in IWOIP")
    rows = list(p.rows)
    for a, b in _incomparable_pairs(p):
        rows[b - 1] |= 1 << (a - 1)
    return IntegerRelation(p.n, tuple(rows))


def minle(p: IntegerRelation) -> IntegerRelation:
    """Weak-order minimal linear extension: orient each incomparable a < b as a before b."""
    if not is_in_family(p, FamilyTag.DWOIP):
        raise FamilyError(f"{p!r} is not in DWOIP")
    rows = list(p.rows)
    for a, b in _incomparable_pairs(p):
        rows[a - 1] |= 1 << (b - 1)
    return IntegerRelation(p.n, tuple(rows))


# --- enumeration ---------------------------------------------------------------

@lru_cache(maxsize=None)
def poset_codes(n: int) -> np.ndarray:
    """Codes (see relations.from_code) of every poset on [n], by a vectorized sweep."""
    check_limit(n, "posets")
    cells = rel.off_diagonal(n)
    index = {c: k for k, c in enumerate(cells)}
    codes = np.arange(1 << len(cells), dtype=np.uint64)

    def bit(u, v):
        return (codes >> np.uint64(index[(u, v)])) & np.uint64(1)

    ok = np.ones(codes.shape, dtype=bool)
    for u, v in combinations(range(n), 2):
        ok &= (bit(u, v) & bit(v, u)) == 0
    for u, v, w in permutations(range(n), 3):
        ok &= (bit(u, v) & bit(v, w) & ~bit(u, w) & np.uint64(1)) == 0
    return codes[ok]


def all_posets(n: int) -> list:
    return [rel.from_code(n, int(c)) for c in poset_codes(n)]


def enumerate_family(n: int, tag, mode: str = "filter") -> Iterator[IntegerRelation]:
    """Stream the members of a family of size n.

    ``filter`` scans IRel_n (posets are pre-screened by a vectorized sweep).
    ``construct`` builds members from classical objects; families without a
    classical avatar (IRel, IPos, IWOIP, DWOIP) fall back to filtering.
    """
    tag = family(tag)
    if mode == "filter":
        return _filtered(n, tag)
    if mode != "construct":
        raise FamilyError(f"unknown mode {mode!r}")
    if n > CONSTRUCT_LIMIT:
        raise FamilyError(f"construct mode is limited to n <= {CONSTRUCT_LIMIT}")
    builder = _BUILDERS.get(tag)
    if builder is None:
        return _filtered(n, tag)
    return _distinct(builder(n))


def _filtered(n, tag):
    if tag is FamilyTag.IRel:
        yield from rel.all_relations(n)
        return
    for p in all_posets(n):
        if is_in_family(p, tag):
            yield p


def _distinct(stream):
    # distinct classical objects must give distinct posets; check, don't assume
    seen = set()
    for p in stream:
        if p in seen:
            raise FamilyError(f"construction produced {p!r} twice")
        seen.add(p)
        yield p


def _woip_construct(n):
    perms = list(all_permutations(n))
    invs = {s: inversions(s) for s in perms}
    for s in perms:
        for t in perms:
            if invs[s] <= invs[t]:
                yield from_interval(s, t)


_BUILDERS = {
    FamilyTag.WOEP: lambda n: (from_permutation(s) for s in all_permutations(n)),
    FamilyTag.WOIP: _woip_construct,
    FamilyTag.WOFP: lambda n: (from_ordered_partition(b) for b in all_ordered_partitions(n)),
    FamilyTag.TOEP: lambda n: (from_binary_tree(t) for t in all_binary_trees(n)),
    FamilyTag.TOIP: lambda n: (from_tree_interval(t, u) for t, u in tamari_intervals(n)),
    FamilyTag.TOFP: lambda n: (from_schroder_tree(s) for s in all_schroder_trees(n)),
}


def family_members(n: int, tag) -> frozenset:
    """Cached set of members, built constructively where possible."""
    return _members(n, family(tag))


@lru_cache(maxsize=None)
def _members(n, tag):
    mode = "construct" if tag in _BUILDERS else "filter"
    return frozenset(enumerate_family(n, tag, mode))


def tree_from_json(data):
    if data is None:
        return None
    if isinstance(data, list) and len(data) == 2:
        return (tree_from_json(data[0]), tree_from_json(data[1]))
    raise FamilyError(f"binary trees are nested pairs with null leaves, got {data!r}")


def schroder_from_json(data):
    if data is None:
        return None
    return check_schroder(tuple(schroder_from_json(c) for c in data))


def tree_to_json(t) -> Optional[list]:
    if t is None:
        return None
    return [tree_to_json(c) for c in t]

"""Deletion maps from posets onto the families, tree insertions and fibers."""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Callable, Iterator

from . import families as fam
from . import relations as rel
from .families import FamilyTag
from .relations import IntegerRelation


class ProjectionError(ValueError):
    pass


def _require_poset(p: IntegerRelation) -> None:
    if not rel.is_poset(p):
        raise ProjectionError(f"{p!r} is not a poset")


def _has(p, a, b):
    return bool(p.rows[a - 1] >> (b - 1) & 1)


def _reach(p: IntegerRelation, step_ok: Callable) -> list:
    """reach[a] = positions c > a joined to a by a chain a < b1 < ... < c of allowed steps.

    One O(n^3) pass; chains may skip positions.
    """
    n = p.n
    reach = [set() for _ in range(n + 1)]
    for a in range(1, n + 1):
        found = reach[a]
        for y in range(a + 1, n + 1):
            if step_ok(a, y) or any(step_ok(x, y) for x in found if x < y):
                found.add(y)
    return reach


def iwoip_increasing_deletion(p: IntegerRelation) -> IntegerRelation:
    """Drop a < c when a chain a < b1 < ... < c has no increasing relation along any step."""
    _require_poset(p)
    reach = _reach(p, lambda x, y: not _has(p, x, y))
    rows = list(p.rows)
    for a in range(1, p.n + 1):
        for c in reach[a]:
            rows[a - 1] &= ~(1 << (c - 1))
    return IntegerRelation(p.n, tuple(rows))


def dwoip_decreasing_deletion(p: IntegerRelation) -> IntegerRelation:
    """Drop c > a when a chain a < b1 < ... < c has no decreasing relation along any step."""
    _require_poset(p)
    reach = _reach(p, lambda x, y: not _has(p, y, x))
    rows = list(p.rows)
    for a in range(1, p.n + 1):
        for c in reach[a]:
            rows[c - 1] &= ~(1 << (a - 1))
    return IntegerRelation(p.n, tuple(rows))


def woip_deletion(p: IntegerRelation) -> IntegerRelation:
    return iwoip_increasing_deletion(dwoip_decreasing_deletion(p))


def toip_deletion(p: IntegerRelation) -> IntegerRelation:
    """Drop a < c unless b < c for every a < b < c; drop c > a unless b > a likewise."""
    _require_poset(p)
    rows = list(p.rows)
    for a in range(1, p.n + 1):
        for c in range(a + 2, p.n + 1):
            between = range(a + 1, c)
            if _has(p, a, c) and any(not _has(p, b, c) for b in between):
                rows[a - 1] &= ~(1 << (c - 1))
            if _has(p, c, a) and any(not _has(p, b, a) for b in between):
                rows[c - 1] &= ~(1 << (a - 1))
    return IntegerRelation(p.n, tuple(rows))


def woep_id(p: IntegerRelation) -> IntegerRelation:
    return fam.maxle(iwoip_increasing_deletion(p))


def woep_dd(p: IntegerRelation) -> IntegerRelation:
    return fam.minle(dwoip_decreasing_deletion(p))


MAPS = {
    "IWOIPid": iwoip_increasing_deletion,
    "DWOIPdd": dwoip_decreasing_deletion,
    "WOIPd": woip_deletion,
    "TOIPd": toip_deletion,
    "WOEPid": woep_id,
    "WOEPdd": woep_dd,
}

# image family of each map
IMAGES = {
    "IWOIPid": FamilyTag.IWOIP,
    "DWOIPdd": FamilyTag.DWOIP,
    "WOIPd": FamilyTag.WOIP,
    "TOIPd": FamilyTag.TOIP,
    "WOEPid": FamilyTag.WOEP,
    "WOEPdd": FamilyTag.WOEP,
}

_ALIASES = {
    "iwoip-id": "IWOIPid", "dwoip-dd": "DWOIPdd", "woip-d": "WOIPd",
    "toip-d": "TOIPd", "woep-id": "WOEPid", "woep-dd": "WOEPdd",
}


def map_name(name: str) -> str:
    if name in MAPS:
        return name
    key = _ALIASES.get(name.lower())
    if key is None:
        lowered = {k.lower(): k for k in MAPS}
        key = lowered.get(name.lower())
    if key is None:
        raise ProjectionError(f"unknown map {name!r}; expected one of {sorted(MAPS)}")
    return key


def project(name: str, p: IntegerRelation) -> IntegerRelation:
    return MAPS[map_name(name)](p)


def woep_id_fiber_condition(p: IntegerRelation, target: IntegerRelation) -> bool:
    """Local test for woep_id(p) == target, with target a total order.

    Besides the chain condition on removed increasing pairs, target must sit
    above p in the weak order (it keeps no increasing pair p lacks and loses no
    decreasing pair of p).
    """
    if not rel.weak_le(p, target):
        return False
    removed = rel.inc(rel.difference(p, target))
    return all(
        any(_has(target, c, b) and _has(target, b, a) for b in range(a + 1, c))
        for a, c in removed.pairs()
    )


def woep_dd_fiber_condition(p: IntegerRelation, target: IntegerRelation) -> bool:
    if not rel.weak_le(target, p):
        return False
    removed = rel.dec(rel.difference(p, target))
    return all(
        any(_has(target, a, b) and _has(target, b, c) for b in range(a + 1, c))
        for c, a in removed.pairs()
    )


# --- insertion compatibility ---------------------------------------------------

def projection_compatibility(kind: str, obj) -> bool:
    """TOIP deletion of a permutation / interval / ordered partition poset equals its tree poset.

    kind is 'permutation' (obj = sigma), 'interval' (obj = (sigma, sigma')) or
    'partition' (obj = ordered partition).
    """
    if kind == "permutation":
        return toip_deletion(fam.from_permutation(obj)) == fam.from_binary_tree(fam.bst_insert(obj))
    if kind == "interval":
        s, t = obj
        lhs = toip_deletion(fam.from_interval(s, t))
        return lhs == fam.from_tree_interval(fam.bst_insert(s), fam.bst_insert(t))
    if kind == "partition":
        return toip_deletion(fam.from_ordered_partition(obj)) == fam.from_schroder_tree(fam.schroder_insert(obj))
    raise ProjectionError(f"unknown kind {kind!r}")


# --- fibers --------------------------------------------------------------------

@lru_cache(maxsize=None)
def fiber_partition(name: str, n: int, domain: FamilyTag) -> dict:
    """Image point -> sorted tuple of domain members mapping to it."""
    f = MAPS[name]
    groups = defaultdict(list)
    for p in sorted(fam.family_members(n, domain)):
        groups[f(p)].append(p)
    return {k: tuple(v) for k, v in groups.items()}


def fiber(name: str, target: IntegerRelation, domain) -> Iterator[IntegerRelation]:
    """Stream every domain member of the target's size that the map sends to target."""
    name = map_name(name)
    domain = fam.family(domain)
    if not fam.is_in_family(target, IMAGES[name]):
        raise ProjectionError(f"{target!r} is not in the image family {IMAGES[name].value}")
    return iter(fiber_partition(name, target.n, domain).get(target, ()))

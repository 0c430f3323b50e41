"""Small builders shared by the tests."""

from intrel import relations as rel


def R(n, text=""):
    """R(3, "12 13 32") -> relation on [3] with those pairs (single-digit labels)."""
    return rel.from_pairs(n, [(int(p[0]), int(p[1])) for p in text.split()])


def as_pairs(r):
    return frozenset(r.pairs())

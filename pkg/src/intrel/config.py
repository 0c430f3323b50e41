"""Enumeration ceiling shared by every exhaustive sweep."""

import os

ENV_VAR = "INTREL_ENUM_LIMIT"
DEFAULT_LIMIT = 5

_override = None


class EnumerationLimitError(ValueError):
    pass


def enumeration_limit() -> int:
    if _override is not None:
        return _override
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise EnumerationLimitError(f"{ENV_VAR} must be an integer, got {raw!r}") from None


def set_enumeration_limit(n):
    """Override the ceiling for this process (None restores the env/default)."""
    global _override
    _override = n


def check_limit(n: int, what: str = "relations") -> None:
    limit = enumeration_limit()
    if n > limit:
        raise EnumerationLimitError(
            f"enumerating {what} of size {n} exceeds the ceiling {limit} "
            f"(raise it with {ENV_VAR} or --enum-limit)"
        )

"""Sharkovskii ordering on the positive integers.

The order runs 1, 2, 4, 8, ... (all powers of two, ascending) and then every
other integer, grouped by dyadic exponent from large to small and, inside a
group, by odd part from large to small.  The odd number 3 is the maximum.
"""

from typing import NamedTuple, Optional

from .errors import DomainError


class PeriodDecomposition(NamedTuple):
    n: int
    s: int
    q: int


def decompose(n: int) -> PeriodDecomposition:
    """Write ``n = 2**s * q`` with ``q`` odd."""
    if n < 1:
        raise DomainError(f"period must be a positive integer, got {n}")
    s = (n & -n).bit_length() - 1
    return PeriodDecomposition(n, s, n >> s)


def _key(n):
    # ascending sort key: powers of two first by exponent, then the rest
    # with larger s earlier and larger q earlier
    _, s, q = decompose(n)
    if q == 1:
        return (0, s, 0)
    return (1, -s, -q)


def sharkovskii_less(m: int, n: int) -> bool:
    """True when ``m`` comes strictly before ``n`` (``n`` forces ``m``)."""
    return _key(m) < _key(n)


def compare(m: int, n: int) -> str:
    if m == n:
        return "EQUAL"
    return "LESS" if sharkovskii_less(m, n) else "GREATER"


def descending_successor(n: int) -> Optional[int]:
    """The period immediately below ``n`` in the order, or None for 1."""
    _, s, q = decompose(n)
    if q == 1:
        return None if s == 0 else n >> 1
    return (q + 2) << s


def ascending_predecessor(n: int) -> Optional[int]:
    """The period immediately above ``n``, if there is one.

    3 is the maximum and numbers of the form ``2**s * 3`` with ``s >= 1`` have
    no immediate predecessor (the odd parts above them are unbounded).
    """
    _, s, q = decompose(n)
    if q == 1:
        return n << 1
    if q == 3:
        return None
    return (q - 2) << s

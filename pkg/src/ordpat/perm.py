"""Permutations as order patterns.

A :class:`Pattern` ``[p0, ..., p_{L-1}]`` lists *time indices* in increasing
order of value: ``x[p0] < x[p1] < ... < x[p_{L-1}]``. The rank-vector form
(value rank at each time) is ``invert(p)``.
"""
from __future__ import annotations

import json
from itertools import combinations, permutations
from math import factorial
from typing import Iterable, Optional, Sequence

from . import kernels
from .errors import CapExceeded, DuplicateValues, LengthMismatch

DEFAULT_ENUM_CAP = 9


class Pattern(tuple):
    """Immutable permutation of ``0..L-1`` in time-index convention.

    Equality is entrywise and ordering is lexicographic, inherited from
    ``tuple``.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int] = ()):
        t = tuple(int(e) for e in entries)
        if not t:
            raise ValueError("a pattern needs at least one entry")
        if sorted(t) != list(range(len(t))):
            raise ValueError(f"{list(t)} is not a permutation of 0..{len(t) - 1}")
        return super().__new__(cls, t)

    @classmethod
    def _trusted(cls, entries) -> "Pattern":
        return tuple.__new__(cls, entries)

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        """Parse the bracketed text form, e.g. ``"[2,1,0]"``; ``;`` also separates."""
        s = text.strip()
        if not (s.startswith("[") and s.endswith("]")):
            raise ValueError(f"pattern text must be bracketed: {text!r}")
        body = s[1:-1].replace(";", ",")
        return cls(int(tok) for tok in body.split(",") if tok.strip())

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self)) + "]"

    def __repr__(self) -> str:
        return f"Pattern({str(self)})"

    def to_json(self) -> list:
        return list(self)

    @classmethod
    def from_json(cls, data) -> "Pattern":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data)


def all_patterns(L: int) -> list[Pattern]:
    """Every pattern of length ``L`` in lexicographic order."""
    return [Pattern._trusted(p) for p in permutations(range(L))]


def pattern_of_values(xs: Sequence) -> Pattern:
    """Order pattern of distinct comparable values.

    >>> pattern_of_values([0.2, 0.4, 0.8, 0.6])
    Pattern([0,1,3,2])
    """
    if len(xs) == 0:
        raise ValueError("need at least one value")
    order = sorted(range(len(xs)), key=xs.__getitem__)
    for a, b in zip(order, order[1:]):
        if not xs[a] < xs[b]:
            raise DuplicateValues(f"values at positions {a} and {b} are equal")
    return Pattern._trusted(order)


def invert(p: Sequence[int]) -> Pattern:
    q = [0] * len(p)
    for i, v in enumerate(p):
        q[v] = i
    return Pattern._trusted(q)


def mirror(p: Sequence[int]) -> Pattern:
    return Pattern._trusted(tuple(p)[::-1])


def find_consecutive(sigma: Sequence[int], tau: Sequence[int]) -> Optional[int]:
    """Smallest ``i`` such that ``sigma[i:i+len(tau)]`` is order-isomorphic to ``tau``.

    Returns ``None`` when no window matches.
    """
    L, M = len(tau), len(sigma)
    if L > M:
        raise LengthMismatch(f"pattern of length {L} cannot occur in length {M}")
    chain = invert(tau)
    for i in range(M - L + 1):
        if all(sigma[i + chain[k]] < sigma[i + chain[k + 1]] for k in range(L - 1)):
            return i
    return None


def contains_consecutive(sigma: Sequence[int], tau: Sequence[int]) -> bool:
    return find_consecutive(sigma, tau) is not None


def is_outgrowth(sigma: Sequence[int], pi: Sequence[int]) -> bool:
    """True iff ``sigma`` carries a value-shifted copy of ``pi`` in its entries.

    Equivalently the inverse of ``sigma`` contains the inverse of ``pi`` as a
    consecutive pattern.
    """
    if len(pi) >= len(sigma):
        raise LengthMismatch("an outgrowth must be strictly longer than its root")
    return contains_consecutive(invert(sigma), invert(pi))


def _construct_outgrowths(pi: Pattern, M: int) -> set[Pattern]:
    L = len(pi)
    found: set[Pattern] = set()
    for n in range(M - L + 1):
        shifted = [v + n for v in pi]
        rest = [v for v in range(M) if not n <= v < n + L]
        for slots in combinations(range(M), L):
            slot_set = set(slots)
            free = [i for i in range(M) if i not in slot_set]
            for fill in permutations(rest):
                sigma = [0] * M
                for i, v in zip(slots, shifted):
                    sigma[i] = v
                for i, v in zip(free, fill):
                    sigma[i] = v
                found.add(Pattern._trusted(sigma))
    return found


def outgrowth_set(pi: Sequence[int], M: int, cap: int = DEFAULT_ENUM_CAP,
                  construct: bool = True) -> list[Pattern]:
    """All patterns of length ``M`` that are outgrowths of ``pi``, sorted.

    Up to ``cap`` the full symmetric group is filtered by the kernel; above it
    the outgrowths are built directly (every placement of the shifted copy of
    ``pi``) unless ``construct`` is false.
    """
    pi = Pattern(pi)
    if M <= len(pi):
        raise LengthMismatch("M must exceed the pattern length")
    if M <= cap:
        table = kernels.outgrowth_table(M, list(invert(pi)))
        out = {Pattern._trusted(tuple(int(v) for v in row)) for row in table}
    elif construct:
        out = _construct_outgrowths(pi, M)
    else:
        raise CapExceeded(f"M={M} exceeds enumeration cap {cap}")
    return sorted(out)


def outgrowth_count(pi: Sequence[int], M: int, cap: int = DEFAULT_ENUM_CAP) -> int:
    """``len(outgrowth_set(pi, M))`` without materializing the set (M <= cap)."""
    pi = Pattern(pi)
    if M <= len(pi):
        raise LengthMismatch("M must exceed the pattern length")
    if M > cap:
        raise CapExceeded(f"M={M} exceeds enumeration cap {cap}")
    return kernels.count_outgrowths(M, list(invert(pi)))


def elementary_extensions(pi: Sequence[int]) -> list[Pattern]:
    """The ``2(L+1)`` one-step outgrowths of ``pi``.

    Group A inserts the new maximum ``L`` at each position; group B inserts
    ``0`` at each position after incrementing every entry. Duplicates kept.
    """
    p = tuple(pi)
    L = len(p)
    group_a = [Pattern._trusted(p[:i] + (L,) + p[i:]) for i in range(L + 1)]
    up = tuple(v + 1 for v in p)
    group_b = [Pattern._trusted(up[:i] + (0,) + up[i:]) for i in range(L + 1)]
    return group_a + group_b


def elementary_predecessors(sigma: Sequence[int]) -> tuple[Pattern, Pattern]:
    """(drop the maximum, drop the minimum and shift down)."""
    s = tuple(sigma)
    L = len(s)
    if L < 2:
        raise LengthMismatch("need length >= 2")
    drop_max = Pattern._trusted(tuple(v for v in s if v != L - 1))
    drop_min = Pattern._trusted(tuple(v - 1 for v in s if v != 0))
    return drop_max, drop_min


def outgrowth_upper_bound(L: int, M: int) -> int:
    """``(M-L+1) * M! / (M-L)!`` evaluated exactly.

    Only an upper bound on the number of outgrowths while ``(M-L)! <= L!``;
    see :func:`outgrowth_union_bound` for one that holds for all ``M``.
    """
    if not 2 <= L <= M:
        raise ValueError("need 2 <= L <= M")
    return (M - L + 1) * factorial(M) // factorial(M - L)


def single_shift_count(L: int, M: int) -> int:
    """Patterns of length M holding one fixed shifted copy of a length-L pattern: M!/L!."""
    if not 1 <= L <= M:
        raise ValueError("need 1 <= L <= M")
    return factorial(M) // factorial(L)


def outgrowth_union_bound(L: int, M: int) -> int:
    """Union bound ``(M-L+1) * M!/L!`` over the possible value shifts."""
    return (M - L + 1) * single_shift_count(L, M)

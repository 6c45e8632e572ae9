"""Eventually periodic one- and two-sided symbol sequences.

A :class:`SymbolSequence` stands for ``preperiod + period + period + ...``
over the alphabet ``0..N-1``. Construction canonicalizes (primitive period,
shortest preperiod), so two sequences are equal as infinite words exactly when
their fields are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from math import lcm
from typing import Sequence

from .errors import AlphabetMismatch

BISEQ_SEP = "∥"


class Order(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _primitive_root(word: tuple) -> tuple:
    p = len(word)
    for d in range(1, p + 1):
        if p % d == 0 and word[:d] * (p // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class SymbolSequence:
    alphabet_size: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __init__(self, alphabet_size: int, preperiod: Sequence[int] = (),
                 period: Sequence[int] = (0,)):
        N = int(alphabet_size)
        pre = tuple(int(s) for s in preperiod)
        per = tuple(int(s) for s in period)
        if N < 2:
            raise ValueError("alphabet size must be at least 2")
        if not per:
            raise ValueError("period must be nonempty")
        for s in pre + per:
            if not 0 <= s < N:
                raise ValueError(f"symbol {s} outside alphabet 0..{N - 1}")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "alphabet_size", N)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError("one-sided sequences have no negative indices")
        m = len(self.preperiod)
        if i < m:
            return self.preperiod[i]
        return self.period[(i - m) % len(self.period)]

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self[i] for i in range(n))

    def shift(self, k: int = 1) -> "SymbolSequence":
        m, p = len(self.preperiod), len(self.period)
        if k <= m:
            return SymbolSequence(self.alphabet_size, self.preperiod[k:], self.period)
        r = (k - m) % p
        return SymbolSequence(self.alphabet_size, (), self.period[r:] + self.period[:r])

    def is_eventually_top(self) -> bool:
        """True when the sequence ends in an infinite run of ``N-1``."""
        return self.period == (self.alphabet_size - 1,)

    def __str__(self) -> str:
        wide = self.alphabet_size > 10
        join = ",".join if wide else "".join
        return join(map(str, self.preperiod)) + "|" + join(map(str, self.period))

    @classmethod
    def parse(cls, text: str, alphabet_size: int) -> "SymbolSequence":
        """Parse ``"pre|period"``, e.g. ``"201|0"`` for 2,0,1,0,0,..."""
        if text.count("|") != 1:
            raise ValueError(f"expected 'pre|period', got {text!r}")
        pre, per = text.split("|")
        return cls(alphabet_size, _digits(pre), _digits(per))


def _digits(s: str) -> list[int]:
    s = s.strip()
    if not s:
        return []
    if "," in s:
        return [int(t) for t in s.split(",")]
    return [int(c) for c in s]


def compare_sequences(a: SymbolSequence, b: SymbolSequence) -> Order:
    """Lexicographic comparison of two eventually periodic sequences."""
    if a.alphabet_size != b.alphabet_size:
        raise AlphabetMismatch(f"{a.alphabet_size} vs {b.alphabet_size} symbols")
    bound = (len(a.preperiod) + len(b.preperiod)
             + lcm(len(a.period), len(b.period)))
    for i in range(bound):
        x, y = a[i], b[i]
        if x != y:
            return Order.LESS if x < y else Order.GREATER
    return Order.EQUAL


@dataclass(frozen=True)
class Bisequence:
    """Two-sided sequence; ``left`` lists omega_{-1}, omega_{-2}, ... outward."""

    left: SymbolSequence
    right: SymbolSequence

    def __post_init__(self):
        if self.left.alphabet_size != self.right.alphabet_size:
            raise AlphabetMismatch("left and right halves use different alphabets")

    @property
    def alphabet_size(self) -> int:
        return self.right.alphabet_size

    def shift(self, k: int = 1) -> "Bisequence":
        if k < 0:
            raise ValueError("only forward shifts are supported")
        moved = tuple(reversed(self.right.prefix(k)))
        left = SymbolSequence(self.alphabet_size, moved + self.left.preperiod,
                              self.left.period)
        return Bisequence(left, self.right.shift(k))

    def __str__(self) -> str:
        return f"{self.left}{BISEQ_SEP}{self.right}"

    @classmethod
    def parse(cls, text: str, alphabet_size: int) -> "Bisequence":
        sep = BISEQ_SEP if BISEQ_SEP in text else "||"
        if text.count(sep) != 1:
            raise ValueError(f"expected 'left{BISEQ_SEP}pre|period', got {text!r}")
        left, right = text.split(sep)
        return cls(SymbolSequence.parse(left, alphabet_size),
                   SymbolSequence.parse(right, alphabet_size))


def compare_bisequences(a: Bisequence, b: Bisequence) -> Order:
    """Right halves decide; left halves break ties."""
    if a.alphabet_size != b.alphabet_size:
        raise AlphabetMismatch(f"{a.alphabet_size} vs {b.alphabet_size} symbols")
    c = compare_sequences(a.right, b.right)
    if c != Order.EQUAL:
        return c
    return compare_sequences(a.left, b.left)

"""Order patterns of the one- and two-sided shift on N symbols.

Allowed/forbidden decisions come from the exact census of the sawtooth map
x -> N x mod 1, which is order-isomorphic to the one-sided shift through the
base-N digit map. Everything else here (spiral classifier, block screen,
explicit witnesses) is checked against that census in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cmp_to_key
from typing import Optional, Sequence

from .errors import (BadLength, CensusError, DuplicateShifts, HypothesisViolated,
                     LengthTooLong, PeriodicCollision)
from .perm import Pattern, elementary_predecessors, mirror
from .plmaps import cached_census, digits_of
from .sequences import (Bisequence, Order, SymbolSequence, compare_bisequences,
                        compare_sequences)


class Verdict(Enum):
    ALLOWED = "allowed"
    FORBIDDEN = "forbidden"


class Screen(Enum):
    RULED_OUT = "ruled-out"
    INCONCLUSIVE = "inconclusive"


class Family(Enum):
    MINIMAL_SPIRAL = "minimal-spiral"
    SPIRAL_ROOT = "spiral-root"
    PAIRED_ROOT = "paired-root"


def _pattern_of_shifts(shifts, compare, L, err):
    def cmp(i, j):
        return int(compare(shifts[i], shifts[j]))

    order = sorted(range(L), key=cmp_to_key(cmp))
    for i, j in zip(order, order[1:]):
        if compare(shifts[i], shifts[j]) == Order.EQUAL:
            raise err(f"shifts {min(i, j)} and {max(i, j)} coincide")
    return Pattern._trusted(order)


def pattern_of_sequence(w: SymbolSequence, L: int) -> Pattern:
    """Pattern of the shifts w, Sw, ..., S^{L-1}w in lexicographic order."""
    if L < 1:
        raise ValueError("L must be positive")
    shifts = [w.shift(k) for k in range(L)]
    return _pattern_of_shifts(shifts, compare_sequences, L, PeriodicCollision)


def pattern_of_bisequence(w: Bisequence, L: int) -> Pattern:
    """Same for a two-sided sequence; left halves only break exact ties."""
    if L < 1:
        raise ValueError("L must be positive")
    shifts = [w.shift(k) for k in range(L)]
    return _pattern_of_shifts(shifts, compare_bisequences, L, DuplicateShifts)


@dataclass(frozen=True)
class SegmentPartition:
    """Split of 0..L-1 into D >= 2 consecutive increasing runs."""

    lengths: tuple

    def __post_init__(self):
        h = tuple(int(x) for x in self.lengths)
        if len(h) < 2:
            raise ValueError("a segment partition needs at least two segments")
        if any(x < 1 for x in h):
            raise ValueError("segment lengths must be positive")
        object.__setattr__(self, "lengths", h)

    @property
    def D(self) -> int:
        return len(self.lengths)

    @property
    def total(self) -> int:
        return sum(self.lengths)

    @property
    def starts(self) -> tuple:
        out, e = [], 0
        for h in self.lengths:
            out.append(e)
            e += h
        return tuple(out)

    def segment(self, d: int) -> tuple:
        """Segment ``d`` (1-based) as an increasing tuple."""
        e = self.starts[d - 1]
        return tuple(range(e, e + self.lengths[d - 1]))


def all_partitions(L: int, min_first: int = 1):
    """Every SegmentPartition of 0..L-1 with first length >= ``min_first``."""
    def comps(n):
        if n == 0:
            yield ()
            return
        for k in range(1, n + 1):
            for rest in comps(n - k):
                yield (k,) + rest

    for first in range(min_first, L):
        for rest in comps(L - first):
            yield SegmentPartition((first,) + rest)


def spiralling_pattern(part: SegmentPartition, mirrored: bool = False) -> Pattern:
    """Alternate reversed and increasing segments outward from the centre.

    Normal: ``[..., rev p3, rev p1, p2, p4, ...]``;
    mirrored: ``[..., rev p4, rev p2, p1, p3, ...]``.
    """
    left, right = [], []
    for d in range(1, part.D + 1):
        seg = part.segment(d)
        reversed_side = (d % 2 == 1) != mirrored
        if reversed_side:
            left = list(reversed(seg)) + left
        else:
            right = right + list(seg)
    return Pattern._trusted(left + right)


def parse_spiralling(p: Sequence[int]) -> Optional[tuple[SegmentPartition, bool]]:
    """Canonical ``(partition, mirrored)`` of a spiralling pattern, else ``None``.

    Reading values 0, 1, 2, ... each must sit just outside the positions
    already visited; a change of side starts a new segment. A first segment
    of length 1 is merged into the second, so the result has ``h1 >= 2``.
    """
    L = len(p)
    pos = [0] * L
    for i, v in enumerate(p):
        pos[v] = i
    lo = hi = pos[0] if L else 0
    runs: list[list] = []
    for v in range(1, L):
        if pos[v] == lo - 1:
            side, lo = "L", lo - 1
        elif pos[v] == hi + 1:
            side, hi = "R", hi + 1
        else:
            return None
        if runs and runs[-1][0] == side:
            runs[-1][1] += 1
        else:
            runs.append([side, 1])
    if len(runs) < 2:
        return None
    lengths = [runs[0][1] + 1] + [n for _, n in runs[1:]]
    return SegmentPartition(tuple(lengths)), runs[0][0] == "R"


def classify_spiralling(part: SegmentPartition, N: int) -> Verdict:
    """Allowed/forbidden verdict for a spiral with first segment length >= 2."""
    if part.lengths[0] < 2:
        raise HypothesisViolated("first segment must have length >= 2; canonicalize first")
    if N < 2:
        raise ValueError("N must be at least 2")
    D, hD = part.D, part.lengths[-1]
    if (D >= N and hD >= 2) or (D >= N + 1 and hD == 1):
        return Verdict.FORBIDDEN
    return Verdict.ALLOWED


def _block_ok(block: list, pos: list, L: int) -> bool:
    for i, a in enumerate(block):
        if a > L - 2:
            continue
        for b in block[i + 1:]:
            if b <= L - 2 and pos[a + 1] > pos[b + 1]:
                return False
    return True


def r4_blocks(p: Sequence[int]) -> list[tuple]:
    """Fewest contiguous blocks of ``p`` such that, inside each block, every
    pair a (left of) b with a, b <= L-2 has a+1 left of b+1.

    Greedy extension is optimal because validity is inherited by sub-blocks.
    """
    L = len(p)
    pos = [0] * L
    for i, v in enumerate(p):
        pos[v] = i
    blocks, cur = [], []
    for v in p:
        if _block_ok(cur + [v], pos, L):
            cur.append(v)
        else:
            blocks.append(tuple(cur))
            cur = [v]
    if cur:
        blocks.append(tuple(cur))
    return blocks


def r4_screen(p: Sequence[int], N: int) -> Screen:
    """``RULED_OUT`` when no split into at most N blocks respects the rule.

    That verdict is sound (the pattern is forbidden for the N-shift);
    ``INCONCLUSIVE`` says nothing.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    return Screen.RULED_OUT if len(r4_blocks(p)) > N else Screen.INCONCLUSIVE


def is_allowed_for_shift(p: Sequence[int], N: int) -> bool:
    """Exact decision via the sawtooth census for length ``len(p)``."""
    p = Pattern(p)
    if N < 2:
        raise ValueError("N must be at least 2")
    if len(p) == 1:
        return True
    return p in cached_census("sawtooth", len(p), N).realized


def shift_witness(p: Sequence[int], N: int) -> Optional[SymbolSequence]:
    """A sequence of type ``p`` for the N-shift, or ``None`` if ``p`` is forbidden.

    Takes a rational point of the realizing set of the sawtooth map and
    returns its base-N digits.
    """
    p = Pattern(p)
    if len(p) == 1:
        return SymbolSequence(N, (0,), (1,))
    census = cached_census("sawtooth", len(p), N)
    cell = census.realized.get(p)
    if cell is None:
        return None
    w = digits_of(cell.interior_point(), N)
    if pattern_of_sequence(w, len(p)) != p:
        raise CensusError(f"witness {w} does not realize {p}")
    return w


def _explicit_witness(pi: Pattern, n: int) -> list:
    # pi has length n+1 and pi[0] < pi[n]; returns omega_0..omega_n
    omega = [0] * (n + 1)
    if pi[n] != n:
        pivot = pi.index(n)
        shift_from = pivot
    elif pi[0] != 0:
        pivot = next(k for k in range(1, n) if pi[k] + 1 == pi[0])
        shift_from = pivot + 1
    else:
        pivot = pi.index(n - 1)
        shift_from = pivot
    for i in range(n + 1):
        omega[pi[i]] = i if i < shift_from else i - 1
    return omega


def witness_short_pattern(p: Sequence[int], N: int) -> SymbolSequence:
    """Explicit sequence of type ``p`` for patterns of length at most N+1.

    A pattern of length L is realized with the symbols 0..L-2 followed by a
    constant tail of L-2; patterns whose first entry exceeds their last are
    handled through the mirror image and symbol complement.
    """
    p = Pattern(p)
    L = len(p)
    if L > N + 1:
        raise LengthTooLong(f"length {L} exceeds N+1 = {N + 1}")
    if L == 1:
        return SymbolSequence(N, (0,), (1,))
    if L == 2:
        return SymbolSequence(N, (0,), (1,)) if p[0] == 0 else SymbolSequence(N, (1,), (0,))
    n = L - 1
    flip = p[0] > p[-1]
    omega = _explicit_witness(mirror(p) if flip else p, n)
    if flip:
        omega = [n - 1 - s for s in omega]
        w = SymbolSequence(N, omega, (0,))
    else:
        w = SymbolSequence(N, omega, (n - 1,))
    if pattern_of_sequence(w, L) != p:
        raise CensusError(f"constructed witness {w} does not realize {p}")
    return w


def named_forbidden_family(family, N: int, L: int, mirrored: bool = False) -> Pattern:
    """Members of the known forbidden-root families of the N-shift.

    ``minimal-spiral``: length N+2, the spiral with lengths (2, 1, ..., 1)
    and N+1 segments. ``spiral-root``: the spiral with N segments, first and
    last of length 2, the surplus length absorbed by the second segment. With
    N = 2 that spiral only exists for L = 4, so longer lengths fall back to
    the ``paired-root`` member, which is a root there as well.
    ``paired-root``: ``[1,0,3,2,...,2N-3,2N-4, L-2, L-3, ..., 2N-2, L-1]``
    for ``L >= 2N``.
    """
    family = Family(family)
    if N < 2:
        raise ValueError("N must be at least 2")
    if family is Family.MINIMAL_SPIRAL:
        if L != N + 2:
            raise BadLength(f"minimal-spiral patterns have length N+2 = {N + 2}")
        return spiralling_pattern(SegmentPartition((2,) + (1,) * N), mirrored)
    if family is Family.SPIRAL_ROOT:
        if L < N + 2:
            raise BadLength(f"spiral-root needs L >= N+2 = {N + 2}")
        if N == 2:
            if L == 4:
                return spiralling_pattern(SegmentPartition((2, 2)), mirrored)
            return named_forbidden_family(Family.PAIRED_ROOT, N, L, mirrored)
        lengths = (2, L - N - 1) + (1,) * (N - 3) + (2,)
        return spiralling_pattern(SegmentPartition(lengths), mirrored)
    if L < 2 * N:
        raise BadLength(f"paired-root needs L >= 2N = {2 * N}")
    head = []
    for k in range(N - 1):
        head += [2 * k + 1, 2 * k]
    tail = list(range(L - 2, 2 * N - 3, -1)) + [L - 1]
    p = Pattern(head + tail)
    return mirror(p) if mirrored else p


def is_root_pattern(p: Sequence[int], N: int) -> bool:
    """Forbidden, while both one-step predecessors are allowed."""
    p = Pattern(p)
    if len(p) < 2 or is_allowed_for_shift(p, N):
        return False
    a, b = elementary_predecessors(p)
    return is_allowed_for_shift(a, N) and is_allowed_for_shift(b, N)

"""Exact piecewise-affine interval maps and their order-pattern censuses.

All arithmetic is exact: ``gmpy2.mpq`` when the compiled backend is active,
:class:`fractions.Fraction` otherwise (the two compare and hash alike).

A census is exact as well. The pattern of a point can only change where two
iterates cross or an iterate breaks, so evaluating one midpoint per gap
between those critical points recovers every realizing set as a union of
open rational intervals.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import threading
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .kernels import Rational as Q
from .errors import (CapExceeded, CensusError, DuplicateValues, ExcludedPoint,
                     PeriodicCollision, UnknownName)
from .perm import Pattern, all_patterns, pattern_of_values
from .sequences import SymbolSequence

DEFAULT_PIECE_CAP = 10 ** 6
CACHE_VERSION = 1

Number = Union[int, Fraction]


def _frac(x):
    if isinstance(x, Q):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or 'num/den' string")
    return Q(x)


@dataclass(frozen=True)
class PLMap:
    """Piecewise-affine self-map of [0, 1].

    Piece ``i`` owns ``[breakpoints[i], breakpoints[i+1])``; the last piece
    also owns 1.
    """

    breakpoints: tuple
    slopes: tuple
    intercepts: tuple
    name: str = "custom"

    def __post_init__(self):
        bp = tuple(_frac(c) for c in self.breakpoints)
        sl = tuple(_frac(s) for s in self.slopes)
        ic = tuple(_frac(b) for b in self.intercepts)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "slopes", sl)
        object.__setattr__(self, "intercepts", ic)
        if bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if not len(sl) == len(ic) == len(bp) - 1:
            raise ValueError("need one slope and intercept per piece")
        for i, (a, b) in enumerate(zip(sl, ic)):
            if a == 0:
                raise ValueError(f"piece {i} is constant; maps must be piecewise monotone")
            for x in (bp[i], bp[i + 1]):
                if not 0 <= a * x + b <= 1:
                    raise ValueError(f"piece {i} leaves [0, 1] at x={x}")

    @property
    def n_pieces(self) -> int:
        return len(self.slopes)

    def piece_index(self, x: Number) -> int:
        if not 0 <= x <= 1:
            raise ValueError(f"{x} outside [0, 1]")
        return min(bisect_right(self.breakpoints, x) - 1, self.n_pieces - 1)

    def __call__(self, x: Number) -> Q:
        i = self.piece_index(x)
        return self.slopes[i] * x + self.intercepts[i]


def identity_map() -> PLMap:
    return PLMap((0, 1), (1,), (0,), name="identity")


def builtin_map(name: str, N: Optional[int] = None) -> PLMap:
    """``tent`` or ``sawtooth`` (x -> N x mod 1, needs ``N >= 2``)."""
    if name == "tent":
        return PLMap((0, Q(1, 2), 1), (2, -2), (0, 2), name="tent")
    if name == "sawtooth":
        if N is None or N < 2:
            raise ValueError("sawtooth needs N >= 2")
        bp = tuple(Q(i, N) for i in range(N + 1))
        return PLMap(bp, (N,) * N, tuple(-i for i in range(N)), name=f"sawtooth{N}")
    raise UnknownName(f"unknown map {name!r}")


def logistic(x):
    """The logistic map 4x(1-x); exact on Fractions."""
    return 4 * x * (1 - x)


@dataclass(frozen=True)
class _Cell:
    left: Q
    right: Q
    coeffs: tuple  # (slope, intercept) of f^0, f^1, ... on (left, right)


def _orbit_cells(f: PLMap, depth: int, cap: int = DEFAULT_PIECE_CAP,
                 keep_history: bool = True) -> list[_Cell]:
    """Common linearity cells of f^0..f^{depth-1} with their affine forms."""
    cells = [_Cell(Q(0), Q(1), ((Q(1), Q(0)),))]
    bp = f.breakpoints
    for _ in range(depth - 1):
        nxt = []
        for cell in cells:
            a, b = cell.coeffs[-1]
            ya, yb = a * cell.left + b, a * cell.right + b
            lo, hi = (ya, yb) if ya < yb else (yb, ya)
            inner = bp[bisect_right(bp, lo):bisect_left(bp, hi)]
            cuts = sorted((t - b) / a for t in inner)
            edges = [cell.left, *cuts, cell.right]
            for x0, x1 in zip(edges, edges[1:]):
                j = f.piece_index(a * ((x0 + x1) / 2) + b)
                s, r = f.slopes[j], f.intercepts[j]
                step = (s * a, s * b + r)
                coeffs = cell.coeffs + (step,) if keep_history else (step,)
                nxt.append(_Cell(x0, x1, coeffs))
        if len(nxt) > cap:
            raise CapExceeded(f"{len(nxt)} pieces exceed the cap of {cap}")
        cells = nxt
    return cells


def iterate(f: PLMap, k: int, cap: int = DEFAULT_PIECE_CAP) -> PLMap:
    """The k-fold composition of ``f`` as a new PLMap.

    Adjacent pieces are not merged, so breakpoints of ``f^k`` include those of
    every lower iterate.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return identity_map()
    cells = _orbit_cells(f, k + 1, cap, keep_history=False)
    return PLMap(
        (cells[0].left, *(c.right for c in cells)),
        tuple(c.coeffs[-1][0] for c in cells),
        tuple(c.coeffs[-1][1] for c in cells),
        name=f"{f.name}^{k}",
    )


def orbit(f: Callable, x, n: int) -> list:
    """``[x, f(x), ..., f^{n-1}(x)]``."""
    out = [x]
    for _ in range(n - 1):
        x = f(x)
        out.append(x)
    return out


def orbit_pattern_at(f: Callable, x, L: int) -> Pattern:
    """Order pattern of length ``L`` defined by ``x`` under ``f``."""
    values = orbit(f, x, L)
    try:
        return pattern_of_values(values)
    except DuplicateValues as exc:
        raise PeriodicCollision(f"orbit of {x} repeats within {L} steps") from exc


def _cell_crossings(cell: _Cell) -> list[Q]:
    pts = set()
    co = cell.coeffs
    for i in range(len(co)):
        ai, bi = co[i]
        for j in range(i + 1, len(co)):
            aj, bj = co[j]
            if ai != aj:
                x = (bj - bi) / (ai - aj)
                if cell.left < x < cell.right:
                    pts.add(x)
    return sorted(pts)


def critical_points(f: PLMap, L: int, cap: int = DEFAULT_PIECE_CAP) -> list[Q]:
    """Breakpoints of f^0..f^{L-1} plus every crossing f^i(x) = f^j(x), sorted."""
    if L < 2:
        raise ValueError("L must be at least 2")
    cells = _orbit_cells(f, L, cap)
    pts = {cells[0].left}
    for cell in cells:
        pts.add(cell.right)
        pts.update(_cell_crossings(cell))
    return sorted(pts)


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted disjoint open intervals with rational endpoints.

    ``holes`` lists finitely many interior points that do not belong to the
    set (e.g. a point whose orbit has a tie although both sides realize the
    same pattern). Holes do not split components and have no length.
    """

    intervals: tuple = ()
    holes: tuple = ()

    def __post_init__(self):
        iv = tuple((_frac(a), _frac(b)) for a, b in self.intervals)
        for (a, b), (c, _) in zip(iv, iv[1:]):
            if b > c:
                raise ValueError("intervals overlap or are unsorted")
        if any(a >= b for a, b in iv):
            raise ValueError("empty interval")
        holes = tuple(sorted(_frac(h) for h in self.holes))
        if any(not any(a < h < b for a, b in iv) for h in holes):
            raise ValueError("holes must lie inside the intervals")
        object.__setattr__(self, "intervals", iv)
        object.__setattr__(self, "holes", holes)

    @property
    def length(self) -> Q:
        return sum((b - a for a, b in self.intervals), Q(0))

    @property
    def components(self) -> int:
        return len(self.intervals)

    def __contains__(self, x) -> bool:
        return x not in self.holes and any(a < x < b for a, b in self.intervals)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def interior_point(self) -> Q:
        a, b = self.intervals[0]
        hs = [h for h in self.holes if a < h < b]
        return (a + (hs[0] if hs else b)) / 2


@dataclass(frozen=True)
class PatternCensus:
    length: int
    map_name: str
    realized: dict = field(default_factory=dict)  # Pattern -> IntervalUnion
    forbidden: tuple = ()

    @property
    def allowed(self) -> list[Pattern]:
        return sorted(self.realized)

    def is_allowed(self, p: Sequence[int]) -> bool:
        return Pattern(p) in self.realized

    def rows(self) -> list[tuple[Q, Q, Pattern]]:
        """One ``(left, right, pattern)`` per component, sorted by position."""
        out = [(a, b, p) for p, u in self.realized.items() for a, b in u.intervals]
        return sorted(out)

    def to_json(self) -> str:
        # one allowed pattern per line keeps the file diffable
        entries = ",\n".join("  " + json.dumps(self._entry(p), separators=(", ", ": "))
                              for p in self.allowed)
        forbidden = json.dumps([list(p) for p in self.forbidden], separators=(",", ":"))
        return (f'{{\n "length": {self.length},\n "map": {json.dumps(self.map_name)},\n'
                f' "allowed": [\n{entries}\n ],\n "forbidden": {forbidden}\n}}\n')

    def _entry(self, p: Pattern) -> dict:
        u = self.realized[p]
        item = {"pattern": list(p),
                "intervals": [[_fmt(a), _fmt(b)] for a, b in u.intervals]}
        if u.holes:
            item["holes"] = [_fmt(h) for h in u.holes]
        return item

    @classmethod
    def from_json(cls, text: str) -> "PatternCensus":
        doc = json.loads(text)
        realized = {
            Pattern(item["pattern"]): IntervalUnion(
                tuple((Q(a), Q(b)) for a, b in item["intervals"]),
                tuple(Q(h) for h in item.get("holes", ())))
            for item in doc["allowed"]
        }
        return cls(int(doc["length"]), doc["map"], realized,
                   tuple(Pattern(p) for p in doc["forbidden"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pattern", "left", "right"])
        for a, b, p in self.rows():
            w.writerow([str(p), _fmt(a), _fmt(b)])
        return buf.getvalue()


def _fmt(q) -> str:
    return f"{q.numerator}/{q.denominator}"


def enumerate_allowed(f: PLMap, L: int, cap: int = DEFAULT_PIECE_CAP) -> PatternCensus:
    """Exact census of the order patterns of length ``L`` realized by ``f``."""
    pts = critical_points(f, L, cap)
    pieces = []
    for a, b in zip(pts, pts[1:]):
        try:
            p = orbit_pattern_at(f, (a + b) / 2, L)
        except PeriodicCollision as exc:
            raise CensusError(f"iterates coincide on all of ({a}, {b})") from exc
        pieces.append([a, b, p])
    merged = [pieces[0] + [[]]]
    for a, b, p in pieces[1:]:
        last = merged[-1]
        if last[2] == p:
            last[1] = b
            if not _realizes(f, a, L, p):
                last[3].append(a)
        else:
            merged.append([a, b, p, []])
    groups: dict = {}
    for a, b, p, holes in merged:
        iv, hs = groups.setdefault(p, ([], []))
        iv.append((a, b))
        hs.extend(holes)
    realized = {p: IntervalUnion(tuple(groups[p][0]), tuple(groups[p][1]))
                for p in sorted(groups)}
    forbidden = tuple(p for p in all_patterns(L) if p not in realized)
    return PatternCensus(L, f.name, realized, forbidden)


def _realizes(f: PLMap, x, L: int, p: Pattern) -> bool:
    try:
        return orbit_pattern_at(f, x, L) == p
    except PeriodicCollision:
        return False


_memo: dict = {}
_memo_lock = threading.Lock()


def cached_census(name: str, L: int, N: Optional[int] = None) -> PatternCensus:
    """Census of a built-in map, memoized in-process and optionally on disk.

    Disk memo files live in ``$ORDPAT_CACHE_DIR`` when that is set.
    """
    key = (name, N, L)
    with _memo_lock:
        hit = _memo.get(key)
        if hit is not None:
            return hit
        cache_dir = os.environ.get("ORDPAT_CACHE_DIR")
        path = None
        if cache_dir:
            tag = f"{name}{N}" if N is not None else name
            path = os.path.join(cache_dir, f"census-v{CACHE_VERSION}-{tag}-L{L}.json")
            if os.path.exists(path):
                with open(path) as fh:
                    census = PatternCensus.from_json(fh.read())
                _memo[key] = census
                return census
        census = enumerate_allowed(builtin_map(name, N), L)
        if path is not None:
            os.makedirs(cache_dir, exist_ok=True)
            tmp = path + f".{os.getpid()}.tmp"
            with open(tmp, "w") as fh:
                fh.write(census.to_json())
            os.replace(tmp, path)
        _memo[key] = census
        return census


def tent_to_logistic(x) -> float:
    """The order-preserving conjugacy sin^2(pi x / 2), in binary64."""
    return math.sin(math.pi * float(x) / 2) ** 2


@dataclass(frozen=True)
class NumericCensus:
    length: int
    map_name: str
    realized: dict  # Pattern -> tuple of (float, float)
    forbidden: tuple

    @property
    def allowed(self) -> list[Pattern]:
        return sorted(self.realized)


def conjugate_endpoints(census: PatternCensus,
                        direction: str = "tent_to_logistic") -> NumericCensus:
    """Carry a tent-map census to the logistic map.

    Endpoints are binary64 and agree with the true algebraic values to about
    1e-15; comparisons should allow 1e-12.
    """
    if direction != "tent_to_logistic":
        raise UnknownName(f"unknown conjugacy direction {direction!r}")
    if census.map_name != "tent":
        raise ValueError("conjugation needs a census of the tent map")
    realized = {
        p: tuple((tent_to_logistic(a), tent_to_logistic(b)) for a, b in u.intervals)
        for p, u in census.realized.items()
    }
    return NumericCensus(census.length, "logistic", realized, census.forbidden)


def coding_word(f: Callable, thresholds: Sequence, x, n: int) -> tuple[int, ...]:
    """Symbols of x, f(x), ..., f^{n-1}(x) with respect to a threshold partition.

    Cell ``i`` is ``[t_i, t_{i+1})``; the last cell is closed.
    """
    t = list(thresholds)
    last = len(t) - 2
    word = []
    for y in orbit(f, x, n):
        if not t[0] <= y <= t[-1]:
            raise ValueError(f"orbit point {y} outside the partition range")
        word.append(min(bisect_right(t, y) - 1, last))
    return tuple(word)


def psi_value(w: SymbolSequence) -> Q:
    """Exact value of sum_n w_n N^{-(n+1)}.

    Sequences ending in an infinite run of N-1 (including the constant one)
    are rejected: they duplicate the value of another sequence.
    """
    if w.is_eventually_top():
        raise ExcludedPoint(f"{w} ends in a run of {w.alphabet_size - 1}")
    N = w.alphabet_size
    m, p = len(w.preperiod), len(w.period)
    head = sum((Q(s, N ** (i + 1)) for i, s in enumerate(w.preperiod)), Q(0))
    block = 0
    for s in w.period:
        block = block * N + s
    return head + Q(block, (N ** p - 1) * N ** m)


def digits_of(x, N: int) -> SymbolSequence:
    """Base-N expansion of a rational in [0, 1) (never ending in N-1 repeated)."""
    x = _frac(x)
    if not 0 <= x < 1:
        raise ValueError("need 0 <= x < 1")
    num, den = x.numerator, x.denominator
    seen: dict = {}
    digits = []
    while num not in seen:
        seen[num] = len(digits)
        num *= N
        digits.append(num // den)
        num %= den
    start = seen[num]
    return SymbolSequence(N, digits[:start], digits[start:])


@dataclass(frozen=True)
class GrowthProfile:
    lengths: tuple
    counts: tuple
    log_ratios: tuple  # log(count[L+1]) - log(count[L])


def growth_profile(f: PLMap, Lmax: int, cap: int = DEFAULT_PIECE_CAP) -> GrowthProfile:
    """Allowed-pattern counts for L = 2..Lmax and their successive log ratios."""
    lengths = tuple(range(2, Lmax + 1))
    counts = tuple(len(enumerate_allowed(f, L, cap).realized) for L in lengths)
    ratios = tuple(math.log(b) - math.log(a) for a, b in zip(counts, counts[1:]))
    return GrowthProfile(lengths, counts, ratios)

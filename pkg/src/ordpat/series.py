"""Ordinal analysis of finite series and reproducible test-signal generators."""
from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import kernels
from .errors import (BadStochasticVector, DuplicatePoints, DuplicateValues,
                     NonStationary, WindowTooLong)
from .perm import Pattern, all_patterns, pattern_of_values
from .plmaps import PLMap
from .rng import Xoshiro256

STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True)
class Series:
    """Finite real-valued series (binary64)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if v.size == 0:
            raise ValueError("series is empty")
        if not np.all(np.isfinite(v)):
            raise ValueError("series contains NaN or infinite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    @classmethod
    def from_text(cls, text: str) -> "Series":
        """One value per line; a non-numeric first line is taken as a CSV header."""
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if lines:
            try:
                float(lines[0].split(",")[0])
            except ValueError:
                lines = lines[1:]
        return cls(np.array([float(ln.split(",")[0]) for ln in lines]))

    @classmethod
    def read(cls, path: str) -> "Series":
        with open(path) as fh:
            return cls.from_text(fh.read())


def unrank_pattern(code: int, L: int) -> Pattern:
    """Pattern with lexicographic rank ``code`` in S_L."""
    pool = list(range(L))
    out = []
    for i in range(L - 1, -1, -1):
        q, code = divmod(code, math.factorial(i))
        out.append(pool.pop(q))
    return Pattern._trusted(out)


@dataclass(frozen=True)
class CensusReport:
    length: int
    counts: dict  # Pattern -> count, observed patterns only
    tie_windows: int
    total_windows: int

    @property
    def n_missing(self) -> int:
        return math.factorial(self.length) - len(self.counts)

    @property
    def missing(self) -> list[Pattern]:
        return [p for p in all_patterns(self.length) if p not in self.counts]

    def count(self, p: Sequence[int]) -> int:
        return self.counts.get(Pattern(p), 0)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "total_windows": self.total_windows,
            "tie_windows": self.tie_windows,
            "counts": {str(p): c for p, c in sorted(self.counts.items())},
            "missing": [str(p) for p in self.missing],
        }


def _as_float_array(values) -> Optional[np.ndarray]:
    if isinstance(values, Series):
        return values.values
    if isinstance(values, np.ndarray) and values.dtype.kind == "f":
        return values
    if all(isinstance(v, float) for v in values):
        return Series(values).values
    return None


def ordinal_census(values, L: int) -> CensusReport:
    """Count the pattern of every length-``L`` sliding window.

    Windows containing equal values are counted as ties and not assigned a
    pattern. Float input runs through the kernel; anything else (exact
    rationals, tuples) is handled generically.
    """
    n = len(values)
    if L < 2:
        raise ValueError("window length must be at least 2")
    if L > n:
        raise WindowTooLong(f"window {L} longer than series {n}")
    arr = _as_float_array(values)
    counts: dict = {}
    ties = 0
    if arr is not None:
        codes = kernels.window_codes(arr, L)
        ties = int(np.count_nonzero(codes < 0))
        uniq, cnt = np.unique(codes[codes >= 0], return_counts=True)
        counts = {unrank_pattern(int(c), L): int(k) for c, k in zip(uniq, cnt)}
    else:
        for i in range(n - L + 1):
            try:
                p = pattern_of_values(values[i:i + L])
            except DuplicateValues:
                ties += 1
                continue
            counts[p] = counts.get(p, 0) + 1
    return CensusReport(L, dict(sorted(counts.items())), ties, n - L + 1)


def twodim_census(points: Sequence, L: int, primary: int = 1) -> CensusReport:
    """Census of a planar orbit under lexicographic order.

    ``primary`` selects the coordinate compared first (default: the second,
    the other one breaking ties).
    """
    if primary not in (0, 1):
        raise ValueError("primary must be 0 or 1")
    keys = [(pt[primary], pt[1 - primary]) for pt in points]
    try:
        return _generic_census(keys, L)
    except DuplicateValues as exc:
        raise DuplicatePoints(str(exc)) from exc


def _generic_census(keys, L):
    n = len(keys)
    if L > n:
        raise WindowTooLong(f"window {L} longer than orbit {n}")
    counts: dict = {}
    for i in range(n - L + 1):
        p = pattern_of_values(keys[i:i + L])
        counts[p] = counts.get(p, 0) + 1
    return CensusReport(L, dict(sorted(counts.items())), 0, n - L + 1)


# -- generators --------------------------------------------------------------

def _check_prob_vector(p) -> np.ndarray:
    v = np.asarray(p, dtype=np.float64)
    if v.ndim != 1 or v.size < 2:
        raise BadStochasticVector("need a probability vector with at least two entries")
    if np.any(v <= 0) or abs(v.sum() - 1.0) > STOCHASTIC_TOL:
        raise BadStochasticVector("entries must be positive and sum to 1")
    return v


def _draw(cdf: np.ndarray, u: float) -> int:
    return min(int(np.searchsorted(cdf, u, side="right")), cdf.size - 1)


def bernoulli(p, n: int, seed: int) -> tuple[int, ...]:
    """i.i.d. symbols with probabilities ``p``."""
    v = _check_prob_vector(p)
    cdf = np.cumsum(v)
    u = Xoshiro256(seed).random(n)
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), v.size - 1)
    return tuple(int(s) for s in idx)


def markov(p, P, n: int, seed: int) -> tuple[int, ...]:
    """Stationary Markov chain started from ``p`` with transition matrix ``P``."""
    v = _check_prob_vector(p)
    M = np.asarray(P, dtype=np.float64)
    if M.shape != (v.size, v.size):
        raise BadStochasticVector("transition matrix must be N x N")
    if np.any(M < 0) or np.any(np.abs(M.sum(axis=1) - 1.0) > STOCHASTIC_TOL):
        raise BadStochasticVector("transition matrix rows must be nonnegative and sum to 1")
    if np.any(np.abs(v @ M - v) > STOCHASTIC_TOL):
        raise NonStationary("p is not stationary for P")
    u = Xoshiro256(seed).random(n)
    cdfs = np.cumsum(M, axis=1)
    out = [_draw(np.cumsum(v), u[0])] if n else []
    for i in range(1, n):
        out.append(_draw(cdfs[out[-1]], u[i]))
    return tuple(out)


def map_orbit(f: Callable, x0, n: int):
    """Orbit of length ``n``.

    A float seed gives a binary64 :class:`Series`; an exact seed (int,
    Fraction, ``"num/den"``) gives a list of exact rationals.
    """
    if isinstance(x0, float):
        if isinstance(f, PLMap):
            f = _float_pl(f)
        out = np.empty(n)
        x = x0
        for i in range(n):
            out[i] = x
            x = f(x)
        return Series(out)
    x = Fraction(x0) if isinstance(x0, str) else x0
    out = []
    for _ in range(n):
        out.append(x)
        x = f(x)
    return out


def _float_pl(f: PLMap) -> Callable[[float], float]:
    bp = [float(c) for c in f.breakpoints]
    sl = [float(s) for s in f.slopes]
    ic = [float(b) for b in f.intercepts]
    last = len(sl) - 1

    def g(x: float) -> float:
        i = min(int(np.searchsorted(bp, x, side="right")) - 1, last)
        return sl[i] * x + ic[i]

    return g


def baker(point):
    x, y = point
    half = Fraction(1, 2)
    if x < half:
        return 2 * x, y / 2
    return 2 * x - 1, y / 2 + half


def baker_orbit(x0, y0, n: int) -> list[tuple]:
    """Exact orbit of the baker's map from a rational point."""
    pt = (Fraction(x0), Fraction(y0))
    out = []
    for _ in range(n):
        out.append(pt)
        pt = baker(pt)
    return out


def generate(model: str, n: int, seed: Optional[int] = None, **params):
    """Dispatch to one of ``bernoulli``, ``markov``, ``map_orbit``, ``baker_orbit``."""
    if model == "bernoulli":
        return bernoulli(params["p"], n, _need_seed(seed))
    if model == "markov":
        return markov(params["p"], params["P"], n, _need_seed(seed))
    if model == "map_orbit":
        return map_orbit(params["map"], params["x0"], n)
    if model == "baker_orbit":
        return baker_orbit(params["x0"], params["y0"], n)
    raise ValueError(f"unknown model {model!r}")


def _need_seed(seed):
    if seed is None:
        raise ValueError("random models need an explicit seed")
    return int(seed)


# -- null model and determinism report ---------------------------------------

@dataclass(frozen=True)
class NullDistribution:
    n: int
    length: int
    trials: int
    missing_counts: tuple  # one per trial

    @property
    def histogram(self) -> list[int]:
        """``histogram[k]`` = number of trials with exactly k missing patterns."""
        h = [0] * (max(self.missing_counts) + 1)
        for k in self.missing_counts:
            h[k] += 1
        return h

    @property
    def mean(self) -> float:
        return float(np.mean(self.missing_counts))


def _null_trial(n, L, seed, t):
    x = Xoshiro256(seed, stream=t).random(n)
    return ordinal_census(x, L).n_missing


def null_missing_distribution(n: int, L: int, trials: int, seed: int,
                              jobs: int = 1) -> NullDistribution:
    """Missing-pattern counts of ``trials`` i.i.d. uniform series of length n.

    Trial ``t`` draws from stream ``t`` of ``seed``, so results do not depend
    on ``jobs``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            res = list(ex.map(lambda t: _null_trial(n, L, seed, t), range(trials)))
    else:
        res = [_null_trial(n, L, seed, t) for t in range(trials)]
    return NullDistribution(n, L, trials, tuple(res))


@dataclass(frozen=True)
class DeterminismReport:
    """Heuristic comparison of a series' missing patterns with an i.i.d. null.

    ``exceedance`` is the fraction of null trials missing at least as many
    patterns as the series. No decision threshold is applied.
    """

    length: int
    n: int
    observed_missing: int
    missing_patterns: list
    null: NullDistribution
    exceedance: float
    warning: Optional[str] = None
    label: str = field(default="heuristic")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "length": self.length,
            "n": self.n,
            "observed_missing": self.observed_missing,
            "missing_patterns": [str(p) for p in self.missing_patterns],
            "null_trials": self.null.trials,
            "null_mean_missing": self.null.mean,
            "null_histogram": self.null.histogram,
            "exceedance": self.exceedance,
            "warning": self.warning,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"


def determinism_report(s, L: int, trials: int, seed: int, jobs: int = 1) -> DeterminismReport:
    census = ordinal_census(s, L)
    n = len(s)
    warning = None
    if census.total_windows - census.tie_windows <= 1:
        warning = "degenerate input: at most one usable window, missing counts carry no information"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
    null = null_missing_distribution(n, L, trials, seed, jobs)
    obs = census.n_missing
    exceed = sum(1 for k in null.missing_counts if k >= obs) / trials
    return DeterminismReport(L, n, obs, census.missing, null, exceed, warning)

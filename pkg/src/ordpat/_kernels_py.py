"""Pure-Python implementations of the hot loops.

Mirrors ``_kernels.pyx`` function for function; ``ordpat.kernels`` picks
whichever is importable.
"""
from itertools import permutations
from math import factorial

import numpy as np

BACKEND = "python"

_MASK = (1 << 64) - 1


def _contains_chain(tau, chain, M, L):
    # window tau[i..i+L-1] is order-isomorphic to pinv iff
    # tau[i+chain[0]] < tau[i+chain[1]] < ... where chain = inverse of pinv
    for i in range(M - L + 1):
        prev = tau[i + chain[0]]
        for k in range(1, L):
            cur = tau[i + chain[k]]
            if cur < prev:
                break
            prev = cur
        else:
            return True
    return False


def _chain(pinv):
    L = len(pinv)
    chain = [0] * L
    for i, v in enumerate(pinv):
        chain[v] = i
    return chain


def count_outgrowths(M, pinv):
    """Number of sigma in S_M whose inverse contains ``pinv`` consecutively."""
    chain = _chain(pinv)
    L = len(chain)
    return sum(1 for tau in permutations(range(M)) if _contains_chain(tau, chain, M, L))


def outgrowth_table(M, pinv):
    """All sigma in S_M whose inverse contains ``pinv``, one per row (int8)."""
    chain = _chain(pinv)
    L = len(chain)
    rows = []
    for tau in permutations(range(M)):
        if _contains_chain(tau, chain, M, L):
            sigma = [0] * M
            for i, v in enumerate(tau):
                sigma[v] = i
            rows.append(sigma)
    return np.asarray(rows, dtype=np.int8).reshape(len(rows), M)


def window_codes(values, L):
    """Lexicographic rank in S_L of each sliding window's pattern, -1 on ties."""
    x = np.ascontiguousarray(values, dtype=np.float64)
    n = x.shape[0]
    if L > n:
        return np.empty(0, dtype=np.int64)
    win = np.lib.stride_tricks.sliding_window_view(x, L)
    order = np.argsort(win, axis=1, kind="stable")
    srt = np.take_along_axis(win, order, axis=1)
    ties = np.any(srt[:, 1:] == srt[:, :-1], axis=1)
    codes = np.zeros(order.shape[0], dtype=np.int64)
    for i in range(L - 1):
        smaller = np.sum(order[:, i + 1:] < order[:, i:i + 1], axis=1)
        codes += smaller * factorial(L - 1 - i)
    codes[ties] = -1
    return codes


def _rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & _MASK


def xoshiro_fill(state, out):
    """Fill ``out`` with xoshiro256** doubles in [0, 1); advances ``state``."""
    s0, s1, s2, s3 = (int(v) for v in state)
    scale = 2.0 ** -53
    for i in range(out.shape[0]):
        result = (_rotl((s1 * 5) & _MASK, 7) * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        out[i] = (result >> 11) * scale
    state[0], state[1], state[2], state[3] = s0, s1, s2, s3

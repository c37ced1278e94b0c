"""Compiled inner loops for subset search and Monte Carlo counting.

Everything here works in "raw deficit" units: per-gap differences against
the regular gap, summed along the chain of chosen points, *before* the
kernel-specific coefficient is applied.  All four kernels reduce to this
shape, which lets one search implementation serve them all:

  code 0: inscribed perimeter, term  sin(pi/m) - sin(gap/2)
  code 1: inscribed area,      term  sin(2*pi/m) - sin(gap)
  code 2: circumscribed kinds, term  tan(gap/2) - tan(pi/m), +inf for gap >= pi

Strict IEEE semantics (no fastmath) and a fixed summation order keep the
brute-force and DP paths bitwise identical; parallel loops only ever write
disjoint slots or reduce integers, so results do not depend on the thread
count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

TWO_PI = 2.0 * np.pi

_BLOCK = 4096


@njit(cache=True, inline="always")
def _phi(code, delta, g0):
    if code == 0:
        return g0 - np.sin(0.5 * delta)
    elif code == 1:
        return g0 - np.sin(delta)
    else:
        if delta >= np.pi:
            return np.inf
        return np.tan(0.5 * delta) - g0


@njit(cache=True)
def gap_matrices(theta, code, g0):
    """Per-gap deficit terms for all ordered pairs of sorted angles.

    fwd[i, j] is the term of the gap running forward from point i to point
    j; cls[i, j] is the term of the closing gap from j back through 2*pi
    to i.  Only the upper triangles are defined.
    """
    n = theta.shape[0]
    fwd = np.empty((n, n))
    cls = np.empty((n, n))
    for i in range(n):
        ti = theta[i]
        for j in range(i + 1, n):
            delta = theta[j] - ti
            fwd[i, j] = _phi(code, delta, g0)
            cls[i, j] = _phi(code, TWO_PI - delta, g0)
    return fwd, cls


@njit(cache=True)
def brute_m3(fwd, cls, n, idx_out):
    """Exhaustive scan of all triples; first minimizer in lex order wins."""
    best = np.inf
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            d1 = fwd[i, j]
            for k in range(j + 1, n):
                d = (d1 + fwd[j, k]) + cls[i, k]
                if d < best:
                    best = d
                    idx_out[0] = i
                    idx_out[1] = j
                    idx_out[2] = k
    return best


@njit(cache=True)
def brute_general(fwd, cls, n, m, idx_out):
    """Exhaustive scan of all m-subsets in lexicographic order.

    Walks combinations with an explicit depth pointer, carrying prefix
    deficit sums so each leaf costs O(1) amortized.
    """
    best = np.inf
    c = np.empty(m, np.int64)
    pre = np.empty(m)
    d = 0
    c[0] = -1
    while d >= 0:
        c[d] += 1
        if c[d] > n - m + d:
            d -= 1
            continue
        if d == 0:
            pre[0] = 0.0
        else:
            pre[d] = pre[d - 1] + fwd[c[d - 1], c[d]]
        if d == m - 1:
            tot = pre[d] + cls[c[0], c[d]]
            if tot < best:
                best = tot
                for q in range(m):
                    idx_out[q] = c[q]
        else:
            d += 1
            c[d] = c[d - 1]
    return best


@njit(cache=True)
def cyclic_dp(fwd, cls, theta, m, code, g0, idx_out):
    """Anchored cyclic DP over (position, count) states.

    For each anchor a (the first chosen point), state (k, j) holds the best
    deficit of a chain from a to j using k points; the cycle closes with
    the gap from j back to a.  Summation order matches the brute-force
    scans exactly.  Anchors that provably cannot beat the incumbent are
    skipped: with a convex per-gap term (all kinds except inscribed area),
    splitting the remaining arc equally bounds any completion from below.
    """
    n = theta.shape[0]
    best = np.inf
    cur = np.empty(n)
    nxt = np.empty(n)
    parent = np.empty((m + 1, n), np.int64)
    reg = TWO_PI / m
    convex = code != 1
    for a in range(n - m + 1):
        if convex and best < np.inf:
            g1 = theta[a + 1] - theta[a]
            if g1 < reg:
                g1 = reg
            lb = _phi(code, g1, g0) + (m - 1) * _phi(code, (TWO_PI - g1) / (m - 1), g0)
            if lb >= best:
                continue
        for j in range(a + 1, n):
            cur[j] = fwd[a, j]
            parent[2, j] = a
        for k in range(3, m + 1):
            for j in range(a + k - 1, n):
                bv = np.inf
                bi = -1
                for i in range(a + k - 2, j):
                    v = cur[i] + fwd[i, j]
                    if v < bv:
                        bv = v
                        bi = i
                nxt[j] = bv
                parent[k, j] = bi
            cur, nxt = nxt, cur
        for j in range(a + m - 1, n):
            tot = cur[j] + cls[a, j]
            if tot < best:
                best = tot
                p = j
                for k in range(m, 1, -1):
                    idx_out[k - 1] = p
                    p = parent[k, p]
                idx_out[0] = a
    return best


@njit(cache=True, parallel=True)
def block_deficits(thetas, code, g0, m, use_dp, out):
    """Raw minimal deficit for each row of sorted angles, in parallel."""
    nrep = thetas.shape[0]
    for b in prange(nrep):
        th = thetas[b]
        fwd, cls = gap_matrices(th, code, g0)
        idx = np.empty(m, np.int64)
        if use_dp:
            out[b] = cyclic_dp(fwd, cls, th, m, code, g0, idx)
        elif m == 3:
            out[b] = brute_m3(fwd, cls, th.shape[0], idx)
        else:
            out[b] = brute_general(fwd, cls, th.shape[0], m, idx)


@njit(cache=True, inline="always")
def _isort(buf, m):
    for q in range(1, m):
        key = buf[q]
        r = q - 1
        while r >= 0 and buf[r] > key:
            buf[r + 1] = buf[r]
            r -= 1
        buf[r + 1] = key


@njit(cache=True, inline="always")
def _row_deficit(buf, m, code, g0):
    # buf must be sorted ascending; forward gaps first, closing gap last.
    d = 0.0
    for q in range(1, m):
        d += _phi(code, buf[q] - buf[q - 1], g0)
    return d + _phi(code, TWO_PI - (buf[m - 1] - buf[0]), g0)


@njit(cache=True, parallel=True)
def tail_count(pts, code, g0, m, thr, strict):
    """Number of rows whose raw deficit is below (or at) the threshold."""
    ntr = pts.shape[0]
    nblocks = (ntr + _BLOCK - 1) // _BLOCK
    hits = 0
    for blk in prange(nblocks):
        lo = blk * _BLOCK
        hi = lo + _BLOCK
        if hi > ntr:
            hi = ntr
        buf = np.empty(m)
        c = 0
        for t in range(lo, hi):
            for q in range(m):
                buf[q] = pts[t, q]
            _isort(buf, m)
            d = _row_deficit(buf, m, code, g0)
            if d < thr or (d == thr and not strict):
                c += 1
        hits += c
    return hits


@njit(cache=True, parallel=True)
def overlap_count(pts, code, g0, m, r, thr):
    """Exceedance counts for two kernels sharing r of their m points.

    Rows hold 2m - r uniform draws; the first kernel uses columns
    [0, m), the second columns [m - r, 2m - r).  Returns hits of the
    first, of the second, and of both (strict threshold).
    """
    ntr = pts.shape[0]
    nblocks = (ntr + _BLOCK - 1) // _BLOCK
    h1 = 0
    h2 = 0
    hj = 0
    for blk in prange(nblocks):
        lo = blk * _BLOCK
        hi = lo + _BLOCK
        if hi > ntr:
            hi = ntr
        buf1 = np.empty(m)
        buf2 = np.empty(m)
        c1 = 0
        c2 = 0
        cj = 0
        for t in range(lo, hi):
            for q in range(m):
                buf1[q] = pts[t, q]
                buf2[q] = pts[t, m - r + q]
            _isort(buf1, m)
            _isort(buf2, m)
            first = _row_deficit(buf1, m, code, g0) < thr
            second = _row_deficit(buf2, m, code, g0) < thr
            if first:
                c1 += 1
            if second:
                c2 += 1
            if first and second:
                cj += 1
        h1 += c1
        h2 += c2
        hj += cj
    return h1, h2, hj

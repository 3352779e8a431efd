"""Compiled inner loops shared by the samplers."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def subtree_sizes(deg):
    n = deg.size
    size = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    top = 0
    for i in range(n - 1, -1, -1):
        s = 1
        for _ in range(deg[i]):
            top -= 1
            s += stack[top]
        size[i] = s
        stack[top] = s
        top += 1
    return size


@njit(cache=True)
def depths(deg):
    n = deg.size
    depth = np.empty(n, dtype=np.int64)
    sd = np.empty(n, dtype=np.int64)   # depth of nodes with open child slots
    sr = np.empty(n, dtype=np.int64)   # open slots left
    top = 0
    for i in range(n):
        if top == 0:
            d = 0
        else:
            d = sd[top - 1] + 1
            sr[top - 1] -= 1
            if sr[top - 1] == 0:
                top -= 1
        depth[i] = d
        if deg[i] > 0:
            sd[top] = d
            sr[top] = deg[i]
            top += 1
    return depth


@njit(cache=True)
def contour(depth):
    """Depth-first walk W(0..2n) plus first/last visit indices of each node."""
    n = depth.size
    out = np.zeros(2 * n + 1, dtype=np.int64)
    first = np.empty(n, dtype=np.int64)
    last = np.empty(n, dtype=np.int64)
    path = np.empty(n, dtype=np.int64)
    idx = 1
    cur = 0
    path[0] = 0
    first[0] = 1
    last[0] = 1
    for i in range(1, n):
        target = depth[i] - 1
        while cur > target:
            cur -= 1
            idx += 1
            out[idx] = cur
            last[path[cur]] = idx
        cur = depth[i]
        idx += 1
        out[idx] = cur
        path[cur] = i
        first[i] = idx
        last[i] = idx
    while cur > 0:
        cur -= 1
        idx += 1
        out[idx] = cur
        last[path[cur]] = idx
    return out, first, last


@njit(cache=True)
def first_passage(steps, start):
    """Index of the first i with start + cumsum(steps)[i] == -1, or -1."""
    s = start
    for i in range(steps.size):
        s += steps[i]
        if s == -1:
            return i, s
    return -1, s


@njit(cache=True)
def lag_min_sums(e):
    """S[d] = sum_{i=0}^{m-d} min(e[i..i+d]) for every lag d = 0..m.

    O(m^2) running minima; memory O(m).
    """
    m = e.size - 1
    S = np.zeros(m + 1)
    cur = e.copy()
    S[0] = cur.sum()
    for d in range(1, m + 1):
        tot = 0.0
        for i in range(m - d + 1):
            v = cur[i + 1]
            if v < cur[i]:
                cur[i] = v
            tot += cur[i]
        S[d] = tot
    return S


@njit(cache=True)
def bridge_max_integral(bm, u, dt):
    """Exact grid maxima of a Brownian path between grid points.

    ``bm`` holds B at the grid, ``u`` uniforms; returns the running sup at
    grid points where each cell's maximum is drawn from the bridge law.
    """
    m = bm.size - 1
    sup = np.empty(m + 1)
    sup[0] = 0.0
    run = 0.0
    for i in range(m):
        a = bm[i]
        b = bm[i + 1]
        cell_max = 0.5 * (a + b + np.sqrt((b - a) ** 2 - 2.0 * dt * np.log(u[i])))
        if cell_max > run:
            run = cell_max
        sup[i + 1] = run
    return sup


@njit(cache=True)
def lag_cell_min_sums(e, c):
    """Window minima sums for a grid path with known cell minima.

    ``e`` holds the m + 1 grid values and ``c`` the m cell minima.  For each
    lag d >= 1 and cell pair (i, i + d) the inner minimum runs over the
    closed stretch between the two cells and the outer minimum also
    includes both end cells; returns (inner[d], outer[d]) summed over i.
    """
    m = c.size
    inner = np.zeros(m)
    outer = np.zeros(m)
    cur = e[1:m].copy()
    for d in range(1, m):
        ti = 0.0
        to = 0.0
        for i in range(m - d):
            v = cur[i]
            if d > 1:
                a = c[i + d - 1]
                if a < v:
                    v = a
                a = e[i + d]
                if a < v:
                    v = a
                cur[i] = v
            ti += v
            a = c[i]
            if a < v:
                v = a
            a = c[i + d]
            if a < v:
                v = a
            to += v
        inner[d] = ti
        outer[d] = to
    return inner, outer

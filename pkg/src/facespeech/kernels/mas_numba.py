"""Numba monotonic-alignment DP kernel."""

import numpy as np
from numba import njit


@njit(cache=True)
def mas_path(ll):
    L, T = ll.shape
    neg_inf = -np.inf
    q = np.full((L, T), neg_inf)
    q[0, 0] = ll[0, 0]
    for t in range(1, T):
        jmax = t if t < L - 1 else L - 1
        for j in range(jmax + 1):
            best = q[j, t - 1]
            if j > 0 and q[j - 1, t - 1] > best:
                best = q[j - 1, t - 1]
            if best > neg_inf:
                q[j, t] = ll[j, t] + best
    assign = np.empty(T, dtype=np.int64)
    j = L - 1
    assign[T - 1] = j
    for t in range(T - 1, 0, -1):
        # ties prefer staying on the current token
        if j > 0 and q[j - 1, t - 1] > q[j, t - 1]:
            j -= 1
        assign[t - 1] = j
    return assign

"""Pure-numpy monotonic-alignment DP: vectorized over tokens per frame."""

import numpy as np


def mas_path(ll):
    L, T = ll.shape
    q = np.full((L, T), -np.inf)
    q[0, 0] = ll[0, 0]
    shifted = np.empty(L)
    for t in range(1, T):
        prev = q[:, t - 1]
        shifted[0] = -np.inf
        shifted[1:] = prev[:-1]
        best = np.maximum(prev, shifted)
        jmax = min(t, L - 1)
        q[: jmax + 1, t] = ll[: jmax + 1, t] + best[: jmax + 1]
    assign = np.empty(T, dtype=np.int64)
    j = L - 1
    assign[T - 1] = j
    for t in range(T - 1, 0, -1):
        # ties prefer staying on the current token
        if j > 0 and q[j - 1, t - 1] > q[j, t - 1]:
            j -= 1
        assign[t - 1] = j
    return assign

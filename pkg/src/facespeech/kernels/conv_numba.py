"""Numba conv kernels: jitted im2col packing/scatter, BLAS GEMM inside nopython."""

import numpy as np
from numba import njit


@njit(cache=True)
def _pack(xp, kh, kw, sh, sw, ho, wo):
    ci = xp.shape[0]
    cols = np.empty((ci * kh * kw, ho * wo))
    idx = 0
    for c in range(ci):
        for i in range(kh):
            for j in range(kw):
                m = 0
                for a in range(ho):
                    base = a * sh + i
                    for b in range(wo):
                        cols[idx, m] = xp[c, base, b * sw + j]
                        m += 1
                idx += 1
    return cols


@njit(cache=True)
def conv2d_forward(xp, w, sh, sw):
    co, ci, kh, kw = w.shape
    ho = (xp.shape[1] - kh) // sh + 1
    wo = (xp.shape[2] - kw) // sw + 1
    cols = _pack(xp, kh, kw, sh, sw, ho, wo)
    wm = np.ascontiguousarray(w.reshape(co, ci * kh * kw))
    return np.dot(wm, cols).reshape(co, ho, wo)


@njit(cache=True)
def conv2d_backward_weight(xp, dy, kh, kw, sh, sw):
    co, ho, wo = dy.shape
    ci = xp.shape[0]
    cols = _pack(xp, kh, kw, sh, sw, ho, wo)
    dym = np.ascontiguousarray(dy.reshape(co, ho * wo))
    dw = np.dot(dym, cols.T)
    return np.ascontiguousarray(dw).reshape(co, ci, kh, kw)


@njit(cache=True)
def conv2d_backward_input(dy, w, sh, sw, hp, wp):
    co, ho, wo = dy.shape
    ci, kh, kw = w.shape[1], w.shape[2], w.shape[3]
    wm = np.ascontiguousarray(w.reshape(co, ci * kh * kw).T)
    dym = np.ascontiguousarray(dy.reshape(co, ho * wo))
    dcols = np.dot(wm, dym)
    dxp = np.zeros((ci, hp, wp))
    idx = 0
    for c in range(ci):
        for i in range(kh):
            for j in range(kw):
                m = 0
                for a in range(ho):
                    base = a * sh + i
                    for b in range(wo):
                        dxp[c, base, b * sw + j] += dcols[idx, m]
                        m += 1
                idx += 1
    return dxp

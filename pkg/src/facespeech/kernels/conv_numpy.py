"""Pure-numpy conv kernels: stride-trick im2col plus BLAS GEMM."""

import numpy as np
from numpy.lib.stride_tricks import as_strided


def _windows(xp, kh, kw, sh, sw, ho, wo):
    # read-only view (Ci, kh, kw, Ho, Wo); reshaping it copies
    ci = xp.shape[0]
    s = xp.strides
    return as_strided(
        xp,
        shape=(ci, kh, kw, ho, wo),
        strides=(s[0], s[1], s[2], s[1] * sh, s[2] * sw),
        writeable=False,
    )


def _out_size(hp, wp, kh, kw, sh, sw):
    return (hp - kh) // sh + 1, (wp - kw) // sw + 1


def conv2d_forward(xp, w, sh, sw):
    co, ci, kh, kw = w.shape
    ho, wo = _out_size(xp.shape[1], xp.shape[2], kh, kw, sh, sw)
    cols = _windows(xp, kh, kw, sh, sw, ho, wo).reshape(ci * kh * kw, ho * wo)
    return (w.reshape(co, -1) @ cols).reshape(co, ho, wo)


def conv2d_backward_weight(xp, dy, kh, kw, sh, sw):
    co, ho, wo = dy.shape
    ci = xp.shape[0]
    cols = _windows(xp, kh, kw, sh, sw, ho, wo).reshape(ci * kh * kw, ho * wo)
    dw = dy.reshape(co, -1) @ cols.T
    return dw.reshape(co, ci, kh, kw)


def conv2d_backward_input(dy, w, sh, sw, hp, wp):
    co, ho, wo = dy.shape
    _, ci, kh, kw = w.shape
    dcols = w.reshape(co, -1).T @ dy.reshape(co, -1)
    dcols = dcols.reshape(ci, kh, kw, ho, wo)
    dxp = np.zeros((ci, hp, wp))
    for i in range(kh):
        for j in range(kw):
            dxp[:, i : i + ho * sh : sh, j : j + wo * sw : sw] += dcols[:, i, j]
    return dxp

"""Hot numeric kernels with two interchangeable backends.

The numba backend jit-compiles the packing/scatter loops and dispatches the
inner GEMM to BLAS; the numpy backend uses stride-trick windowing and BLAS.
Selection: set FACESPEECH_KERNELS=numpy to force the pure-numpy fallback,
=numba to require numba (ImportError if unavailable). Default is numba when
importable, numpy otherwise. `benchmarks/bench_kernels.py` compares both.

Kernel contract (shared by both backends, all float64):
  conv2d_forward(xp, w, sh, sw) -> y
      xp: zero-padded input (Ci, Hp, Wp); w: (Co, Ci, kh, kw);
      y: (Co, Ho, Wo) with Ho = (Hp - kh)//sh + 1.
  conv2d_backward_weight(xp, dy, kh, kw, sh, sw) -> dw
  conv2d_backward_input(dy, w, sh, sw, Hp, Wp) -> dxp (padded-space grad)
  mas_path(ll) -> assign
      ll: (L, T) log-likelihoods; assign: int64 (T,) monotonic surjective
      frame->token map maximizing total log-likelihood (ties prefer staying
      on the current token).
"""

import os

_choice = os.environ.get("FACESPEECH_KERNELS", "").strip().lower()

if _choice == "numpy":
    from . import conv_numpy as _conv
    from . import mas_numpy as _mas

    BACKEND = "numpy"
elif _choice == "numba":
    from . import conv_numba as _conv
    from . import mas_numba as _mas

    BACKEND = "numba"
else:
    try:
        from . import conv_numba as _conv
        from . import mas_numba as _mas

        BACKEND = "numba"
    except ImportError:
        from . import conv_numpy as _conv
        from . import mas_numpy as _mas

        BACKEND = "numpy"

conv2d_forward = _conv.conv2d_forward
conv2d_backward_weight = _conv.conv2d_backward_weight
conv2d_backward_input = _conv.conv2d_backward_input
mas_path = _mas.mas_path

__all__ = [
    "BACKEND",
    "conv2d_forward",
    "conv2d_backward_weight",
    "conv2d_backward_input",
    "mas_path",
]

"""Composite differentiable functions built from core ops."""

import numpy as np

from . import core
from .core import Tensor, as_tensor


def log_softmax(x, axis=-1):
    x = as_tensor(x)
    # constant max-shift keeps exp stable and leaves the gradient exact
    shift = Tensor(x.data.max(axis=axis, keepdims=True))
    y = x - shift
    return y - core.log(core.sum_(core.exp(y), axis=axis, keepdims=True))


def unit_normalize(v, eps=1e-24):
    """Scale a vector to unit L2 norm (post-hoc, magnitude independent)."""
    v = as_tensor(v)
    return v / core.sqrt(core.sum_(v * v) + eps)


def mse(a, b):
    d = as_tensor(a) - as_tensor(b)
    return core.mean_(d * d)


def cosine_scores(audio_vec, face_vecs):
    """Cosine similarity of one embedding against rows of a matrix (numpy)."""
    a = np.asarray(audio_vec, dtype=np.float64)
    f = np.asarray(face_vecs, dtype=np.float64)
    an = a / max(np.linalg.norm(a), 1e-12)
    fn = f / np.maximum(np.linalg.norm(f, axis=1, keepdims=True), 1e-12)
    return fn @ an

"""Small layer library: modules own named parameter Tensors."""

import numpy as np

from . import core
from .core import Tensor


class Module:
    """Base class; submodules and parameters are discovered by attribute scan."""

    def parameters(self, prefix=""):
        """Ordered dict of parameter name -> Tensor, recursing into submodules."""
        out = {}
        for name, value in vars(self).items():
            key = f"{prefix}{name}"
            if isinstance(value, Tensor):
                out[key] = value
            elif isinstance(value, Module):
                out.update(value.parameters(prefix=f"{key}."))
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, Module):
                        out.update(item.parameters(prefix=f"{key}.{i}."))
                    elif isinstance(item, Tensor):
                        out[f"{key}.{i}"] = item
        return out

    def zero_grad(self):
        for p in self.parameters().values():
            p.grad = None

    def freeze(self):
        for p in self.parameters().values():
            p.requires_grad = False

    def unfreeze(self):
        for p in self.parameters().values():
            p.requires_grad = True

    def state_dict(self):
        return {k: v.data.copy() for k, v in self.parameters().items()}

    def load_state_dict(self, state):
        params = self.parameters()
        missing = set(params) - set(state)
        if missing:
            raise KeyError(f"missing parameters in state: {sorted(missing)}")
        for k, p in params.items():
            arr = np.asarray(state[k], dtype=np.float64)
            if arr.shape != p.data.shape:
                raise ValueError(f"shape mismatch for {k}: {arr.shape} vs {p.data.shape}")
            p.data = np.ascontiguousarray(arr)


def _uniform_init(rng, shape, fan_in):
    bound = np.sqrt(1.0 / max(fan_in, 1))
    return rng.uniform(-bound, bound, size=shape)


class Linear(Module):
    def __init__(self, in_dim, out_dim, rng):
        self.weight = Tensor(_uniform_init(rng, (in_dim, out_dim), in_dim), True)
        self.bias = Tensor(np.zeros(out_dim), True)

    def __call__(self, x):
        x = core.as_tensor(x)
        if x.data.ndim == 1:
            y = core.matmul(core.reshape(x, (1, -1)), self.weight) + self.bias
            return core.reshape(y, (-1,))
        return core.matmul(x, self.weight) + self.bias


class Conv1d(Module):
    def __init__(self, in_ch, out_ch, kernel, rng, stride=1, padding=None):
        if padding is None:
            padding = kernel // 2
        self.stride = stride
        self.padding = padding
        fan_in = in_ch * kernel
        self.weight = Tensor(_uniform_init(rng, (out_ch, in_ch, kernel), fan_in), True)
        self.bias = Tensor(np.zeros(out_ch), True)

    def __call__(self, x):
        return core.conv1d(
            x, self.weight, b=self.bias, stride=self.stride, padding=self.padding
        )


class Conv2d(Module):
    def __init__(self, in_ch, out_ch, kernel, rng, stride=(1, 1), padding=None):
        if isinstance(kernel, int):
            kernel = (kernel, kernel)
        if isinstance(stride, int):
            stride = (stride, stride)
        if padding is None:
            padding = (kernel[0] // 2, kernel[1] // 2)
        self.stride = stride
        self.padding = padding
        fan_in = in_ch * kernel[0] * kernel[1]
        self.weight = Tensor(
            _uniform_init(rng, (out_ch, in_ch, kernel[0], kernel[1]), fan_in), True
        )
        self.bias = Tensor(np.zeros(out_ch), True)

    def __call__(self, x):
        return core.conv2d(
            x, self.weight, b=self.bias, stride=self.stride, padding=self.padding
        )


class LayerNorm(Module):
    """Normalizes the last axis; learned per-feature gain and bias."""

    def __init__(self, dim, eps=1e-5):
        self.eps = eps
        self.gain = Tensor(np.ones(dim), True)
        self.bias = Tensor(np.zeros(dim), True)

    def __call__(self, x):
        mu = core.mean_(x, axis=-1, keepdims=True)
        xc = x - mu
        var = core.mean_(xc * xc, axis=-1, keepdims=True)
        inv = core.power(var + self.eps, -0.5)
        return xc * inv * self.gain + self.bias


class Embedding(Module):
    def __init__(self, vocab_size, dim, rng):
        self.weight = Tensor(rng.standard_normal((vocab_size, dim)) * 0.1, True)

    def __call__(self, ids):
        return core.gather_rows(self.weight, ids)

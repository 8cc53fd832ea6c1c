"""Dynamic tape-based reverse-mode autodiff over float64 numpy arrays.

Every op builds a graph node holding a closure that maps the upstream
gradient to per-parent gradients. `backward` accumulates d(loss)/d(node)
into `.grad` of every requires_grad node reachable from the loss; calling
it again without resetting accumulates additively. Convolutions dispatch
to the selected kernel backend (numba or numpy).
"""

import contextlib

import numpy as np

from .. import kernels
from ..errors import ContractViolationError

_grad_enabled = True


@contextlib.contextmanager
def no_grad():
    """Disable graph construction inside the context (inference mode)."""
    global _grad_enabled
    prev = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = prev


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad=False):
        data = np.asarray(data, dtype=np.float64)
        if not data.flags["C_CONTIGUOUS"]:
            data = np.ascontiguousarray(data)  # keeps 0-d shape intact
        self.data = data
        self.grad = None
        self.requires_grad = bool(requires_grad)
        self._parents = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data)

    def zero_grad(self):
        self.grad = None

    def detach(self):
        return Tensor(self.data)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, p):
        return power(self, p)

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, key):
        return slice_(self, key)

    def sum(self, axis=None, keepdims=False):
        return sum_(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        return mean_(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape):
        return reshape(self, shape if len(shape) != 1 else shape[0])

    def transpose(self, axes=None):
        return transpose(self, axes)

    @property
    def T(self):
        return transpose(self)


def as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _node(data, parents, backward_fn):
    out = Tensor(data)
    if _grad_enabled and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = backward_fn
    return out


def _unbroadcast(g, shape):
    if g.shape == shape:
        return g
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for i, (gs, ss) in enumerate(zip(g.shape, shape)):
        if ss == 1 and gs != 1:
            g = g.sum(axis=i, keepdims=True)
    return g.reshape(shape)


def backward(loss):
    """Accumulate d(loss)/d(node) into .grad of every reachable node."""
    if not isinstance(loss, Tensor):
        raise ContractViolationError("backward expects a Tensor")
    if loss.data.size != 1:
        raise ContractViolationError("backward expects a scalar loss")
    if not loss.requires_grad:
        return

    topo, seen, stack = [], set(), [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            topo.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node._parents:
            if p.requires_grad and id(p) not in seen:
                stack.append((p, False))

    pending = {id(loss): np.ones_like(loss.data)}
    for node in reversed(topo):
        g = pending.pop(id(node), None)
        if g is None:
            continue
        if node.grad is None:
            node.grad = g.copy()
        else:
            node.grad = node.grad + g
        if node._backward is None:
            continue
        for parent, pg in zip(node._parents, node._backward(g)):
            if pg is None or not parent.requires_grad:
                continue
            key = id(parent)
            if key in pending:
                pending[key] = pending[key] + pg
            else:
                pending[key] = pg


# ---------------------------------------------------------------------------
# elementwise ops


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return _node(
        a.data + b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.data.shape), _unbroadcast(g, b.data.shape)),
    )


def sub(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return _node(
        a.data - b.data,
        (a, b),
        lambda g: (_unbroadcast(g, a.data.shape), _unbroadcast(-g, b.data.shape)),
    )


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return _node(
        a.data * b.data,
        (a, b),
        lambda g: (
            _unbroadcast(g * b.data, a.data.shape),
            _unbroadcast(g * a.data, b.data.shape),
        ),
    )


def div(a, b):
    a, b = as_tensor(a), as_tensor(b)
    return _node(
        a.data / b.data,
        (a, b),
        lambda g: (
            _unbroadcast(g / b.data, a.data.shape),
            _unbroadcast(-g * a.data / (b.data * b.data), b.data.shape),
        ),
    )


def neg(a):
    a = as_tensor(a)
    return _node(-a.data, (a,), lambda g: (-g,))


def power(a, p):
    a = as_tensor(a)
    p = float(p)
    return _node(a.data**p, (a,), lambda g: (g * p * a.data ** (p - 1.0),))


def exp(a):
    a = as_tensor(a)
    out = np.exp(a.data)
    return _node(out, (a,), lambda g: (g * out,))


def log(a):
    a = as_tensor(a)
    return _node(np.log(a.data), (a,), lambda g: (g / a.data,))


def sqrt(a):
    a = as_tensor(a)
    out = np.sqrt(a.data)
    return _node(out, (a,), lambda g: (g * (0.5 / out),))


def tanh(a):
    a = as_tensor(a)
    out = np.tanh(a.data)
    return _node(out, (a,), lambda g: (g * (1.0 - out * out),))


def sigmoid(a):
    a = as_tensor(a)
    out = 1.0 / (1.0 + np.exp(-a.data))
    return _node(out, (a,), lambda g: (g * out * (1.0 - out),))


def relu(a):
    a = as_tensor(a)
    mask = a.data > 0.0
    return _node(np.where(mask, a.data, 0.0), (a,), lambda g: (g * mask,))


def absolute(a):
    a = as_tensor(a)
    return _node(np.abs(a.data), (a,), lambda g: (g * np.sign(a.data),))


# ---------------------------------------------------------------------------
# linear algebra and shape ops


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2:
        raise ContractViolationError("matmul expects 2-D tensors")
    return _node(
        a.data @ b.data,
        (a, b),
        lambda g: (g @ b.data.T, a.data.T @ g),
    )


def _axis_tuple(axis, ndim):
    if axis is None:
        return tuple(range(ndim))
    if isinstance(axis, int):
        axis = (axis,)
    return tuple(a % ndim for a in axis)


def _expand_reduced(g, shape, axes):
    for ax in sorted(axes):
        g = np.expand_dims(g, ax)
    return np.broadcast_to(g, shape)


def sum_(a, axis=None, keepdims=False):
    a = as_tensor(a)
    axes = _axis_tuple(axis, a.data.ndim)
    out = a.data.sum(axis=axes, keepdims=keepdims)

    def bwd(g):
        gg = g if keepdims else _expand_reduced(g, a.data.shape, axes)
        return (np.broadcast_to(gg, a.data.shape).copy(),)

    return _node(out, (a,), bwd)


def mean_(a, axis=None, keepdims=False):
    a = as_tensor(a)
    axes = _axis_tuple(axis, a.data.ndim)
    count = int(np.prod([a.data.shape[ax] for ax in axes])) if axes else 1
    out = a.data.mean(axis=axes, keepdims=keepdims)

    def bwd(g):
        gg = g if keepdims else _expand_reduced(g, a.data.shape, axes)
        return (np.broadcast_to(gg, a.data.shape) / count,)

    return _node(out, (a,), bwd)


def reshape(a, shape):
    a = as_tensor(a)
    return _node(
        a.data.reshape(shape), (a,), lambda g: (g.reshape(a.data.shape),)
    )


def transpose(a, axes=None):
    a = as_tensor(a)
    if axes is None:
        axes = tuple(reversed(range(a.data.ndim)))
    inv = np.argsort(axes)
    return _node(
        np.ascontiguousarray(a.data.transpose(axes)),
        (a,),
        lambda g: (np.ascontiguousarray(g.transpose(inv)),),
    )


def concat(tensors, axis=0):
    tensors = [as_tensor(t) for t in tensors]
    sizes = [t.data.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def bwd(g):
        return tuple(np.ascontiguousarray(p) for p in np.split(g, splits, axis=axis))

    return _node(np.concatenate([t.data for t in tensors], axis=axis), tensors, bwd)


def stack(tensors, axis=0):
    tensors = [as_tensor(t) for t in tensors]

    def bwd(g):
        return tuple(
            np.ascontiguousarray(np.take(g, i, axis=axis)) for i in range(len(tensors))
        )

    return _node(np.stack([t.data for t in tensors], axis=axis), tensors, bwd)


def gather_rows(a, idx):
    """Select rows a[idx]; backward scatter-adds into the source rows."""
    a = as_tensor(a)
    idx = np.asarray(idx, dtype=np.int64)

    def bwd(g):
        da = np.zeros_like(a.data)
        np.add.at(da, idx, g)
        return (da,)

    return _node(a.data[idx], (a,), bwd)


def slice_(a, key):
    a = as_tensor(a)
    if not isinstance(key, tuple):
        key = (key,)
    for k in key:
        if not isinstance(k, slice):
            raise ContractViolationError("only slice indexing is supported")

    def bwd(g):
        da = np.zeros_like(a.data)
        da[key] = g
        return (da,)

    return _node(np.ascontiguousarray(a.data[key]), (a,), bwd)


def detach(a):
    return as_tensor(a).detach()


# ---------------------------------------------------------------------------
# convolution and resampling (kernel-backend dispatch)


def conv2d(x, w, b=None, stride=(1, 1), padding=(1, 1)):
    """2-D convolution; x (Ci,H,W), w (Co,Ci,kh,kw), optional bias (Co,)."""
    x, w = as_tensor(x), as_tensor(w)
    sh, sw = stride
    ph, pw = padding
    co, ci, kh, kw = w.data.shape
    if x.data.ndim != 3 or x.data.shape[0] != ci:
        raise ContractViolationError("conv2d input/weight channel mismatch")
    h, w_in = x.data.shape[1], x.data.shape[2]
    xp = np.pad(x.data, ((0, 0), (ph, ph), (pw, pw)))
    hp, wp = xp.shape[1], xp.shape[2]
    if hp < kh or wp < kw:
        raise ContractViolationError("conv2d input smaller than kernel")
    y = kernels.conv2d_forward(xp, w.data, sh, sw)
    parents = (x, w)
    if b is not None:
        b = as_tensor(b)
        y = y + b.data[:, None, None]
        parents = (x, w, b)

    def bwd(g):
        g = np.ascontiguousarray(g)
        gx = gw = gb = None
        if x.requires_grad:
            dxp = kernels.conv2d_backward_input(g, w.data, sh, sw, hp, wp)
            gx = np.ascontiguousarray(dxp[:, ph : ph + h, pw : pw + w_in])
        if w.requires_grad:
            gw = kernels.conv2d_backward_weight(xp, g, kh, kw, sh, sw)
        if len(parents) == 3 and parents[2].requires_grad:
            gb = g.sum(axis=(1, 2))
        return (gx, gw, gb)[: len(parents)]

    return _node(y, parents, bwd)


def conv1d(x, w, b=None, stride=1, padding=0):
    """1-D convolution via the 2-D kernels; x (Ci,L), w (Co,Ci,k)."""
    x, w = as_tensor(x), as_tensor(w)
    co, ci, k = w.data.shape
    x2 = reshape(x, (ci, 1, x.data.shape[1]))
    w2 = reshape(w, (co, ci, 1, k))
    y = conv2d(x2, w2, b=b, stride=(1, stride), padding=(0, padding))
    return reshape(y, (co, y.data.shape[2]))


def upsample2x(a):
    """Nearest-neighbor 2x upsampling on (C,H,W)."""
    a = as_tensor(a)
    c, h, w = a.data.shape
    out = np.repeat(np.repeat(a.data, 2, axis=1), 2, axis=2)

    def bwd(g):
        return (g.reshape(c, h, 2, w, 2).sum(axis=(2, 4)),)

    return _node(out, (a,), bwd)


def avgpool2x(a):
    """2x2 average pooling with floor semantics on (C,H,W); trailing row/col dropped."""
    a = as_tensor(a)
    c, h, w = a.data.shape
    h2, w2 = h // 2, w // 2
    if h2 == 0 or w2 == 0:
        raise ContractViolationError("avgpool2x needs both spatial dims >= 2")
    blocks = a.data[:, : h2 * 2, : w2 * 2].reshape(c, h2, 2, w2, 2)
    out = blocks.mean(axis=(2, 4))

    def bwd(g):
        da = np.zeros_like(a.data)
        da[:, : h2 * 2, : w2 * 2] = np.repeat(np.repeat(g, 2, axis=1), 2, axis=2) / 4.0
        return (da,)

    return _node(out, (a,), bwd)

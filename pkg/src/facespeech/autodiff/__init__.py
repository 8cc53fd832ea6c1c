"""Reverse-mode autodiff core: tensors, layers, optimizer, checkpoint I/O."""

from . import functional, nn
from .container import load_container, save_container
from .core import (
    Tensor,
    absolute,
    add,
    as_tensor,
    avgpool2x,
    backward,
    concat,
    conv1d,
    conv2d,
    detach,
    div,
    exp,
    gather_rows,
    log,
    matmul,
    mean_,
    mul,
    neg,
    no_grad,
    power,
    relu,
    reshape,
    sigmoid,
    slice_,
    sqrt,
    stack,
    sub,
    sum_,
    tanh,
    transpose,
    upsample2x,
)
from .gradcheck import GradCheckReport, grad_check
from .nn import Conv1d, Conv2d, Embedding, LayerNorm, Linear, Module
from .optim import Adam

__all__ = [
    "Adam",
    "Conv1d",
    "Conv2d",
    "Embedding",
    "GradCheckReport",
    "LayerNorm",
    "Linear",
    "Module",
    "Tensor",
    "absolute",
    "add",
    "as_tensor",
    "avgpool2x",
    "backward",
    "concat",
    "conv1d",
    "conv2d",
    "detach",
    "div",
    "exp",
    "functional",
    "gather_rows",
    "grad_check",
    "load_container",
    "log",
    "matmul",
    "mean_",
    "mul",
    "neg",
    "nn",
    "no_grad",
    "power",
    "relu",
    "reshape",
    "save_container",
    "sigmoid",
    "slice_",
    "sqrt",
    "stack",
    "sub",
    "sum_",
    "tanh",
    "transpose",
    "upsample2x",
]

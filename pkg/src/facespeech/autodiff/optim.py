"""Adam optimizer with per-group learning rates."""

import numpy as np

from ..errors import ContractViolationError


class Adam:
    """Adam over named parameter groups.

    groups: list of {"name": str, "params": {pname: Tensor}, "lr": float}.
    Groups must be disjoint; every parameter must require gradients.
    """

    def __init__(self, groups, beta1=0.9, beta2=0.999, eps=1e-8):
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.step_count = 0
        self.groups = []
        seen = set()
        for g in groups:
            for full, p in g["params"].items():
                if id(p) in seen:
                    raise ContractViolationError(
                        f"parameter {full} appears in more than one group"
                    )
                if not p.requires_grad:
                    raise ContractViolationError(
                        f"parameter {full} in group {g['name']} is frozen"
                    )
                seen.add(id(p))
            self.groups.append(
                {"name": g["name"], "params": dict(g["params"]), "lr": float(g["lr"])}
            )
        self.m = {
            f"{g['name']}/{k}": np.zeros_like(p.data)
            for g in self.groups
            for k, p in g["params"].items()
        }
        self.v = {k: np.zeros_like(v) for k, v in self.m.items()}

    def learning_rates(self):
        return {g["name"]: g["lr"] for g in self.groups}

    def zero_grad(self):
        for g in self.groups:
            for p in g["params"].values():
                p.grad = None

    def step(self):
        self.step_count += 1
        b1, b2 = self.beta1, self.beta2
        bc1 = 1.0 - b1**self.step_count
        bc2 = 1.0 - b2**self.step_count
        for g in self.groups:
            lr = g["lr"]
            for k, p in g["params"].items():
                if p.grad is None:
                    raise ContractViolationError(
                        f"missing gradient for {g['name']}/{k}"
                    )
                key = f"{g['name']}/{k}"
                m = self.m[key]
                v = self.v[key]
                m *= b1
                m += (1.0 - b1) * p.grad
                v *= b2
                v += (1.0 - b2) * (p.grad * p.grad)
                p.data -= lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)

    def state_dict(self):
        state = {"step": np.array([float(self.step_count)])}
        for k, arr in self.m.items():
            state[f"m/{k}"] = arr.copy()
        for k, arr in self.v.items():
            state[f"v/{k}"] = arr.copy()
        return state

    def load_state_dict(self, state):
        self.step_count = int(state["step"][0])
        for k in self.m:
            self.m[k] = np.ascontiguousarray(state[f"m/{k}"], dtype=np.float64)
            self.v[k] = np.ascontiguousarray(state[f"v/{k}"], dtype=np.float64)

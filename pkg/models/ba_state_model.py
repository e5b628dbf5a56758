from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class BaState:
    """Encoder-side iterate of the fixed-multiplier IB iteration."""

    u: np.ndarray  # M×N, P(t_j | x_i), rows sum to 1
    r: np.ndarray  # N, P(t_j)
    py_t: np.ndarray  # K×N, P(y_k | t_j)
    beta: float

    def copy(self) -> "BaState":
        return BaState(u=self.u.copy(), r=self.r.copy(), py_t=self.py_t.copy(), beta=float(self.beta))

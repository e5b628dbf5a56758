from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class GasState:
    """Primal (w, r, z) and dual (φ, ψ, λ, ζ, η) iterates of one GAS run.

    Owned by a single solve; not shared between threads.

    In stabilized mode `psi` holds the rescaled ψ̃_j = ψ_j·exp(psi_shift_j),
    where psi_shift is the column shift of the kernel it was computed
    against. Unstabilized runs keep psi_shift at zero.
    """

    w: np.ndarray  # M×N, P(x_i | t_j)
    r: np.ndarray  # N, P(t_j)
    z: np.ndarray  # K×N, P(y_k, t_j)
    phi: np.ndarray  # M
    psi: np.ndarray  # N
    psi_shift: np.ndarray  # N
    lam: np.ndarray  # K×N
    zeta: float
    eta: float

    @property
    def log_psi(self) -> np.ndarray:
        """log of the true ψ, recovered without exponentiating the shift."""
        with np.errstate(divide="ignore"):
            return np.log(self.psi) - self.psi_shift

    @property
    def alpha(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return -np.log(self.phi) - 0.5

    @property
    def beta(self) -> np.ndarray:
        return -self.log_psi - 0.5

    def copy(self) -> "GasState":
        return GasState(
            w=self.w.copy(),
            r=self.r.copy(),
            z=self.z.copy(),
            phi=self.phi.copy(),
            psi=self.psi.copy(),
            psi_shift=self.psi_shift.copy(),
            lam=self.lam.copy(),
            zeta=float(self.zeta),
            eta=float(self.eta),
        )


@dataclass(frozen=True)
class Kernel:
    """Λ (or the stabilized Λ̃) with the sums it was built from.

    a_ij = Σ_k s_ki log z_kj (floored), b_ij = Σ_k s_ki λ_kj with λ = −ζ.
    shift_j is the column maximum of −b + ζ·a removed from the exponent
    (zeros when unstabilized), so Λ = matrix·exp(shift).
    """

    matrix: np.ndarray
    a: np.ndarray
    b: np.ndarray
    shift: np.ndarray
    zeta: float

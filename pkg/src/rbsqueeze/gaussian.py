"""Gaussian fluctuations through the QND interaction and polarimetric readout.

The fluctuation vector is ordered (Jy, Jz, Sy, Sz). The measurement strength
is parametrised by the dimensionless kappa^2 = rho0 * eta, so that a
coherent input ends with var(Jz | Sy) = var(Jz) / (1 + kappa^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

JY, JZ, SY, SZ = range(4)
LABELS = ("Jy", "Jz", "Sy", "Sz")


@dataclass(frozen=True)
class GaussianState:
    mean_Jx: float
    mean_Sx: float
    mean: np.ndarray = field(default_factory=lambda: np.zeros(4))
    cov: np.ndarray = field(default_factory=lambda: np.eye(4))

    @classmethod
    def coherent(cls, N: float, n: float) -> "GaussianState":
        """Atoms and light both x-polarised: projection noise N/4 and n/4."""
        if N <= 0 or n <= 0:
            raise ValueError("N and n must be positive")
        return cls(N / 2, n / 2, np.zeros(4), np.diag([N / 4, N / 4, n / 4, n / 4]))

    def var(self, label: str) -> float:
        i = LABELS.index(label)
        return float(self.cov[i, i])

    def check(self) -> None:
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (4, 4) or np.asarray(self.mean).shape != (4,):
            raise ValueError("mean must have shape (4,) and cov (4, 4)")
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-12 * max(1.0, np.abs(cov).max())):
            raise ValueError("covariance is not symmetric")
        floor = -1e-12 * max(np.trace(cov), 1.0)
        if np.linalg.eigvalsh(0.5 * (cov + cov.T)).min() < floor:
            raise ValueError("covariance is not positive semidefinite")


@dataclass(frozen=True)
class ProbePulse:
    n_photons: float
    eta: float
    rho0: float

    def __post_init__(self):
        if not (0 <= self.eta < 1):
            raise ValueError("eta must lie in [0, 1)")
        if self.rho0 <= 0 or self.n_photons <= 0:
            raise ValueError("rho0 and n_photons must be positive")


def kappa2_from_physics(pulse: ProbePulse) -> float:
    return pulse.rho0 * pulse.eta


def qnd_map(state: GaussianState, kappa2: float) -> np.ndarray:
    """Linear map of the fluctuations for one pulse.

    Jy += Omega*tau*<Jx> Sz and Sy += Omega*tau*<Sx> Jz, with
    Omega*tau = kappa / sqrt(<Jx><Sx>); Jz and Sz pass through unchanged.
    """
    if kappa2 < 0:
        raise ValueError("kappa2 must be >= 0")
    omega_tau = np.sqrt(kappa2 / (state.mean_Jx * state.mean_Sx))
    M = np.eye(4)
    M[JY, SZ] = omega_tau * state.mean_Jx
    M[SY, JZ] = omega_tau * state.mean_Sx
    return M


def propagate(state: GaussianState, kappa2: float) -> GaussianState:
    state.check()
    M = qnd_map(state, kappa2)
    return replace(state, mean=M @ state.mean, cov=M @ state.cov @ M.T)


def condition_on_Sy(state: GaussianState, outcome: float = 0.0) -> GaussianState:
    """Condition every variable on a polarimeter reading of Sy.

    The returned state carries Sy as a known value (zero variance). Variances
    do not depend on ``outcome``; only the conditioned mean does.
    """
    state.check()
    cov = state.cov
    v = cov[SY, SY]
    if not v > 0:
        raise ValueError("Sy variance is zero; nothing to condition on")
    gain = cov[:, SY] / v
    mean = state.mean + gain * (outcome - state.mean[SY])
    cov = cov - np.outer(gain, cov[SY, :])
    cov = 0.5 * (cov + cov.T)
    return replace(state, mean=mean, cov=cov)


def wineland_xi2(state: GaussianState, N: float, F_eff: float = 0.5) -> float:
    """Wineland parameter var(Jz) * 2 N F / <Jx>^2."""
    if state.mean_Jx == 0:
        raise ZeroDivisionError("mean spin length is zero")
    return float(state.cov[JZ, JZ] * 2 * N * F_eff / state.mean_Jx ** 2)


def qnd_squeezing(kappa2: float, N: float = 1e6, n: float = 1e8) -> float:
    """Coherent input -> propagate -> condition -> Wineland parameter."""
    s = condition_on_Sy(propagate(GaussianState.coherent(N, n), kappa2))
    return wineland_xi2(s, N)

"""Loss and decoherence budget for QND squeezing.

``beta`` is the fraction of atoms pumped out of the pseudo-spin system,
``gamma`` the fraction that scatter back into it with a randomised spin.
Both are per-pulse, dimensionless, and ``eta = beta + gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .angular import DEFAULT_BRANCHING_RATIO

R_DEFAULT = float(DEFAULT_BRANCHING_RATIO)
VAR_DECOHERED = 0.25  # spin-1/2 value for a randomised atom
F_HALF = 0.5


class System(str, Enum):
    IDEAL = "ideal-spin-half"
    RB87 = "rb87"
    COHERENT = "coherent"

    @classmethod
    def parse(cls, s: "str | System") -> "System":
        if isinstance(s, cls):
            return s
        aliases = {"ideal": cls.IDEAL, "spin-half": cls.IDEAL}
        return aliases.get(s) or cls(s)


@dataclass(frozen=True)
class NoiseBudget:
    eta: float
    beta: float
    gamma: float

    def __post_init__(self):
        if self.beta < 0 or self.gamma < 0:
            raise ValueError("beta and gamma must be non-negative")
        if not self.eta < 1:
            raise ValueError("eta must be < 1")

    @property
    def r(self) -> float:
        return self.gamma / self.beta if self.beta > 0 else float("inf")


@dataclass(frozen=True)
class SqueezingOutcome:
    xi2: float
    xi2_prime: float
    system_tag: System
    budget: NoiseBudget | None = None
    variants: dict = field(default_factory=dict)

    @property
    def squeezing_percent(self) -> float:
        return 100.0 * (1.0 - self.xi2_prime)


def _check_eta(eta):
    if not (0 <= eta < 1):
        raise ValueError(f"eta must lie in [0, 1), got {eta!r}")


def split_eta(eta: float, r: float = R_DEFAULT) -> NoiseBudget:
    _check_eta(eta)
    if not r > 0:
        raise ValueError("r must be > 0")
    return NoiseBudget(eta=eta, beta=eta / (1 + r), gamma=eta * r / (1 + r))


def var_after_loss(var_in: float, beta: float, N: float, F: float = F_HALF) -> float:
    """Spin variance of the N' = (1 - beta) N atoms left after random loss."""
    if not (0 <= beta <= 1):
        raise ValueError("beta must lie in [0, 1]")
    return (1 - beta) ** 2 * var_in + beta * (1 - beta) * N * F / 2


def xi2_after_loss(xi2: float, beta: float) -> float:
    if not (0 <= beta <= 1) or xi2 < 0:
        raise ValueError("need 0 <= beta <= 1 and xi2 >= 0")
    return (1 - beta) * xi2 + beta


def var_after_decoherence(var_in: float, gamma: float, N: float, F: float = F_HALF,
                          var_gamma: float = VAR_DECOHERED) -> float:
    if not (0 <= gamma < 1) or var_gamma < 0:
        raise ValueError("need 0 <= gamma < 1 and var_gamma >= 0")
    return (1 - gamma) ** 2 * var_in + gamma * (1 - gamma) * N * F / 2 + gamma * N * var_gamma


def xi2_after_decoherence(xi2: float, gamma: float, F: float = F_HALF,
                          var_gamma: float = VAR_DECOHERED) -> float:
    if not (0 <= gamma < 1):
        raise ValueError("gamma must lie in [0, 1)")
    g = gamma / (1 - gamma)
    return xi2 + g + (2 * var_gamma / F) * g / (1 - gamma)


def xi2_ideal(rho0: float, eta: float) -> float:
    return 1 / (1 + rho0 * eta)


def xi2_ideal_spin_half(rho0: float, eta: float) -> SqueezingOutcome:
    """Spin-1/2 atoms: every scattered photon decoheres (gamma = eta, beta = 0)."""
    _check_eta(eta)
    xi2 = xi2_ideal(rho0, eta)
    return SqueezingOutcome(xi2, xi2_after_decoherence(xi2, eta), System.IDEAL,
                            NoiseBudget(eta, 0.0, eta))


def xi2_rb87(rho0: float, eta: float, r: float = R_DEFAULT) -> SqueezingOutcome:
    """Combined loss + decoherence for the 87Rb F=1 pseudo-spin."""
    b = split_eta(eta, r)
    xi2 = xi2_ideal(rho0, eta)
    keep = 1 - b.beta
    prime = keep * xi2 + eta * keep / (1 - eta) + b.gamma * keep / (1 - eta) ** 2
    return SqueezingOutcome(xi2, prime, System.RB87, b)


def xi2_coherent_reference(eta: float, r: float = R_DEFAULT) -> SqueezingOutcome:
    """Unsqueezed reference. Pure loss leaves xi2 = 1; the ``decoherence``
    variant applies the decoherence law to xi2 = 1 with the rb87 gamma."""
    b = split_eta(eta, r)
    return SqueezingOutcome(1.0, xi2_after_loss(1.0, b.beta), System.COHERENT, b,
                            variants={"loss": xi2_after_loss(1.0, b.beta),
                                      "decoherence": xi2_after_decoherence(1.0, b.gamma)})


def evaluate(system: "System | str", rho0: float, eta: float,
             r: float = R_DEFAULT) -> SqueezingOutcome:
    system = System.parse(system)
    if system is System.RB87:
        return xi2_rb87(rho0, eta, r)
    if system is System.IDEAL:
        return xi2_ideal_spin_half(rho0, eta)
    return xi2_coherent_reference(eta, r)


def composition_diagnostic(rho0: float, eta: float, r: float = R_DEFAULT) -> dict:
    """Compare the combined rb87 formula with loss-then-decoherence applied in sequence.

    The two differ at second order in eta; the combined formula corresponds to
    a single partition of the atoms into lost, decohered and untouched groups
    (see :func:`rbsqueeze.oracle.mc_end_to_end`).
    """
    b = split_eta(eta, r)
    xi2 = xi2_ideal(rho0, eta)
    combined = xi2_rb87(rho0, eta, r).xi2_prime
    loss_first = xi2_after_decoherence(xi2_after_loss(xi2, b.beta), b.gamma)
    deco_first = xi2_after_loss(xi2_after_decoherence(xi2, b.gamma), b.beta)
    return {"combined": combined, "loss_then_decoherence": loss_first,
            "decoherence_then_loss": deco_first,
            "max_abs_discrepancy": max(abs(combined - loss_first), abs(combined - deco_first))}

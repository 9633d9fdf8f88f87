"""Spin-1 alignment-tensor operators and the collective pseudo-spin.

Basis order is (|m=-1>, |m=0>, |m=+1>) everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

MINUS, ZERO, PLUS = 0, 1, 2


def _ket(i: int) -> np.ndarray:
    v = np.zeros(3, dtype=complex)
    v[i] = 1.0
    return v


def _outer(i: int, j: int) -> np.ndarray:
    return np.outer(_ket(i), _ket(j).conj())


@dataclass(frozen=True)
class OperatorSet:
    Tx: np.ndarray
    Ty: np.ndarray
    Fz: np.ndarray

    @property
    def Jx(self) -> np.ndarray:
        return 0.5 * self.Tx

    @property
    def Jy(self) -> np.ndarray:
        return 0.5 * self.Ty

    @property
    def Jz(self) -> np.ndarray:
        return 0.5 * self.Fz

    def pseudospin(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.Jx, self.Jy, self.Jz

    def restricted(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(Jx, Jy, Jz) restricted to the {|->, |+>} block."""
        idx = np.ix_([MINUS, PLUS], [MINUS, PLUS])
        return self.Jx[idx], self.Jy[idx], self.Jz[idx]

    def to_json(self) -> str:
        def enc(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]

        return json.dumps({"basis": ["m=-1", "m=0", "m=+1"],
                           "Tx": enc(self.Tx), "Ty": enc(self.Ty), "Fz": enc(self.Fz)})

    @classmethod
    def from_json(cls, text: str) -> "OperatorSet":
        d = json.loads(text)

        def dec(m):
            return np.array([[complex(re, im) for re, im in row] for row in m])

        return cls(dec(d["Tx"]), dec(d["Ty"]), dec(d["Fz"]))


def build_alignment_operators() -> OperatorSet:
    """Tx = |-><+| + |+><-|, Ty = i(|-><+| - |+><-|), Fz = |+><+| - |-><-|."""
    Tx = _outer(MINUS, PLUS) + _outer(PLUS, MINUS)
    Ty = 1j * (_outer(MINUS, PLUS) - _outer(PLUS, MINUS))
    Fz = _outer(PLUS, PLUS) - _outer(MINUS, MINUS)
    return OperatorSet(Tx, Ty, Fz)


def spin1_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ordinary spin-1 Fx, Fy, Fz in the same basis order."""
    s = np.sqrt(2.0)
    Fp = np.zeros((3, 3), dtype=complex)
    Fp[ZERO, MINUS] = s
    Fp[PLUS, ZERO] = s
    Fm = Fp.conj().T
    return (Fp + Fm) / 2, (Fp - Fm) / 2j, np.diag([-1.0, 0.0, 1.0]).astype(complex)


def alignment_from_spin1() -> OperatorSet:
    """The same operators built as Fx^2 - Fy^2 and FxFy + FyFx."""
    Fx, Fy, Fz = spin1_matrices()
    return OperatorSet(Fx @ Fx - Fy @ Fy, Fx @ Fy + Fy @ Fx, Fz)


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if A.ndim != 2 or A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError(f"incompatible shapes {A.shape} and {B.shape}")
    return A @ B - B @ A


@dataclass(frozen=True)
class CollectiveMoments:
    N_atoms: int
    mean_Jx: float
    mean_Jy: float
    mean_Jz: float
    var_Jy: float
    var_Jz: float


def coherent_state_moments(N: int) -> CollectiveMoments:
    """Moments of N independent atoms each in (|+> + |->)/sqrt(2)."""
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    ops = build_alignment_operators()
    psi = (_ket(PLUS) + _ket(MINUS)) / np.sqrt(2)

    def ev(op):
        return float(np.real(psi.conj() @ op @ psi))

    means = [ev(J) for J in ops.pseudospin()]
    var_y = ev(ops.Jy @ ops.Jy) - means[1] ** 2
    var_z = ev(ops.Jz @ ops.Jz) - means[2] ** 2
    # independent atoms: means and variances are additive
    return CollectiveMoments(int(N), N * means[0], N * means[1], N * means[2],
                             N * var_y, N * var_z)

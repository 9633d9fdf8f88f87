"""Golden-section minimisation with a coarse-grid bracket search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


class NotUnimodal(RuntimeError):
    """The coarse grid shows more than one local minimum."""

    def __init__(self, candidates):
        self.candidates = candidates
        head = ", ".join(f"eta={x:.6g}" for x, _ in candidates[:5])
        more = " ..." if len(candidates) > 5 else ""
        super().__init__(f"{len(candidates)} grid minima ({head}{more})")


@dataclass(frozen=True)
class MinResult:
    x: float
    fx: float
    iterations: int
    converged: bool
    bracket: tuple[float, float]


def golden_section(f: Callable[[float], float], a: float, b: float,
                   tol: float = 1e-8, max_iters: int = 200) -> MinResult:
    """Minimise a unimodal ``f`` on [a, b] until the bracket is narrower than ``tol``."""
    if not a < b:
        raise ValueError("need a < b")
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = a, b
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    it = 0
    while hi - lo > tol and it < max_iters:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        it += 1
    x, fx = (x1, f1) if f1 <= f2 else (x2, f2)
    return MinResult(float(x), float(fx), it, bool(hi - lo <= tol), (float(a), float(b)))


def grid_minima(values: np.ndarray) -> list[int]:
    """Indices of strict local minima (endpoints included) of a sampled curve."""
    v = np.asarray(values, dtype=float)
    n = v.size
    out = []
    for i in range(n):
        left = v[i - 1] if i > 0 else math.inf
        right = v[i + 1] if i < n - 1 else math.inf
        if v[i] < left and v[i] < right:
            out.append(i)
    if not out:
        # flat stretches have no strict minimum; report every grid minimiser
        out = list(np.flatnonzero(v == v.min()))
    return out


def minimise_on(f: Callable[[float], float], lo: float, hi: float, n_grid: int = 1000,
                tol: float = 1e-8, max_iters: int = 200) -> MinResult:
    """Coarse scan of (lo, hi] then golden section inside the winning cell."""
    grid = np.linspace(lo, hi, n_grid + 1)[1:]
    values = np.array([f(x) for x in grid])
    idx = grid_minima(values)
    if len(idx) != 1:
        raise NotUnimodal([(float(grid[i]), float(values[i])) for i in idx])
    i = idx[0]
    a = grid[i - 1] if i > 0 else lo
    b = grid[min(i + 1, grid.size - 1)]
    if a == b:
        return MinResult(float(grid[i]), float(values[i]), 0, True, (a, b))
    return golden_section(f, a, b, tol, max_iters)

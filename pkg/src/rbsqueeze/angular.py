"""Angular-momentum algebra and rank-K polarizability coefficients.

Wigner symbols are evaluated with the Racah sum formula in exact rational
arithmetic and converted to float only at the end. Frequencies are carried
in MHz (i.e. angular frequency divided by 2*pi) throughout the package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s

#: gamma/beta for the F=1 pseudo-spin scheme
DEFAULT_BRANCHING_RATIO = Fraction(5, 3)


# ---------------------------------------------------------------------------
# exact Racah machinery
# ---------------------------------------------------------------------------


def _twice(x) -> int:
    """Return 2*x as an int, rejecting anything that is not a half-integer."""
    if isinstance(x, bool):
        raise TypeError("booleans are not angular momenta")
    try:
        f = Fraction(x)
    except (TypeError, ValueError) as exc:
        raise TypeError(f"not a number: {x!r}") from exc
    two = 2 * f
    if two.denominator != 1:
        raise ValueError(f"{x!r} is not a half-integer")
    return int(two)


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return math.factorial(n)


def _triangle_ok(a: int, b: int, c: int) -> bool:
    # arguments are doubled
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= a + b


def _delta_sq(a: int, b: int, c: int) -> Fraction:
    # triangle coefficient, doubled arguments
    return Fraction(
        _fact((a + b - c) // 2) * _fact((a - b + c) // 2) * _fact((-a + b + c) // 2),
        _fact((a + b + c) // 2 + 1),
    )


def _signed_sqrt(s: Fraction, p: Fraction):
    """Value ``s * sqrt(p)``; exact Fraction when ``p`` is a rational square."""
    if s == 0:
        return Fraction(0)
    num, den = p.numerator, p.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return s * Fraction(rn, rd)
    sign = 1.0 if s > 0 else -1.0
    return sign * math.sqrt(s * s * p)


def _racah3j(tj1, tj2, tj3, tm1, tm2, tm3) -> tuple[Fraction, Fraction]:
    """Return (sum, squared prefactor) of the 3j symbol; doubled arguments."""
    zero = (Fraction(0), Fraction(1))
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        if tj < 0 or abs(tm) > tj or (tj + tm) % 2:
            return zero
    if tm1 + tm2 + tm3 != 0 or not _triangle_ok(tj1, tj2, tj3):
        return zero
    h = lambda *xs: sum(xs) // 2  # noqa: E731  (doubled -> plain integer)
    pref = _delta_sq(tj1, tj2, tj3) * (
        _fact(h(tj1, tm1)) * _fact(h(tj1, -tm1)) * _fact(h(tj2, tm2))
        * _fact(h(tj2, -tm2)) * _fact(h(tj3, tm3)) * _fact(h(tj3, -tm3))
    )
    kmin = max(0, h(tj2, -tj3, -tm1), h(tj1, -tj3, tm2))
    kmax = min(h(tj1, tj2, -tj3), h(tj1, -tm1), h(tj2, tm2))
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (
            _fact(k) * _fact(h(tj3, -tj2, tm1) + k) * _fact(h(tj3, -tj1, -tm2) + k)
            * _fact(h(tj1, tj2, -tj3) - k) * _fact(h(tj1, -tm1) - k)
            * _fact(h(tj2, tm2) - k)
        )
        total += Fraction((-1) ** k, den)
    if h(tj1, -tj2, -tm3) % 2:
        total = -total
    return total, pref


def _racah6j(a, b, c, d, e, f) -> tuple[Fraction, Fraction]:
    """Return (sum, squared prefactor) of {a b c; d e f}; doubled arguments."""
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    if min(a, b, c, d, e, f) < 0 or not all(_triangle_ok(*t) for t in triads):
        return Fraction(0), Fraction(1)
    pref = Fraction(1)
    for t in triads:
        pref *= _delta_sq(*t)
    s1, s2, s3, s4 = (sum(t) // 2 for t in triads)
    p1, p2, p3 = (a + b + d + e) // 2, (b + c + e + f) // 2, (c + a + f + d) // 2
    total = Fraction(0)
    for t in range(max(s1, s2, s3, s4), min(p1, p2, p3) + 1):
        num = (-1) ** t * _fact(t + 1)
        den = (
            _fact(t - s1) * _fact(t - s2) * _fact(t - s3) * _fact(t - s4)
            * _fact(p1 - t) * _fact(p2 - t) * _fact(p3 - t)
        )
        total += Fraction(num, den)
    return total, pref


def wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Wigner 3j symbol (j1 j2 j3; m1 m2 m3).

    Arguments may be ints, floats or Fractions but must be half-integers;
    anything else raises ``ValueError``. Selection-rule violations give 0.
    """
    s, p = _racah3j(*map(_twice, (j1, j2, j3, m1, m2, m3)))
    return float(_signed_sqrt(s, p))


def wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    """Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; zero on any violated triad."""
    s, p = _racah6j(*map(_twice, (j1, j2, j3, j4, j5, j6)))
    return float(_signed_sqrt(s, p))


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """<j1 m1; j2 m2 | j m> in the Condon-Shortley convention."""
    phase = -1 if (_twice(j1) - _twice(j2) + _twice(m)) // 2 % 2 else 1
    return phase * math.sqrt(2 * float(j) + 1) * wigner3j(j1, j2, j, m1, m2, -m)


# ---------------------------------------------------------------------------
# line data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HyperfineLine:
    """Ground hyperfine level F coupled to the excited F' manifold of a D line.

    ``excited_levels`` holds ``(F', offset)`` pairs, offsets in MHz relative
    to an arbitrary reference (the default data puts F'=0 at zero).
    ``gamma`` is the natural linewidth Gamma/2pi in MHz, ``lambda0`` in nm.
    """

    ground_F: int
    excited_levels: tuple[tuple[int, float], ...]
    gamma: float
    lambda0: float
    nuclear_I: Fraction = Fraction(3, 2)
    J_ground: Fraction = Fraction(1, 2)
    J_excited: Fraction = Fraction(3, 2)
    name: str = ""

    def __post_init__(self):
        if self.gamma <= 0 or self.lambda0 <= 0:
            raise ValueError("gamma and lambda0 must be positive")
        if not self.excited_levels:
            raise ValueError("need at least one excited level")
        for fp, _ in self.excited_levels:
            if not self.allowed_excited(fp):
                raise ValueError(f"F'={fp} is not reachable from F={self.ground_F}")
        seen = [fp for fp, _ in self.excited_levels]
        if len(set(seen)) != len(seen):
            raise ValueError("duplicate F' entries")

    def allowed_excited(self, fprime) -> bool:
        F, I, Jp = Fraction(self.ground_F), Fraction(self.nuclear_I), Fraction(self.J_excited)
        fp = Fraction(fprime)
        return abs(F - 1) <= fp <= F + 1 and abs(Jp - I) <= fp <= Jp + I

    @property
    def fprimes(self) -> tuple[int, ...]:
        return tuple(fp for fp, _ in self.excited_levels)

    def offset(self, fprime) -> float:
        for fp, off in self.excited_levels:
            if fp == fprime:
                return off
        raise KeyError(f"F'={fprime} not in line")

    @property
    def hfs_spread(self) -> float:
        """Largest pairwise excited-state splitting, in MHz."""
        offs = [off for _, off in self.excited_levels]
        return max(offs) - min(offs)

    @property
    def omega0(self) -> float:
        """Transition angular frequency in rad/s."""
        return 2 * math.pi * SPEED_OF_LIGHT / (self.lambda0 * 1e-9)

    def with_offsets(self, offsets: Sequence[float]) -> "HyperfineLine":
        levels = tuple((fp, float(o)) for (fp, _), o in zip(self.excited_levels, offsets))
        return HyperfineLine(self.ground_F, levels, self.gamma, self.lambda0,
                             self.nuclear_I, self.J_ground, self.J_excited, self.name)

    @classmethod
    def from_dict(cls, d: dict) -> "HyperfineLine":
        return cls(
            ground_F=int(d["ground_F"]),
            excited_levels=tuple((int(e["Fprime"]), float(e["offset_MHz"])) for e in d["excited"]),
            gamma=float(d["gamma_MHz"]),
            lambda0=float(d["lambda0_nm"]),
            nuclear_I=Fraction(d.get("nuclear_I", 1.5)),
            J_ground=Fraction(d.get("J_ground", 0.5)),
            J_excited=Fraction(d.get("J_excited", 1.5)),
            name=d.get("name", ""),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ground_F": self.ground_F,
            "nuclear_I": float(self.nuclear_I),
            "J_ground": float(self.J_ground),
            "J_excited": float(self.J_excited),
            "excited": [{"Fprime": fp, "offset_MHz": off} for fp, off in self.excited_levels],
            "gamma_MHz": self.gamma,
            "lambda0_nm": self.lambda0,
        }


def load_line(path: str | Path | None = None) -> HyperfineLine:
    """Load line data from JSON; ``None`` gives the bundled 87Rb D2 record."""
    if path is None:
        text = resources.files("rbsqueeze").joinpath("data/rb87_d2.json").read_text()
    else:
        text = Path(path).read_text()
    return HyperfineLine.from_dict(json.loads(text))


def rb87_d2() -> HyperfineLine:
    return load_line()


# ---------------------------------------------------------------------------
# polarizability coefficients
# ---------------------------------------------------------------------------


def relative_strength(F, Fprime, line: HyperfineLine) -> Fraction:
    """Hyperfine transition strength factor S_{FF'}; sums to 1 over F'."""
    s, p = _racah6j(*map(_twice, (line.J_ground, line.J_excited, 1, Fprime, F, line.nuclear_I)))
    return (2 * Fraction(Fprime) + 1) * (2 * Fraction(line.J_ground) + 1) * s * s * p


def _rank_coefficient_exact(K: int, F, Fprime, line: HyperfineLine):
    if K not in (0, 1, 2):
        raise ValueError(f"rank must be 0, 1 or 2, got {K!r}")
    if F != line.ground_F or Fprime not in line.fprimes:
        raise ValueError(f"({F}, {Fprime}) is not a transition of this line")
    s, p = _racah6j(*map(_twice, (1, 1, K, F, F, Fprime)))
    if s == 0:
        return Fraction(0)
    phase = -1 if (_twice(F) + _twice(Fprime) + 2 * K + 2) // 2 % 2 else 1
    val = _signed_sqrt(phase * s, 3 * (2 * Fraction(F) + 1) * p)
    return val * relative_strength(F, Fprime, line)


def rank_coefficient(K: int, F, Fprime, line: HyperfineLine) -> float:
    """Dimensionless rank-K polarizability coefficient of the F -> F' transition.

    Built from the 6j recoupling weight {1 1 K; F F F'} times the transition
    strength, normalised so the scalar part equals the strength S_{FF'}
    (positive, summing to one over F'). With this choice the rank-2
    coefficients of F=1 sum to zero over F', and the rank-1 coefficients
    of F'=1 and F'=2 cancel.
    """
    return float(_rank_coefficient_exact(K, F, Fprime, line))


@dataclass(frozen=True)
class RankCoefficients:
    fprimes: tuple[int, ...]
    alpha0: tuple[float, ...]
    alpha1: tuple[float, ...]
    alpha2: tuple[float, ...]

    def rank(self, K: int) -> tuple[float, ...]:
        return (self.alpha0, self.alpha1, self.alpha2)[K]

    def as_dict(self) -> dict:
        return {fp: (a0, a1, a2) for fp, a0, a1, a2 in
                zip(self.fprimes, self.alpha0, self.alpha1, self.alpha2)}


def rank_coefficients(line: HyperfineLine) -> RankCoefficients:
    F = line.ground_F
    cols = [tuple(rank_coefficient(K, F, fp, line) for fp in line.fprimes) for K in (0, 1, 2)]
    return RankCoefficients(line.fprimes, *cols)


# ---------------------------------------------------------------------------
# scattering branching
# ---------------------------------------------------------------------------


def branching_split(line: HyperfineLine | None = None, r_override: float | None = None):
    """Split of one scattering event into (loss, decoherence) probabilities.

    The default ratio decoherence/loss is 5/3, giving (3/8, 5/8). ``line`` is
    accepted for interface symmetry; use :func:`scattering_branching` for a
    value derived from the level structure.
    """
    if r_override is None:
        r = DEFAULT_BRANCHING_RATIO
        return float(1 / (1 + r)), float(r / (1 + r))
    if not r_override > 0:
        raise ValueError("r_override must be > 0")
    r = float(r_override)
    return 1.0 / (1.0 + r), r / (1.0 + r)


def _ground_states(line):
    J, I = Fraction(line.J_ground), Fraction(line.nuclear_I)
    states = []
    F = abs(J - I)
    while F <= J + I:
        m = -F
        while m <= F:
            states.append((F, m))
            m += 1
        F += 1
    return states


def _dipole_matrices(line, ground):
    """<F' m'| d_q |F m> for q = -1, 0, +1 (rows excited, cols ground)."""
    J, Jp, I = Fraction(line.J_ground), Fraction(line.J_excited), Fraction(line.nuclear_I)
    excited = [(Fraction(fp), Fraction(m)) for fp in line.fprimes
               for m in range(-fp, fp + 1)]
    out = {}
    for q in (-1, 0, 1):
        M = np.zeros((len(excited), len(ground)))
        for i, (fe, me) in enumerate(excited):
            for j, (fg, mg) in enumerate(ground):
                w3 = wigner3j(fe, 1, fg, -me, q, mg)
                if w3 == 0.0:
                    continue
                # reduced element <(J' I) F'||d||(J I) F>, <J'||d||J> = 1
                red = ((-1) ** int(Jp + I + fg + 1) * math.sqrt((2 * fe + 1) * (2 * fg + 1))
                       * wigner6j(Jp, fe, I, fg, J, 1))
                M[i, j] = (-1) ** int(fe - me) * w3 * red
        out[q] = M
    return excited, out


def scattering_branching(line: HyperfineLine, coherent: bool = False,
                         detuning: float | None = None) -> dict:
    """Brute-force final-state distribution after one scattered photon.

    An atom in |F=1, m=+1> is driven by x-polarised light (equal sigma+ and
    sigma- amplitudes) and decays by emission of a photon of any polarisation.
    Each excited F' path is weighted by 1/Delta_{F'} (all equal when
    ``detuning`` is None). With ``coherent=False`` the rates of different F'
    paths are added; with ``coherent=True`` their amplitudes are.

    Returns the loss and decoherence probabilities, their ratio, and the
    normalised population of every ground sublevel.
    """
    ground = _ground_states(line)
    excited, D = _dipole_matrices(line, ground)
    d_x = (D[-1] - D[1]) / math.sqrt(2)
    psi = np.zeros(len(ground))
    psi[ground.index((Fraction(line.ground_F), Fraction(1)))] = 1.0
    if detuning is None:
        weight = np.ones(len(excited))
    else:
        weight = np.array([1.0 / (detuning - line.offset(int(fe))) for fe, _ in excited])

    def rates(mask):
        amp = (d_x @ psi) * weight * mask
        return sum(np.abs(D[q].T @ amp) ** 2 for q in (-1, 0, 1))

    if coherent:
        pops = rates(np.ones(len(excited)))
    else:
        pops = sum(rates(np.array([fe == fp for fe, _ in excited], dtype=float))
                   for fp in line.fprimes)
    pops = pops / pops.sum()
    F = Fraction(line.ground_F)
    keep = [ground.index((F, Fraction(1))), ground.index((F, Fraction(-1)))]
    decoherence = float(pops[keep].sum())
    loss = 1.0 - decoherence
    return {
        "loss": loss,
        "decoherence": decoherence,
        "ratio": decoherence / loss,
        "populations": {(float(f), float(m)): float(p) for (f, m), p in zip(ground, pops)},
    }

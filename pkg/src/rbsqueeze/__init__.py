"""QND-measurement spin squeezing in a cold 87Rb F=1 ensemble."""

from .angular import (HyperfineLine, RankCoefficients, branching_split, load_line,
                      rank_coefficient, rank_coefficients, rb87_d2, scattering_branching,
                      wigner3j, wigner6j)
from .gaussian import GaussianState, ProbePulse, condition_on_Sy, propagate, wineland_xi2
from .noise import (NoiseBudget, SqueezingOutcome, System, split_eta, xi2_ideal_spin_half,
                    xi2_rb87)

__version__ = "0.1.0"

"""Evolutionary quantities: diversity, potentials and adaptive asymmetry, the
dimension thresholds, and the cyclic-renewal spectrum spawned at the end of a
cooperative movement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from scipy.optimize import brentq

from .errors import DomainError, PoleError
from .invariants import GAMMA_STAR, InvariantSet, lookup
from .network import RATIO_TABLE, ratio_table

ADMISSIBLE_DEVIATION = 0.0072
# printed coefficient of the renewal eigenvalue (close to 1/sqrt(3))
RENEWAL_COEFF = 0.577
CANONICAL_TRIPLE = (-1.406, -0.60423, -0.26)
CANONICAL_ALPHA_LO = -0.60423
THRESHOLD_A_O_ZERO = 0.76805
CODE_LETTERS_PER_TRIPLET = 4


def diversity(deviations: Sequence[float]) -> float:
    """D = sum of relative eigenvalue deviations |d alpha / alpha|."""
    return math.fsum(abs(float(d)) for d in deviations)


def epsilon(gamma1: float, gamma2: float) -> float:
    """Signed epsilon = 1 - gamma1/gamma2 (negative when gamma1 > gamma2)."""
    if gamma2 == 0:
        raise DomainError("gamma2 must be nonzero")
    return 1.0 - gamma1 / gamma2


@dataclass(frozen=True)
class PotentialReport:
    n: int
    m: int
    epsilon_max: float
    D: float
    P_e: float
    P_e_m: float
    P_e_n: float
    P_e_n_approx: float
    P_a: float
    P_r: float
    H_delta: float

    def as_dict(self):
        return dict(self.__dict__)


def potentials(n: int, eps_max: float, *, D: Optional[float] = None, gamma_fixed: float = GAMMA_STAR) -> PotentialReport:
    """Triplet and model potentials.

    P_e^m = eps_max, P_e^n = m P_e^m with m = (n - 1)/2, and the approximation
    m/3 alongside.  The maximal potential P_e is the diversity D, by default n
    eigenvalues each at eps_max.  P_a is |epsilon| at the fixed gamma row and
    P_r is P_e at that fixed gamma.
    """
    if not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise DomainError(f"n must be an odd integer >= 3, got {n}")
    eps = abs(float(eps_max))
    m = (n - 1) // 2
    d = n * eps if D is None else float(D)
    look = ratio_table(gamma_fixed)
    p_a = abs(epsilon(look.gamma1, look.gamma2)) if eps else 0.0
    return PotentialReport(
        n=n, m=m, epsilon_max=eps, D=d, P_e=d, P_e_m=eps, P_e_n=m * eps,
        P_e_n_approx=m / 3.0 if eps else 0.0, P_a=p_a, P_r=d, H_delta=d,
    )


@dataclass(frozen=True)
class Asymmetry:
    eps0: float
    eps_plus: float
    eps_minus: float
    delta_plus: float
    delta_minus: float

    @property
    def asymmetric(self):
        return abs(self.delta_plus) > abs(self.delta_minus)


def adaptive_asymmetry(table=RATIO_TABLE) -> Asymmetry:
    """Epsilon shifts from the central ratio row to the low-gamma and high-gamma rows."""
    rows = sorted(table)
    low, mid, high = rows[0], rows[1], rows[2]
    e_lo = abs(epsilon(low[1], low[2]))
    e0 = abs(epsilon(mid[1], mid[2]))
    e_hi = abs(epsilon(high[1], high[2]))
    return Asymmetry(eps0=e0, eps_plus=e_lo, eps_minus=e_hi, delta_plus=e_lo - e0, delta_minus=e_hi - e0)


@dataclass(frozen=True)
class ThresholdReport:
    h_o: float
    gamma_star: float
    a_o_zero: float
    a_o_star: float
    a_star: float
    s_h: float
    m1: float
    m1_3d: float
    triplets_3d: int
    code_bits: int

    def as_dict(self):
        return dict(self.__dict__)


def dimension_threshold(a_o_zero: float = THRESHOLD_A_O_ZERO, a_o_star: float = None,
                        a_star: float = None, gamma_star: float = GAMMA_STAR) -> ThresholdReport:
    """Minimal relative invariant step h_o, hidden information s_h and the cooperative dimension m1."""
    if a_o_star is None or a_star is None:
        row = lookup(gamma_star).rows[0]
        a_o_star = row.a_o if a_o_star is None else a_o_star
        a_star = row.a if a_star is None else a_star
    if not a_o_zero > a_o_star > 0:
        raise DomainError("need a_o_zero > a_o_star > 0")
    h_o = (a_o_zero - a_o_star) / a_o_zero
    s_h = a_o_star * a_o_star + a_star
    if s_h <= a_o_star:
        raise PoleError("s_h <= a_o*: the cooperative dimension diverges")
    m1 = s_h / (s_h - a_o_star)
    m3 = 3.0 * m1
    k = int(round(m3))
    return ThresholdReport(h_o=h_o, gamma_star=gamma_star, a_o_zero=a_o_zero, a_o_star=a_o_star,
                           a_star=a_star, s_h=s_h, m1=m1, m1_3d=m3, triplets_3d=k,
                           code_bits=CODE_LETTERS_PER_TRIPLET * k)


# -- cyclic renewal ----------------------------------------------------------

_PI3 = math.pi / 3.0


def _two_cos_minus_one(theta):
    # 2 cos(t) - 1 = 2 (cos t - cos pi/3), written as a product so it vanishes exactly at pi/3
    return -4.0 * math.sin(0.5 * (theta + _PI3)) * math.sin(0.5 * (theta - _PI3))


def _denominator(theta):
    # (2 - cos t)^2 + sin^2 t = 5 - 4 cos t = 3 - 2 (2 cos t - 1)
    return 3.0 - 2.0 * _two_cos_minus_one(theta)


def gamma_lo(theta: float) -> float:
    s = math.sin(theta)
    if abs(s) < 1e-15:
        raise DomainError(f"theta={theta} is a multiple of pi; gamma is singular")
    return _two_cos_minus_one(theta) / (2.0 * s)


@dataclass(frozen=True)
class CycleSpawn:
    theta: float
    beta_prev: float
    alpha_new: float
    beta_new: float
    gamma_lo: float

    def as_dict(self):
        return dict(self.__dict__)


def cycle_spawn(beta_prev: float, theta: float) -> CycleSpawn:
    """Starting eigenvalue of a renewed model spawned from an oscillating mode.

    alpha_new = -beta 2 sin t / ((2 - cos t)^2 + sin^2 t),
    gamma_lo = (2 cos t - 1) / (2 sin t), beta_new = gamma_lo alpha_new.
    """
    g = gamma_lo(theta)
    den = _denominator(theta)
    if den <= 0:
        raise DomainError("degenerate renewal denominator")
    alpha = -beta_prev * 2.0 * math.sin(theta) / den
    return CycleSpawn(theta=theta, beta_prev=beta_prev, alpha_new=alpha, beta_new=g * alpha, gamma_lo=g)


def theta_for_gamma(target: float = 1.0) -> float:
    """Phase in (0, pi/3] with gamma_lo(theta) = target (gamma_lo falls from +inf to 0 there)."""
    if target < 0:
        raise DomainError("target gamma must be >= 0 on the first branch")
    if target == 0:
        return _PI3
    return brentq(lambda t: gamma_lo(t) - target, 1e-9, _PI3, xtol=1e-15, maxiter=200)


def cycle_frequency_ratio(inv: InvariantSet) -> float:
    """l = (0.577 pi/3) / ((a_o/a) ln 2), the renewed-to-initial frequency ratio."""
    if not inv.a:
        raise DomainError("invariant a must be nonzero")
    return (RENEWAL_COEFF * math.pi / 3.0) / ((inv.a_o / inv.a) * math.log(2.0))


def gamma1_invariants() -> InvariantSet:
    """The gamma = 1 row carrying both a_o and a."""
    return next(r for r in lookup(1.0).rows if r.a is not None)


@dataclass(frozen=True)
class CycleTriplet:
    eigenvalues: tuple
    ratio_first_second: float
    ratio_first_third: float

    @property
    def ratio_of_ratios(self):
        return self.ratio_first_third / self.ratio_first_second


def cycle_triplet(alpha_lo: float = CANONICAL_ALPHA_LO) -> CycleTriplet:
    """Renewed triplet scaled from the reference triple through its middle eigenvalue."""
    if alpha_lo == 0:
        raise DomainError("alpha_lo must be nonzero")
    k = alpha_lo / CANONICAL_ALPHA_LO
    e = tuple(k * v for v in CANONICAL_TRIPLE)
    if alpha_lo == CANONICAL_ALPHA_LO:
        e = CANONICAL_TRIPLE
    return CycleTriplet(eigenvalues=e, ratio_first_second=e[0] / e[1], ratio_first_third=e[0] / e[2])

"""Cellular surface arithmetic of the triplet hierarchy: spot areas, curvature and
area ratios along the chain, total area, rotation time/speed and the observer
interaction budget.

This module counts triplets as m = n/2 (the network module uses (n - 1)/2);
conversions are left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateChainError, DomainError

CELLS_PER_NODE = 4
NODE_SPOT = 2.0 * math.pi / 3.0
CELL_SPOT = math.pi / 6.0
PINNED_GROWTH = 1.3

K_IT = 1.154
K_MT = 1.525
GAMMA_MO = 3.495


class Orientation(str, Enum):
    """Sign carried by spot areas; arithmetic uses magnitudes."""

    POSITIVE = "+"
    NEGATIVE = "-"


@dataclass(frozen=True)
class CellAreas:
    node_spot: float
    cell_spot: float
    node_orientation: Orientation = Orientation.NEGATIVE
    cell_orientation: Orientation = Orientation.NEGATIVE

    @property
    def cells_per_node(self):
        return self.node_spot / self.cell_spot


def cell_areas() -> CellAreas:
    """Curvature-independent node spot 2pi/3 and per-cell spot pi/6."""
    return CellAreas(node_spot=NODE_SPOT, cell_spot=CELL_SPOT)


def _growth(gamma_alpha):
    if not 0.0 < gamma_alpha < 3.0:
        raise DegenerateChainError(f"chain ratio must satisfy 0 < gamma_alpha < 3, got {gamma_alpha}")
    return 3.0 / gamma_alpha


@dataclass(frozen=True)
class ChainRatios:
    eig: float
    area: float
    curvature: float
    relative_curvature: float


def chain_ratios(gamma_alpha: float) -> ChainRatios:
    """Ratios between neighbouring triplets: eigenvalue 3/g, area (3/g)^2, curvature (3/g)^3."""
    g = _growth(gamma_alpha)
    return ChainRatios(eig=g, area=g * g, curvature=g ** 3, relative_curvature=g)


@dataclass(frozen=True)
class TotalArea:
    area: float
    asymptote: float


def total_area(alpha_first: float, gamma_alpha: float, m: int, n: int = None) -> TotalArea:
    """F_m = pi alpha^2 ((3/g)^(2(m - 1)) - 1); asymptote pi alpha^2 (3/g)^n with n = 2m by default."""
    if m < 1:
        raise DomainError("triplet count m must be >= 1")
    g = _growth(gamma_alpha)
    a2 = alpha_first * alpha_first
    n = 2 * m if n is None else n
    return TotalArea(area=math.pi * a2 * (g ** (2 * (m - 1)) - 1.0), asymptote=math.pi * a2 * g ** n)


def area_series(alpha_first: float, gamma_alpha: float, m_max: int):
    """(m, F_m) pairs for m = 1..m_max, ready for plotting."""
    return [(m, total_area(alpha_first, gamma_alpha, m).area) for m in range(1, m_max + 1)]


def bits_enfolded(alpha_m: float) -> float:
    """Bits enfolded by a node spot of radius alpha_m: 6 alpha_m^2."""
    return 6.0 * alpha_m * alpha_m


def bits_from_area(area: float) -> float:
    return abs(area) / CELL_SPOT


@dataclass(frozen=True)
class Rotation:
    """Rotation time and speed of the cell-code helix.

    ``T_R``/``C_R`` follow the finite form 4m / (alpha (g^m - 1)); the
    ``*_asymptotic`` pair drops the -1, giving 2n / (alpha g^(n/2)) and
    3 pi alpha g^(n/2) / n.
    """

    n: int
    m: int
    growth: float
    T_R: float
    C_R: float
    T_R_asymptotic: float
    C_R_asymptotic: float


def rotation(n: int, alpha_on: float, gamma_alpha: float = None, *, pin_ratio: bool = False) -> Rotation:
    """Rotation time and speed for an n-dimensional model.

    The growth factor is 3/gamma_alpha, or the rounded 1.3 when ``pin_ratio``.
    """
    if n < 2 or n % 2:
        raise DomainError(f"rotation needs an even dimension (m = n/2), got n={n}")
    if alpha_on <= 0:
        raise DomainError("alpha_on must be positive")
    g = PINNED_GROWTH if pin_ratio else _growth(gamma_alpha if gamma_alpha is not None else 2.3)
    if g <= 1.0:
        raise DegenerateChainError(f"growth factor {g} must exceed 1")
    m = n // 2
    gm = g ** m
    t_r = 4.0 * m / (alpha_on * (gm - 1.0))
    t_a = 4.0 * m / (alpha_on * gm)
    return Rotation(
        n=n,
        m=m,
        growth=g,
        T_R=t_r,
        C_R=6.0 * math.pi / t_r,
        T_R_asymptotic=t_a,
        C_R_asymptotic=3.0 * math.pi * alpha_on * gm / n,
    )


@dataclass(frozen=True)
class RotationCorrection:
    k_it: float
    k_mt: float
    k_it_cubed: float
    gamma_mo: float
    gamma_m: float
    literal_k_it: float
    k_it_conflict: bool


def rotation_correction(gamma_mo: float = GAMMA_MO) -> RotationCorrection:
    """Eigenvector-rotation constants: k_it ~ 1.154, k_mt ~ 1.525, gamma_m = gamma_mo / k_mt.

    The printed (cos pi/4)^-1 = sqrt 2 disagrees with 1.154; it is returned as
    ``literal_k_it`` with ``k_it_conflict`` set.
    """
    literal = 1.0 / math.cos(math.pi / 4.0)
    return RotationCorrection(
        k_it=K_IT,
        k_mt=K_MT,
        k_it_cubed=K_IT ** 3,
        gamma_mo=gamma_mo,
        gamma_m=gamma_mo / K_MT,
        literal_k_it=literal,
        k_it_conflict=abs(literal - K_IT) > 1e-3,
    )


@dataclass(frozen=True)
class InteractionBudget:
    S_m: float
    N: float
    N_em: float
    S_em: float


def interaction_budget(F_im: float, f_oc: float = 1.0) -> InteractionBudget:
    """Observer budget of a surface holding F_im bits: S_m = F/4, N = F/f, N_em = N/4."""
    if F_im < 0 or f_oc <= 0:
        raise DomainError("surface information must be >= 0 and bits per cell > 0")
    N = F_im / f_oc
    N_em = N / CELLS_PER_NODE
    return InteractionBudget(S_m=F_im / (CELLS_PER_NODE * f_oc), N=N, N_em=N_em, S_em=N_em * f_oc)


def geometry_rows(n: int, alpha: float, gamma_alpha: float, pin_ratio: bool = False):
    """Rows (m, F_m, K_ratio, T_R, C_R) for m = 1..n/2, the CSV layout of the geometry report."""
    if n < 2 or n % 2:
        raise DomainError(f"surface dimension must be even (m = n/2), got n={n}")
    g = PINNED_GROWTH if pin_ratio else _growth(gamma_alpha)
    rows = []
    for m in range(1, n // 2 + 1):
        area = math.pi * alpha * alpha * (g ** (2 * (m - 1)) - 1.0)
        rot = rotation(2 * m, alpha, gamma_alpha, pin_ratio=pin_ratio)
        rows.append({"m": m, "F_m": area, "K_ratio": g ** 3, "T_R": rot.T_R, "C_R": rot.C_R})
    return rows

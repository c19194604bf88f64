"""Segment invariants: root catalogs of the transcendental invariant equations,
the tabulated (gamma -> a_o, a, b_o) values, and information-acquisition arithmetic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import DomainError, PoleError

SCAN_LOW = -5.0
SCAN_HIGH = 5.0
SCAN_POINTS = 10_000
RESIDUAL_TOL = 1e-12
GAMMA_STAR = 0.007148


class Source(str, Enum):
    EQUATION_SOLVED = "EquationSolved"
    PAPER_TABLE = "PaperTable"


@dataclass(frozen=True)
class Root:
    value: float
    residual: float
    branch_id: int


@dataclass(frozen=True)
class InvariantSet:
    """Invariants of one segment kind, stored as magnitudes.

    ``negative`` records that the underlying signed invariant is < 0 (stable
    segments carry a_io < 0).  Any of ``a_o``, ``a``, ``b_o`` may be ``None``
    when the row does not report it.
    """

    gamma: float
    a_o: Optional[float] = None
    a: Optional[float] = None
    b_o: Optional[float] = None
    branch_id: int = 0
    source: Source = Source.PAPER_TABLE
    negative: bool = False
    label: str = ""
    conflict: bool = False
    note: str = ""

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma}")
        for name in ("a_o", "a", "b_o"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise DomainError(f"invariant {name} must be finite")

    @property
    def ratio(self):
        """Invariant ratio a / a_o."""
        return self.a / self.a_o

    def as_dict(self):
        return {
            "gamma": self.gamma,
            "a_o": self.a_o,
            "a": self.a,
            "b_o": self.b_o,
            "branch_id": self.branch_id,
            "source": self.source.value,
            "negative": self.negative,
            "label": self.label,
            "conflict": self.conflict,
            "note": self.note,
        }


@dataclass(frozen=True)
class InvariantTriple:
    i1: float
    i2: float
    i3: float


# -- equations -------------------------------------------------------------

def a_equation(gamma: float) -> Callable[[np.ndarray], np.ndarray]:
    """Residual function of the a-invariant equation.

    For gamma > 0 this is ``2 sin(g a) + g cos(g a) - g exp(a)``; at gamma = 0
    the equation vanishes identically, so its limit ``2a + 1 - exp(a)`` (the
    form divided by gamma, gamma -> 0) is used instead.
    """
    _check_gamma(gamma)
    if gamma == 0.0:
        return lambda a: 2.0 * a + 1.0 - np.exp(a)
    g = float(gamma)
    return lambda a: 2.0 * np.sin(g * a) + g * np.cos(g * a) - g * np.exp(a)


def b_equation(gamma: float) -> Callable[[np.ndarray], np.ndarray]:
    """Residual function ``2 b cos(g b) - g sin(g b) - exp(b)`` of the b-invariant equation."""
    _check_gamma(gamma)
    g = float(gamma)
    return lambda b: 2.0 * b * np.cos(g * b) - g * np.sin(g * b) - np.exp(b)


def _check_gamma(gamma):
    if not (0.0 <= gamma <= 1.0):
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")


def _bisect(f, lo, hi, flo):
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = float(f(mid))
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo if abs(flo) <= abs(float(f(hi))) else hi


def find_roots(f, low=SCAN_LOW, high=SCAN_HIGH, points=SCAN_POINTS) -> List[Root]:
    """All sign-change roots of ``f`` on ``[low, high]``, ascending.

    The interval is scanned on ``points`` uniform nodes (endpoints included);
    every bracket is bisected down to adjacent floating-point numbers.
    """
    x = np.linspace(low, high, points + 1)
    if low < 0.0 < high:
        # keep the origin on the grid so the root at zero is hit exactly
        x = np.union1d(x, [0.0])
    y = f(x)
    found = []
    for i in range(x.size):
        if y[i] == 0.0:
            found.append(float(x[i]))
        elif i + 1 < x.size and y[i + 1] != 0.0 and (y[i] < 0) != (y[i + 1] < 0):
            found.append(_bisect(f, float(x[i]), float(x[i + 1]), float(y[i])))
    roots = []
    for r in sorted(found):
        if roots and abs(r - roots[-1]) < 1e-9:
            continue
        roots.append(r)
    return [Root(value=r, residual=abs(float(f(r))), branch_id=k) for k, r in enumerate(roots)]


def solve_a_invariant(gamma: float, points: int = SCAN_POINTS) -> List[Root]:
    return find_roots(a_equation(gamma), points=points)


def solve_b_invariant(gamma: float, points: int = SCAN_POINTS) -> List[Root]:
    return find_roots(b_equation(gamma), points=points)


def connect_invariants(i3: float) -> InvariantTriple:
    """``i2 = i3 e^i3 / (2 - e^i3)`` and ``i1 = 2 i2``."""
    e = math.exp(i3)
    denom = 2.0 - e
    if abs(denom) < 1e-12:
        raise PoleError(f"i3 = {i3} sits on the pole exp(i3) = 2")
    i2 = i3 * e / denom
    return InvariantTriple(i1=2.0 * i2, i2=i2, i3=i3)


def equation_solved_sets(gamma: float) -> List[InvariantSet]:
    """One InvariantSet per nonzero root of the a-equation.

    The control invariant follows from connecting the signed root:
    a = |i2(i3 = -a_o)|.  b_o is the root of the b-equation nearest in
    magnitude to a_o, when one exists.
    """
    b_roots = [r.value for r in solve_b_invariant(gamma) if r.value != 0.0]
    out = []
    for r in solve_a_invariant(gamma):
        if r.value == 0.0:
            continue
        a_o = abs(r.value)
        try:
            a = abs(connect_invariants(-a_o).i2)
        except PoleError:
            a = None
        b_o = min((abs(b) for b in b_roots), key=lambda b: abs(b - a_o), default=None)
        out.append(
            InvariantSet(
                gamma=gamma,
                a_o=a_o,
                a=a,
                b_o=b_o,
                branch_id=r.branch_id,
                source=Source.EQUATION_SOLVED,
                negative=r.value < 0,
                label=f"root {r.branch_id} of the a-equation",
            )
        )
    return out


# -- tabulated values ------------------------------------------------------

_TABLE = (
    dict(gamma=0.0, a_o=0.75, a=0.25, label="gamma->0 a_io/a_i pair", conflict=True,
         note="a_o at gamma->0 also reported as 0.768"),
    dict(gamma=0.0, a_o=0.768, b_o=0.7, label="gamma->0 nearest solutions", conflict=True,
         note="a_o at gamma->0 also reported as 0.75"),
    dict(gamma=GAMMA_STAR, a_o=0.762443796, a=0.238566887, label="gamma* threshold row"),
    dict(gamma=0.5, a_o=0.7, label="gamma~0.5 encoding context (~1 bit)"),
    dict(gamma=1.0, a_o=0.3, b_o=0.3, label="gamma->1 nearest solutions", conflict=True,
         note="a_o at gamma=1 also reported as 0.58767"),
    dict(gamma=1.0, a_o=0.58767, a=0.29, label="gamma=1 cycle-ratio row", conflict=True,
         note="a_o at gamma=1 also reported as 0.3"),
)


def paper_table() -> List[InvariantSet]:
    """Fixed reference table of reported invariant values; conflicting rows are flagged."""
    return [InvariantSet(source=Source.PAPER_TABLE, branch_id=k, **row) for k, row in enumerate(_TABLE)]


@dataclass(frozen=True)
class TableLookup:
    gamma: float
    rows: tuple
    exact: bool
    interpolation_refused: bool

    @property
    def conflicting(self):
        return any(r.conflict for r in self.rows)


def lookup(gamma: float, tol: float = 1e-9) -> TableLookup:
    """Table rows at ``gamma``; for an unlisted gamma the nearest rows are returned
    and interpolation is refused."""
    _check_gamma(gamma)
    rows = paper_table()
    hit = tuple(r for r in rows if abs(r.gamma - gamma) <= tol)
    if hit:
        return TableLookup(gamma=gamma, rows=hit, exact=True, interpolation_refused=False)
    d = min(abs(r.gamma - gamma) for r in rows)
    near = tuple(r for r in rows if abs(abs(r.gamma - gamma) - d) <= tol)
    return TableLookup(gamma=gamma, rows=near, exact=False, interpolation_refused=True)


def default_invariants() -> InvariantSet:
    """The gamma* row, the one full (a_o, a) pair without a conflicting twin."""
    return lookup(GAMMA_STAR).rows[0]


@dataclass(frozen=True)
class CatalogComparison:
    gamma: float
    table_value: float
    nearest_root: Optional[float]
    difference: Optional[float]
    quantity: str


def compare_with_catalog(row: InvariantSet) -> List[CatalogComparison]:
    """Distance from each tabulated a_o / b_o to the nearest root magnitude."""
    out = []
    for quantity, value, solver in (("a_o", row.a_o, solve_a_invariant), ("b_o", row.b_o, solve_b_invariant)):
        if value is None:
            continue
        mags = [abs(r.value) for r in solver(row.gamma) if r.value != 0.0]
        near = min(mags, key=lambda m: abs(m - value), default=None)
        out.append(
            CatalogComparison(
                gamma=row.gamma,
                table_value=value,
                nearest_root=near,
                difference=None if near is None else near - value,
                quantity=quantity,
            )
        )
    return out


def catalog_csv(gammas: Sequence[float]) -> str:
    """CSV catalog with columns gamma, root, residual, branch_id, source."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["gamma", "equation", "root", "residual", "branch_id", "source"])
    for g in gammas:
        for eq, solver in (("a", solve_a_invariant), ("b", solve_b_invariant)):
            for r in solver(g):
                w.writerow([repr(float(g)), eq, repr(r.value), f"{r.residual:.3e}", r.branch_id,
                            Source.EQUATION_SOLVED.value])
    for row in paper_table():
        for eq, v in (("a", row.a_o), ("b", row.b_o)):
            if v is not None:
                w.writerow([repr(row.gamma), eq, repr(v), "", row.branch_id, Source.PAPER_TABLE.value])
    return buf.getvalue()


# -- acquisition arithmetic ------------------------------------------------

def acquisition_step(a_tau: float, inv: InvariantSet) -> float:
    """Information bound by a step control: I_s = a_tau * a."""
    return float(a_tau) * float(inv.a)


@dataclass(frozen=True)
class ImpulseAcquisition:
    information: float
    a_o: float
    two_a: Optional[float]
    decomposition_mismatch: Optional[float]

    @property
    def flagged(self):
        return self.decomposition_mismatch is not None and abs(self.decomposition_mismatch) > 1e-9


def acquisition_impulse(inv: InvariantSet) -> ImpulseAcquisition:
    """Information of an impulse control, a_o^2.

    The impulse splits into two steps, so a_o = 2a is expected; the gap between
    the row's a_o and 2a is reported, not enforced.
    """
    two_a = None if inv.a is None else 2.0 * inv.a
    return ImpulseAcquisition(
        information=inv.a_o ** 2,
        a_o=inv.a_o,
        two_a=two_a,
        decomposition_mismatch=None if two_a is None else inv.a_o - two_a,
    )


def portioning_loss(parts: Sequence[float], alpha: float):
    """Quadratic acquisition of a whole portion vs. its parts.

    Returns ``(h_whole, h_parts, dh)`` with h_whole = alpha (sum x)^2,
    h_parts = alpha sum x^2 and dh their difference.
    """
    xs = [float(p) for p in parts]
    if not xs:
        raise DomainError("parts must be nonempty")
    if any(p < 0 or not math.isfinite(p) for p in xs):
        raise DomainError("parts must be finite and nonnegative")
    total = math.fsum(xs)
    sq = math.fsum(p * p for p in xs)
    # difference taken before scaling so a single part gives exactly 0
    return alpha * total * total, alpha * sq, alpha * (total * total - sq)


def pairwise_loss(parts: Sequence[float], alpha: float) -> float:
    """2 alpha sum_{i<j} x_i x_j, the expanded form of the portioning loss."""
    xs = [float(p) for p in parts]
    # sum_{i<j} x_i x_j via running prefix sums, avoiding the subtraction
    acc, prefix = [], 0.0
    for x in xs:
        acc.append(x * prefix)
        prefix += x
    return 2.0 * alpha * math.fsum(acc)

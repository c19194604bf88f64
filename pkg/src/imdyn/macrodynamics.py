"""Macrolevel operator identification, the step/needle control family, extremal
propagation and the dynamic quantities built on them.

Operators act on column vectors; scalars are accepted wherever a 1x1 matrix is.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import expm, sqrtm

from .errors import DomainError, IdentificationError, PoleError
from .invariants import InvariantSet
from .microlevel import CorrelationSeries, derivative

MAX_DENSE = 64
POLE_TOL = 1e-10
DEFAULT_WINDOW_FRACTION = 0.1
MAX_SPEED_FACTOR = 4.0


def _mat(value, name="matrix"):
    m = np.atleast_2d(np.asarray(value, dtype=float))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"{name} must be square, got shape {m.shape}")
    if m.shape[0] > MAX_DENSE:
        raise DomainError(f"{name} exceeds the dense size limit {MAX_DENSE}")
    return m


def _vec(value):
    return np.atleast_1d(np.asarray(value, dtype=float))


def _inv(m, err, what):
    try:
        cond = np.linalg.cond(m)
    except np.linalg.LinAlgError:
        cond = math.inf
    if not math.isfinite(cond) or cond > 1e12:
        raise err(f"{what} is singular (condition number {cond:.3g})")
    return np.linalg.inv(m)


@dataclass(frozen=True)
class MacroModel:
    """Identified dynamic operator with its spectrum."""

    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _mat(self.A, "operator"))

    @property
    def eigenvalues(self):
        w = np.linalg.eigvals(self.A)
        # descending by |Re|, conjugate pairs kept together (positive imaginary first)
        return w[np.lexsort((-w.imag, -np.abs(w.real)))]

    @property
    def alphas(self):
        return self.eigenvalues.real

    @property
    def betas(self):
        return self.eigenvalues.imag

    @property
    def leading_alpha(self):
        return float(self.alphas[0])

    @property
    def gamma(self):
        """|beta / alpha| of the leading eigenvalue (0 for a real spectrum)."""
        lam = self.eigenvalues[0]
        if lam.real == 0:
            return math.inf if lam.imag else 0.0
        return abs(lam.imag / lam.real)


def identify_operator(b, r_v) -> np.ndarray:
    """A = -b r_v^-1."""
    b, r_v = _mat(b, "b"), _mat(r_v, "r_v")
    return -b @ _inv(r_v, IdentificationError, "correlation matrix r_v")


def identify_operator_integral(b_tau, b_history, t_history) -> np.ndarray:
    """|A(tau)| = b(tau) (2 int b dt)^-1 over the supplied window, trapezoid rule.

    ``b_history`` is a sequence of scalars or matrices sampled on ``t_history``.
    """
    b_tau = _mat(b_tau, "b(tau)")
    hist = np.asarray(b_history, dtype=float)
    if hist.ndim == 1:
        hist = hist[:, None, None]
    integral = trapezoid(hist, np.asarray(t_history, dtype=float), axis=0)
    w = np.linalg.eigvalsh(0.5 * (integral + integral.T))
    if w.min() <= 0:
        raise IdentificationError("integrated dispersion over the window is not positive definite")
    return b_tau @ np.linalg.inv(2.0 * integral)


class ControlKind(str, Enum):
    STEP = "Step"
    IMPULSE = "Impulse"
    NEEDLE = "Needle"


@dataclass(frozen=True)
class ControlEvent:
    kind: ControlKind
    time: float
    value: tuple

    def as_dict(self):
        return {"kind": self.kind.value, "time": self.time, "value": list(self.value)}


def feedback_control(x_tau, time: float = 0.0) -> ControlEvent:
    """Step control v = -2 x(tau)."""
    return ControlEvent(ControlKind.STEP, float(time), tuple(float(v) for v in -2.0 * _vec(x_tau)))


def needle_control(x_before, x_after, time: float = 0.0) -> ControlEvent:
    """Needle control dv = -2 x_before + 2 x_after joining two segments."""
    dv = -2.0 * _vec(x_before) + 2.0 * _vec(x_after)
    return ControlEvent(ControlKind.NEEDLE, float(time), tuple(float(v) for v in dv))


@dataclass(frozen=True)
class StartingControl:
    x0: np.ndarray
    v0: np.ndarray
    u0: np.ndarray
    A0: np.ndarray


def starting_control(r_s, b_s) -> StartingControl:
    """Start-up control from the initial correlations.

    x0 is the magnitude of the diagonal of r_s^(1/2), v0 = -2 x0,
    A0 = b_s r_s^-1 (magnitude form) and u0 = A0 v0.
    """
    r_s, b_s = _mat(r_s, "r_s"), _mat(b_s, "b_s")
    if not np.allclose(r_s, r_s.T, atol=1e-12) or np.linalg.eigvalsh(r_s).min() <= 0:
        raise DomainError("r_s must be symmetric positive definite")
    root = np.real(sqrtm(r_s))
    x0 = np.abs(np.diag(root))
    A0 = b_s @ np.linalg.inv(r_s)
    v0 = -2.0 * x0
    return StartingControl(x0=x0, v0=v0, u0=A0 @ v0, A0=A0)


def evolve_operator(A0, t: float) -> np.ndarray:
    """A^v(t) = -A0 e^(A0 t) [2I - e^(A0 t)]^-1 under the step control."""
    A0 = _mat(A0, "A0")
    E = expm(A0 * t)
    lam = np.linalg.eigvals(E)
    if np.any(np.abs(lam - 2.0) < POLE_TOL * max(1.0, np.abs(lam).max())):
        raise PoleError(f"exp(A0 t) has eigenvalue 2 at t={t}: operator blows up")
    M = 2.0 * np.eye(A0.shape[0]) - E
    if np.linalg.cond(M) > 1e14:
        raise PoleError(f"2I - exp(A0 t) is singular at t={t}")
    return -A0 @ E @ np.linalg.inv(M)


def pole_time(alpha: float) -> float:
    """Time ln2/alpha at which a positive real eigenvalue makes exp(alpha t) = 2."""
    if alpha <= 0:
        raise DomainError("the consolidation pole exists only for alpha > 0")
    return math.log(2.0) / alpha


def segment_interval(alpha_o: float, inv: InvariantSet) -> float:
    """Segment length t = a_o / |alpha_o|."""
    if alpha_o == 0 or not math.isfinite(alpha_o):
        raise DomainError("alpha_o must be finite and nonzero")
    return inv.a_o / abs(alpha_o)


@dataclass(frozen=True)
class Segment:
    tau_start: float
    tau_end: float
    alpha_start: float
    alpha_end: float
    inv: InvariantSet
    control: tuple = ()

    def __post_init__(self):
        if not self.tau_end > self.tau_start:
            raise DomainError("segment must have tau_end > tau_start")

    @property
    def duration(self):
        return self.tau_end - self.tau_start

    @classmethod
    def build(cls, alpha_start: float, inv: InvariantSet, tau_start: float = 0.0, control=()):
        """Segment whose length is fixed by the invariant a_o = |alpha_start| t."""
        t = segment_interval(alpha_start, inv)
        a_end = evolve_operator(np.array([[-abs(alpha_start)]]), t)[0, 0]
        return cls(tau_start, tau_start + t, alpha_start, float(a_end), inv, tuple(control))

    def as_dict(self):
        return {
            "tau_start": self.tau_start,
            "tau_end": self.tau_end,
            "alpha_start": self.alpha_start,
            "alpha_end": self.alpha_end,
            "a_o": self.inv.a_o,
            "control": list(self.control),
        }


def segments_to_json(segments: Sequence[Segment]) -> str:
    return json.dumps([s.as_dict() for s in segments], indent=2, sort_keys=True)


def propagate_extremal(x0, A, t: float) -> np.ndarray:
    """x(t) = 2 x0 - e^(A t) x0, the state under the step control v = -2 x0."""
    x0 = _vec(x0)
    return 2.0 * x0 - expm(_mat(A, "A") * t) @ x0


def zero_crossings(x0, A, times) -> List[tuple]:
    """Scan propagate_extremal on ``times``; return (component, t) per sign change.

    Crossing times are linearly interpolated inside the bracketing grid step.
    """
    times = np.asarray(times, dtype=float)
    xs = np.array([propagate_extremal(x0, A, t) for t in times])
    out = []
    for i in range(xs.shape[1]):
        col = xs[:, i]
        for k in range(len(times) - 1):
            if col[k] == 0.0:
                out.append((i, float(times[k])))
            elif (col[k] < 0) != (col[k + 1] < 0) and col[k + 1] != 0.0:
                f = col[k] / (col[k] - col[k + 1])
                out.append((i, float(times[k] + f * (times[k + 1] - times[k]))))
    return out


@dataclass(frozen=True)
class ConstraintFlow:
    residual: float
    residual_matrix: np.ndarray
    flow: np.ndarray
    force: Optional[np.ndarray]


def constraint_and_flow(a_u, b, X, dX_dx, r=None, c0: float = 1.0) -> ConstraintFlow:
    """Dynamic constraint residual a^T X + Tr[b dX/dx], flow 2bX and force -c0 r^(-1/2) / 4.

    The matrix residual is a X^T + b dX/dx, whose trace is the scalar residual.
    """
    a_u, X = _vec(a_u), _vec(X)
    b, dX = _mat(b, "b"), _mat(dX_dx, "dX_dx")
    if np.linalg.eigvalsh(0.5 * (b + b.T)).min() < -1e-12:
        raise DomainError("b must be positive semidefinite")
    mat = np.outer(a_u, X) + b @ dX
    force = None
    if r is not None:
        r = _mat(r, "r")
        force = -0.25 * c0 * np.linalg.inv(np.real(sqrtm(r)))
    return ConstraintFlow(
        residual=float(a_u @ X + np.trace(b @ dX)),
        residual_matrix=mat,
        flow=2.0 * b @ X,
        force=force,
    )


@dataclass(frozen=True)
class PotentialGradient:
    """Gradient of the dynamic potential along a correlation history.

    ``grad`` is r^-1 per grid point and ``relative_speed`` its logarithmic
    derivative (d grad/dt) grad^-1 by finite differences.  When an operator
    is supplied, ``law`` holds grad(t0) e^(2A(t - t0)) and ``law_speed`` = 2A;
    ``sign_mismatch`` says whether the measured speed points opposite to 2A.
    """

    grid: np.ndarray
    grad: np.ndarray
    relative_speed: np.ndarray
    law: Optional[np.ndarray] = None
    law_speed: Optional[np.ndarray] = None
    sign_mismatch: Optional[bool] = None


def potential_gradient(r_history, grid, A=None) -> PotentialGradient:
    r = np.asarray(r_history, dtype=float)
    if r.ndim == 1:
        r = r[:, None, None]
    grid = np.asarray(grid, dtype=float)
    grad = np.empty_like(r)
    for g in range(r.shape[0]):
        grad[g] = _inv(r[g], DomainError, f"correlation at t={grid[g]:.6g}")
    d = derivative(grad, grid)
    speed = np.einsum("gij,gjk->gik", d, np.linalg.inv(grad))
    if A is None:
        return PotentialGradient(grid, grad, speed)
    A = _mat(A, "A")
    law = np.array([grad[0] @ expm(2.0 * A * (t - grid[0])) for t in grid])
    mid = speed[len(grid) // 2]
    mismatch = bool(np.trace(mid) * np.trace(2.0 * A) < 0)
    return PotentialGradient(grid, grad, speed, law=law, law_speed=2.0 * A, sign_mismatch=mismatch)


def _window_integral(values, grid, lo, hi):
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if lo < grid[0] - 1e-12 or hi > grid[-1] + 1e-12 or not hi > lo:
        raise DomainError(f"window [{lo}, {hi}] is outside the history")
    inner = (grid > lo) & (grid < hi)
    ts = np.concatenate([[lo], grid[inner], [hi]])
    vs = np.concatenate([[np.interp(lo, grid, values)], values[inner], [np.interp(hi, grid, values)]])
    return float(trapezoid(vs, ts))


def detailed_balance(b_i_history, b_k_history, grid, tau: float, o: float) -> float:
    """b_i(tau)/int_{tau-o}^{tau} b_i - b_k(tau)/int_{tau}^{tau+o} b_k."""
    grid = np.asarray(grid, dtype=float)
    left = _window_integral(b_i_history, grid, tau - o, tau)
    right = _window_integral(b_k_history, grid, tau, tau + o)
    if left == 0.0 or right == 0.0:
        raise DomainError("one-sided dispersion integrals must be nonzero")
    bi = float(np.interp(tau, grid, np.asarray(b_i_history, dtype=float)))
    bk = float(np.interp(tau, grid, np.asarray(b_k_history, dtype=float)))
    return bi / left - bk / right


@dataclass(frozen=True)
class InformationSpeed:
    local: tuple
    trace: float
    scaled: tuple
    global_speed: float


def information_speed(alphas: Sequence[float], c=None) -> InformationSpeed:
    """Local speeds |alpha_i|, their trace, and the c_i-scaled variants (c_i <= 4)."""
    local = tuple(abs(float(a)) for a in alphas)
    cs = (1.0,) * len(local) if c is None else tuple(float(v) for v in np.broadcast_to(c, (len(local),)))
    if any(not 0.0 <= v <= MAX_SPEED_FACTOR for v in cs):
        raise DomainError(f"speed factors must lie in [0, {MAX_SPEED_FACTOR}]")
    scaled = tuple(ci * a for ci, a in zip(cs, local))
    return InformationSpeed(local=local, trace=math.fsum(local), scaled=scaled, global_speed=math.fsum(scaled))


def conductivity_proxy(sigma_e, grid) -> np.ndarray:
    """(1/2) d(sigma_e)/dt / sigma_e by centered differences."""
    s = np.asarray(sigma_e, dtype=float)
    if np.any(s == 0):
        raise DomainError("conductivity series must be nonzero")
    return 0.5 * derivative(s, grid) / s


# -- identification along an ensemble --------------------------------------

@dataclass
class IdentifiedChain:
    segments: List[Segment]
    operators: List[np.ndarray]
    integral_operators: List[np.ndarray]
    start: StartingControl
    window_fraction: float
    needles: List[ControlEvent] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)


def identify_chain(
    corr: CorrelationSeries,
    inv: InvariantSet,
    *,
    window_fraction: float = DEFAULT_WINDOW_FRACTION,
    max_segments: int = 64,
) -> IdentifiedChain:
    """Cut the horizon into extremal segments from the estimated moments.

    At each segment start the operator is identified from (b, r), the segment
    length follows from a_o/|alpha|, and the integral route over the preceding
    window (``window_fraction`` of the segment length) is kept as a cross-check.
    """
    grid = corr.grid
    start = starting_control(corr.r[0], corr.b[0])
    tau = float(grid[0])
    segs, ops, iops, needles, warnings = [], [], [], [], []
    x_prev = start.x0
    while len(segs) < max_segments:
        g = int(np.argmin(np.abs(grid - tau)))
        A = identify_operator(corr.b[g], corr.r[g])
        model = MacroModel(A)
        alpha = model.leading_alpha
        if not np.any(np.abs(model.eigenvalues) > 1e-12):
            raise IdentificationError(f"identified operator has zero spectrum at t={tau:.6g}")
        length = segment_interval(alpha, inv)
        if tau + length > grid[-1] + 1e-12:
            break
        w = window_fraction * length
        lo = max(grid[0], tau - w)
        if tau - lo > 0:
            sel = (grid >= lo - 1e-12) & (grid <= tau + 1e-12)
            if sel.sum() >= 2:
                iops.append(identify_operator_integral(corr.b[g], corr.b[sel], grid[sel]))
        x_tau = np.sqrt(np.clip(np.diag(corr.r[g]), 0.0, None))
        ctrl = feedback_control(x_tau, tau) if segs else ControlEvent(ControlKind.STEP, tau, tuple(float(v) for v in start.v0))
        seg = Segment.build(alpha, inv, tau_start=tau, control=ctrl.value)
        if segs:
            needles.append(needle_control(x_prev, x_tau, tau))
        segs.append(seg)
        ops.append(A)
        x_prev = x_tau
        tau = seg.tau_end
    if not segs:
        raise IdentificationError("horizon is shorter than the first segment; no segment closed")
    return IdentifiedChain(segs, ops, iops, start, window_fraction, needles, warnings)

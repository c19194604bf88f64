"""Controlled Ito diffusion: simulation, correlation estimates and entropy functionals.

Paths are generated by fixed-step Euler-Maruyama.  Every path owns an RNG
substream derived from ``(seed, stream, path_index)`` so an ensemble is a pure
function of its spec and size, whatever the number of worker threads.
"""

from __future__ import annotations

import csv
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import trapezoid

from .errors import (
    ConfigError,
    DomainError,
    InsufficientSampleError,
    SingularDiffusionError,
)
from .units import LN2

# eigenvalue floor applied to 2b before inversion
DIFFUSION_FLOOR = 1e-12
# fixed partition of paths into blocks; must not depend on worker count
BLOCK_SIZE = 512

DIFFUSION_KINDS = ("constant", "state_scaled", "callable", "covariance")

IMPULSE_ENTROPY = 0.5
STEP_ENTROPY_MINUS = 0.25
STEP_ENTROPY_PLUS = 0.25


def _as_matrix(value, n, name):
    arr = np.atleast_2d(np.asarray(value, dtype=float))
    if arr.shape == (1, 1) and n > 1:
        arr = arr[0, 0] * np.eye(n)
    if arr.shape != (n, n):
        raise ConfigError(f"{name} must be {n}x{n}, got shape {arr.shape}")
    return arr


def _as_vector(value, n, name):
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.shape == (1,) and n > 1:
        arr = np.full(n, arr[0])
    if arr.shape != (n,):
        raise ConfigError(f"{name} must have length {n}, got shape {arr.shape}")
    return arr


def _is_psd(m, tol=1e-12):
    if not np.allclose(m, m.T, atol=1e-12, rtol=1e-10):
        return False
    w = np.linalg.eigvalsh(0.5 * (m + m.T))
    return bool(w.min() >= -tol * max(1.0, abs(w).max()))


def _psd_sqrt(m):
    w, v = np.linalg.eigh(0.5 * (m + m.T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


@dataclass(frozen=True)
class DiffusionSpec:
    """Parametrized controlled diffusion ``dx = a(t, x) dt + sigma(t, x) dW``.

    The drift is ``drift_matrix @ x + control`` unless ``drift_fn`` is given.
    ``control`` may be a constant vector or a callable ``u(t) -> (n,)``.
    ``drift_fn(t, x)`` receives a ``(k, n)`` block of states and returns ``(k, n)``.

    Diffusion forms (``diffusion_kind``):

    ``constant``      sigma is a fixed n x n matrix.
    ``state_scaled``  sigma(t, x) = diag(x) @ sigma.
    ``callable``      ``sigma_fn(t, x) -> (k, n, n)``.
    ``covariance``    ``sigma_fn(t, x) -> (k, n, n)`` returns sigma sigma^T directly
                      (or ``sigma`` holds a constant one); checked for PSD each step.
    """

    dimension: int
    drift_matrix: Optional[np.ndarray] = None
    control: object = None
    drift_fn: Optional[Callable] = None
    sigma: Optional[np.ndarray] = None
    diffusion_kind: str = "constant"
    sigma_fn: Optional[Callable] = None
    initial_mean: object = 0.0
    initial_cov: object = 0.0
    t0: float = 0.0
    T: float = 1.0
    dt: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        n = self.dimension
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ConfigError(f"dimension must be a positive integer, got {n!r}")
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if not self.T > self.t0:
            raise ConfigError(f"horizon must satisfy T > t0, got [{self.t0}, {self.T}]")
        if self.diffusion_kind not in DIFFUSION_KINDS:
            raise ConfigError(f"unknown diffusion_kind {self.diffusion_kind!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        drift = None if self.drift_matrix is None else _as_matrix(self.drift_matrix, n, "drift_matrix")
        object.__setattr__(self, "drift_matrix", drift)
        if self.control is not None and not callable(self.control):
            object.__setattr__(self, "control", _as_vector(self.control, n, "control"))
        if self.diffusion_kind in ("constant", "state_scaled") or (
            self.diffusion_kind == "covariance" and self.sigma_fn is None
        ):
            sig = _as_matrix(0.0 if self.sigma is None else self.sigma, n, "sigma")
            if self.diffusion_kind == "covariance" and not _is_psd(sig):
                raise SingularDiffusionError("constant diffusion covariance is not PSD", t=self.t0)
            object.__setattr__(self, "sigma", sig)
        elif self.sigma_fn is None:
            raise ConfigError(f"diffusion_kind {self.diffusion_kind!r} requires sigma_fn")
        object.__setattr__(self, "initial_mean", _as_vector(self.initial_mean, n, "initial_mean"))
        cov = _as_matrix(self.initial_cov, n, "initial_cov")
        if not _is_psd(cov):
            raise ConfigError("initial covariance r(s) must be symmetric PSD")
        object.__setattr__(self, "initial_cov", cov)

    @classmethod
    def ornstein_uhlenbeck(cls, a=-1.0, sigma2=2.0, r0=1.0, mean0=0.0, **kw):
        """Scalar OU process ``dx = a x dt + sqrt(sigma2) dW`` with x(t0) ~ N(mean0, r0)."""
        return cls(
            dimension=1,
            drift_matrix=[[a]],
            sigma=[[math.sqrt(sigma2)]],
            initial_mean=mean0,
            initial_cov=r0,
            **kw,
        )

    @property
    def n_steps(self):
        steps = (self.T - self.t0) / self.dt
        k = int(round(steps))
        if k < 1 or abs(steps - k) > 1e-9 * max(1.0, steps):
            raise ConfigError(f"horizon length {self.T - self.t0} is not a multiple of dt={self.dt}")
        return k

    def grid(self):
        return self.t0 + self.dt * np.arange(self.n_steps + 1)

    @property
    def has_constant_diffusion(self):
        return self.diffusion_kind == "constant" or (
            self.diffusion_kind == "covariance" and self.sigma_fn is None
        )

    def drift(self, t, x):
        """Drift at time ``t`` for a ``(k, n)`` block of states."""
        x = np.asarray(x, dtype=float)
        if self.drift_fn is not None:
            return np.asarray(self.drift_fn(t, x), dtype=float).reshape(x.shape)
        out = np.zeros_like(x) if self.drift_matrix is None else x @ self.drift_matrix.T
        if self.control is not None:
            u = self.control(t) if callable(self.control) else self.control
            out = out + np.asarray(u, dtype=float)
        return out

    def sigma_at(self, t, x):
        """Diffusion matrix; ``(n, n)`` if constant, else ``(k, n, n)``."""
        if self.diffusion_kind == "constant":
            return self.sigma
        if self.diffusion_kind == "state_scaled":
            return x[:, :, None] * self.sigma[None, :, :]
        if self.diffusion_kind == "callable":
            return np.asarray(self.sigma_fn(t, x), dtype=float)
        if self.sigma_fn is None:
            return _psd_sqrt(self.sigma)
        return _covariance_sqrt(np.asarray(self.sigma_fn(t, x), dtype=float), t, 0)

    def dispersion(self, t, x):
        """b = sigma sigma^T / 2, ``(n, n)`` if constant, else ``(k, n, n)``."""
        if self.diffusion_kind == "covariance":
            if self.sigma_fn is None:
                return 0.5 * self.sigma
            return 0.5 * np.asarray(self.sigma_fn(t, x), dtype=float)
        s = self.sigma_at(t, x)
        if s.ndim == 2:
            return 0.5 * s @ s.T
        return 0.5 * np.einsum("kij,klj->kil", s, s)


def _covariance_sqrt(cov, t, path_offset):
    w, v = np.linalg.eigh(0.5 * (cov + np.swapaxes(cov, -1, -2)))
    scale = np.maximum(1.0, np.abs(w).max(axis=-1))
    bad = w.min(axis=-1) < -1e-12 * scale
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise SingularDiffusionError(
            f"diffusion covariance not PSD at t={t:.6g}, path {path_offset + idx}",
            t=float(t),
            path=path_offset + idx,
        )
    return np.einsum("kij,kj,klj->kil", v, np.sqrt(np.clip(w, 0.0, None)), v)


@dataclass
class TrajectoryEnsemble:
    """Sampled trajectories, ``paths[m, g, i]`` on a shared time ``grid``.

    ``qv_increments[g]`` is the path-averaged quadratic covariation accumulated
    over ``(grid[g], grid[g+1]]`` at the integration step; it is filled by the
    simulator and recomputed from ``paths`` otherwise.
    """

    paths: np.ndarray
    grid: np.ndarray
    spec: Optional[DiffusionSpec] = None
    qv_increments: Optional[np.ndarray] = None
    record_every: int = 1

    def __post_init__(self):
        self.paths = np.asarray(self.paths, dtype=float)
        self.grid = np.asarray(self.grid, dtype=float)
        if self.paths.ndim == 2:
            self.paths = self.paths[:, :, None]
        if self.paths.ndim != 3 or self.paths.shape[1] != self.grid.shape[0]:
            raise ConfigError("paths must have shape (M, len(grid), n)")
        if self.qv_increments is None:
            dx = np.diff(self.paths, axis=1)
            self.qv_increments = np.einsum("mgi,mgj->gij", dx, dx) / self.M

    @property
    def M(self):
        return self.paths.shape[0]

    @property
    def n(self):
        return self.paths.shape[2]

    def __eq__(self, other):
        if not isinstance(other, TrajectoryEnsemble):
            return NotImplemented
        return np.array_equal(self.paths, other.paths) and np.array_equal(self.grid, other.grid)


def _path_rng(seed, stream, index):
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(stream), int(index))))


def _simulate_block(spec, start, stop, stream, record_every):
    n, steps, dt = spec.dimension, spec.n_steps, spec.dt
    B = stop - start
    z0 = np.empty((B, n))
    dw = np.empty((B, steps, n))
    sq = math.sqrt(dt)
    for j in range(B):
        rng = _path_rng(spec.seed, stream, start + j)
        z0[j] = rng.standard_normal(n)
        dw[j] = rng.standard_normal((steps, n)) * sq

    x = spec.initial_mean + z0 @ _psd_sqrt(spec.initial_cov).T
    G = steps // record_every + 1
    out = np.empty((B, G, n))
    out[:, 0] = x
    qv = np.zeros((G - 1, n, n))
    grid = spec.grid()
    if spec.has_constant_diffusion:
        noise = dw @ spec.sigma_at(grid[0], x).T
    for k in range(steps):
        t = grid[k]
        if spec.has_constant_diffusion:
            dn = noise[:, k]
        else:
            if spec.diffusion_kind == "covariance":
                s = _covariance_sqrt(np.asarray(spec.sigma_fn(t, x), dtype=float), t, start)
            else:
                s = spec.sigma_at(t, x)
            if not np.all(np.isfinite(s)):
                idx = int(np.argmax(~np.isfinite(s).reshape(B, -1).all(axis=1)))
                raise SingularDiffusionError(
                    f"non-finite diffusion at t={t:.6g}, path {start + idx}", t=float(t), path=start + idx
                )
            dn = np.einsum("kij,kj->ki", s, dw[:, k])
        dx = spec.drift(t, x) * dt + dn
        x = x + dx
        g = k // record_every
        qv[g] += np.einsum("ki,kj->ij", dx, dx)
        if (k + 1) % record_every == 0:
            out[:, g + 1] = x
    return out, qv


def simulate_ensemble(spec: DiffusionSpec, M: int, *, record_every: int = 1, workers: int = 1, stream: int = 0):
    """Euler-Maruyama ensemble of ``M`` paths.

    ``record_every`` thins the stored grid (the integration step stays ``spec.dt``;
    quadratic covariation is still accumulated at every step).  ``workers`` only
    changes wall time, never the result.  ``stream`` selects an independent
    family of substreams for the same seed.
    """
    if M < 1:
        raise ConfigError(f"ensemble size must be >= 1, got {M}")
    steps = spec.n_steps
    if record_every < 1 or steps % record_every:
        raise ConfigError(f"record_every={record_every} must divide the step count {steps}")
    blocks = [(i, min(i + BLOCK_SIZE, M)) for i in range(0, M, BLOCK_SIZE)]

    def run(block):
        return _simulate_block(spec, block[0], block[1], stream, record_every)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]

    paths = np.concatenate([r[0] for r in results], axis=0)
    qv = results[0][1].copy()
    for r in results[1:]:
        qv += r[1]
    grid = spec.grid()[::record_every]
    return TrajectoryEnsemble(paths=paths, grid=grid, spec=spec, qv_increments=qv / M, record_every=record_every)


@dataclass
class CorrelationSeries:
    """Per-grid-point second moments.

    ``r[g] = E[x x^T]`` (raw second moment, the 1/M sample mean).
    ``b[g]`` is the dispersion, half the time derivative of the expected quadratic
    covariation, i.e. b = r'/2 for the driftless noise component.
    ``r_dot_half[g]`` is the literal r'/2 of the state second moment.
    """

    grid: np.ndarray
    r: np.ndarray
    b: np.ndarray
    r_dot_half: np.ndarray
    quadratic_covariation: np.ndarray = field(repr=False, default=None)


def derivative(y, t):
    """Centered difference inside, one-sided first-order at the ends."""
    y = np.asarray(y, dtype=float)
    if y.shape[0] < 2:
        raise InsufficientSampleError("need at least two grid points for a derivative")
    return np.gradient(y, np.asarray(t, dtype=float), axis=0, edge_order=1)


def estimate_correlation(ens: TrajectoryEnsemble) -> CorrelationSeries:
    if ens.M < 2:
        raise InsufficientSampleError(f"covariance estimate needs M >= 2, got {ens.M}")
    r = np.einsum("mgi,mgj->gij", ens.paths, ens.paths) / ens.M
    q = np.concatenate([np.zeros((1, ens.n, ens.n)), np.cumsum(ens.qv_increments, axis=0)])
    b = 0.5 * derivative(q, ens.grid)
    return CorrelationSeries(
        grid=ens.grid.copy(),
        r=r,
        b=b,
        r_dot_half=0.5 * derivative(r, ens.grid),
        quadratic_covariation=q,
    )


@dataclass(frozen=True)
class EntropyEstimate:
    """Monte-Carlo entropy functional estimate (Nat) with its standard error."""

    nat: float
    stderr: float
    M: int

    @property
    def bit(self):
        return self.nat / LN2

    @property
    def kl_signed(self):
        # the KL form carries the opposite sign of the entropy difference
        return 0.0 - self.nat

    @property
    def magnitude(self):
        return abs(self.nat)

    def as_dict(self):
        return {
            "nat": self.nat,
            "bit": self.bit,
            "stderr_nat": self.stderr,
            "kl_signed_nat": self.kl_signed,
            "magnitude_nat": self.magnitude,
            "M": self.M,
        }


def _inverse_2b(b2, t, path_offset=0):
    w, v = np.linalg.eigh(b2)
    if b2.ndim == 2:
        if w.min() < DIFFUSION_FLOOR:
            raise SingularDiffusionError(f"singular diffusion 2b at t={t:.6g} (min eigenvalue {w.min():.3g})", t=float(t))
        return (v / w) @ v.T
    low = w.min(axis=-1) < DIFFUSION_FLOOR
    if np.any(low):
        idx = int(np.argmax(low))
        raise SingularDiffusionError(
            f"singular diffusion 2b at t={t:.6g}, path {path_offset + idx}", t=float(t), path=path_offset + idx
        )
    return np.einsum("kij,kj,klj->kil", v, 1.0 / w, v)


def entropy_functional(ens: TrajectoryEnsemble, spec: Optional[DiffusionSpec] = None) -> EntropyEstimate:
    """Estimate ``1/2 E[int a^T (2b)^-1 a dt]`` by trapezoid quadrature per path."""
    spec = spec or ens.spec
    if spec is None:
        raise ConfigError("entropy_functional needs the DiffusionSpec that produced the ensemble")
    M, G, _ = ens.paths.shape
    integrand = np.empty((M, G))
    zero = True
    drifts = []
    for g, t in enumerate(ens.grid):
        a = spec.drift(t, ens.paths[:, g])
        drifts.append(a)
        if np.any(a != 0.0):
            zero = False
    if zero:
        return EntropyEstimate(nat=0.0, stderr=0.0, M=M)
    for g, t in enumerate(ens.grid):
        a = drifts[g]
        b2 = 2.0 * np.asarray(spec.dispersion(t, ens.paths[:, g]))
        inv = _inverse_2b(b2, t)
        if inv.ndim == 2:
            integrand[:, g] = 0.5 * np.einsum("ki,ij,kj->k", a, inv, a)
        else:
            integrand[:, g] = 0.5 * np.einsum("ki,kij,kj->k", a, inv, a)
    per_path = trapezoid(integrand, ens.grid, axis=1)
    mean = float(per_path.mean())
    se = float(per_path.std(ddof=1) / math.sqrt(M)) if M > 1 else float("nan")
    return EntropyEstimate(nat=mean, stderr=se, M=M)


def ipf_value(r_points) -> float:
    """Information path functional ``1/8 sum_i [ln r_i(tau_last) - ln r_i(tau_first)]``.

    ``r_points`` is either one ordered sequence of correlation values (one
    component) or a sequence of such sequences (one per component).  Each
    consecutive pair of breakpoints contributes ``1/8 ln(r_{k+1}/r_k)``.
    """
    arr = [np.atleast_1d(np.asarray(c, dtype=float)) for c in _components(r_points)]
    total = 0.0
    for comp in arr:
        if np.any(~(comp > 0)):
            raise DomainError("IPF requires strictly positive correlations")
        total += float(np.sum(np.diff(np.log(comp)))) / 8.0
    return total


def _components(r_points):
    seq = list(r_points)
    if seq and np.ndim(seq[0]) == 0:
        return [seq]
    return seq


def ipf_trace(r_start, r_end) -> float:
    """``1/8 (Tr ln r_end - Tr ln r_start)`` for PD correlation matrices."""
    return (_trace_log(r_end) - _trace_log(r_start)) / 8.0


def _trace_log(r):
    r = np.atleast_2d(np.asarray(r, dtype=float))
    w = np.linalg.eigvalsh(0.5 * (r + r.T))
    if w.min() <= 0:
        raise DomainError("correlation matrix must be positive definite")
    return float(np.sum(np.log(w)))


@dataclass(frozen=True)
class GaussianInformation:
    value: float
    components: tuple
    trace_form: float
    sum_lambda_form: float
    variant: str

    @property
    def discrepancy(self):
        return self.trace_form - self.sum_lambda_form


def gaussian_information(r, variant: str = "trace") -> GaussianInformation:
    """Information of a Gaussian state with correlation matrix ``r``.

    ``variant="trace"`` (default) returns 1/2 Tr ln r = 1/2 ln det r.
    ``variant="sum"`` returns the alternative 1/2 ln(sum of eigenvalues); both
    forms and their difference are always reported.
    """
    if variant not in ("trace", "sum"):
        raise ConfigError(f"unknown variant {variant!r}")
    r = np.atleast_2d(np.asarray(r, dtype=float))
    if r.shape[0] != r.shape[1] or not np.allclose(r, r.T, atol=1e-12, rtol=1e-10):
        raise DomainError("correlation matrix must be square and symmetric")
    w = np.linalg.eigvalsh(0.5 * (r + r.T))
    if w.min() <= 0:
        raise DomainError("correlation matrix must be positive definite")
    comps = tuple(float(0.5 * math.log(x)) for x in w)
    trace = float(sum(comps))
    sum_form = 0.5 * math.log(float(w.sum()))
    return GaussianInformation(
        value=trace if variant == "trace" else sum_form,
        components=comps,
        trace_form=trace,
        sum_lambda_form=sum_form,
        variant=variant,
    )


@dataclass(frozen=True)
class CutoffReport:
    tau: float
    index: int
    s_impulse: float
    s_minus: float
    s_plus: float
    cross_correlation: tuple
    stderr: tuple
    uncut_cross_correlation: tuple

    @property
    def decorrelated(self):
        return all(abs(c) <= 3.0 * s for c, s in zip(self.cross_correlation, self.stderr))

    def constants_bit(self):
        return tuple(v / LN2 for v in (self.s_impulse, self.s_minus, self.s_plus))

    def as_dict(self):
        return {
            "tau": self.tau,
            "index": self.index,
            "entropy_nat": {"impulse": self.s_impulse, "step_minus": self.s_minus, "step_plus": self.s_plus},
            "entropy_bit": dict(zip(("impulse", "step_minus", "step_plus"), self.constants_bit())),
            "cross_correlation": list(self.cross_correlation),
            "stderr": list(self.stderr),
            "uncut_cross_correlation": list(self.uncut_cross_correlation),
            "decorrelated": self.decorrelated,
        }


def impulse_cutoff(ens: TrajectoryEnsemble, tau: float, *, workers: int = 1) -> CutoffReport:
    """Cut the ensemble at ``tau`` and check that correlations across the cut vanish.

    After ``tau`` every path continues from an independent replica drawn from a
    separate substream of the same seed, which removes the transition density
    across the cut.  The cross moment ``E[x(tau-o) x(tau+o)]`` of the cut
    ensemble is compared to its standard error; ``o`` is one stored grid step.
    """
    grid = ens.grid
    if not grid[0] < tau < grid[-1]:
        raise DomainError(f"tau={tau} must lie strictly inside the grid ({grid[0]}, {grid[-1]})")
    if ens.spec is None:
        raise ConfigError("impulse_cutoff needs an ensemble produced by simulate_ensemble")
    k = int(np.clip(np.searchsorted(grid, tau), 1, grid.size - 2))
    replica = simulate_ensemble(ens.spec, ens.M, record_every=ens.record_every, workers=workers, stream=1)
    before = ens.paths[:, k]
    after = replica.paths[:, k + 1]
    prod = before * after
    cc = prod.mean(axis=0)
    se = prod.std(axis=0, ddof=1) / math.sqrt(ens.M)
    uncut = (before * ens.paths[:, k + 1]).mean(axis=0)
    return CutoffReport(
        tau=float(grid[k]),
        index=k,
        s_impulse=IMPULSE_ENTROPY,
        s_minus=STEP_ENTROPY_MINUS,
        s_plus=STEP_ENTROPY_PLUS,
        cross_correlation=tuple(float(c) for c in cc),
        stderr=tuple(float(s) for s in se),
        uncut_cross_correlation=tuple(float(c) for c in uncut),
    )


# -- export -----------------------------------------------------------------

BINARY_MAGIC = b"IMD1"
_HEADER = struct.Struct("<4sIII")


def write_csv(ens: TrajectoryEnsemble, path):
    """One row per (path, t): ``path,t,x0,...,x{n-1}``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["path", "t"] + [f"x{i}" for i in range(ens.n)])
        for m in range(ens.M):
            for g, t in enumerate(ens.grid):
                w.writerow([m, repr(float(t))] + [repr(float(v)) for v in ens.paths[m, g]])


def write_binary(ens: TrajectoryEnsemble, path):
    """Little-endian dump: header (magic, n, M, G as uint32), f64 grid, f64 states path-major."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(BINARY_MAGIC, ens.n, ens.M, ens.grid.size))
        fh.write(ens.grid.astype("<f8").tobytes())
        fh.write(ens.paths.astype("<f8").tobytes())


def read_binary(path) -> TrajectoryEnsemble:
    with open(path, "rb") as fh:
        data = fh.read()
    magic, n, M, G = _HEADER.unpack_from(data, 0)
    if magic != BINARY_MAGIC:
        raise ConfigError(f"not an IMD1 ensemble dump (magic {magic!r})")
    off = _HEADER.size
    grid = np.frombuffer(data, dtype="<f8", count=G, offset=off)
    off += 8 * G
    paths = np.frombuffer(data, dtype="<f8", count=M * G * n, offset=off).reshape(M, G, n)
    return TrajectoryEnsemble(paths=paths.copy(), grid=grid.copy())


def ensemble_summary(ens: TrajectoryEnsemble) -> dict:
    return {"M": ens.M, "n": ens.n, "grid_points": int(ens.grid.size), "t0": float(ens.grid[0]), "T": float(ens.grid[-1])}

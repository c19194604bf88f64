"""Ranged eigenvalue spectra, triplet cooperation, the information network (IN)
hierarchy, lifetimes and the double-spiral (DSS) code.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

import numpy as np

from .errors import ConfigError, DegenerateChainError, DimensionError, DomainError
from .geometry import K_MT
from .invariants import InvariantSet, default_invariants
from .macrodynamics import Segment
from .units import LN2

# gamma -> (gamma1_alpha, gamma2_alpha) sample points
RATIO_TABLE = ((0.00718, 2.46, 1.82), (0.5, 2.21, 1.76), (0.8, 1.96, 1.68))
MIN_RELATIVE_SPACING = 0.0072
MEAN_EXTREME_TOL = 1e-6
MAX_COUPLING = 7
MIN_SELF_FUNCTIONING_DIMENSION = 8
CODE_SLACK = 0.15
ALPHABET = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class RatioLookup:
    gamma1: float
    gamma2: float
    clamped: bool


def ratio_table(gamma: float, table=RATIO_TABLE) -> RatioLookup:
    """Piecewise-linear (gamma1_alpha, gamma2_alpha) at gamma; clamped outside the samples."""
    xs = [row[0] for row in table]
    g1 = float(np.interp(gamma, xs, [row[1] for row in table]))
    g2 = float(np.interp(gamma, xs, [row[2] for row in table]))
    return RatioLookup(g1, g2, clamped=not xs[0] <= gamma <= xs[-1])


@dataclass(frozen=True)
class SpectrumEntry:
    alpha: float
    beta: float
    index: int
    t: float


@dataclass(frozen=True)
class Spectrum:
    entries: tuple
    gamma: float
    ratios: tuple
    inv: InvariantSet
    flags: tuple = ()

    def __len__(self):
        return len(self.entries)

    @property
    def alphas(self):
        return [e.alpha for e in self.entries]

    @property
    def times(self):
        return [e.t for e in self.entries]

    def segments(self) -> List[Segment]:
        """Entries as consecutive extremal segments."""
        out, tau = [], 0.0
        for e in self.entries:
            s = Segment.build(e.alpha, self.inv, tau_start=tau)
            out.append(s)
            tau = s.tau_end
        return out


def _check_ratio(r):
    if abs(r - 3.0) < 1e-12:
        raise DegenerateChainError("chain ratio 3 collapses the triplet structure")
    if not r > 1.0:
        raise DegenerateChainError(f"chain ratio {r} does not rank the spectrum")


def generate_spectrum(n: int, gamma: float, alpha_1o: float, inv: Optional[InvariantSet] = None,
                      ratios: Optional[Sequence[float]] = None) -> Spectrum:
    """Descending chain alpha_{i+1} = alpha_i / ratio, ratios alternating gamma1, gamma2.

    Segment times are t_i = a_o / alpha_i, so they ascend by the same ratios.
    """
    if not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
        raise DimensionError(f"spectrum dimension must be an odd integer >= 3, got {n}")
    if not alpha_1o > 0 or not math.isfinite(alpha_1o):
        raise DomainError("alpha_1o must be positive and finite")
    inv = inv or default_invariants()
    flags = []
    if ratios is None:
        look = ratio_table(gamma)
        ratios = (look.gamma1, look.gamma2)
        if look.clamped:
            flags.append("gamma outside the ratio table; end values used")
    ratios = tuple(float(r) for r in ratios)
    for r in ratios:
        _check_ratio(r)
    alphas = [float(alpha_1o)]
    for i in range(1, n):
        alphas.append(alphas[-1] / ratios[(i - 1) % len(ratios)])
    entries = tuple(
        SpectrumEntry(alpha=a, beta=gamma * a, index=i, t=inv.a_o / a) for i, a in enumerate(alphas)
    )
    return Spectrum(entries=entries, gamma=float(gamma), ratios=ratios, inv=inv, flags=tuple(flags))


@dataclass(frozen=True)
class Triplet:
    """One IN node.

    ``alpha_1tau`` is the equalized first eigenvalue entering the node, the
    node eigenvalue is alpha_m = 3 alpha_1tau / gamma_alpha and t_m = a / alpha_m.
    """

    index: int
    members: tuple
    alpha_1tau: float
    alpha_m: float
    t_m: float
    gamma_alpha: float
    ratios: tuple
    mean_extreme_residual: float
    mean_extreme_warning: bool
    information: float = 0.0
    information_full: float = 0.0
    coupling: tuple = ()

    def as_dict(self):
        return {
            "index": self.index,
            "alpha_m": self.alpha_m,
            "t_m": self.t_m,
            "gamma_alpha": self.gamma_alpha,
            "alpha_1tau": self.alpha_1tau,
            "ratios": list(self.ratios),
            "mean_extreme_residual": self.mean_extreme_residual,
            "mean_extreme_warning": self.mean_extreme_warning,
            "information_nat": self.information,
            "information_full_nat": self.information_full,
            "coupling": list(self.coupling),
        }


def _alpha(e):
    return abs(e.alpha if isinstance(e, SpectrumEntry) else float(e))


def form_triplet(e1, e2, e3, inv: InvariantSet, *, gamma_alpha: Optional[float] = None,
                 alpha_1tau: Optional[float] = None, rotation_correction: bool = False,
                 index: int = 0) -> Triplet:
    """Cooperate three ranked eigenvalues into a node.

    By default the chain ratio is the span e1/e3 and alpha_1tau = e1 (a/a_o);
    both can be supplied (a node fed by its predecessor).  With
    ``rotation_correction`` the span is divided by the eigenvector-rotation
    gain k_mt.
    """
    a1, a2, a3 = _alpha(e1), _alpha(e2), _alpha(e3)
    if not a1 > a2 > a3 > 0:
        raise DomainError(f"triplet entries must be strictly descending in magnitude: {a1}, {a2}, {a3}")
    spacing = min((a1 - a2) / a1, (a2 - a3) / a2)
    if spacing < MIN_RELATIVE_SPACING:
        raise DegenerateChainError(
            f"relative eigenvalue spacing {spacing:.4g} is below {MIN_RELATIVE_SPACING}; entries merge"
        )
    r12, r13 = a1 / a2, a1 / a3
    residual = abs(r12 - a2 / a3) / r12
    g = r13 if gamma_alpha is None else float(gamma_alpha)
    if rotation_correction and gamma_alpha is None:
        g /= K_MT
    if abs(g - 3.0) < 1e-12:
        raise DegenerateChainError("chain ratio 3 collapses the triplet structure")
    a1t = a1 * inv.ratio if alpha_1tau is None else float(alpha_1tau)
    alpha_m = 3.0 * a1t / g
    return Triplet(
        index=index,
        members=(a1, a2, a3),
        alpha_1tau=a1t,
        alpha_m=alpha_m,
        t_m=inv.a / alpha_m,
        gamma_alpha=g,
        ratios=(r12, r13),
        mean_extreme_residual=residual,
        mean_extreme_warning=residual > MEAN_EXTREME_TOL,
    )


@dataclass(frozen=True)
class InfoNetwork:
    nodes: tuple
    spectrum: Spectrum
    inv: InvariantSet
    rotation_correction: bool
    advisories: tuple = ()

    @property
    def n(self):
        return len(self.spectrum)

    @property
    def m(self):
        return (self.n - 1) // 2

    @property
    def final_node(self) -> Triplet:
        return self.nodes[-1]

    def tree(self) -> dict:
        """Nested JSON tree, final node outermost, each node enclosing its predecessor."""
        tree = None
        for node in self.nodes:
            d = {"alpha_m": node.alpha_m, "t_m": node.t_m, "gamma_alpha": node.gamma_alpha,
                 "information_nat": node.information, "index": node.index}
            if tree is not None:
                d["encloses"] = tree
            tree = {"node": d}
        return tree

    def to_json(self, code: "DssCode" = None) -> str:
        tree = self.tree()
        if code is not None:
            cur = tree
            for word in reversed(code.words):
                cur["node"]["word"] = word
                cur = cur["node"].get("encloses")
        return json.dumps(tree, indent=2, sort_keys=True)


def coupling_path(k: int) -> tuple:
    """Spectrum indices coupled when node k forms: its own three and up to two
    predecessors' worth, never more than seven."""
    lo = max(0, 2 * k - 4)
    path = tuple(range(lo, 2 * k + 3))
    assert len(path) <= MAX_COUPLING
    return path


def build_network(spec: Spectrum, inv: Optional[InvariantSet] = None, *,
                  rotation_correction: bool = True) -> InfoNetwork:
    """Sequential triplet chain over the spectrum.

    Node 0 joins entries 0-2; node k joins the previous node (its alpha_m
    becomes the new alpha_1tau) with entries 2k+1 and 2k+2.  Each node's chain
    ratio is the span of the original entries 2k..2k+2.  Node information is
    the accumulated a_o of all consumed segments (plus a_o^2 in the full form).
    """
    inv = inv or spec.inv
    n = len(spec)
    if n < 3 or n % 2 == 0:
        raise DimensionError(f"network needs an odd spectrum length >= 3, got {n}")
    e = spec.entries
    nodes = []
    prev = None
    for k in range((n - 1) // 2):
        trip = form_triplet(
            e[2 * k], e[2 * k + 1], e[2 * k + 2], inv,
            alpha_1tau=None if prev is None else prev.alpha_m,
            rotation_correction=rotation_correction,
            index=k,
        )
        consumed = 2 * k + 3
        trip = replace(trip, information=consumed * inv.a_o,
                       information_full=consumed * (inv.a_o + inv.a_o ** 2),
                       coupling=coupling_path(k))
        nodes.append(trip)
        prev = trip
    advisories = []
    if n < MIN_SELF_FUNCTIONING_DIMENSION:
        advisories.append(f"dimension {n} is below the minimal self-functioning dimension {MIN_SELF_FUNCTIONING_DIMENSION}")
    return InfoNetwork(nodes=tuple(nodes), spectrum=spec, inv=inv,
                       rotation_correction=rotation_correction, advisories=tuple(advisories))


@dataclass(frozen=True)
class Lifetime:
    reversible: float
    irreversible: float
    total: float


def lifetime(segments: Sequence, dS_delta: Sequence[float], inv: InvariantSet) -> Lifetime:
    """Model lifetime: reversible sum of t_k plus irreversible (dS/a_o^2 - 1) t_k, clamped at 0."""
    if len(segments) != len(dS_delta):
        raise DomainError("segments and entropy increments must have equal length")
    ts = [s.duration if isinstance(s, Segment) else float(s) for s in segments]
    if any(t < 0 for t in ts):
        raise DomainError("segment times must be nonnegative")
    a2 = inv.a_o ** 2
    irr = [max(0.0, (d / a2 - 1.0) * t) for d, t in zip(dS_delta, ts)]
    rev, ir = math.fsum(ts), math.fsum(irr)
    return Lifetime(reversible=rev, irreversible=ir, total=rev + ir)


# -- DSS code ----------------------------------------------------------------

@dataclass(frozen=True)
class DssCode:
    """Four-letter-group code, one word per triplet node.

    A word is three member groups plus one control group, each ``l_cs``
    letters long.  Words alternate between the left and right track of the
    double spiral.
    """

    D_o: int
    l_cs: int
    words: tuple
    tracks: tuple
    s_io: float
    s_full: float

    @property
    def letters(self) -> str:
        return "".join(self.words)

    @property
    def total_letters(self):
        return len(self.letters)

    @property
    def total_bits(self):
        return self.total_letters * math.log2(self.D_o)

    @property
    def shannon_bound(self):
        """Minimal letters for the accumulated information, S_io / ln D_o."""
        return self.s_io / math.log(self.D_o)

    def as_dict(self):
        return {
            "D_o": self.D_o,
            "l_cs": self.l_cs,
            "words": list(self.words),
            "tracks": list(self.tracks),
            "total_letters": self.total_letters,
            "total_bits": self.total_bits,
            "s_io_nat": self.s_io,
            "s_io_bit": self.s_io / LN2,
            "s_full_nat": self.s_full,
            "shannon_bound_letters": self.shannon_bound,
        }

    def letter_stream(self) -> str:
        """Plain-text stream: header line, then ``track word`` per node."""
        lines = [f"DSS D={self.D_o} l={self.l_cs} nodes={len(self.words)}"]
        lines += [f"{t} {w}" for t, w in zip(self.tracks, self.words)]
        return "\n".join(lines) + "\n"

    def rows_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "word", "bits"])
        per = len(self.words[0]) * math.log2(self.D_o) if self.words else 0.0
        for k, word in enumerate(self.words):
            w.writerow([k, word, repr(per)])
        return buf.getvalue()


def parse_letter_stream(text: str):
    """Inverse of DssCode.letter_stream: returns (D_o, l_cs, [(track, word), ...])."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("DSS "):
        raise ConfigError("not a DSS letter stream")
    head = dict(tok.split("=") for tok in lines[0].split()[1:])
    pairs = [tuple(ln.split()) for ln in lines[1:]]
    if len(pairs) != int(head["nodes"]):
        raise ConfigError("letter stream node count mismatch")
    return int(head["D"]), int(head["l"]), pairs


def word_length(a_o: float, D_o: int, slack: float = CODE_SLACK) -> int:
    """Letters per segment: ceil(a_o[bit] / log2 D_o - slack), at least 1.

    The slack absorbs the rounding of ~1.0-1.1 bit invariants to one binary letter.
    """
    if D_o < 2:
        raise DomainError(f"alphabet size must be >= 2, got {D_o}")
    return max(1, math.ceil(a_o / LN2 / math.log2(D_o) - slack))


def _digits(value, base, width):
    out = []
    for _ in range(width):
        value, d = divmod(value, base)
        out.append(ALPHABET[d])
    return "".join(reversed(out))


def encode_network(net: InfoNetwork, D_o: int, slack: float = CODE_SLACK) -> DssCode:
    """DSS code of a network.

    Member groups carry the base-D_o digits of the member's spectrum index
    (the node's predecessor slot carries the previous node index); the
    control group alternates between the two track symbols 0 and D_o - 1.
    """
    if not isinstance(D_o, (int, np.integer)) or D_o < 2:
        raise DomainError(f"alphabet size must be an integer >= 2, got {D_o}")
    if D_o > len(ALPHABET):
        raise ConfigError(f"alphabet size above {len(ALPHABET)} is not supported")
    l_cs = word_length(net.inv.a_o, D_o, slack)
    words, tracks = [], []
    for k, node in enumerate(net.nodes):
        members = (2 * k, 2 * k + 1, 2 * k + 2) if k == 0 else (k - 1, 2 * k + 1, 2 * k + 2)
        groups = [_digits(i, D_o, l_cs) for i in members]
        track = "L" if k % 2 == 0 else "R"
        control = ALPHABET[0 if track == "L" else D_o - 1] * l_cs
        words.append("".join(groups) + control)
        tracks.append(track)
    n = net.n
    return DssCode(
        D_o=int(D_o),
        l_cs=l_cs,
        words=tuple(words),
        tracks=tuple(tracks),
        s_io=n * net.inv.a_o,
        s_full=n * (net.inv.a_o + net.inv.a_o ** 2),
    )


@dataclass(frozen=True)
class ChaosPrediction:
    time: Optional[float]
    index: Optional[int]
    cooperation_supported: bool
    invariant_collapse: bool
    note: str = ""


def chaos_predictor(gamma_series: Sequence[float], times: Optional[Sequence[float]] = None) -> ChaosPrediction:
    """First time the gamma series reaches 1, by linear interpolation.

    At gamma = 1 the cooperation decouples and a_o is taken to collapse; that
    statement conflicts with the tabulated a_o(1) values and is only flagged.
    """
    g = np.asarray(gamma_series, dtype=float)
    if g.size == 0:
        return ChaosPrediction(None, None, True, False)
    t = np.arange(g.size, dtype=float) if times is None else np.asarray(times, dtype=float)
    supported = bool(g.max() <= 0.8)
    note = "a_o(gamma=1) collapse conflicts with tabulated a_o(1) rows"
    if g[0] >= 1.0:
        return ChaosPrediction(float(t[0]), 0, supported, True, note)
    for k in range(g.size - 1):
        if g[k] < 1.0 <= g[k + 1]:
            f = (1.0 - g[k]) / (g[k + 1] - g[k])
            return ChaosPrediction(float(t[k] + f * (t[k + 1] - t[k])), k, supported, True, note)
    return ChaosPrediction(None, None, supported, False)

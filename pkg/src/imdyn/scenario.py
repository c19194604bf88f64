"""End-to-end scenario: simulate -> identify -> segment -> network -> encode -> report.

A scenario is described by a JSON document validated against ``CONFIG_SCHEMA``; the
report is a plain JSON-ready dict whose serialization is byte-stable for a
fixed config and seed.
"""

from __future__ import annotations

import copy
import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict

import jsonschema
import numpy as np

from . import evolution, geometry, invariants, macrodynamics, microlevel, network
from .errors import ConfigError, IMDError
from .units import LN2

log = logging.getLogger(__name__)

_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
_VECTOR = {"type": "array", "items": {"type": "number"}}

CONFIG_SCHEMA: Dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "scenario",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "process": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dimension": {"type": "integer", "minimum": 1, "default": 1},
                "drift_matrix": {**_MATRIX, "default": [[-1.0]]},
                "control": {**_VECTOR, "default": None},
                "sigma": {**_MATRIX, "default": [[1.4142135623730951]]},
                "diffusion_kind": {"enum": ["constant", "state_scaled", "covariance"], "default": "constant"},
                "initial_mean": {**_VECTOR, "default": [0.0]},
                "initial_cov": {**_MATRIX, "default": [[1.0]]},
                "t0": {"type": "number", "default": 0.0},
                "T": {"type": "number", "default": 3.0},
                "dt": {"type": "number", "exclusiveMinimum": 0, "default": 0.001},
            },
        },
        "ensemble_size": {"type": "integer", "minimum": 2, "default": 4000},
        "record_every": {"type": "integer", "minimum": 1, "default": 10},
        "workers": {"type": "integer", "minimum": 1, "default": 1},
        "invariants": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "source": {"enum": ["PaperTable", "EquationSolved"], "default": "PaperTable"},
                "gamma": {"type": "number", "minimum": 0, "maximum": 1, "default": invariants.GAMMA_STAR},
                "branch": {"type": "integer", "minimum": 0, "default": 0},
            },
        },
        "network": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 3, "default": 3},
                "rotation_correction": {"type": "boolean", "default": True},
            },
        },
        "alphabet": {"type": "integer", "minimum": 2, "maximum": 36, "default": 2},
        "window_fraction": {"type": "number", "exclusiveMinimum": 0, "maximum": 1, "default": 0.1},
        "c0": {"type": "number", "default": 1.0},
        "seed": {"type": "integer", "minimum": 0, "maximum": 18446744073709551615, "default": 0},
        "pin_ratio": {"type": "boolean", "default": False},
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "report": {"type": "string", "default": "report.json"},
                "segments": {"type": "string", "default": "segments.json"},
                "network": {"type": "string", "default": "network.json"},
                "code_stream": {"type": "string", "default": "code.txt"},
                "code_csv": {"type": "string", "default": "code.csv"},
                "correlation_csv": {"type": "string", "default": "correlation.csv"},
            },
        },
    },
}


def _defaults(schema):
    out = {}
    for key, sub in schema.get("properties", {}).items():
        if sub.get("type") == "object" and "properties" in sub:
            out[key] = _defaults(sub)
        else:
            out[key] = copy.deepcopy(sub.get("default"))
    return out


DEFAULT_CONFIG = _defaults(CONFIG_SCHEMA)


def _merge(base, override):
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


@dataclass(frozen=True)
class ScenarioConfig:
    data: dict

    @classmethod
    def from_dict(cls, raw: dict, seed: int = None, pin_ratio: bool = None) -> "ScenarioConfig":
        try:
            jsonschema.validate(raw, CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
            raise ConfigError(f"invalid scenario config at {where}: {exc.message}") from None
        data = _merge(DEFAULT_CONFIG, raw)
        if seed is not None:
            data["seed"] = int(seed)
        if pin_ratio is not None:
            data["pin_ratio"] = bool(pin_ratio) or data["pin_ratio"]
        if data["network"]["n"] % 2 == 0:
            raise ConfigError("network.n must be odd")
        return cls(data)

    @classmethod
    def load(cls, path, **kw) -> "ScenarioConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(raw, **kw)

    def diffusion_spec(self) -> microlevel.DiffusionSpec:
        p = self.data["process"]
        return microlevel.DiffusionSpec(
            dimension=p["dimension"],
            drift_matrix=p["drift_matrix"],
            control=p["control"],
            sigma=p["sigma"],
            diffusion_kind=p["diffusion_kind"],
            initial_mean=p["initial_mean"],
            initial_cov=p["initial_cov"],
            t0=p["t0"],
            T=p["T"],
            dt=p["dt"],
            seed=self.data["seed"],
        )

    def invariant_set(self):
        cfg = self.data["invariants"]
        if cfg["source"] == "PaperTable":
            look = invariants.lookup(cfg["gamma"])
            if look.interpolation_refused:
                raise ConfigError(f"no table row at gamma={cfg['gamma']} (interpolation refused)")
            full = [r for r in look.rows if r.a_o is not None and r.a is not None]
            if not full:
                raise ConfigError(f"table rows at gamma={cfg['gamma']} lack an (a_o, a) pair")
            return full[min(cfg["branch"], len(full) - 1)], look
        sets = invariants.equation_solved_sets(cfg["gamma"])
        usable = [s for s in sets if s.a is not None]
        if not usable:
            raise ConfigError(f"no usable root of the a-equation at gamma={cfg['gamma']}")
        return usable[min(cfg["branch"], len(usable) - 1)], None


class StageError(IMDError):
    """A module error raised inside a named pipeline stage, carrying the partial report."""

    def __init__(self, stage, cause, partial):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.partial = partial


def q(value, unit, source=None):
    """A quantity with its unit (and optionally where its inputs came from)."""
    d = {"value": value, "unit": unit}
    if source:
        d["source"] = source
    return d


def entropy(nat, source=None):
    d = {"nat": nat, "bit": None if nat is None else nat / LN2}
    if source:
        d["source"] = source
    return d


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def dumps(report) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"


class _Stages:
    def __init__(self, report):
        self.report = report

    def run(self, name, fn):
        log.info("stage %s", name)
        try:
            return fn()
        except StageError:
            raise
        except IMDError as exc:
            self.report["failed_stage"] = name
            raise StageError(name, exc, self.report) from exc


def run_scenario(config: ScenarioConfig) -> dict:
    """Run the full pipeline and return the report; raises StageError on failure."""
    c = config.data
    report: dict = {"config": c, "warnings": [], "provenance": {}}
    st = _Stages(report)
    warnings = report["warnings"]

    spec = st.run("config", config.diffusion_spec)
    inv, look = st.run("invariants", config.invariant_set)
    report["provenance"]["invariants"] = inv.as_dict()
    if look is not None and look.conflicting:
        warnings.append(f"invariant rows at gamma={inv.gamma} conflict: "
                        + "; ".join(r.note for r in look.rows if r.note))
    for cmp in invariants.compare_with_catalog(inv):
        report["provenance"].setdefault("catalog_comparison", []).append(cmp.__dict__)

    ens = st.run("simulate", lambda: microlevel.simulate_ensemble(
        spec, c["ensemble_size"], record_every=c["record_every"], workers=c["workers"]))
    report["simulate"] = microlevel.ensemble_summary(ens)

    corr = st.run("correlation", lambda: microlevel.estimate_correlation(ens))
    ef = st.run("entropy", lambda: microlevel.entropy_functional(ens, spec))
    report["microlevel"] = {
        "entropy_functional": {**entropy(ef.nat), "stderr_nat": ef.stderr, "kl_signed_nat": ef.kl_signed},
        "r_final": q(corr.r[-1], "state^2"),
        "b_mean": q(corr.b.mean(axis=0), "state^2/sec"),
    }
    if np.linalg.eigvalsh(corr.r[-1]).min() > 0:
        gi = microlevel.gaussian_information(corr.r[-1])
        report["microlevel"]["gaussian_information"] = {
            **entropy(gi.value), "sum_lambda_variant_nat": gi.sum_lambda_form, "discrepancy_nat": gi.discrepancy}

    chain = st.run("identify", lambda: macrodynamics.identify_chain(
        corr, inv, window_fraction=c["window_fraction"]))
    ops = np.array([np.asarray(a) for a in chain.operators])
    report["identify"] = {
        "operators": q(ops, "1/sec"),
        "mean_operator": q(ops.mean(axis=0), "1/sec"),
        "integral_route": q([np.asarray(a) for a in chain.integral_operators], "1/sec"),
        "starting_control": {"x0": q(chain.start.x0, "state"), "v0": q(chain.start.v0, "state"),
                             "u0": q(chain.start.u0, "state/sec"), "A0": q(chain.start.A0, "1/sec")},
        "window_fraction": chain.window_fraction,
    }
    warnings.extend(chain.warnings)
    report["segments"] = [s.as_dict() for s in chain.segments]
    report["needles"] = [e.as_dict() for e in chain.needles]

    bounds = [0] + [int(np.argmin(np.abs(corr.grid - s.tau_end))) for s in chain.segments]
    diag = [corr.r[g].diagonal() for g in bounds]
    if all(np.all(d > 0) for d in diag):
        comps = [[float(d[i]) for d in diag] for i in range(spec.dimension)]
        report["microlevel"]["ipf"] = entropy(microlevel.ipf_value(comps))

    alpha_1o = abs(chain.segments[0].alpha_start)
    n = c["network"]["n"]
    spectrum = st.run("spectrum", lambda: network.generate_spectrum(n, inv.gamma, alpha_1o, inv))
    warnings.extend(spectrum.flags)
    net = st.run("network", lambda: network.build_network(
        spectrum, inv, rotation_correction=c["network"]["rotation_correction"]))
    warnings.extend(net.advisories)
    n_warn = sum(t.mean_extreme_warning for t in net.nodes)
    if n_warn:
        warnings.append(f"{n_warn} triplet(s) deviate from the mean-extreme ratio")
    code = st.run("encode", lambda: network.encode_network(net, c["alphabet"]))
    report["network"] = {
        "n": n,
        "triplets": len(net.nodes),
        "spectrum_alpha": q(spectrum.alphas, "bit/sec"),
        "spectrum_t": q(spectrum.times, "sec"),
        "nodes": [t.as_dict() for t in net.nodes],
        "final_information": entropy(net.final_node.information, inv.source.value),
    }
    report["code"] = code.as_dict()

    eps_max = abs(evolution.epsilon(spectrum.ratios[0], spectrum.ratios[1]))
    pot = st.run("potentials", lambda: evolution.potentials(n, eps_max))
    thr = st.run("thresholds", evolution.dimension_threshold)
    report["evolution"] = {"potentials": pot.as_dict(), "thresholds": thr.as_dict(),
                           "thresholds_source": "PaperTable (a_o_zero derived)"}

    # geometry counts triplets as n/2; match the network's triplet count
    n_geo = 2 * len(net.nodes)
    g_alpha = net.nodes[0].gamma_alpha
    rot = st.run("geometry", lambda: geometry.rotation(n_geo, alpha_1o, g_alpha, pin_ratio=c["pin_ratio"]))
    report["geometry"] = {
        "n_a5": n_geo,
        "gamma_alpha": g_alpha,
        "T_R": q(rot.T_R, "sec"), "C_R": q(rot.C_R, "cell/sec"),
        "T_R_asymptotic": q(rot.T_R_asymptotic, "sec"), "C_R_asymptotic": q(rot.C_R_asymptotic, "cell/sec"),
        "bits_final_node": q(geometry.bits_enfolded(net.final_node.alpha_m), "bit^2/sec^2"),
        "interaction": geometry.interaction_budget(code.total_bits).__dict__,
    }
    report["artifacts"] = {
        "segments_json": macrodynamics.segments_to_json(chain.segments),
        "network_json": net.to_json(code),
        "code_stream": code.letter_stream(),
        "code_csv": code.rows_csv(),
        "correlation_csv": correlation_csv(corr),
    }
    return report


def correlation_csv(corr: microlevel.CorrelationSeries) -> str:
    n = corr.r.shape[1]
    head = ["t"] + [f"r{i}{j}" for i in range(n) for j in range(n)] + [f"b{i}{j}" for i in range(n) for j in range(n)]
    lines = [",".join(head)]
    for g, t in enumerate(corr.grid):
        vals = [repr(float(t))] + [repr(float(v)) for v in corr.r[g].ravel()] + [repr(float(v)) for v in corr.b[g].ravel()]
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def write_outputs(report: dict, config: ScenarioConfig, out_dir) -> list:
    """Write the report JSON and its CSV/JSON/text artifacts into ``out_dir``."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    outs = config.data["outputs"]
    art = report.get("artifacts", {})
    written = []
    mapping = {"segments": "segments_json", "network": "network_json", "code_stream": "code_stream",
               "code_csv": "code_csv", "correlation_csv": "correlation_csv"}
    for key, art_key in mapping.items():
        if art_key in art:
            path = os.path.join(out_dir, outs[key])
            with open(path, "w") as fh:
                fh.write(art[art_key])
            written.append(path)
    body = {k: v for k, v in report.items() if k != "artifacts"}
    path = os.path.join(out_dir, outs["report"])
    with open(path, "w") as fh:
        fh.write(dumps(body))
    written.append(path)
    return written

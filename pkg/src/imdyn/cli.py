"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numeric failure (a partial
report is written when a pipeline stage fails).  ``IMD_LOG`` sets the log
level (DEBUG, INFO, WARNING, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys

import numpy as np

from . import evolution, geometry, invariants, macrodynamics, microlevel, network, paper_check, scenario
from .errors import ConfigError, IMDError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("imdyn")


def _config(args) -> scenario.ScenarioConfig:
    kw = {"seed": args.seed, "pin_ratio": True if args.pin_ratio else None}
    if args.config:
        return scenario.ScenarioConfig.load(args.config, **kw)
    return scenario.ScenarioConfig.from_dict({}, **kw)


def _emit(args, name, text):
    """Write ``text`` to ``--out/name`` or to stdout."""
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, name)
        with open(path, "w") as fh:
            fh.write(text)
        log.info("wrote %s", path)
    else:
        sys.stdout.write(text)


def _rows_csv(rows):
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def _dump(obj):
    return scenario.dumps(obj)


# -- subcommands --------------------------------------------------------------

def cmd_simulate(args):
    cfg = _config(args)
    spec = cfg.diffusion_spec()
    d = cfg.data
    ens = microlevel.simulate_ensemble(spec, d["ensemble_size"], record_every=d["record_every"], workers=d["workers"])
    corr = microlevel.estimate_correlation(ens)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        microlevel.write_binary(ens, os.path.join(args.out, "paths.bin"))
    if args.format == "csv":
        _emit(args, "correlation.csv", scenario.correlation_csv(corr))
    else:
        ef = microlevel.entropy_functional(ens, spec)
        body = {
            "ensemble": microlevel.ensemble_summary(ens),
            "entropy_functional": ef.as_dict(),
            "r_final": scenario.q(corr.r[-1], "1"),
            "b_final": scenario.q(corr.b[-1], "1/sec"),
        }
        _emit(args, "simulate.json", _dump(body))
    return EXIT_OK


def cmd_identify(args):
    cfg = _config(args)
    d = cfg.data
    inv, _ = cfg.invariant_set()
    ens = microlevel.simulate_ensemble(cfg.diffusion_spec(), d["ensemble_size"], record_every=d["record_every"],
                                       workers=d["workers"])
    corr = microlevel.estimate_correlation(ens)
    chain = macrodynamics.identify_chain(corr, inv, window_fraction=d["window_fraction"])
    if args.format == "csv":
        rows = [{"segment": k, "tau_start": s.tau_start, "tau_end": s.tau_end,
                 "alpha_start": s.alpha_start, "alpha_end": s.alpha_end} for k, s in enumerate(chain.segments)]
        _emit(args, "segments.csv", _rows_csv(rows))
    else:
        ops = np.asarray(chain.operators)
        body = {
            "mean_operator": scenario.q(ops.mean(axis=0), "1/sec"),
            "segments": [s.as_dict() for s in chain.segments],
            "warnings": list(chain.warnings),
            "invariants": inv.as_dict(),
        }
        _emit(args, "identify.json", _dump(body))
    return EXIT_OK


DEFAULT_GAMMAS = [round(0.1 * k, 10) for k in range(11)] + [invariants.GAMMA_STAR]


def cmd_invariants_table(args):
    gammas = sorted(set(args.gamma or DEFAULT_GAMMAS))
    if args.format == "json":
        rows = [r.as_dict() for r in invariants.paper_table()]
        cat = [{"gamma": g, "sets": [s.as_dict() for s in invariants.equation_solved_sets(g)]} for g in gammas]
        _emit(args, "invariants.json", _dump({"paper_table": rows, "equation_solved": cat}))
    else:
        _emit(args, "invariants.csv", invariants.catalog_csv(gammas))
    return EXIT_OK


def _network_from_args(args):
    cfg = _config(args)
    inv, _ = cfg.invariant_set()
    n = args.n if args.n is not None else cfg.data["network"]["n"]
    gamma = args.gamma if args.gamma is not None else cfg.data["invariants"]["gamma"]
    spec = network.generate_spectrum(n, gamma, args.alpha, inv)
    return network.build_network(spec, inv, rotation_correction=cfg.data["network"]["rotation_correction"]), cfg


def cmd_network_build(args):
    net, _ = _network_from_args(args)
    if args.format == "csv":
        rows = [{"node": t.index, "alpha_1tau": t.alpha_1tau, "alpha_m": t.alpha_m, "t_m": t.t_m,
                 "gamma_alpha": t.gamma_alpha, "information": t.information} for t in net.nodes]
        _emit(args, "network.csv", _rows_csv(rows))
    else:
        _emit(args, "network.json", net.to_json() + "\n")
    return EXIT_OK


def cmd_encode(args):
    net, cfg = _network_from_args(args)
    D = args.alphabet if args.alphabet is not None else cfg.data["alphabet"]
    code = network.encode_network(net, D)
    if args.format == "csv":
        _emit(args, "code.csv", code.rows_csv())
    elif args.stream:
        _emit(args, "code.txt", code.letter_stream())
    else:
        _emit(args, "code.json", _dump(code.as_dict()))
    return EXIT_OK


def cmd_evolve_report(args):
    eps = args.eps_max
    if eps is None:
        look = network.ratio_table(invariants.GAMMA_STAR)
        eps = abs(evolution.epsilon(look.gamma1, look.gamma2))
    body = {
        "potentials": evolution.potentials(args.n, eps).as_dict(),
        "thresholds": evolution.dimension_threshold().as_dict(),
    }
    a = evolution.adaptive_asymmetry()
    body["asymmetry"] = {**a.__dict__, "asymmetric": a.asymmetric}
    _emit(args, "evolution.json", _dump(body))
    return EXIT_OK


def cmd_cycle(args):
    theta = evolution.theta_for_gamma(args.gamma_lo)
    l = evolution.cycle_frequency_ratio(evolution.gamma1_invariants())
    t = evolution.cycle_triplet()
    body = {
        "spawn_pi3": evolution.cycle_spawn(args.beta, np.pi / 3).as_dict(),
        "spawn": evolution.cycle_spawn(args.beta, theta).as_dict(),
        "theta": scenario.q(theta, "rad"),
        "frequency_ratio": l,
        "multiplication": 1.0 / l,
        "triplet": {"eigenvalues": list(t.eigenvalues), "ratio_first_second": t.ratio_first_second,
                    "ratio_first_third": t.ratio_first_third, "ratio_of_ratios": t.ratio_of_ratios},
    }
    _emit(args, "cycle.json", _dump(body))
    return EXIT_OK


def cmd_geometry(args):
    n = args.n
    if args.triplets is not None:
        # network convention m = (n - 1)/2 -> surface convention n = 2m
        n = 2 * args.triplets
    if n < 2 or n % 2:
        raise ConfigError(f"--n must be an even surface dimension, got {n}")
    rows = geometry.geometry_rows(n, args.alpha, args.gamma_alpha, pin_ratio=args.pin_ratio)
    if args.format == "json":
        rot = geometry.rotation(n, args.alpha, args.gamma_alpha, pin_ratio=args.pin_ratio)
        _emit(args, "geometry.json", _dump({"rows": rows, "rotation": rot.__dict__}))
    else:
        _emit(args, "geometry.csv", _rows_csv(rows))
    return EXIT_OK


def cmd_paper_check(args):
    rows = paper_check.paper_check(pin_ratio=True)
    summary = paper_check.summarize(rows)
    if args.format == "json":
        _emit(args, "paper_check.json", _dump({"rows": [r.as_dict() for r in rows], "summary": summary}))
    else:
        _emit(args, "paper_check.csv", paper_check.to_csv(rows))
    print(f"paper-check: {summary['rows']} rows, {summary['pass']} pass, {summary['flagged']} flagged, "
          f"{summary['fail']} fail", file=sys.stderr)
    return EXIT_OK


def cmd_run(args):
    cfg = _config(args)
    try:
        report = scenario.run_scenario(cfg)
    except scenario.StageError as exc:
        _write_report(args, cfg, exc.partial)
        raise
    _write_report(args, cfg, report)
    return EXIT_OK


def _write_report(args, cfg, report):
    if args.out:
        scenario.write_outputs(report, cfg, args.out)
    else:
        sys.stdout.write(_dump({k: v for k, v in report.items() if k != "artifacts"}))


# -- parser ---------------------------------------------------------------------

def _common(p):
    p.add_argument("--config", metavar="PATH", help="scenario config (JSON)")
    p.add_argument("--seed", type=int, help="master seed (overrides the config)")
    p.add_argument("--out", metavar="DIR", help="output directory (default: stdout)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--pin-ratio", action="store_true", help="pin the surface growth ratio to 1.3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imdyn", description="Informational macrodynamics toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate the diffusion ensemble")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("identify", help="identify operators and the segment chain")
    _common(p)
    p.set_defaults(func=cmd_identify)

    inv = sub.add_parser("invariants", help="invariant catalogs")
    inv_sub = inv.add_subparsers(dest="action", required=True)
    p = inv_sub.add_parser("table", help="root catalog over a gamma grid")
    _common(p)
    p.set_defaults(format="csv")
    p.add_argument("--gamma", type=float, action="append", help="gamma value (repeatable)")
    p.set_defaults(func=cmd_invariants_table)

    net = sub.add_parser("network", help="information networks")
    net_sub = net.add_subparsers(dest="action", required=True)
    for name, func, help_ in (("build", cmd_network_build, "build a triplet network"),):
        p = net_sub.add_parser(name, help=help_)
        _common(p)
        _network_args(p)
        p.set_defaults(func=func)

    p = sub.add_parser("encode", help="DSS-encode a network")
    _common(p)
    _network_args(p)
    p.add_argument("--alphabet", type=int, help="alphabet size D_o")
    p.add_argument("--stream", action="store_true", help="emit the plain-text letter stream")
    p.set_defaults(func=cmd_encode)

    ev = sub.add_parser("evolve", help="evolutionary quantities")
    ev_sub = ev.add_subparsers(dest="action", required=True)
    p = ev_sub.add_parser("report", help="potentials and thresholds")
    _common(p)
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--eps-max", type=float)
    p.set_defaults(func=cmd_evolve_report)

    p = sub.add_parser("cycle", help="cyclic renewal constants")
    _common(p)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma-lo", type=float, default=1.0)
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("geometry", help="surface geometry rows")
    _common(p)
    p.set_defaults(format="csv")
    p.add_argument("--n", type=int, default=22, help="surface dimension (even, m = n/2)")
    p.add_argument("--triplets", type=int, help="network triplet count m, overrides --n with n = 2m")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--gamma-alpha", type=float, default=2.3)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("paper-check", help="golden-number reproduction table")
    _common(p)
    p.set_defaults(format="csv", func=cmd_paper_check)

    p = sub.add_parser("run", help="full pipeline")
    _common(p)
    p.set_defaults(func=cmd_run)
    return parser


def _network_args(p):
    p.add_argument("--n", type=int, help="network dimension (odd)")
    p.add_argument("--gamma", type=float, help="spectrum gamma")
    p.add_argument("--alpha", type=float, default=1.0, help="first eigenvalue alpha_1o")


def _setup_logging():
    level = os.environ.get("IMD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except scenario.StageError as exc:
        if isinstance(exc.cause, ConfigError):
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (IMDError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line interface.

Subcommands: gen, bridge, invert, sample, audit.  Exit codes are stable:
0 success, 2 usage or malformed input, 3 no robust bridge, 4 partial
reconstruction operator not invertible, 5 audit budget exceeded (partial
results written).  Every command is deterministic given identical flags
and seeds.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog, fileio
from .bridging import find_bridge_set, recover_coefficients, solve_bridge
from .errors import NoRobustBridgeError, NotInvertibleError, \
    UnderdeterminedSchemeError
from .frames import DualFramePair, IndexSet, minimal_redundancy
from .inversion import reconstruct_via_inverse
from .numerics import Tolerance
from .sampling import build_trig_scheme, build_truncated_shannon, recover_samples
from .spark_lab import erasure_size_bound, genericity_trial, skew_spark_audit

__all__ = ["main", "run", "build_parser"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_BRIDGE = 3
EXIT_NOT_INVERTIBLE = 4
EXIT_BUDGET = 5

GEN_KINDS = ("random-parseval", "random-dual-pair", "paper-2d",
             "example-3-3", "mercedes")


class CommandError(Exception):
    """Invalid flags or malformed input files (exit code 2)."""


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=1e-10,
            help="relative singular value cutoff (default 1e-10)")
    common.add_argument("--tol-residual", type=float, default=1e-9,
            help="relative residual cutoff (default 1e-9)")
    common.add_argument("--json-report", metavar="PATH", default=None,
            help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="framebridge",
        description="Erasure recovery for finite frames and sampling schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", parents=[common],
            help="generate frame files")
    p_gen.add_argument("kind", choices=GEN_KINDS)
    p_gen.add_argument("--out", required=True, metavar="PREFIX",
            help="output prefix; writes PREFIX.f.json and PREFIX.g.json")
    p_gen.add_argument("--dim", type=int, default=None)
    p_gen.add_argument("--size", type=int, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--field", choices=("real", "complex"), default="real")

    p_bridge = sub.add_parser("bridge", parents=[common],
            help="recover erased coefficients by bridging")
    _add_pair_flags(p_bridge)
    p_bridge.add_argument("--erase", default="", metavar="I,J,...",
            help="1-based erased indices (empty for none)")
    p_bridge.add_argument("--bridge", default=None, metavar="I,J,...",
            help="bridge indices; auto-selected when omitted")
    p_bridge.add_argument("--coefficients", required=True, metavar="CSV",
            help="known coefficients (missing indices are erased)")
    p_bridge.add_argument("--out", required=True, metavar="CSV")

    p_inv = sub.add_parser("invert", parents=[common],
            help="recover by inverting the partial reconstruction operator")
    _add_pair_flags(p_inv)
    p_inv.add_argument("--erase", default="", metavar="I,J,...")
    p_inv.add_argument("--coefficients", required=True, metavar="CSV")
    p_inv.add_argument("--out", required=True, metavar="CSV")

    p_sample = sub.add_parser("sample", parents=[common],
            help="build sampling schemes and recover erased samples")
    p_sample.add_argument("--kind", choices=("trig", "shannon"), default=None)
    p_sample.add_argument("--space-dim", type=int, default=None)
    p_sample.add_argument("--num-samples", type=int, default=None)
    p_sample.add_argument("--spacing", type=float, default=None)
    p_sample.add_argument("--half-width", type=int, default=None)
    p_sample.add_argument("--scheme", metavar="JSON", default=None,
            help="load a scheme file instead of building one")
    p_sample.add_argument("--export-scheme", metavar="JSON", default=None)
    p_sample.add_argument("--erase", default="", metavar="I,J,...")
    p_sample.add_argument("--bridge", default=None, metavar="I,J,...")
    p_sample.add_argument("--samples", required=True, metavar="CSV")
    p_sample.add_argument("--out", required=True, metavar="CSV")

    p_audit = sub.add_parser("audit", parents=[common],
            help="skew spark audits and genericity statistics")
    p_audit.add_argument("--synthesis", metavar="JSON", default=None)
    p_audit.add_argument("--analysis", metavar="JSON", default=None)
    p_audit.add_argument("--k-max", type=int, default=None)
    p_audit.add_argument("--budget", type=int, default=10 ** 6)
    p_audit.add_argument("--genericity", action="store_true")
    p_audit.add_argument("--dim", type=int, default=None)
    p_audit.add_argument("--size", type=int, default=None)
    p_audit.add_argument("--k", type=int, default=None)
    p_audit.add_argument("--trials", type=int, default=100)
    p_audit.add_argument("--seed", type=int, default=0)
    p_audit.add_argument("--csv", metavar="CSV", default=None,
            help="per-trial genericity statistics")
    return parser


def _add_pair_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--synthesis", required=True, metavar="JSON")
    p.add_argument("--analysis", required=True, metavar="JSON")


def _parse_indices(text) -> list[int]:
    if text is None or str(text).strip() == "":
        return []
    try:
        return [int(part) for part in str(text).split(",")]
    except ValueError as exc:
        raise CommandError(f"bad index list {text!r}: {exc}") from exc


def _tolerance(args) -> Tolerance:
    try:
        return Tolerance(rank_rel=args.tol_rank, residual_rel=args.tol_residual)
    except ValueError as exc:
        raise CommandError(str(exc)) from exc


def _load_pair(args, tol: Tolerance) -> DualFramePair:
    f, _ = fileio.read_frame(args.synthesis)
    g, _ = fileio.read_frame(args.analysis)
    try:
        return DualFramePair.build(f, g, tol)
    except ValueError as exc:
        raise CommandError(f"frames do not form a dual pair: {exc}") from exc


def _emit_report(args, report: dict) -> None:
    text = json.dumps(report, indent=2, default=_json_default)
    if args.json_report:
        Path(args.json_report).write_text(text + "\n")
    else:
        print(text)


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _cmd_gen(args) -> int:
    kind = args.kind
    field = args.field
    if kind in ("random-parseval", "random-dual-pair"):
        if args.dim is None or args.size is None:
            raise CommandError(f"gen {kind} requires --dim and --size")
    if kind == "paper-2d":
        pair = catalog.reference_pair_2d()
        field = "real"
    elif kind == "example-3-3":
        pair = catalog.nilpotent_pair()
        field = "real"
    elif kind == "mercedes":
        pair = catalog.mercedes_pair()
        field = "real"
    elif kind == "random-parseval":
        frame = catalog.random_parseval_frame(args.dim, args.size, args.seed,
                                              field=field)
        pair = DualFramePair.build(frame, frame)
    else:
        pair = catalog.random_dual_pair(args.dim, args.size, args.seed,
                                        field=field)
    f_path = f"{args.out}.f.json"
    g_path = f"{args.out}.g.json"
    fileio.write_frame(f_path, pair.synthesis, field=field, role="synthesis")
    fileio.write_frame(g_path, pair.analysis, field=field, role="analysis")
    _emit_report(args, {
        "command": "gen", "kind": kind, "field": field,
        "dim": pair.dim, "size": pair.size,
        "files": [f_path, g_path],
    })
    return EXIT_OK


def _require_known(known: dict, indices, what: str) -> None:
    missing = [j for j in indices if j not in known]
    if missing:
        raise CommandError(f"input is missing {what} for indices {missing}")


def _cmd_bridge(args) -> int:
    tol = _tolerance(args)
    pair = _load_pair(args, tol)
    known = fileio.read_coefficients(args.coefficients)
    erased = _parse_indices(args.erase)
    if not erased:
        fileio.write_coefficients(args.out, known)
        _emit_report(args, {
            "command": "bridge", "erased": [], "bridge": [],
            "robust": True, "residual": 0.0, "recovered": {},
        })
        return EXIT_OK
    lam = IndexSet.of(erased)
    lam.validate_range(pair.size)
    survivors = lam.complement(pair.size)
    _require_known(known, survivors, "coefficients")

    if args.bridge is not None:
        om = IndexSet.of(_parse_indices(args.bridge))
        plan = solve_bridge(pair, lam, om, tol)
        if not plan.robust:
            mr = minimal_redundancy(pair.analysis, lam, tol)
            diagnosis = (
                "another bridge set can work: the surviving analysis vectors "
                "span the space" if mr else
                "no bridge set can work: the surviving analysis vectors do "
                "not span the space"
            )
            print(
                f"bridge set {om.indices} is not robust for erasure set "
                f"{lam.indices} (residual {plan.residual:.3e}); {diagnosis}",
                file=sys.stderr,
            )
            _emit_report(args, {
                "command": "bridge", "erased": list(lam), "bridge": list(om),
                "robust": False, "residual": plan.residual,
                "minimal_redundancy": mr,
            })
            return EXIT_NO_BRIDGE
        chosen = om
    else:
        try:
            chosen, plan = find_bridge_set(pair, lam, tol)
        except NoRobustBridgeError as exc:
            print(str(exc), file=sys.stderr)
            _emit_report(args, {
                "command": "bridge", "erased": list(lam), "bridge": None,
                "robust": False,
                "minimal_redundancy": minimal_redundancy(pair.analysis, lam, tol),
            })
            return EXIT_NO_BRIDGE

    values = recover_coefficients(plan, known)
    out = dict(known)
    recovered = {}
    for j, v in zip(lam, values):
        out[j] = complex(v)
        recovered[str(j)] = complex(v)
    fileio.write_coefficients(args.out, out)
    _emit_report(args, {
        "command": "bridge", "erased": list(lam), "bridge": list(chosen),
        "robust": True, "residual": plan.residual, "recovered": recovered,
        "duality_residual": pair.duality_residual,
    })
    return EXIT_OK


def _cmd_invert(args) -> int:
    tol = _tolerance(args)
    pair = _load_pair(args, tol)
    known = fileio.read_coefficients(args.coefficients)
    erased = _parse_indices(args.erase)
    lam = IndexSet.of(erased)
    lam.validate_range(pair.size)
    survivors = lam.complement(pair.size)
    _require_known(known, survivors, "coefficients")
    try:
        report = reconstruct_via_inverse(pair, lam, known, tol)
    except NotInvertibleError as exc:
        print(f"{exc}; try the bridge subcommand", file=sys.stderr)
        _emit_report(args, {
            "command": "invert", "erased": list(lam), "invertible": False,
        })
        return EXIT_NOT_INVERTIBLE
    out = dict(known)
    recovered = {}
    for j, v in zip(lam, report.recovered_coefficients):
        out[j] = complex(v)
        recovered[str(j)] = complex(v)
    fileio.write_coefficients(args.out, out)
    _emit_report(args, {
        "command": "invert", "erased": list(lam), "invertible": True,
        "recovered": recovered,
        "recovered_vector": report.recovered_vector,
    })
    return EXIT_OK


def _build_scheme(args):
    if args.scheme is not None:
        return fileio.read_scheme(args.scheme)
    if args.kind == "trig":
        if args.space_dim is None or args.num_samples is None:
            raise CommandError("sample --kind trig requires --space-dim and "
                               "--num-samples")
        return build_trig_scheme(args.space_dim, args.num_samples)
    if args.kind == "shannon":
        if args.spacing is None or args.half_width is None:
            raise CommandError("sample --kind shannon requires --spacing and "
                               "--half-width")
        return build_truncated_shannon(args.spacing, args.half_width)
    raise CommandError("sample needs either --scheme or --kind")


def _cmd_sample(args) -> int:
    tol = _tolerance(args)
    try:
        scheme = _build_scheme(args)
    except (UnderdeterminedSchemeError, ValueError) as exc:
        raise CommandError(str(exc)) from exc
    if args.export_scheme:
        fileio.write_scheme(args.export_scheme, scheme)
    known = fileio.read_coefficients(args.samples)
    erased = _parse_indices(args.erase)
    if not erased:
        fileio.write_coefficients(args.out, known)
        _emit_report(args, {
            "command": "sample", "kind": scheme.kind, "erased": [],
            "bridge": [], "exact": scheme.exact, "recovered": {},
        })
        return EXIT_OK
    lam = IndexSet.of(erased)
    lam.validate_range(scheme.size)
    _require_known(known, lam.complement(scheme.size), "samples")
    bridge = None
    if args.bridge is not None:
        bridge = IndexSet.of(_parse_indices(args.bridge))
    try:
        result = recover_samples(scheme, lam, bridge, known, tol)
    except NoRobustBridgeError as exc:
        print(str(exc), file=sys.stderr)
        _emit_report(args, {
            "command": "sample", "kind": scheme.kind, "erased": list(lam),
            "robust": False,
        })
        return EXIT_NO_BRIDGE
    out = dict(known)
    recovered = {}
    for j, v in zip(lam, result.values):
        out[j] = complex(v)
        recovered[str(j)] = complex(v)
    fileio.write_coefficients(args.out, out)
    _emit_report(args, {
        "command": "sample", "kind": scheme.kind, "erased": list(lam),
        "bridge": list(result.bridge), "residual": result.residual,
        "exact": result.exact, "recovered": recovered,
    })
    return EXIT_OK


def _cmd_audit(args) -> int:
    tol = _tolerance(args)
    if args.genericity:
        if args.dim is None or args.size is None or args.k is None:
            raise CommandError("audit --genericity requires --dim, --size and --k")
        try:
            stats = genericity_trial(args.dim, args.size, args.trials, args.k,
                                     args.seed, tol=tol)
        except ValueError as exc:
            raise CommandError(str(exc)) from exc
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["trial", "n", "N", "k", "failures",
                                 "worst_condition"])
                for rec in stats.records:
                    writer.writerow([rec.trial, stats.dim, stats.size, stats.k,
                                     rec.failures, repr(rec.worst_condition)])
        _emit_report(args, {
            "command": "audit", "mode": "genericity",
            "dim": stats.dim, "size": stats.size, "k": stats.k,
            "trials": stats.trials,
            "failure_frequency": stats.failure_frequency,
            "worst_condition": stats.worst_condition,
        })
        return EXIT_OK

    if args.synthesis is None or args.analysis is None:
        raise CommandError("audit requires --synthesis and --analysis "
                           "(or --genericity)")
    pair = _load_pair(args, tol)
    k_max = args.k_max if args.k_max is not None \
        else erasure_size_bound(pair.dim, pair.size)
    report = skew_spark_audit(pair, k_max, tol, budget=args.budget)
    _emit_report(args, {
        "command": "audit", "mode": "skew_spark",
        "label": report.label, "k_checked": report.k_checked,
        "bound": report.bound, "skew_spark": report.skew_spark,
        "full": report.full, "complete": report.complete,
        "worst_condition": report.worst_condition,
        "failures": [
            {"erased": list(f.erased), "bridge": list(f.bridge),
             "rank": f.rank, "condition": f.condition}
            for f in report.failures
        ],
    })
    if not report.complete:
        print("audit budget exceeded; results are partial", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "bridge": _cmd_bridge,
    "invert": _cmd_invert,
    "sample": _cmd_sample,
    "audit": _cmd_audit,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())

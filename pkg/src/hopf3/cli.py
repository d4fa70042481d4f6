"""Command-line driver: reproducible batch runs over the analysis pipelines.

Commands: compute, rank, higher-order, cyclicity, verify-center, oracle,
batch.  Numeric-looking values are parsed as exact rationals ("-1", "2/3");
decimal input is rejected rather than silently rounded.  Reports are UTF-8
JSON plus a plain-text summary; rerunning an identical config reproduces the
JSON byte for byte except for the timestamp isolated in the header.

Exit codes: 0 success, 1 domain error (bad input), 2 integrity error
(internal inconsistency; indicates a bug and is never expected).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from .catalog import CATALOG
from .errors import DomainError, Hopf3Error, IntegrityError
from .lyapcore import residual_check
from .numoracle import displacement_csv, sign_check
from .pipelines import (PRESETS, build_system, compute_report,
                        cyclicity_gamma_report, cyclicity_tail_report,
                        prepared_sequence, rank_report, verify_center_report,
                        verify_report)
from .rational import parse_rational

__version__ = "0.1.0"


def _parse_assignments(pairs):
    values = {}
    for pair in pairs or ():
        for item in pair.split(","):
            item = item.strip()
            if not item:
                continue
            name, sep, value = item.partition("=")
            if not sep:
                raise DomainError(f"expected name=value, got {item!r}",
                                  code="bad-assignment")
            if "." in value:
                raise DomainError(
                    f"decimal input {value!r} rejected: pass an exact rational "
                    "like 1/2", code="decimal-input")
            values[name.strip()] = str(parse_rational(value))
    return values


def _add_common(sub):
    sub.add_argument("--system", help="catalog system name")
    sub.add_argument("--file", help="system file (JSON)")
    sub.add_argument("--condition", help="center-condition label")
    sub.add_argument("--set", action="append", metavar="NAME=RAT",
                     help="parameter assignments (rationals; repeatable)")
    sub.add_argument("--n", type=int, default=6, help="number of constants")
    sub.add_argument("--jet", type=int, default=0, help="perturbation jet degree")
    sub.add_argument("--pin", default="", help="comma list of parameters pinned to 0")
    sub.add_argument("--no-prune", action="store_true",
                     help="keep the full first-integral support")
    sub.add_argument("--check-residual", action="store_true",
                     help="replay the defining relation after computing")
    sub.add_argument("--out", default=".", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hopf3",
        description="Exact Lyapunov constants and limit-cycle lower bounds "
                    "for 3D Hopf systems",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("compute", "Lyapunov constants as jets"),
        ("rank", "linear-part rank analysis"),
        ("higher-order", "tail normalization and stage evidence"),
        ("cyclicity", "full pipeline with certified lower bound"),
        ("verify-center", "check L1..LN vanish"),
        ("oracle", "numeric displacement cross-check"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "cyclicity":
            p.add_argument("--preset", choices=sorted(PRESETS),
                           help="named workflow with pins/weights/N/D")
            p.add_argument("--route", choices=("tail", "gamma"), default="tail")
            p.add_argument("--gauge", default="c200",
                           help="gauge parameter for the gamma route")
            p.add_argument("--weights", help="JSON file {parameter: weight}")
        if name == "oracle":
            p.add_argument("--rho", default="1/20,2/25,3/25",
                           help="comma list of rational initial radii")
            p.add_argument("--settle", type=int, default=20)
            p.add_argument("--tol", default="1e-10")
    b = sub.add_parser("batch", help="run a JSON list of configs concurrently")
    b.add_argument("configs", help="JSON file: list of config objects")
    b.add_argument("--out", default=".", help="output directory")
    return parser


def _system_from_args(args):
    params = _parse_assignments(args.set)
    file_text = None
    if args.file:
        try:
            file_text = Path(args.file).read_text(encoding="utf-8")
        except OSError as exc:
            raise DomainError(f"cannot read {args.file}: {exc}", code="bad-file")
        return build_system(file_text=file_text)
    if not args.system:
        raise DomainError("give --system or --file", code="bad-config")
    return build_system(args.system, params, args.condition)


def _pins(args):
    return tuple(p for p in args.pin.split(",") if p) if args.pin else ()


def run_command(args):
    """Execute one command; returns (result_dict, summary_text, extra_files)."""
    extra = {}
    if args.command == "cyclicity" and getattr(args, "preset", None):
        preset = PRESETS[args.preset]
        system, meta = build_system(preset["system"], preset.get("params"),
                                    preset.get("condition"))
        meta["preset"] = args.preset
        count, degree = preset["count"], preset["jet_degree"]
        pins = preset.get("pins", ())
        system, seq = prepared_sequence(system, count, degree, pins)
        if preset["route"] == "gamma":
            result = cyclicity_gamma_report(meta, system, seq,
                                            gauge=preset.get("gauge", "c200"))
        else:
            result = cyclicity_tail_report(meta, system, seq)
        result["pins"] = list(pins)
        summary = _summarize(result)
        return result, summary, extra

    system, meta = _system_from_args(args)
    if args.command == "oracle":
        radii = [float(parse_rational(r)) for r in args.rho.split(",") if r]
        tol = float(args.tol)
        if args.jet:
            raise DomainError("the oracle integrates unperturbed systems only",
                              code="bad-config")
        seq = prepared_sequence(system, args.n, 0)[1]
        verdict = sign_check(system, seq, rho0_samples=radii,
                             settle_turns=args.settle, tol=tol)
        extra["displacement.csv"] = displacement_csv(
            system, radii, settle_turns=args.settle, tol=tol)
        result = {"command": "oracle", "input": meta, "count": args.n,
                  "verdict": verdict}
        return result, f"oracle verdict: {verdict['verdict']}\n", extra

    pins = _pins(args)
    system, seq = prepared_sequence(system, args.n, args.jet, pins,
                                    prune=not args.no_prune)
    if args.check_residual:
        residual_check(system, seq)
    if args.command == "compute":
        result = compute_report(meta, system, seq)
    elif args.command == "rank":
        result, _ = rank_report(meta, system, seq)
    elif args.command == "verify-center":
        result = verify_center_report(meta, system, seq)
    elif args.command == "higher-order":
        result = cyclicity_tail_report(meta, system, seq)
        result["command"] = "higher-order"
    elif args.command == "cyclicity":
        if args.route == "gamma":
            weights = None
            if args.weights:
                weights = json.loads(Path(args.weights).read_text())
            result = cyclicity_gamma_report(meta, system, seq,
                                            gauge=args.gauge, weights=weights)
        else:
            result = cyclicity_tail_report(meta, system, seq)
        result["pins"] = list(pins)
    else:  # pragma: no cover
        raise DomainError(f"unknown command {args.command}", code="bad-config")
    return result, _summarize(result), extra


def _summarize(result):
    cmd = result.get("command")
    lines = []
    if cmd == "compute":
        constants = result["sequence"]["constants"]
        nonzero = [c["k"] for c in constants if c["jet"]]
        lines.append(f"computed L1..L{result['count']} at jet degree "
                     f"{result['jet_degree']}")
        lines.append("nonzero constants: " +
                     (", ".join(f"L{k}" for k in nonzero) if nonzero else "none"))
    elif cmd == "rank":
        lines.append(f"rank = {result['rank']}")
        lines.append("pivot parameters: " + ", ".join(result["pivot_parameters"]))
    elif cmd == "verify-center":
        n = result["count"]
        if result["all_zero"]:
            lines.append(f"L1..L{n} = 0")
        else:
            lines.append(f"not a center through L{n}: first nonzero is "
                         f"L{result['first_nonzero']['k']}")
    elif cmd in ("cyclicity", "higher-order"):
        lines.append(f"rank = {result['rank']}")
        if "lower_bound" in result:
            lines.append(f"certified lower bound: {result['lower_bound']}")
        for stage in result.get("stages", ()):
            sign = f"+{stage['increment']}" if stage["increment"] else "--"
            lines.append(f"  order {stage['order']} L{stage['constant_index']}: "
                         f"{stage['kind']} {sign}")
        for sol in result.get("solutions", ()):
            lines.append(f"  solution [{sol['kind']}] next constant "
                         f"{'zero' if sol.get('all_constants_zero') else 'nonzero'}"
                         if sol["kind"].startswith("center")
                         else f"  solution [{sol['kind']}] certificate "
                              f"{'valid' if sol.get('valid_certificate') else 'declined'}")
    return "\n".join(lines) + "\n"


def _write_report(result, summary, extra, out_dir, config):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "header": {
            "tool": "hopf3",
            "version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "config": config,
        },
        "result": result,
    }
    (out / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (out / "summary.txt").write_text(summary, encoding="utf-8")
    for name, text in extra.items():
        (out / name).write_text(text, encoding="utf-8")


def _config_dict(args):
    skip = {"command", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _run_batch_entry(entry):
    out = entry.pop("out", ".")
    argv = [entry.pop("command")]
    for key, value in entry.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                argv.append(flag)
        elif isinstance(value, list):
            for item in value:
                argv.extend([flag, str(item)])
        else:
            argv.extend([flag, str(value)])
    argv.extend(["--out", out])
    return main(argv)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "batch":
            entries = json.loads(Path(args.configs).read_text(encoding="utf-8"))
            if not isinstance(entries, list):
                raise DomainError("batch file must hold a JSON list",
                                  code="bad-config")
            workers = int(os.environ.get("HOPF3_THREADS", os.cpu_count() or 1))
            for i, entry in enumerate(entries):
                entry.setdefault("out", str(Path(args.out) / f"run-{i:03d}"))
            codes = []
            if workers > 1 and len(entries) > 1:
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    codes = list(pool.map(_run_batch_entry, entries))
            else:
                codes = [_run_batch_entry(e) for e in entries]
            return max(codes, default=0)
        result, summary, extra = run_command(args)
        _write_report(result, summary, extra, args.out, _config_dict(args))
        sys.stdout.write(summary)
        return 0
    except IntegrityError as exc:
        _emit_error(exc, args)
        return 2
    except DomainError as exc:
        _emit_error(exc, args)
        return 1


def _emit_error(exc, args):
    payload = {"error": {"code": exc.code, "message": str(exc)}}
    sys.stderr.write(json.dumps(payload) + "\n")
    out = getattr(args, "out", None)
    if out:
        try:
            Path(out).mkdir(parents=True, exist_ok=True)
            (Path(out) / "error.json").write_text(json.dumps(payload, indent=2) + "\n",
                                                  encoding="utf-8")
        except OSError:
            pass


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``code832 {verify,ideal,simulate,sweep,report}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .harness import (
    ConfigError,
    MatrixConfig,
    ReportError,
    acceptance_csv,
    emit_report,
    load_results,
    reference_reports,
    run_matrix,
    witness_text,
)
from .noise import ExperimentResult, run_experiment
from .reference import ExperimentSpec, gate_label, ideal_logical_array

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="flat key = value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--shots", type=int)
    for name in ("p1", "p2", "pm", "pp"):
        p.add_argument(f"--{name}", type=float, metavar="F")
    p.add_argument("--ccz-mode", choices=("native", "compiled"))
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--workers", type=int)
    p.add_argument("--resamples", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="code832", description="[[8,3,2]] color code experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="certify the reference preparation circuits")
    v.add_argument("--witness", action="store_true", help="print the multi-qubit fault residual lists")
    sub.add_parser("ideal", parents=[common], help="exact logical distributions for the matrix")
    s = sub.add_parser("simulate", parents=[common], help="run one experiment spec")
    s.add_argument("spec", help="e.g. PLUS3+CCZ@X/encoded")
    sub.add_parser("sweep", parents=[common], help="run the full experiment matrix and write reports")
    sub.add_parser("report", parents=[common], help="rebuild reports from results.jsonl in --out")
    return parser


def load_config(args: argparse.Namespace) -> MatrixConfig:
    cfg = MatrixConfig.load(args.config) if args.config else MatrixConfig()
    overrides = {}
    for key in ("seed", "shots", "p1", "p2", "pm", "pp", "out", "workers", "resamples"):
        v = getattr(args, key, None)
        if v is not None:
            overrides[key] = str(v)
    if args.ccz_mode is not None:
        overrides["ccz_mode"] = args.ccz_mode
    return MatrixConfig.from_mapping(overrides, cfg)


def cmd_verify(args: argparse.Namespace, cfg: MatrixConfig) -> int:
    reports = reference_reports()
    for r in reports:
        print(r.summary_line())
        for o in r.logical_failures():
            print(f"  logical: {o.to_dict()}")
    if args.witness:
        print(witness_text(), end="")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for r in reports:
            (out / f"ft_{r.name}_{r.basis}.json").write_text(r.to_json() + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_ideal(args: argparse.Namespace, cfg: MatrixConfig) -> int:
    lines = ["state,gate,basis,outcome,probability"]
    seen = set()
    for spec in cfg.specs():
        key = (spec.state, spec.gates, spec.basis)
        if key in seen:
            continue
        seen.add(key)
        for i, p in enumerate(ideal_logical_array(spec)):
            if p > 1e-12:
                lines.append(f"{spec.state.value},{gate_label(spec.gates)},{spec.basis},{i:03b},{float(p)!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "ideal.csv").write_text(text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, cfg: MatrixConfig) -> int:
    try:
        spec = ExperimentSpec.parse(args.spec)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if args.ccz_mode is not None:
        spec = ExperimentSpec(spec.state, spec.gates, spec.basis, spec.encoding, args.ccz_mode)
    r = run_experiment(spec, cfg.noise, cfg.shots, cfg.seed, cfg.resamples)
    print(json.dumps(r.to_dict(), indent=1, sort_keys=True))
    return EXIT_OK


def _results(cells) -> list[ExperimentResult]:
    for c in cells:
        if c.error:
            print(f"cell {c.spec.id} failed: {c.error}", file=sys.stderr)
    return [c.result for c in cells if c.result is not None]


def cmd_sweep(args: argparse.Namespace, cfg: MatrixConfig) -> int:
    cells = run_matrix(cfg)
    results = _results(cells)
    if results:
        emit_report(results, cfg.out)
        print(acceptance_csv(results), end="")
    print(f"{len(results)}/{len(cells)} cells written to {cfg.out}", file=sys.stderr)
    return EXIT_OK if len(results) == len(cells) else EXIT_FAIL


def cmd_report(args: argparse.Namespace, cfg: MatrixConfig) -> int:
    path = Path(cfg.out) / "results.jsonl"
    if not path.exists():
        raise ConfigError(f"{path} not found; run sweep first")
    results = _results(load_results(path))
    if not results:
        raise ConfigError(f"{path} holds no successful cells")
    for p in emit_report(results, cfg.out):
        print(p)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "ideal": cmd_ideal,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "report": cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as e:
        print(f"code832: invalid config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ReportError as e:
        print(f"code832: {e.strerror}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Experiment matrix: config parsing, sweeps, and report files."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .code import TargetState, code_832, target_state_group
from .ftverify import FtReport, verify_fault_tolerance, witness_errors
from .noise import DEFAULT_RESAMPLES, ExperimentResult, NoiseModel, run_experiment
from .reference import (
    BASES,
    CCZ_MODES,
    ENCODINGS,
    ExperimentSpec,
    all_gate_subsets,
    canonical_gates,
    gate_label,
    ghz_prep_encoded,
    plus3_prep_encoded,
    readout_rule,
    with_readout,
)


class ConfigError(ValueError):
    pass


class ReportError(OSError):
    pass


_LIST_KEYS = ("states", "gates", "bases", "encodings")
_FLOAT_KEYS = ("p1", "p2", "pm", "pp")
_INT_KEYS = ("shots", "seed", "workers", "resamples")


@dataclass(frozen=True)
class MatrixConfig:
    states: tuple[str, ...] = ("GHZ", "PLUS3")
    gates: tuple[tuple[str, ...], ...] = tuple(all_gate_subsets())
    bases: tuple[str, ...] = BASES
    encodings: tuple[str, ...] = ENCODINGS
    noise: NoiseModel = field(default_factory=NoiseModel)
    shots: int = 1024
    seed: int = 0
    ccz_mode: str = "native"
    out: str = "results"
    workers: int = 1
    resamples: int = DEFAULT_RESAMPLES

    def __post_init__(self) -> None:
        for s in self.states:
            if s not in {t.value for t in TargetState}:
                raise ConfigError(f"unknown state {s!r}")
        for b in self.bases:
            if b not in BASES:
                raise ConfigError(f"unknown basis {b!r}")
        for e in self.encodings:
            if e not in ENCODINGS:
                raise ConfigError(f"unknown encoding {e!r}")
        if self.ccz_mode not in CCZ_MODES:
            raise ConfigError(f"ccz_mode must be one of {CCZ_MODES}, got {self.ccz_mode!r}")
        if self.shots < 1:
            raise ConfigError("shots must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.resamples and self.resamples < 100:
            raise ConfigError("resamples must be 0 or >= 100")
        if not (self.states and self.gates and self.bases and self.encodings):
            raise ConfigError("every list in the matrix needs at least one entry")

    def specs(self) -> list[ExperimentSpec]:
        return [
            ExperimentSpec(TargetState(s), g, b, e, self.ccz_mode)
            for s in self.states
            for b in self.bases
            for g in self.gates
            for e in self.encodings
        ]

    def __len__(self) -> int:
        return len(self.states) * len(self.gates) * len(self.bases) * len(self.encodings)

    @classmethod
    def from_mapping(cls, items: Mapping[str, str], base: MatrixConfig | None = None) -> MatrixConfig:
        cfg = base or cls()
        kw: dict = {}
        noise = {f.name: getattr(cfg.noise, f.name) for f in fields(NoiseModel)}
        known = {f.name for f in fields(cls)} | set(_FLOAT_KEYS)
        try:
            for key, raw in items.items():
                value = str(raw).strip()
                if key not in known or key == "noise":
                    raise ConfigError(f"unknown config key {key!r}")
                if key == "gates":
                    kw[key] = parse_gate_subsets(value)
                elif key in _LIST_KEYS:
                    kw[key] = tuple(v.strip() for v in value.split(",") if v.strip())
                elif key in _FLOAT_KEYS:
                    noise[key] = float(value)
                elif key in _INT_KEYS:
                    kw[key] = int(value)
                else:
                    kw[key] = value
            return replace(cfg, noise=NoiseModel(**noise), **kw)
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(str(e)) from None

    @classmethod
    def from_text(cls, text: str) -> MatrixConfig:
        return cls.from_mapping(parse_config_text(text))

    @classmethod
    def load(cls, path: str | os.PathLike) -> MatrixConfig:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
        return cls.from_text(text)


def parse_config_text(text: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def parse_gate_subsets(value: str) -> tuple[tuple[str, ...], ...]:
    """``all`` or comma-separated subsets such as ``I, CZ12, CZ12.CCZ``."""
    if value.strip().lower() == "all":
        return tuple(all_gate_subsets())
    out = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            out.append(canonical_gates(item.split(".")))
        except ValueError as e:
            raise ConfigError(str(e)) from None
    return tuple(out)


# running ------------------------------------------------------------------------------


@dataclass(frozen=True)
class CellOutcome:
    spec: ExperimentSpec
    result: ExperimentResult | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        if self.result is not None:
            return self.result.to_dict()
        return {"spec": self.spec.id, "error": self.error}


def _run_cell(args: tuple[ExperimentSpec, NoiseModel, int, int, int]) -> CellOutcome:
    spec, noise, shots, seed, resamples = args
    try:
        return CellOutcome(spec, run_experiment(spec, noise, shots, seed, resamples))
    except Exception as e:  # noqa: BLE001 - one bad cell must not sink the sweep
        return CellOutcome(spec, error=f"{type(e).__name__}: {e}")


def run_cells(cfg: MatrixConfig) -> list[CellOutcome]:
    jobs = [(s, cfg.noise, cfg.shots, cfg.seed, cfg.resamples) for s in cfg.specs()]
    if cfg.workers == 1 or len(jobs) == 1:
        return [_run_cell(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_run_cell, jobs))


def run_matrix(cfg: MatrixConfig, out: str | os.PathLike | None = None) -> list[CellOutcome]:
    """Run every cell, then write ``results.jsonl`` and ``comparison.csv``."""
    cells = run_cells(cfg)
    out_dir = Path(out if out is not None else cfg.out)
    _write(out_dir / "results.jsonl", results_jsonl(cells))
    _write(out_dir / "comparison.csv", comparison_csv([c.result for c in cells if c.result]))
    return cells


# serialization ----------------------------------------------------------------------------


def _fmt(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ReportError(e.errno, f"cannot write {path}: {e.strerror}") from None


def results_jsonl(cells: Iterable[CellOutcome]) -> str:
    return "".join(json.dumps(c.to_dict(), sort_keys=True) + "\n" for c in cells)


def load_results(path: str | os.PathLike) -> list[CellOutcome]:
    cells = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        d = json.loads(line)
        spec = ExperimentSpec.parse(d["spec"])
        if "error" in d:
            cells.append(CellOutcome(spec, error=d["error"]))
        else:
            cells.append(CellOutcome(spec, ExperimentResult.from_dict(d)))
    return cells


def cells_csv(results: Sequence[ExperimentResult]) -> str:
    header = ["spec", "state", "gate", "basis", "encoding", "ccz_mode", "shots", "accepted",
              "acceptance_rate", "tvd", "ci_low", "ci_high", "seed"]
    rows = [
        [r.spec.id, r.spec.state.value, gate_label(r.spec.gates), r.spec.basis, r.spec.encoding,
         r.spec.ccz_mode, r.shots, r.accepted, _fmt(r.acceptance_rate), _fmt(r.tvd),
         _fmt(r.ci_low), _fmt(r.ci_high), r.seed]
        for r in results
    ]
    return _csv_text(header, rows)


def comparison_csv(results: Sequence[ExperimentResult]) -> str:
    """Bare vs encoded distance per (state, basis, gate subset)."""
    by_key: dict[tuple, dict[str, ExperimentResult]] = {}
    for r in results:
        key = (r.spec.state.value, r.spec.basis, r.spec.gates)
        by_key.setdefault(key, {})[r.spec.encoding] = r
    header = ["state", "basis", "gate", "bare_tvd", "bare_ci_low", "bare_ci_high",
              "encoded_tvd", "encoded_ci_low", "encoded_ci_high"]
    rows = []
    for (state, basis, gates), pair in by_key.items():
        row = [state, basis, gate_label(gates)]
        for enc in ("bare", "encoded"):
            r = pair.get(enc)
            row += [_fmt(r.tvd), _fmt(r.ci_low), _fmt(r.ci_high)] if r else ["", "", ""]
        rows.append(row)
    return _csv_text(header, rows)


def acceptance_csv(results: Sequence[ExperimentResult]) -> str:
    """Post-selection rates of the encoded cells with an average row."""
    enc = [r for r in results if r.spec.encoding == "encoded"]
    rows = [[r.spec.state.value, gate_label(r.spec.gates), r.spec.basis, _fmt(r.acceptance_rate)] for r in enc]
    if enc:
        rows.append(["average", "", "", _fmt(sum(r.acceptance_rate for r in enc) / len(enc))])
    return _csv_text(["state", "gate", "basis", "acceptance"], rows)


# fault-tolerance reports ------------------------------------------------------------------


def reference_reports() -> list[FtReport]:
    code = code_832()
    out = []
    for state, prep, name in (
        (TargetState.GHZ, ghz_prep_encoded(), "ghz_prep_encoded"),
        (TargetState.PLUS3, plus3_prep_encoded(), "plus3_prep_encoded"),
    ):
        t = target_state_group(code, state)
        for basis in BASES:
            c = with_readout(prep, basis)
            r = readout_rule(ExperimentSpec(state, (), basis, "encoded"))
            out.append(verify_fault_tolerance(c, t, r, name))
    return out


def witness_text() -> str:
    """Multi-qubit residuals of X faults on qubit 0 and Z faults on qubit 1 in the
    flagged |+++> preparation."""
    code = code_832()
    c = plus3_prep_encoded()
    lines = []
    for qubit, kind in ((0, "X"), (1, "Z")):
        lines.append(f"# {kind} fault on qubit {qubit}")
        lines += [f"{w.text}\t({w.annotation})" for w in witness_errors(c, code, qubit, kind)]
    return "\n".join(lines) + "\n"


def emit_report(results: Sequence[ExperimentResult], out: str | os.PathLike) -> list[Path]:
    if not results:
        raise ValueError("no results to report")
    out_dir = Path(out)
    reports = reference_reports()
    files = {
        "cells.csv": cells_csv(results),
        "comparison.csv": comparison_csv(results),
        "acceptance.csv": acceptance_csv(results),
        "ft_reports.json": json.dumps([r.summary() for r in reports], indent=1, sort_keys=True) + "\n",
        "witness.txt": witness_text(),
    }
    paths = []
    for name, text in files.items():
        _write(out_dir / name, text)
        paths.append(out_dir / name)
    return paths

"""Stochastic Pauli noise, shot sampling with post-selection, and summary statistics.

Each shot consumes a fixed block of uniforms: two per circuit location (does a
fault fire, and which Pauli) plus one for the readout draw.  Blocks come from
a counter-based Philox stream keyed by ``hash(master_seed, spec id)``; shot
``i`` always reads block ``i``, so results do not depend on chunking, order or
worker count.

Shots that draw the same set of gate/preparation faults share one exact
statevector simulation; measurement faults are applied as classical bit flips.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import kernels
from .circuit import Circuit, count_locations
from .ftverify import location_paulis
from .pauli import PauliOperator
from .reference import ExperimentSpec, ReadoutRule, experiment_circuit, ideal_logical_array, readout_rule
from .statevector import outcome_probabilities, simulate

DEFAULT_RESAMPLES = 1000
_CHUNK = 16384
_U53 = 2.0 ** -53


@dataclass(frozen=True)
class NoiseModel:
    p1: float = 0.0  # single-qubit gates
    p2: float = 0.0  # multi-qubit gates
    pm: float = 0.0  # measurement outcome flip
    pp: float = 0.0  # preparation flip

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "pm", "pp"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    def rate(self, gate) -> float:
        if gate.is_prep:
            return self.pp
        if gate.is_measurement:
            return self.pm
        if gate.is_multi_qubit:
            return self.p2
        return self.p1

    @property
    def is_noiseless(self) -> bool:
        return not (self.p1 or self.p2 or self.pm or self.pp)


# random streams -------------------------------------------------------------------


def stream_key(master_seed: int, spec_id: str) -> int:
    digest = hashlib.blake2b(f"{int(master_seed)}|{spec_id}".encode(), digest_size=16).digest()
    return int.from_bytes(digest, "little")


def shot_uniforms(key: int, start: int, count: int, per_shot: int) -> np.ndarray:
    """Uniforms in [0, 1) for shots ``start .. start+count-1``, one row per shot."""
    blocks = -(-per_shot // 4)  # Philox emits 4 words per counter step
    bitgen = np.random.Philox(key=key)
    bitgen.advance(start * blocks)
    raw = bitgen.random_raw(count * blocks * 4).reshape(count, blocks * 4)[:, :per_shot]
    return (raw >> np.uint64(11)).astype(np.float64) * _U53


# shot engine --------------------------------------------------------------------------


class ShotPlan:
    """Noise locations of one circuit plus a cache of faulty readout distributions."""

    def __init__(self, c: Circuit, noise: NoiseModel, rule: ReadoutRule) -> None:
        self.circuit = c
        self.noise = noise
        self.rule = rule
        gates = c.gates
        self.n_locations = len(gates)
        self.per_shot = 2 * self.n_locations + 1
        self.rates = np.array([noise.rate(g) for g in gates], dtype=np.float64)
        self.is_measure = np.array([g.is_measurement for g in gates], dtype=bool)
        measured = sorted(c.measurement_bases())
        m = len(measured)
        self.flip_bits = np.zeros(self.n_locations, dtype=np.uint64)
        self.local_faults: list[list[PauliOperator]] = []
        for loc, g in enumerate(gates):
            q = g.qubits
            if g.is_measurement:
                self.flip_bits[loc] = 1 << (m - 1 - measured.index(q[0]))
                self.local_faults.append([])
            elif g.is_prep:
                flip = "X" if g.name == "PREPZ" else "Z"
                self.local_faults.append([PauliOperator.from_support(c.width, flip, q)])
            else:
                self.local_faults.append([f.embed(c.width, q) for f in location_paulis(len(q))])
        self.n_choices = np.array([max(1, len(f)) for f in self.local_faults], dtype=np.float64)
        self.gate_cols = np.flatnonzero(~self.is_measure & (self.rates > 0))
        self.meas_cols = np.flatnonzero(self.is_measure & (self.rates > 0))
        self._cdf_cache: dict[tuple, np.ndarray] = {}
        self._checks = np.array(rule.check_masks, dtype=np.uint64)
        self._decode = np.array(rule.decode_masks, dtype=np.uint64)

    def cdf(self, key: tuple[tuple[int, int], ...]) -> np.ndarray:
        cdf = self._cdf_cache.get(key)
        if cdf is None:
            faults: dict[int, PauliOperator] = {}
            for loc, choice in key:
                faults[loc] = self.local_faults[loc][choice]
            probs = outcome_probabilities(simulate(self.circuit, faults), self.circuit)
            cdf = np.cumsum(probs)
            cdf /= cdf[-1]
            self._cdf_cache[key] = cdf
        return cdf

    def run(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Status (0 accepted, 1 flag, 2 parity) and decoded value for each row of uniforms."""
        n_shots = u.shape[0]
        fire = u[:, 0:-1:2] < self.rates
        choice = np.minimum((u[:, 1::2] * self.n_choices).astype(np.int64), self.n_choices.astype(np.int64) - 1)
        flips = np.zeros(n_shots, dtype=np.uint64)
        for col in self.meas_cols:
            flips[fire[:, col]] |= self.flip_bits[col]
        outcomes = np.empty(n_shots, dtype=np.uint64)
        last = u[:, -1]
        groups: dict[tuple, list[int]] = {}
        gate_fire = fire[:, self.gate_cols] if len(self.gate_cols) else np.zeros((n_shots, 0), dtype=bool)
        faulty = np.flatnonzero(gate_fire.any(axis=1))
        clean = np.ones(n_shots, dtype=bool)
        clean[faulty] = False
        for row in faulty:
            cols = self.gate_cols[gate_fire[row]]
            key = tuple((int(c), int(choice[row, c])) for c in cols)
            groups.setdefault(key, []).append(row)
        if clean.any():
            idx = np.flatnonzero(clean)
            outcomes[idx] = kernels.sample_cdf(self.cdf(()), last[idx])
        for key, rows in groups.items():
            rows_arr = np.asarray(rows)
            outcomes[rows_arr] = kernels.sample_cdf(self.cdf(key), last[rows_arr])
        outcomes ^= flips
        return kernels.postselect_decode(outcomes, self._checks, self.rule.flag_mask, self._decode)


@dataclass(frozen=True)
class ShotResult:
    accepted: bool
    decoded: str | None = None
    reason: str | None = None
    raw: str = ""


def sample_shot(
    c: Circuit,
    m: NoiseModel,
    rule: ReadoutRule,
    rng: np.random.Generator | None = None,
    injected: Mapping[int, PauliOperator] | None = None,
    uniforms: np.ndarray | None = None,
) -> ShotResult:
    """One noisy shot.  ``injected`` adds deterministic register-wide faults
    (location -> Pauli) on top of whatever the noise model draws."""
    plan = ShotPlan(c, m, rule)
    if uniforms is None:
        if rng is None:
            raise ValueError("need an rng or explicit uniforms")
        uniforms = rng.random(plan.per_shot)
    u = np.asarray(uniforms, dtype=np.float64)
    faults: dict[int, PauliOperator] = dict(injected or {})
    flips = 0
    for loc in range(plan.n_locations):
        if u[2 * loc] < plan.rates[loc]:
            if plan.is_measure[loc]:
                flips ^= int(plan.flip_bits[loc])
            else:
                k = min(int(u[2 * loc + 1] * plan.n_choices[loc]), int(plan.n_choices[loc]) - 1)
                f = plan.local_faults[loc][k]
                faults[loc] = faults[loc] * f if loc in faults else f
    probs = outcome_probabilities(simulate(c, faults), c)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    value = int(kernels.sample_cdf(cdf, np.array([u[-1]]))[0]) ^ flips
    raw = format(value, f"0{rule.n_measured}b")
    reason = rule.status(value)
    if reason is not None:
        return ShotResult(False, None, reason, raw)
    return ShotResult(True, format(rule.decode(value), f"0{len(rule.decode_masks)}b"), None, raw)


# experiments ------------------------------------------------------------------------


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    shots: int
    accepted: int
    counts: list[int]
    seed: int
    noise: NoiseModel = field(default_factory=NoiseModel)
    tvd: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    rejected_flag: int = 0
    rejected_parity: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.shots

    @property
    def distribution(self) -> dict[str, float]:
        if not self.accepted:
            return {}
        width = int(round(math.log2(len(self.counts))))
        return {format(i, f"0{width}b"): c / self.accepted for i, c in enumerate(self.counts) if c}

    @property
    def ci_mid(self) -> float | None:
        if self.ci_low is None or self.ci_high is None:
            return None
        return 0.5 * (self.ci_low + self.ci_high)

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.id,
            "shots": self.shots,
            "accepted": self.accepted,
            "acceptance_rate": self.acceptance_rate,
            "counts": self.counts,
            "distribution": self.distribution,
            "tvd": self.tvd,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "seed": self.seed,
            "rejected_flag": self.rejected_flag,
            "rejected_parity": self.rejected_parity,
            "noise": {"p1": self.noise.p1, "p2": self.noise.p2, "pm": self.noise.pm, "pp": self.noise.pp},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> ExperimentResult:
        spec = ExperimentSpec.parse(d["spec"])
        return cls(
            spec, int(d["shots"]), int(d["accepted"]), [int(c) for c in d["counts"]], int(d["seed"]),
            NoiseModel(**d["noise"]), d["tvd"], d["ci_low"], d["ci_high"],
            int(d.get("rejected_flag", 0)), int(d.get("rejected_parity", 0)),
        )


def run_experiment(
    spec: ExperimentSpec,
    m: NoiseModel,
    shots: int,
    master_seed: int,
    resamples: int = DEFAULT_RESAMPLES,
    chunk: int = _CHUNK,
) -> ExperimentResult:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    c = experiment_circuit(spec)
    rule = readout_rule(spec)
    plan = ShotPlan(c, m, rule)
    key = stream_key(master_seed, spec.id)
    n_logical = 1 << len(rule.decode_masks)
    counts = np.zeros(n_logical, dtype=np.int64)
    flag = parity = 0
    for start in range(0, shots, chunk):
        count = min(chunk, shots - start)
        status, decoded = plan.run(shot_uniforms(key, start, count, plan.per_shot))
        counts += np.bincount(decoded[status == 0], minlength=n_logical)
        flag += int((status == 1).sum())
        parity += int((status == 2).sum())
    accepted = int(counts.sum())
    result = ExperimentResult(spec, shots, accepted, counts.tolist(), master_seed, m, rejected_flag=flag, rejected_parity=parity)
    if accepted:
        ideal = ideal_logical_array(spec)
        result.tvd = float(0.5 * np.abs(counts / accepted - ideal).sum())
        if resamples:
            rng = np.random.Generator(np.random.Philox(key=stream_key(master_seed, spec.id + "#bootstrap")))
            lo, hi = bootstrap_counts_interval(counts, lambda f: 0.5 * np.abs(f - ideal).sum(axis=1), resamples, rng)
            result.ci_low, result.ci_high = lo, hi
    return result


def first_order_acceptance(c: Circuit, p: float, ccz_mode: str = "native") -> float:
    """``1 - p (n_m + n_g)``: every two-qubit-gate or measurement fault discards the run."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    n = count_locations(c, ccz_mode)
    return max(0.0, 1.0 - p * (n.n_m + n.n_g))


# bootstrap ------------------------------------------------------------------------------


def bootstrap_counts_interval(
    counts: Sequence[int] | np.ndarray,
    statistic: Callable[[np.ndarray], np.ndarray],
    resamples: int = DEFAULT_RESAMPLES,
    rng: np.random.Generator | None = None,
    level: float = 0.95,
) -> tuple[float, float]:
    """Percentile interval of ``statistic`` over multinomial resamples of ``counts``.

    ``statistic`` maps an array of frequency rows (resamples x outcomes) to one
    value per row.
    """
    if resamples < 100:
        raise ValueError("need at least 100 resamples")
    counts = np.asarray(counts, dtype=np.int64)
    n = int(counts.sum())
    if n == 0:
        raise ValueError("cannot bootstrap an empty sample")
    rng = rng if rng is not None else np.random.default_rng()
    draws = rng.multinomial(n, counts / n, size=resamples)
    stats = np.asarray(statistic(draws / n), dtype=np.float64)
    if stats.shape != (resamples,):
        stats = np.array([float(statistic(row[None, :])[0]) for row in draws / n])
    tail = 100 * (1 - level) / 2
    lo, hi = np.percentile(stats, [tail, 100 - tail])
    return float(lo), float(hi)


def bootstrap_interval(
    samples: Sequence[int],
    statistic: Callable[[np.ndarray], np.ndarray],
    resamples: int = DEFAULT_RESAMPLES,
    rng: np.random.Generator | None = None,
    n_outcomes: int | None = None,
    level: float = 0.95,
) -> tuple[float, float]:
    """Bootstrap interval from raw outcome samples (non-negative integers)."""
    samples = np.asarray(samples, dtype=np.int64)
    if samples.size == 0:
        raise ValueError("cannot bootstrap an empty sample")
    counts = np.bincount(samples, minlength=n_outcomes or 0)
    return bootstrap_counts_interval(counts, statistic, resamples, rng, level)

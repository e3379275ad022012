"""Experiment runners for the adiabatic-plus-twirl pipeline and shot statistics.

Every run is fully determined by its :class:`ExperimentConfig`; random
streams come from ``numpy.random.SeedSequence(seed)`` so reruns are
byte-identical.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .distill import TwirlConfig, TwirlRecord, distillation
from .errors import ConfigurationError
from .evolve import Schedule, adiabatic_trajectory, evolve_constant, run_adiabatic
from .models import ONE_QUBIT, ModelSpec, observable, target_hamiltonian
from .statevec import StateVector, basis_state, expectation, sample_shots

log = logging.getLogger(__name__)

MAX_ROUNDS = 8
TABLE_COLUMNS = ("round", "mean", "std_error", "active_count", "shots", "exact_value")
FIG1_COLUMNS = ("t", "exact_z", "sampled_z")


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelSpec = field(default_factory=lambda: ModelSpec(ONE_QUBIT, 1.0))
    t_total: float = 36.0
    dt: float = 1 / 24
    rounds: int = 5
    shots: int = 10**5
    reps: int = 1
    seed: int = 0
    u_mode: str = "trotter"
    twirl_steps: int = 100
    initial: str | None = None  # bitstring overriding the H_0 ground state
    workers: int = 1
    out: Path | None = None

    def __post_init__(self):
        if self.shots < 1 or self.reps < 1:
            raise ConfigurationError("shots and reps must be >= 1")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.seed < 0:
            raise ConfigurationError("seed must be non-negative")

    @property
    def twirl(self) -> TwirlConfig:
        return TwirlConfig(self.rounds, self.u_mode, self.twirl_steps)

    def metadata(self) -> dict[str, object]:
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        model = d.pop("model")
        return {
            "model": model["kind"],
            "j": model["j"],
            **d,
            "seed_derivation": "numpy SeedSequence(seed).spawn per rep, then per round/time point",
            "state_prep": "deterministic; prepared once and shared by all reps",
        }


@dataclass(frozen=True)
class SummaryRow:
    round: int
    mean: float
    std_error: float
    active_count: int
    shots: int
    exact_cond_expect: float

    def as_csv(self) -> tuple:
        return (self.round, self.mean, self.std_error, self.active_count, self.shots, self.exact_cond_expect)


def derive_seeds(master: int, n: int) -> list[int]:
    """``n`` independent integer seeds derived deterministically from ``master``."""
    return [int(c.generate_state(1, np.uint64)[0]) for c in np.random.SeedSequence(master).spawn(n)]


def summarize(samples: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error (sample std / sqrt(n)); the error is NaN for one sample."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ConfigurationError("summarize needs at least one sample")
    if x.size == 1:
        return float(x[0]), math.nan
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def _initial(cfg: ExperimentConfig) -> StateVector | None:
    """Override of the starting state, or None for the H_0 ground state."""
    if cfg.initial is None:
        return None
    return basis_state(cfg.model.n_physical, cfg.initial)


@lru_cache(maxsize=32)
def _distilled(model, t_total, dt, twirl, initial_bits):
    init = None if initial_bits is None else basis_state(model.n_physical, initial_bits)
    psi0 = run_adiabatic(model, Schedule.build(t_total, dt), init)
    return tuple(distillation(psi0, model, twirl, observable(model)))


def distilled_states(cfg: ExperimentConfig) -> tuple[tuple[TwirlRecord, StateVector], ...]:
    """Records and full-register states for rounds ``0..cfg.rounds`` (memoized)."""
    if not 0 <= cfg.rounds <= MAX_ROUNDS:
        raise ConfigurationError(f"rounds must lie in 0..{MAX_ROUNDS}")
    return _distilled(cfg.model, cfg.t_total, cfg.dt, cfg.twirl, cfg.initial)


def active_statistics(
    state: StateVector, n_physical: int, obs_values: np.ndarray, shots: int, seed: int
) -> tuple[float, float, int]:
    """Sampled mean, its standard error and the active count over all-ancillas-zero shots.

    ``obs_values`` are the observable's eigenvalues on the physical basis
    states, so the observable must be diagonal.
    """
    counts = sample_shots(state, shots, seed).index_counts()
    active = counts.reshape(-1, 2**n_physical)[0]
    n_active = int(active.sum())
    if n_active == 0:
        return math.nan, math.nan, 0
    mean = float(active @ obs_values) / n_active
    if n_active == 1:
        return mean, math.nan, 1
    var = float(active @ (obs_values - mean) ** 2) / (n_active - 1)
    return mean, math.sqrt(var / n_active), n_active


def run_table(cfg: ExperimentConfig) -> list[SummaryRow]:
    """One row per round count: sampled conditional mean over active shots plus the exact value."""
    states = distilled_states(cfg)
    obs_values = observable(cfg.model).diagonal()
    n_phys = cfg.model.n_physical
    rep_seeds = derive_seeds(cfg.seed, cfg.reps)

    def one_rep(rep_seed: int) -> list[tuple[float, float, int]]:
        round_seeds = derive_seeds(rep_seed, len(states))
        return [
            active_statistics(state, n_phys, obs_values, cfg.shots, s)
            for (_, state), s in zip(states, round_seeds)
        ]

    if cfg.workers > 1 and cfg.reps > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            per_rep = list(pool.map(one_rep, rep_seeds))
    else:
        per_rep = [one_rep(s) for s in rep_seeds]

    rows = []
    for j, (rec, _) in enumerate(states):
        stats = [rep[j] for rep in per_rep]
        active = sum(s[2] for s in stats)
        if cfg.reps == 1:
            mean, err = stats[0][0], stats[0][1]
        else:
            mean, err = summarize([s[0] for s in stats])
        rows.append(SummaryRow(j, mean, err, active, cfg.shots * cfg.reps, rec.cond_expect))
    return rows


def run_fig1(cfg: ExperimentConfig) -> list[tuple[float, float, float]]:
    """Observable trace over the adiabatic segment [0, T] and the constant-H_T segment [T, 2T]."""
    sched = Schedule.build(cfg.t_total, cfg.dt)
    obs = observable(cfg.model)
    trace = list(adiabatic_trajectory(cfg.model, sched, _initial(cfg)))
    tail = evolve_constant(trace[-1][1], target_hamiltonian(cfg.model), cfg.t_total, sched.dt, cfg.t_total)
    trace.extend(tail[1:])

    obs_values = obs.diagonal()
    n_phys = cfg.model.n_physical
    rows = []
    for (t, state), seed in zip(trace, derive_seeds(cfg.seed, len(trace))):
        sampled, _, _ = active_statistics(state, n_phys, obs_values, cfg.shots, seed)
        rows.append((t, expectation(state, obs), sampled))
    return rows


def format_csv(columns: Sequence[str], rows, meta: dict[str, object]) -> str:
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def table_csv(cfg: ExperimentConfig, rows: list[SummaryRow]) -> str:
    return format_csv(TABLE_COLUMNS, [r.as_csv() for r in rows], {"experiment": "table", **cfg.metadata()})


def fig1_csv(cfg: ExperimentConfig, rows) -> str:
    return format_csv(FIG1_COLUMNS, rows, {"experiment": "fig1", **cfg.metadata()})


def read_csv(path: Path | str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Parse a file written by this module into (metadata, rows)."""
    meta, body = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("# "):
                k, _, v = line[2:].rstrip("\n").partition("=")
                meta[k] = v
            else:
                body.append(line)
    return meta, list(csv.DictReader(body))


def write_output(text: str, out: Path | None) -> None:
    if out is None:
        print(text, end="")
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    log.info("wrote %s", out)

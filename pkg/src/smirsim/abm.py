"""Discrete-time agent-based SMIR dynamics on a contact network.

Each day, every susceptible node with m >= 1 infected neighbors becomes
infected with probability 1 - (1 - p)^m, where p is chosen by the
*susceptible's own* label (p_m for misinformed, p_o for ordinary), and every
infected node recovers with probability gamma. Updates are synchronous: both
decisions read only the previous day's state, so a node cannot infect anyone
and recover within the same day.

Randomness is counter-based: each (repetition, day) owns a Philox stream
keyed by (repetition key, day), and the d-th value of that stream belongs to
node d. Outcomes are therefore independent of evaluation order and thread
count, and any single day of any repetition can be replayed in isolation.

State is one byte per node with (current, next) double buffers; per-day
scratch is two float vectors, which keeps the 20M-node configuration within
workstation memory.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .contactnet import ContactNetwork
from .errors import InsufficientMisinformedError, ValidationError

S, I, R = 0, 1, 2

# Philox stream ids within one repetition: 0 seeds the infection, 1 + day
# drives that day's transition draws.
_STREAM_SEEDING = 0


@dataclass(frozen=True)
class AbmConfig:
    """Transmission, recovery, and experiment-shape parameters.

    Defaults pin the worst-case contrast: misinformed susceptibles transmit
    on every contact (p_m = 1) while ordinary ones almost never do
    (p_o = 0.01); recovery is geometric with mean 5 days.
    """

    p_o: float = 0.01
    p_m: float = 1.0
    gamma: float = 0.2
    initial_infected: int = 100
    steps: int = 100
    repetitions: int = 10

    def __post_init__(self):
        for name in ("p_o", "p_m"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"{name} must be in [0, 1], got {v}")
        if self.p_m < self.p_o:
            raise ValidationError(
                f"p_m ({self.p_m}) must be >= p_o ({self.p_o})"
            )
        if not (0.0 <= self.gamma <= 1.0):
            raise ValidationError(f"gamma must be in [0, 1], got {self.gamma}")
        if self.initial_infected < 1:
            raise ValidationError("initial_infected must be >= 1")
        if self.steps < 1 or self.repetitions < 1:
            raise ValidationError("steps and repetitions must be >= 1")


@dataclass(frozen=True)
class AbmState:
    """Compartment byte per node (S=0, I=1, R=2) at the given day."""

    compartment: np.ndarray
    day: int

    def counts(self) -> tuple[int, int, int]:
        c = np.bincount(self.compartment, minlength=3)
        return int(c[S]), int(c[I]), int(c[R])


def repetition_key(master_seed: int, repetition: int) -> int:
    """64-bit Philox key root for one repetition."""
    return int(
        np.random.SeedSequence([master_seed, repetition]).generate_state(1, np.uint64)[0]
    )


def _stream(rep_key: int, stream_id: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[rep_key, stream_id]))


def day_stream(rep_key: int, day: int) -> np.random.Generator:
    """The Philox stream that owns day `day` of one repetition."""
    return _stream(rep_key, 1 + day)


def seed_infection(
    net: ContactNetwork, cfg: AbmConfig, rng: np.random.Generator
) -> AbmState:
    """Infect exactly cfg.initial_infected uniformly chosen misinformed nodes."""
    candidates = np.flatnonzero(net.misinformed)
    if len(candidates) < cfg.initial_infected:
        raise InsufficientMisinformedError(len(candidates), cfg.initial_infected)
    chosen = rng.choice(candidates, size=cfg.initial_infected, replace=False)
    compartment = np.zeros(net.n_nodes, dtype=np.uint8)
    compartment[chosen] = I
    return AbmState(compartment=compartment, day=0)


def step(
    state: AbmState, net: ContactNetwork, cfg: AbmConfig, rng: np.random.Generator
) -> AbmState:
    """Advance one day synchronously.

    Draws one uniform per node for infection and one per node for recovery
    from ``rng``, in node order, so a counter-based generator keyed to the
    day gives per-(day, node) reproducibility.
    """
    comp = state.compartment
    n = len(comp)
    infected = comp == I
    src = net.edges[:, 0]
    dst = net.edges[:, 1]
    m = np.bincount(dst[infected[src]], minlength=n) + np.bincount(
        src[infected[dst]], minlength=n
    )
    u_inf = rng.random(n)
    u_rec = rng.random(n)
    p = np.where(net.misinformed, cfg.p_m, cfg.p_o)
    p_infect = 1.0 - np.power(1.0 - p, m)
    nxt = comp.copy()
    nxt[(comp == S) & (m > 0) & (u_inf < p_infect)] = I
    nxt[infected & (u_rec < cfg.gamma)] = R
    return AbmState(compartment=nxt, day=state.day + 1)


#: Measure names in CSV column order; *_ord / *_mis restrict to one label.
MEASURES = (
    "new_inf",
    "prev_I",
    "cum",
    "new_inf_ord",
    "prev_I_ord",
    "cum_ord",
    "new_inf_mis",
    "prev_I_mis",
    "cum_mis",
)


@dataclass(frozen=True)
class EpidemicResult:
    """Per-day counts aggregated over repetitions.

    ``per_rep[name]`` has shape (repetitions, steps + 1); day 0 reflects the
    seeded state. ``mean``/``std`` are taken across repetitions (population
    std, so one repetition gives zeros). Peak statistics are per-repetition
    peaks of overall prevalence (first day on ties), then aggregated.
    """

    n_nodes: int
    misinformed_nodes: int
    config: AbmConfig
    master_seed: int
    days: np.ndarray
    per_rep: dict[str, np.ndarray]
    peak_day: np.ndarray = field(repr=False, default=None)
    peak_height: np.ndarray = field(repr=False, default=None)

    def mean(self, measure: str) -> np.ndarray:
        return self.per_rep[measure].mean(axis=0)

    def std(self, measure: str) -> np.ndarray:
        return self.per_rep[measure].std(axis=0)

    @property
    def peak_day_mean(self) -> float:
        return float(self.peak_day.mean())

    @property
    def peak_height_mean(self) -> float:
        return float(self.peak_height.mean())

    @property
    def cumulative_final_mean(self) -> float:
        return float(self.per_rep["cum"][:, -1].mean())

    @property
    def cumulative_final_std(self) -> float:
        return float(self.per_rep["cum"][:, -1].std())


def run(net: ContactNetwork, cfg: AbmConfig, master_seed: int) -> EpidemicResult:
    """Run cfg.repetitions independent epidemics and aggregate per day.

    The network is fixed; each repetition reseeds the initial infections with
    its own derived key. Identical inputs give identical results, bit for
    bit.
    """
    n = net.n_nodes
    mis = net.misinformed
    t = cfg.steps + 1
    per_rep = {name: np.zeros((cfg.repetitions, t), dtype=np.int64) for name in MEASURES}
    peak_day = np.zeros(cfg.repetitions, dtype=np.int64)
    peak_height = np.zeros(cfg.repetitions, dtype=np.int64)

    for rep in range(cfg.repetitions):
        rep_key = repetition_key(master_seed, rep)
        state = seed_infection(net, cfg, _stream(rep_key, _STREAM_SEEDING))
        newly = state.compartment == I
        ever = newly.copy()
        _record(per_rep, rep, 0, newly, state.compartment, ever, mis)
        for day in range(cfg.steps):
            prev = state.compartment
            state = step(state, net, cfg, day_stream(rep_key, day))
            newly = (state.compartment == I) & (prev == S)
            ever |= newly
            _record(per_rep, rep, day + 1, newly, state.compartment, ever, mis)
        prev_series = per_rep["prev_I"][rep]
        peak_day[rep] = int(np.argmax(prev_series))
        peak_height[rep] = int(prev_series.max())

    return EpidemicResult(
        n_nodes=n,
        misinformed_nodes=net.misinformed_count,
        config=cfg,
        master_seed=int(master_seed),
        days=np.arange(t),
        per_rep=per_rep,
        peak_day=peak_day,
        peak_height=peak_height,
    )


def _record(per_rep, rep, day, newly, comp, ever, mis):
    infected = comp == I
    per_rep["new_inf"][rep, day] = newly.sum()
    per_rep["prev_I"][rep, day] = infected.sum()
    per_rep["cum"][rep, day] = ever.sum()
    per_rep["new_inf_ord"][rep, day] = (newly & ~mis).sum()
    per_rep["prev_I_ord"][rep, day] = (infected & ~mis).sum()
    per_rep["cum_ord"][rep, day] = (ever & ~mis).sum()
    per_rep["new_inf_mis"][rep, day] = (newly & mis).sum()
    per_rep["prev_I_mis"][rep, day] = (infected & mis).sum()
    per_rep["cum_mis"][rep, day] = (ever & mis).sum()


def merge_results(parts: list[EpidemicResult]) -> EpidemicResult:
    """Stack single-network results into one multi-repetition result.

    Used when every repetition rebuilds its own contact network; the parts
    must agree on node counts, measures, and day range.
    """
    first = parts[0]
    for p in parts[1:]:
        if p.n_nodes != first.n_nodes or len(p.days) != len(first.days):
            raise ValidationError("cannot merge results with different shapes")
    per_rep = {
        name: np.concatenate([p.per_rep[name] for p in parts]) for name in MEASURES
    }
    total_reps = sum(p.config.repetitions for p in parts)
    from dataclasses import replace as _replace

    return EpidemicResult(
        n_nodes=first.n_nodes,
        misinformed_nodes=first.misinformed_nodes,
        config=_replace(first.config, repetitions=total_reps),
        master_seed=first.master_seed,
        days=first.days,
        per_rep=per_rep,
        peak_day=np.concatenate([p.peak_day for p in parts]),
        peak_height=np.concatenate([p.peak_height for p in parts]),
    )


def write_result_csv(result: EpidemicResult, path) -> None:
    """Write the per-day mean/std table: day, then mean_/std_ per measure."""
    with open(path, "w", newline="") as f:
        out = csv.writer(f)
        header = ["day"]
        for name in MEASURES:
            header += [f"mean_{name}", f"std_{name}"]
        out.writerow(header)
        means = {name: result.mean(name) for name in MEASURES}
        stds = {name: result.std(name) for name in MEASURES}
        for d in range(len(result.days)):
            row = [int(result.days[d])]
            for name in MEASURES:
                row += [repr(float(means[name][d])), repr(float(stds[name][d]))]
            out.writerow(row)

"""County scenarios: real-data ingestion and synthetic stand-ins.

A scenario is a county table (voter population, republican vote share,
twitter user count) plus a symmetric county-by-county mobility matrix whose
entry L[x, y] is the average daily number of individuals moving between
counties x and y (the diagonal is within-county movement).

CSV is the only ingestion format. ``load_scenario`` validates everything and
reports parse errors with line numbers; ``save_scenario`` writes a canonical
form whose load/save round-trip is byte-identical. ``generate_scenario``
synthesizes a realistic scenario plus a matching information network, all
randomness flowing from one master seed split hierarchically (counties ->
mobility -> infonet), so each stage is reproducible in isolation.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError
from .infonet import InfoGenConfig, InfoNetwork

# Stream indices for hierarchical seed derivation from the master seed.
_STREAM_COUNTIES = 0
_STREAM_MOBILITY = 1
_STREAM_INFONET = 2


def derive_seed(master_seed: int, stream: int) -> int:
    """A child seed for one named stage of the generation hierarchy."""
    return int(np.random.SeedSequence([master_seed, stream]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class MobilityMatrix:
    """Symmetric nonnegative county-by-county daily movement counts."""

    county_ids: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        v = self.values
        n = len(self.county_ids)
        if v.shape != (n, n):
            raise ValidationError(
                f"mobility shape {v.shape} does not match {n} counties"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("mobility entries must be finite")
        if np.any(v < 0):
            raise ValidationError("mobility entries must be nonnegative")
        scale = max(float(v.max()), 1.0)
        if not np.allclose(v, v.T, rtol=0, atol=1e-9 * scale):
            raise ValidationError("mobility matrix must be symmetric")
        if not np.any(v > 0):
            raise ValidationError("mobility matrix needs at least one positive entry")


@dataclass(frozen=True)
class Scenario:
    """County table plus mobility. Column arrays are index-aligned.

    ``mobility`` may be None transiently while a scenario is being generated;
    every loaded scenario and every pipeline input has it set.
    """

    county_ids: np.ndarray
    voters: np.ndarray
    republican_share: np.ndarray
    twitter_users: np.ndarray
    mobility: MobilityMatrix | None = None

    def __post_init__(self):
        n = len(self.county_ids)
        if n < 1:
            raise ValidationError("scenario needs at least one county")
        if len(np.unique(self.county_ids)) != n:
            raise ValidationError("county ids are not unique")
        for name in ("voters", "republican_share", "twitter_users"):
            if len(getattr(self, name)) != n:
                raise ValidationError(f"{name} length does not match county count")
        if np.any(self.voters < 0):
            raise ValidationError("voter populations must be nonnegative")
        if np.any((self.republican_share < 0) | (self.republican_share > 1)):
            raise ValidationError("republican_share must be in [0, 1]")
        if np.any(self.twitter_users < 0):
            raise ValidationError("twitter user counts must be nonnegative")
        if self.mobility is not None and not np.array_equal(
            self.mobility.county_ids, self.county_ids
        ):
            raise ValidationError("mobility county ids do not match scenario counties")

    @property
    def n_counties(self) -> int:
        return len(self.county_ids)

    def county_index(self) -> dict[int, int]:
        return {int(c): i for i, c in enumerate(self.county_ids)}


def load_scenario(counties_path, mobility_path) -> Scenario:
    """Load and validate a scenario from its two CSV files.

    County rows: fips, voters, republican_share, twitter_users.
    Mobility rows: x_fips, y_fips, value; missing pairs are zero, and rows
    for (x, y) and (y, x) are averaged. The matrix is symmetrized as
    (L + L^T) / 2, with a warning when the relative asymmetry exceeds 1%.
    """
    fips, voters, share, users = [], [], [], []
    with open(counties_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise ParseError(counties_path, 1, "empty county file")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ParseError(
                    counties_path, line_no, f"expected 4 columns, got {len(row)}"
                )
            try:
                fips.append(int(row[0]))
                voters.append(int(row[1]))
                share.append(float(row[2]))
                users.append(int(row[3]))
            except ValueError as e:
                raise ParseError(counties_path, line_no, str(e)) from e
            if voters[-1] < 0:
                raise ValidationError(
                    f"{counties_path}:{line_no}: negative voter population {voters[-1]}"
                )
            if not (0 <= share[-1] <= 1):
                raise ValidationError(
                    f"{counties_path}:{line_no}: republican_share {share[-1]} outside [0, 1]"
                )

    index = {c: i for i, c in enumerate(fips)}
    n = len(fips)
    raw = np.zeros((n, n))
    filled = np.zeros((n, n), dtype=bool)
    with open(mobility_path, newline="") as f:
        reader = csv.reader(f)
        next(reader, None)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(
                    mobility_path, line_no, f"expected 3 columns, got {len(row)}"
                )
            try:
                x, y, v = int(row[0]), int(row[1]), float(row[2])
            except ValueError as e:
                raise ParseError(mobility_path, line_no, str(e)) from e
            if x not in index or y not in index:
                raise ParseError(mobility_path, line_no, f"unknown county in pair ({x}, {y})")
            if v < 0:
                raise ValidationError(
                    f"{mobility_path}:{line_no}: negative mobility {v}"
                )
            i, j = index[x], index[y]
            raw[i, j] = v
            filled[i, j] = True

    # Where only one direction was given, mirror it; where both, average.
    both = filled & filled.T
    l_matrix = np.where(both, (raw + raw.T) / 2.0, raw + raw.T * ~filled)
    asym = np.abs(np.where(both, raw - raw.T, 0.0))
    scale = max(float(l_matrix.max()), 1e-300)
    if asym.max() / scale > 0.01:
        warnings.warn(
            f"mobility asymmetry of {asym.max() / scale:.1%} symmetrized by averaging",
            stacklevel=2,
        )
    mobility = MobilityMatrix(
        county_ids=np.asarray(fips, dtype=np.int64), values=l_matrix
    )
    return Scenario(
        county_ids=np.asarray(fips, dtype=np.int64),
        voters=np.asarray(voters, dtype=np.int64),
        republican_share=np.asarray(share, dtype=float),
        twitter_users=np.asarray(users, dtype=np.int64),
        mobility=mobility,
    )


def save_scenario(scenario: Scenario, counties_path, mobility_path) -> None:
    """Write the canonical CSV form (upper-triangular nonzero mobility rows)."""
    with open(counties_path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(["fips", "voters", "republican_share", "twitter_users"])
        for i in range(scenario.n_counties):
            out.writerow(
                [
                    int(scenario.county_ids[i]),
                    int(scenario.voters[i]),
                    repr(float(scenario.republican_share[i])),
                    int(scenario.twitter_users[i]),
                ]
            )
    if scenario.mobility is None:
        raise ValidationError("cannot save a scenario without a mobility matrix")
    values = scenario.mobility.values
    with open(mobility_path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(["x_fips", "y_fips", "value"])
        for i in range(scenario.n_counties):
            for j in range(i, scenario.n_counties):
                if values[i, j] > 0:
                    out.writerow(
                        [
                            int(scenario.county_ids[i]),
                            int(scenario.county_ids[j]),
                            repr(float(values[i, j])),
                        ]
                    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Shape parameters for synthetic scenario generation.

    Defaults produce 341 counties with at least 200 twitter users each,
    log-normal voter populations, and Beta-distributed republican shares.
    """

    county_count: int = 341
    pop_median: float = 12000.0
    pop_sigma: float = 1.0
    share_alpha: float = 2.0
    share_beta: float = 2.0
    twitter_user_rate: float = 0.03
    twitter_users_min: int = 200
    gravity_exponent: float = 2.0
    info: InfoGenConfig = field(default_factory=InfoGenConfig)
    seed: int = 0

    def __post_init__(self):
        if self.county_count < 1:
            raise ValidationError("county_count must be positive")
        if self.pop_median <= 0 or self.pop_sigma <= 0:
            raise ValidationError("population distribution parameters must be positive")
        if self.share_alpha <= 0 or self.share_beta <= 0:
            raise ValidationError("share distribution parameters must be positive")
        if not (0 < self.twitter_user_rate <= 1):
            raise ValidationError("twitter_user_rate must be in (0, 1]")
        if self.twitter_users_min < 1:
            raise ValidationError("twitter_users_min must be >= 1")


# Keys accepted by parse_scenario_config, with their coercions.
_CONFIG_FIELDS = {
    "county_count": int,
    "pop_median": float,
    "pop_sigma": float,
    "share_alpha": float,
    "share_beta": float,
    "twitter_user_rate": float,
    "twitter_users_min": int,
    "gravity_exponent": float,
    "seed": int,
}
_INFO_FIELDS = {
    "edges_per_node": int,
    "homophily": float,
    "seed_rate_republican": float,
    "seed_rate_democrat": float,
    "retweet_weight_p": float,
}


def parse_scenario_config(path) -> ScenarioConfig:
    """Parse a flat ``key = value`` text file into a ScenarioConfig.

    Information-network keys (edges_per_node, homophily, ...) sit at the same
    level as scenario keys. Blank lines and ``#`` comments are ignored.
    """
    values: dict = {}
    info_values: dict = {}
    with open(path) as f:
        for line_no, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(path, line_no, f"expected key = value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            try:
                if key in _CONFIG_FIELDS:
                    values[key] = _CONFIG_FIELDS[key](value)
                elif key in _INFO_FIELDS:
                    info_values[key] = _INFO_FIELDS[key](value)
                else:
                    raise ParseError(path, line_no, f"unknown config key {key!r}")
            except ValueError as e:
                raise ParseError(path, line_no, str(e)) from e
    if info_values:
        values["info"] = InfoGenConfig(**info_values)
    return ScenarioConfig(**values)


def generate_scenario(cfg: ScenarioConfig) -> tuple[Scenario, InfoNetwork]:
    """Synthesize a scenario and its information network from one master seed."""
    from . import contactnet  # deferred: contactnet imports this module's types

    rng = np.random.default_rng(
        np.random.SeedSequence([cfg.seed, _STREAM_COUNTIES])
    )
    n = cfg.county_count
    county_ids = np.arange(1000, 1000 + n, dtype=np.int64)
    voters = np.maximum(
        100, np.floor(rng.lognormal(np.log(cfg.pop_median), cfg.pop_sigma, size=n) + 0.5)
    ).astype(np.int64)
    share = rng.beta(cfg.share_alpha, cfg.share_beta, size=n)
    users = np.maximum(
        cfg.twitter_users_min, np.floor(voters * cfg.twitter_user_rate + 0.5)
    ).astype(np.int64)

    bare = Scenario(
        county_ids=county_ids,
        voters=voters,
        republican_share=share,
        twitter_users=users,
    )
    mobility = contactnet.generate_synthetic_mobility(
        bare, cfg.gravity_exponent, derive_seed(cfg.seed, _STREAM_MOBILITY)
    )
    scenario = Scenario(
        county_ids=county_ids,
        voters=voters,
        republican_share=share,
        twitter_users=users,
        mobility=mobility,
    )
    from .infonet import generate_synthetic_infonet

    net = generate_synthetic_infonet(
        scenario, cfg.info, derive_seed(cfg.seed, _STREAM_INFONET)
    )
    return scenario, net

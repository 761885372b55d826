"""Directed weighted information-diffusion networks.

An edge ``(i -> j, w)`` records that account ``j`` retweeted account ``i``
``w`` times. The "friends" of ``j`` are therefore its in-neighbors: the
accounts ``j`` retweeted, i.e. the accounts whose content reaches ``j``.
Exposure to misinformation flows along that direction, from the retweeted
account to the retweeter.

Three operations live here: a single-pass linear-threshold conversion of
ordinary nodes into misinformed ones, label propagation of political
alignment scores over the retweet graph, and a synthetic generator that
stands in for real retweet data (heavy-tailed in-degrees via directed
preferential attachment, party homophily, per-party misinformation seeding).

Networks are immutable after construction; operations return new value
objects.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import NoScoredNodesError, ParseError, ValidationError

if TYPE_CHECKING:
    from .scenario import Scenario

REPUBLICAN = 1
DEMOCRAT = -1
NO_PARTY = 0

DISTINCT_FRIENDS = "distinct_friends"
RETWEET_WEIGHTED = "retweet_weighted"

PARTY_NAMES = {REPUBLICAN: "republican", DEMOCRAT: "democrat", NO_PARTY: "none"}


@dataclass(frozen=True)
class InfoNetwork:
    """Retweet graph with per-node county, alignment, and seed attributes.

    Attributes:
        ids: unique opaque node identifiers, shape (n,).
        county: county id per node, shape (n,), int64.
        alignment: political alignment score per node, NaN where unknown.
        seed: True for accounts that empirically shared misinformation.
        edge_src: retweeted account (node index), shape (m,), int64.
        edge_dst: retweeting account (node index), shape (m,), int64.
        edge_weight: retweet counts, shape (m,), int64, all >= 1.
    """

    ids: np.ndarray
    county: np.ndarray
    alignment: np.ndarray
    seed: np.ndarray
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_weight: np.ndarray

    def __post_init__(self):
        n = len(self.ids)
        if n < 1:
            raise ValidationError("information network needs at least one node")
        if len(np.unique(self.ids)) != n:
            raise ValidationError("node ids are not unique")
        for name in ("county", "alignment", "seed"):
            if len(getattr(self, name)) != n:
                raise ValidationError(f"{name} length does not match node count")
        m = len(self.edge_src)
        if len(self.edge_dst) != m or len(self.edge_weight) != m:
            raise ValidationError("edge arrays have mismatched lengths")
        if m:
            if self.edge_src.min() < 0 or self.edge_src.max() >= n:
                raise ValidationError("edge_src index out of range")
            if self.edge_dst.min() < 0 or self.edge_dst.max() >= n:
                raise ValidationError("edge_dst index out of range")
            if np.any(self.edge_src == self.edge_dst):
                raise ValidationError("self-edges are not allowed")
            if self.edge_weight.min() < 1:
                raise ValidationError("edge weights must be >= 1")
            key = self.edge_src.astype(np.uint64) * np.uint64(n) + self.edge_dst.astype(np.uint64)
            if len(np.unique(key)) != m:
                raise ValidationError("duplicate directed edges are not allowed")

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return len(self.edge_src)

    @property
    def party(self) -> np.ndarray:
        """Party per node: sign of the alignment score, 0 for unscored or zero scores."""
        score = self.alignment
        out = np.zeros(len(score), dtype=np.int8)
        out[np.nan_to_num(score) > 0] = REPUBLICAN
        out[np.nan_to_num(score) < 0] = DEMOCRAT
        return out


@dataclass(frozen=True)
class MisinfoLabeling:
    """Outcome of the threshold conversion: who counts as misinformed.

    Every empirical seed stays misinformed regardless of the threshold.
    """

    phi: int
    mode: str
    misinformed: np.ndarray  # bool per node

    @property
    def n_misinformed(self) -> int:
        return int(self.misinformed.sum())


def spread_misinformation(
    net: InfoNetwork, phi: int, mode: str = DISTINCT_FRIENDS
) -> MisinfoLabeling:
    """Single-pass linear-threshold conversion from the empirical seeds.

    A node becomes misinformed iff it is a seed, or its exposure from seed
    friends meets the threshold ``phi``. Exposure counts distinct seed
    in-neighbors in ``distinct_friends`` mode, or the summed retweet weights
    of those edges in ``retweet_weighted`` mode. The pass never iterates:
    freshly converted nodes do not expose anyone.
    """
    if phi < 1:
        raise ValidationError(f"phi must be >= 1, got {phi}")
    if mode not in (DISTINCT_FRIENDS, RETWEET_WEIGHTED):
        raise ValidationError(f"unknown exposure mode {mode!r}")
    exposure = np.zeros(net.n_nodes, dtype=np.int64)
    from_seed = net.seed[net.edge_src]
    if mode == DISTINCT_FRIENDS:
        np.add.at(exposure, net.edge_dst[from_seed], 1)
    else:
        np.add.at(exposure, net.edge_dst[from_seed], net.edge_weight[from_seed])
    return MisinfoLabeling(
        phi=int(phi), mode=mode, misinformed=net.seed | (exposure >= phi)
    )


def propagate_alignment(net: InfoNetwork, max_rounds: int = 100) -> InfoNetwork:
    """Fill in missing alignment scores by weighted label propagation.

    Each round, every unscored node whose neighbor set (union of in- and
    out-neighbors) contains at least one scored node receives the
    retweet-weight-weighted average of its scored neighbors' scores. Updates
    are synchronous: scores gained in a round only propagate in the next one.
    Rounds stop when no unscored node can gain a score or after
    ``max_rounds``. Nodes unreachable from any scored node stay unscored.
    """
    score = net.alignment.astype(float).copy()
    scored = ~np.isnan(score)
    if not scored.any():
        raise NoScoredNodesError("no node has an alignment score to propagate")
    w = net.edge_weight.astype(float)
    for _ in range(max_rounds):
        num = np.zeros(net.n_nodes)
        den = np.zeros(net.n_nodes)
        take = scored[net.edge_src] & ~scored[net.edge_dst]
        np.add.at(num, net.edge_dst[take], score[net.edge_src[take]] * w[take])
        np.add.at(den, net.edge_dst[take], w[take])
        give = scored[net.edge_dst] & ~scored[net.edge_src]
        np.add.at(num, net.edge_src[give], score[net.edge_dst[give]] * w[give])
        np.add.at(den, net.edge_src[give], w[give])
        gained = ~scored & (den > 0)
        if not gained.any():
            break
        score[gained] = num[gained] / den[gained]
        scored |= gained
    return InfoNetwork(
        ids=net.ids,
        county=net.county,
        alignment=score,
        seed=net.seed,
        edge_src=net.edge_src,
        edge_dst=net.edge_dst,
        edge_weight=net.edge_weight,
    )


@dataclass(frozen=True)
class InfoGenConfig:
    """Knobs of the synthetic retweet-network generator.

    Attributes:
        edges_per_node: retweeter links attached per arriving account; targets
            are drawn preferentially by in-degree, which makes in-degrees
            heavy-tailed.
        homophily: probability that a new edge connects same-party accounts.
        seed_rate_republican / seed_rate_democrat: per-party probability that
            an account is an empirical misinformation seed.
        retweet_weight_p: geometric-distribution parameter of edge weights.
        users_per_county: optional override of per-county account counts;
            defaults to each county's twitter_users from the scenario.
    """

    edges_per_node: int = 5
    homophily: float = 0.7
    seed_rate_republican: float = 0.08
    seed_rate_democrat: float = 0.02
    retweet_weight_p: float = 0.5
    users_per_county: dict[int, int] | None = None

    def __post_init__(self):
        if self.edges_per_node < 1:
            raise ValidationError("edges_per_node must be >= 1")
        for name in ("homophily", "seed_rate_republican", "seed_rate_democrat"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"{name} must be in [0, 1], got {v}")
        if not (0.0 < self.retweet_weight_p <= 1.0):
            raise ValidationError("retweet_weight_p must be in (0, 1]")
        if self.users_per_county is not None:
            for c, u in self.users_per_county.items():
                if u < 1:
                    raise ValidationError(f"users_per_county[{c}] must be positive")


def generate_synthetic_infonet(
    scenario: "Scenario", cfg: InfoGenConfig, rng_seed: int
) -> InfoNetwork:
    """Generate a synthetic county-attributed retweet network.

    Accounts are created per county (counts from the scenario or from
    ``cfg.users_per_county``), assigned a party matching the county's
    republican share, and arrive in random order. Each arrival attracts
    ``edges_per_node`` retweeters chosen proportionally to (in-degree + 1):
    with probability ``homophily`` from the arriving account's party, else
    from the opposite party. A draw is skipped while the needed party pool is
    still empty. Misinformation seeds are Bernoulli per party. Output is
    fully determined by ``rng_seed``.
    """
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed))
    counts = {}
    for idx, fips in enumerate(scenario.county_ids):
        fips = int(fips)
        if cfg.users_per_county is not None:
            counts[fips] = int(cfg.users_per_county[fips])
        else:
            counts[fips] = int(scenario.twitter_users[idx])
    n = sum(counts.values())
    county = np.empty(n, dtype=np.int64)
    party = np.empty(n, dtype=np.int8)
    pos = 0
    for idx, fips in enumerate(scenario.county_ids):
        fips = int(fips)
        c = counts[fips]
        n_rep = int(np.floor(float(scenario.republican_share[idx]) * c + 0.5))
        county[pos : pos + c] = fips
        party[pos : pos + c] = DEMOCRAT
        party[pos : pos + n_rep] = REPUBLICAN
        pos += c

    # Alignment magnitude carries no meaning beyond its sign here.
    alignment = party * rng.uniform(0.05, 1.0, size=n)

    seed_rate = np.where(
        party == REPUBLICAN, cfg.seed_rate_republican, cfg.seed_rate_democrat
    )
    seeds = rng.random(n) < seed_rate

    order = rng.permutation(n)
    k = cfg.edges_per_node
    same_party = rng.random((n, k)) < cfg.homophily
    pick = rng.random((n, k))
    weights_flat = rng.geometric(cfg.retweet_weight_p, size=n * k)

    # Preferential pools: one entry per node plus one per in-edge, so a
    # uniform index draws targets proportionally to in-degree + 1.
    pools = {REPUBLICAN: [], DEMOCRAT: []}
    src_list, dst_list, w_list = [], [], []
    w_pos = 0
    for step, u in enumerate(order):
        u_party = int(party[u])
        for j in range(k):
            want = u_party if same_party[step, j] else -u_party
            pool = pools[want]
            if not pool:
                continue
            target = pool[min(int(pick[step, j] * len(pool)), len(pool) - 1)]
            src_list.append(u)
            dst_list.append(target)
            w_list.append(weights_flat[w_pos])
            w_pos += 1
            pool.append(target)
        pools[u_party].append(u)

    src = np.asarray(src_list, dtype=np.int64)
    dst = np.asarray(dst_list, dtype=np.int64)
    w = np.asarray(w_list, dtype=np.int64)
    if len(src):
        # Merge repeated (src, dst) draws into one edge with summed weight.
        key = src.astype(np.uint64) * np.uint64(n) + dst.astype(np.uint64)
        uniq, inverse = np.unique(key, return_inverse=True)
        w_agg = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(w_agg, inverse, w)
        src = (uniq // np.uint64(n)).astype(np.int64)
        dst = (uniq % np.uint64(n)).astype(np.int64)
        w = w_agg

    return InfoNetwork(
        ids=np.arange(n, dtype=np.int64),
        county=county,
        alignment=alignment,
        seed=seeds,
        edge_src=src,
        edge_dst=dst,
        edge_weight=w,
    )


def save_infonet(net: InfoNetwork, nodes_path, edges_path) -> None:
    """Write the node and edge tables in the documented CSV contract."""
    with open(nodes_path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(["id", "county_fips", "alignment", "misinformed_seed"])
        for i in range(net.n_nodes):
            a = net.alignment[i]
            out.writerow(
                [
                    net.ids[i],
                    int(net.county[i]),
                    "" if np.isnan(a) else repr(float(a)),
                    int(net.seed[i]),
                ]
            )
    with open(edges_path, "w", newline="") as f:
        out = csv.writer(f)
        out.writerow(["src", "dst", "weight"])
        for s, d, w in zip(net.edge_src, net.edge_dst, net.edge_weight):
            out.writerow([net.ids[s], net.ids[d], int(w)])


def load_infonet(nodes_path, edges_path) -> InfoNetwork:
    """Read a network from the node/edge CSV contract.

    Node rows: id, county_fips, alignment (may be empty), misinformed_seed.
    Edge rows: src, dst, weight, referring to node ids.
    """
    ids, county, alignment, seed = [], [], [], []
    with open(nodes_path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise ParseError(nodes_path, 1, "empty node file")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise ParseError(nodes_path, line_no, f"expected 4 columns, got {len(row)}")
            try:
                ids.append(row[0])
                county.append(int(row[1]))
                alignment.append(float(row[2]) if row[2] != "" else np.nan)
                seed.append(bool(int(row[3])))
            except ValueError as e:
                raise ParseError(nodes_path, line_no, str(e)) from e
    index = {node_id: i for i, node_id in enumerate(ids)}
    src, dst, weight = [], [], []
    with open(edges_path, newline="") as f:
        reader = csv.reader(f)
        next(reader, None)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(edges_path, line_no, f"expected 3 columns, got {len(row)}")
            try:
                src.append(index[row[0]])
                dst.append(index[row[1]])
                weight.append(int(row[2]))
            except KeyError as e:
                raise ParseError(edges_path, line_no, f"unknown node id {e}") from e
            except ValueError as e:
                raise ParseError(edges_path, line_no, str(e)) from e
    return InfoNetwork(
        ids=np.asarray(ids),
        county=np.asarray(county, dtype=np.int64),
        alignment=np.asarray(alignment, dtype=float),
        seed=np.asarray(seed, dtype=bool),
        edge_src=np.asarray(src, dtype=np.int64),
        edge_dst=np.asarray(dst, dtype=np.int64),
        edge_weight=np.asarray(weight, dtype=np.int64),
    )

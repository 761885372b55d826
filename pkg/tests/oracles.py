"""Independent oracles the test suite checks the engine against.

Everything here is deliberately written in a different style from the
package: dict- and loop-based enumeration instead of vectorized arrays, so a
shared bug is unlikely. The contagion law itself (susceptible-side p, m
independent exposures, synchronous daily updates, geometric recovery) is the
contract both sides implement.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from smirsim import abm
from smirsim.contactnet import ContactNetwork


def exact_outcome_distribution(
    adj: list[set[int]],
    misinformed: list[bool],
    initial: tuple[int, ...],
    p_o: float,
    p_m: float,
    gamma: float,
    steps: int,
) -> dict[tuple[int, ...], float]:
    """Exact joint-compartment distribution after `steps` synchronous days.

    Nodes are 0=S, 1=I, 2=R. Transitions per node, reading only the previous
    day: S with m>=1 infected neighbors -> I w.p. 1 - (1-p)^m where p follows
    the susceptible's own label; I -> R w.p. gamma; R absorbs.
    """
    n = len(adj)
    dist = {tuple(initial): 1.0}
    for _ in range(steps):
        nxt: dict[tuple[int, ...], float] = {}
        for state, prob in dist.items():
            options = []
            for j in range(n):
                c = state[j]
                if c == 0:
                    m = sum(1 for nb in adj[j] if state[nb] == 1)
                    if m == 0:
                        options.append(((0, 1.0),))
                    else:
                        p = p_m if misinformed[j] else p_o
                        p_inf = 1.0 - (1.0 - p) ** m
                        opts = []
                        if p_inf > 0:
                            opts.append((1, p_inf))
                        if p_inf < 1:
                            opts.append((0, 1.0 - p_inf))
                        options.append(tuple(opts))
                elif c == 1:
                    opts = []
                    if gamma > 0:
                        opts.append((2, gamma))
                    if gamma < 1:
                        opts.append((1, 1.0 - gamma))
                    options.append(tuple(opts))
                else:
                    options.append(((2, 1.0),))
            for combo in product(*options):
                p = prob
                for _, q in combo:
                    p *= q
                key = tuple(c for c, _ in combo)
                nxt[key] = nxt.get(key, 0.0) + p
        dist = nxt
    return dist


def stacked_network(
    edges: list[tuple[int, int]], misinformed: list[bool], copies: int
) -> ContactNetwork:
    """`copies` disjoint replicas of a small graph as one ContactNetwork.

    Disjointness plus per-node random draws make the replicas independent, so
    one production run yields `copies` i.i.d. outcome samples.
    """
    k = len(misinformed)
    n = k * copies
    if edges:
        base = np.array(edges, dtype=np.int64)
        lo = np.minimum(base[:, 0], base[:, 1])
        hi = np.maximum(base[:, 0], base[:, 1])
        offs = (np.arange(copies, dtype=np.int64) * k)[:, None]
        all_lo = (lo[None, :] + offs).ravel()
        all_hi = (hi[None, :] + offs).ravel()
        keys = np.sort(all_lo.astype(np.uint64) * np.uint64(n) + all_hi.astype(np.uint64))
        stacked = np.empty((len(keys), 2), dtype=np.uint32)
        stacked[:, 0] = (keys // np.uint64(n)).astype(np.uint32)
        stacked[:, 1] = (keys % np.uint64(n)).astype(np.uint32)
    else:
        stacked = np.empty((0, 2), dtype=np.uint32)
    return ContactNetwork(
        county_ids=np.array([1000], dtype=np.int64),
        county_index=np.zeros(n, dtype=np.int32),
        misinformed=np.tile(np.asarray(misinformed, dtype=bool), copies),
        edges=stacked,
        k_bar=max(2.0 * len(edges) / k, 1.0),
        seed=0,
    )


def empirical_outcome_counts(
    edges: list[tuple[int, int]],
    misinformed: list[bool],
    initial: tuple[int, ...],
    cfg_kwargs: dict,
    steps: int,
    copies: int,
    rep_key: int,
) -> np.ndarray:
    """Final joint-state counts over `copies` replicas of the production step.

    Returns counts indexed by the base-3 encoding of the per-copy compartment
    tuple.
    """
    k = len(misinformed)
    net = stacked_network(edges, misinformed, copies)
    comp = np.tile(np.asarray(initial, dtype=np.uint8), copies)
    state = abm.AbmState(compartment=comp, day=0)
    cfg = abm.AbmConfig(initial_infected=1, **cfg_kwargs)
    for day in range(steps):
        state = abm.step(state, net, cfg, abm.day_stream(rep_key, day))
    codes = state.compartment.reshape(copies, k).astype(np.int64)
    powers = 3 ** np.arange(k - 1, -1, -1)
    return np.bincount(codes @ powers, minlength=3**k)


def encode_state(state: tuple[int, ...]) -> int:
    code = 0
    for c in state:
        code = code * 3 + c
    return code


def adjacency(n: int, edges) -> list[set[int]]:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def compare_to_oracle(edges, misinformed, initial, p_o, p_m, gamma, steps, copies, rep_key):
    """Empirical joint-outcome frequencies vs exact enumeration.

    Deterministic cells (exact probability 0 or 1) must match exactly; that
    asserts locality and forced dynamics for free. Stochastic cells are
    z-scored with a half-count continuity correction. Returns the number of
    stochastic cells and how many exceeded 3 and 6 sigma.
    """
    n = len(misinformed)
    exact = exact_outcome_distribution(
        adjacency(n, edges), misinformed, initial, p_o, p_m, gamma, steps
    )
    counts = empirical_outcome_counts(
        edges, misinformed, initial,
        dict(p_o=p_o, p_m=p_m, gamma=gamma), steps, copies, rep_key,
    )
    total = counts.sum()
    probs = np.zeros(3**n)
    for state, p in exact.items():
        probs[encode_state(state)] = p
    stochastic = loose = hard = 0
    for code in range(3**n):
        p = probs[code]
        c = int(counts[code])
        if p == 0.0:
            assert c == 0, f"impossible outcome {code} observed {c} times"
            continue
        if p == 1.0:
            assert c == total, f"forced outcome {code} seen only {c}/{total} times"
            continue
        stochastic += 1
        sigma = np.sqrt(p * (1 - p) / total)
        dev = max(abs(c / total - p) - 0.5 / total, 0.0)
        if dev > 3 * sigma:
            loose += 1
        if dev > 6 * sigma:
            hard += 1
    return stochastic, loose, hard


def brute_force_misinformed(
    n: int,
    edges: list[tuple[int, int, int]],
    seeds: set[int],
    phi: int,
    weighted: bool,
) -> set[int]:
    """Recount seed exposures node by node; edges are (src, dst, weight)."""
    out = set(seeds)
    for j in range(n):
        exposure = 0
        seen = set()
        for src, dst, w in edges:
            if dst == j and src in seeds and src not in seen:
                seen.add(src)
                exposure += w if weighted else 1
        if exposure >= phi:
            out.add(j)
    return out

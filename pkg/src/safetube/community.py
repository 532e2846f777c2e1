"""Louvain community detection and exact modularity scoring.

Graphs are scored as undirected with unit edge weights (directed edges
contribute as undirected).  The optimizer is the standard two-phase
iteration: seeded-shuffle local moves maximizing modularity gain, then
aggregation of communities into supernodes, repeated until no move
improves the score beyond a small tolerance.  Recorded modularity is
asserted nondecreasing after every local sweep.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import CoverageError
from .netgraph import LabeledGraph

GAIN_TOL = 1e-9


@dataclass
class Partition:
    """Node -> community assignment (dense ids from 0) with its score."""

    assignment: dict[str, int]
    modularity: float


def modularity(graph: LabeledGraph, assignment: Mapping[str, int]) -> float:
    """Q = sum_c [e_c/m - (d_c/2m)^2] over unit-weight undirected edges."""
    for node_id in graph.nodes:
        if node_id not in assignment:
            raise CoverageError(f"node {node_id!r} missing from assignment")
    m = len(graph.edges)
    if m == 0:
        return 0.0
    intra: dict[int, float] = defaultdict(float)
    degree: dict[int, float] = defaultdict(float)
    for edge in graph.edges:
        c_src, c_dst = assignment[edge.src], assignment[edge.dst]
        degree[c_src] += 1.0
        degree[c_dst] += 1.0
        if c_src == c_dst:
            intra[c_src] += 1.0
    q = 0.0
    for c, d_c in degree.items():
        q += intra.get(c, 0.0) / m - (d_c / (2.0 * m)) ** 2
    return q


def _level_modularity(adj, self_w, k, comm, m: float) -> float:
    intra: dict[int, float] = defaultdict(float)
    degree: dict[int, float] = defaultdict(float)
    for u, neighbors in adj.items():
        c_u = comm[u]
        degree[c_u] += k[u]
        intra[c_u] += self_w[u]
        for v, w in neighbors.items():
            if u < v and comm[v] == c_u:
                intra[c_u] += w
    q = 0.0
    for c, d_c in degree.items():
        q += intra.get(c, 0.0) / m - (d_c / (2.0 * m)) ** 2
    return q


def _local_phase(adj, self_w, m: float, rng: np.random.Generator,
                 gain_tol: float, q_trace: list[float]) -> tuple[dict, bool]:
    nodes = sorted(adj)
    comm = {u: i for i, u in enumerate(nodes)}
    k = {u: sum(adj[u].values()) + 2.0 * self_w[u] for u in nodes}
    sigma_tot: dict[int, float] = defaultdict(float)
    for u in nodes:
        sigma_tot[comm[u]] += k[u]
    two_m = 2.0 * m
    improved = False
    while True:
        order = list(nodes)
        rng.shuffle(order)
        moves = 0
        for u in order:
            c_old = comm[u]
            links: dict[int, float] = defaultdict(float)
            for v, w in adj[u].items():
                links[comm[v]] += w
            sigma_tot[c_old] -= k[u]
            # moving requires a strict gain over staying; equal-gain target
            # communities resolve to the lowest id
            best_c = c_old
            best_gain = links.get(c_old, 0.0) - sigma_tot[c_old] * k[u] / two_m
            for c in sorted(links):
                if c == c_old:
                    continue
                gain = links[c] - sigma_tot[c] * k[u] / two_m
                if gain > best_gain + gain_tol:
                    best_c, best_gain = c, gain
            sigma_tot[best_c] += k[u]
            comm[u] = best_c
            if best_c != c_old:
                moves += 1
        q = _level_modularity(adj, self_w, k, comm, m)
        if q_trace:
            assert q >= q_trace[-1] - 1e-9, "modularity decreased during a sweep"
        q_trace.append(q)
        if moves == 0:
            break
        improved = True
    return comm, improved


def _aggregate(adj, self_w, comm):
    """Collapse communities into supernodes; intra weight becomes self weight."""
    new_ids = {c: i for i, c in enumerate(sorted(set(comm.values())))}
    new_adj: dict[int, dict[int, float]] = {i: {} for i in new_ids.values()}
    new_self: dict[int, float] = {i: 0.0 for i in new_ids.values()}
    for u, neighbors in adj.items():
        c_u = new_ids[comm[u]]
        new_self[c_u] += self_w[u]
        for v, w in neighbors.items():
            if u < v:
                c_v = new_ids[comm[v]]
                if c_u == c_v:
                    new_self[c_u] += w
                else:
                    new_adj[c_u][c_v] = new_adj[c_u].get(c_v, 0.0) + w
                    new_adj[c_v][c_u] = new_adj[c_v].get(c_u, 0.0) + w
    return new_adj, new_self, new_ids


# Graphs this small are maximized exactly (Bell(8) = 4140 partitions);
# greedy local moves alone are unreliable at this scale because tie
# plateaus span a large fraction of the search space.
EXACT_MAX_NODES = 8


def _exact_best(graph: LabeledGraph, node_ids: list[str]) -> tuple[float, dict]:
    n = len(node_ids)
    code = [0] * n
    best_q = -np.inf
    best: dict[str, int] = {}

    def descend(i: int, used: int) -> None:
        nonlocal best_q, best
        if i == n:
            assignment = {node_ids[j]: code[j] for j in range(n)}
            q = modularity(graph, assignment)
            if q > best_q:
                best_q, best = q, assignment
            return
        for c in range(used + 1):
            code[i] = c
            descend(i + 1, used + (1 if c == used else 0))

    descend(0, 0)
    return best_q, best


def _run_levels(adj, m: float, rng: np.random.Generator, gain_tol: float,
                q_trace: list[float]) -> dict[int, int]:
    """One full two-phase run; returns supernode assignment per level-0 node."""
    self_w: dict[int, float] = {i: 0.0 for i in adj}
    flat = {i: i for i in adj}
    while True:
        comm, improved = _local_phase(adj, self_w, m, rng, gain_tol, q_trace)
        if not improved:
            break
        adj, self_w, remap = _aggregate(adj, self_w, comm)
        flat = {orig: remap[comm[super_id]] for orig, super_id in flat.items()}
        if len(adj) <= 1:
            break
    return flat


def louvain(graph: LabeledGraph, seed: int = 0, gain_tol: float = GAIN_TOL,
            trace: list[float] | None = None,
            restarts: int | None = None) -> Partition:
    """Two-phase modularity maximization; deterministic for a fixed seed.

    The optimizer runs ``restarts`` independent seeded passes (derived
    from the one seed) and keeps the best score; large graphs default to
    a single pass.  Graphs of at most EXACT_MAX_NODES nodes are small
    enough that every partition is scored outright, so the returned score
    is exact there.  Pass a list as ``trace`` to receive the modularity
    recorded after each local sweep of the best heuristic pass
    (nondecreasing).
    """
    node_ids = sorted(graph.nodes)
    singleton = {nid: i for i, nid in enumerate(node_ids)}
    m = float(len(graph.edges))
    if m == 0.0:
        return Partition(singleton, 0.0)

    adj: dict[int, dict[int, float]] = {i: {} for i in range(len(node_ids))}
    for edge in graph.edges:
        u, v = singleton[edge.src], singleton[edge.dst]
        adj[u][v] = adj[u].get(v, 0.0) + 1.0
        adj[v][u] = adj[v].get(u, 0.0) + 1.0

    if restarts is None:
        # tiny graphs have proportionally deep tie plateaus; retries are free
        if len(node_ids) <= 64:
            restarts = 32
        elif len(node_ids) <= 1024:
            restarts = 8
        else:
            restarts = 1
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    best: tuple[float, dict[str, int], list[float]] | None = None
    for seq in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(seq)
        q_trace: list[float] = []
        flat = _run_levels(adj, m, rng, gain_tol, q_trace)
        dense: dict[int, int] = {}
        assignment: dict[str, int] = {}
        for nid in node_ids:
            super_id = flat[singleton[nid]]
            if super_id not in dense:
                dense[super_id] = len(dense)
            assignment[nid] = dense[super_id]
        q = modularity(graph, assignment)
        if best is None or q > best[0] + 1e-15:
            best = (q, assignment, q_trace)
    if trace is not None:
        trace.extend(best[2])
    q, assignment, _ = best
    if len(node_ids) <= EXACT_MAX_NODES:
        exact_q, exact_assignment = _exact_best(graph, node_ids)
        if exact_q > q + 1e-15:
            q, assignment = exact_q, exact_assignment
    return Partition(assignment, q)


@dataclass
class CommunityComposition:
    community_id: int
    n_safe: int
    n_unsafe: int

    @property
    def size(self) -> int:
        return self.n_safe + self.n_unsafe

    @property
    def mixed(self) -> bool:
        return self.n_safe > 0 and self.n_unsafe > 0


def community_composition(graph: LabeledGraph, partition: Partition,
                          ) -> list[CommunityComposition]:
    """Per-community safety census, ordered by community id."""
    safe: dict[int, int] = defaultdict(int)
    unsafe: dict[int, int] = defaultdict(int)
    for node_id, node in graph.nodes.items():
        if node_id not in partition.assignment:
            raise CoverageError(f"node {node_id!r} missing from assignment")
        c = partition.assignment[node_id]
        if node.safety.value == 1:
            unsafe[c] += 1
        else:
            safe[c] += 1
    ids = sorted(set(safe) | set(unsafe))
    return [CommunityComposition(c, safe.get(c, 0), unsafe.get(c, 0)) for c in ids]

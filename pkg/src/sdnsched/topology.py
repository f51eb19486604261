"""Deterministic construction of the four evaluation topologies,
controller placement, BFS hop-count matrices, and the derived
computation cost alpha."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .model import CostModel, TopoKind, Topology


@dataclass(frozen=True)
class PlacementResult:
    controller_hosts: tuple[int, ...]

    @property
    def controller_count(self) -> int:
        return len(self.controller_hosts)


def _check_k(k: int) -> None:
    if k < 4 or k % 2 != 0:
        raise ValueError(f"port count k must be even and >= 4, got {k}")


class _GraphBuilder:
    def __init__(self):
        self.adj: dict[int, set[int]] = {}

    def add_node(self, n: int) -> None:
        self.adj.setdefault(n, set())

    def add_edge(self, u: int, v: int) -> None:
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)

    def freeze(self) -> dict[int, tuple[int, ...]]:
        return {n: tuple(sorted(nbrs)) for n, nbrs in self.adj.items()}


def gen_fat_tree(k: int) -> Topology:
    """Standard k-ary fat-tree: k pods of k/2 edge + k/2 aggregate
    switches, (k/2)^2 core switches, k/2 hosts per edge switch.

    Switch ids: edges pod-major, then aggregates pod-major, then cores
    grouped so that core group g holds cores g*(k/2)..(g+1)*(k/2)-1.
    Aggregate a of every pod connects to all cores of group a.
    """
    _check_k(k)
    half = k // 2
    n_edge = k * half
    n_agg = k * half
    n_core = half * half
    n_switches = n_edge + n_agg + n_core

    def edge_id(pod, e):
        return pod * half + e

    def agg_id(pod, a):
        return n_edge + pod * half + a

    def core_id(group, c):
        return n_edge + n_agg + group * half + c

    g = _GraphBuilder()
    for s in range(n_switches):
        g.add_node(s)

    host = n_switches
    hosts = []
    for pod in range(k):
        for e in range(half):
            for a in range(half):
                g.add_edge(edge_id(pod, e), agg_id(pod, a))
            for _ in range(half):
                g.add_edge(edge_id(pod, e), host)
                hosts.append(host)
                host += 1
        for a in range(half):
            for c in range(half):
                g.add_edge(agg_id(pod, a), core_id(a, c))

    pods = tuple(
        tuple(edge_id(p, e) for e in range(half))
        + tuple(agg_id(p, a) for a in range(half))
        for p in range(k)
    )
    return Topology(
        kind=TopoKind.FAT_TREE,
        k=k,
        switches=tuple(range(n_switches)),
        hosts=tuple(hosts),
        adjacency=g.freeze(),
        pods=pods,
    )


def gen_three_tier(k: int) -> Topology:
    """Canonical 3-tier: k core, k aggregate, k(k-1) edge switches.

    Each aggregate roots one pod of k-1 edge switches (the pod includes
    the aggregate itself) and connects to all k cores; each edge switch
    carries k/2 hosts.
    """
    _check_k(k)
    half = k // 2
    n_edge = k * (k - 1)
    n_switches = n_edge + k + k  # edges, aggregates, cores

    def edge_id(pod, e):
        return pod * (k - 1) + e

    def agg_id(pod):
        return n_edge + pod

    def core_id(c):
        return n_edge + k + c

    g = _GraphBuilder()
    for s in range(n_switches):
        g.add_node(s)

    host = n_switches
    hosts = []
    for pod in range(k):
        for c in range(k):
            g.add_edge(agg_id(pod), core_id(c))
        for e in range(k - 1):
            g.add_edge(edge_id(pod, e), agg_id(pod))
            for _ in range(half):
                g.add_edge(edge_id(pod, e), host)
                hosts.append(host)
                host += 1

    pods = tuple(
        tuple(edge_id(p, e) for e in range(k - 1)) + (agg_id(p),)
        for p in range(k)
    )
    return Topology(
        kind=TopoKind.THREE_TIER,
        k=k,
        switches=tuple(range(n_switches)),
        hosts=tuple(hosts),
        adjacency=g.freeze(),
        pods=pods,
    )


def gen_f10(k: int) -> Topology:
    """F10 / AB-tree variant of the fat-tree: identical node counts and
    edge-to-aggregate wiring, but odd-indexed pods connect aggregate a
    to core group (a + k/4) mod (k/2), breaking the fat-tree symmetry.
    """
    _check_k(k)
    base = gen_fat_tree(k)
    half = k // 2
    rot = max(k // 4, 1)
    n_edge = k * half
    n_agg = k * half

    def agg_id(pod, a):
        return n_edge + pod * half + a

    def core_id(group, c):
        return n_edge + n_agg + group * half + c

    g = _GraphBuilder()
    for n in base.adjacency:
        g.add_node(n)
    core_start = n_edge + n_agg
    for u, v in base.edges():
        if core_start <= max(u, v) < core_start + half * half and min(u, v) >= n_edge:
            continue  # rewire aggregate-to-core links below
        g.add_edge(u, v)
    for pod in range(k):
        for a in range(half):
            group = a if pod % 2 == 0 else (a + rot) % half
            for c in range(half):
                g.add_edge(agg_id(pod, a), core_id(group, c))

    return Topology(
        kind=TopoKind.F10,
        k=k,
        switches=base.switches,
        hosts=base.hosts,
        adjacency=g.freeze(),
        pods=base.pods,
    )


def gen_jellyfish(
    k: int,
    hosts_per_switch_min: int,
    hosts_per_switch_max: int,
    seed: int,
) -> Topology:
    """Random-graph topology: 5k^2/4 switches, k^3/4 hosts, remaining
    ports wired by incremental random pairing. Deterministic per seed.
    """
    if k < 4:
        raise ValueError(f"port count k must be >= 4, got {k}")
    if not (1 <= hosts_per_switch_min <= hosts_per_switch_max <= k - 1):
        raise ValueError("host range must lie within [1, k-1]")
    n_switches = 5 * k * k // 4
    n_hosts = k ** 3 // 4
    lo, hi = hosts_per_switch_min, hosts_per_switch_max
    extra = n_hosts - lo * n_switches
    if extra < 0 or extra > (hi - lo) * n_switches:
        raise ValueError(
            f"cannot distribute {n_hosts} hosts over {n_switches} switches "
            f"with {lo}..{hi} hosts each"
        )

    rng = random.Random(seed)
    hosts_of = [lo] * n_switches
    # spread the leftover hosts one at a time over a seeded shuffle,
    # cycling until the quota is exhausted
    order = list(range(n_switches))
    rng.shuffle(order)
    idx = 0
    remaining = extra
    while remaining > 0:
        s = order[idx % n_switches]
        if hosts_of[s] < hi:
            hosts_of[s] += 1
            remaining -= 1
        idx += 1

    g = _GraphBuilder()
    for s in range(n_switches):
        g.add_node(s)
    host = n_switches
    hosts = []
    for s in range(n_switches):
        for _ in range(hosts_of[s]):
            g.add_edge(s, host)
            hosts.append(host)
            host += 1

    free = [k - hosts_of[s] for s in range(n_switches)]
    _random_pairing(rng, g, free, n_switches)

    return Topology(
        kind=TopoKind.JELLYFISH,
        k=k,
        switches=tuple(range(n_switches)),
        hosts=tuple(hosts),
        adjacency=g.freeze(),
        pods=(),
    )


def _random_pairing(rng, g, free, n_switches):
    """Jellyfish wiring: repeatedly join two random non-adjacent switches
    with free ports; when stuck with >= 2 free ports on one switch,
    break a random existing switch link to make progress."""
    while True:
        open_sw = [s for s in range(n_switches) if free[s] > 0]
        if len(open_sw) < 2 and not any(free[s] >= 2 for s in open_sw):
            return
        pair = _find_pair(rng, g, open_sw)
        if pair is not None:
            u, v = pair
            g.add_edge(u, v)
            free[u] -= 1
            free[v] -= 1
            continue
        # stuck: all open switches pairwise adjacent
        stuck = [s for s in open_sw if free[s] >= 2]
        if not stuck:
            return
        s = rng.choice(stuck)
        edge = _removable_edge(rng, g, s, n_switches)
        if edge is None:
            return
        u, v = edge
        g.adj[u].discard(v)
        g.adj[v].discard(u)
        g.add_edge(s, u)
        g.add_edge(s, v)
        free[s] -= 2


def _find_pair(rng, g, open_sw):
    if len(open_sw) < 2:
        return None
    for _ in range(64):
        u, v = rng.sample(open_sw, 2)
        if v not in g.adj[u]:
            return (u, v)
    # random probing failed; scan exhaustively in seeded order
    shuffled = list(open_sw)
    rng.shuffle(shuffled)
    for i, u in enumerate(shuffled):
        for v in shuffled[i + 1:]:
            if v not in g.adj[u]:
                return (u, v)
    return None


def _removable_edge(rng, g, s, n_switches):
    """Random switch-switch edge (u, v) with both ends non-adjacent to s."""
    candidates = []
    for u in range(n_switches):
        if u == s or u in g.adj[s]:
            continue
        for v in g.adj[u]:
            if v >= n_switches or v <= u:
                continue
            if v == s or v in g.adj[s]:
                continue
            candidates.append((u, v))
    if not candidates:
        return None
    return rng.choice(candidates)


_PLACE_RESTARTS = 200


def place_controllers(topo: Topology, seed: int = 0) -> PlacementResult:
    """Per-pair controller placement: one controller for every two pods.

    Deterministic kinds: pods paired in index order, the controller
    living on the first host of the first edge switch of the
    even-indexed pod. Jellyfish: the fat-tree count for the same k,
    hosts drawn in seeded random order with pairwise non-adjacent ToRs.
    """
    if topo.kind is TopoKind.JELLYFISH:
        return _place_jellyfish(topo, seed)
    chosen = []
    for p in range(0, len(topo.pods), 2):
        first_edge = topo.pods[p][0]
        host = min(n for n in topo.adjacency[first_edge] if n >= topo.n_switches)
        chosen.append(host)
    return PlacementResult(controller_hosts=tuple(chosen))


def _place_jellyfish(topo: Topology, seed: int) -> PlacementResult:
    count = topo.k // 2  # matches fat-tree pod pairing at equal k
    sw = set(topo.switches)
    for attempt in range(_PLACE_RESTARTS):
        rng = random.Random(seed * _PLACE_RESTARTS + attempt)
        order = list(topo.hosts)
        rng.shuffle(order)
        chosen = []
        tors = []
        for h in order:
            tor = next(n for n in topo.adjacency[h] if n in sw)
            if any(tor == t or tor in topo.adjacency[t] for t in tors):
                continue
            chosen.append(h)
            tors.append(tor)
            if len(chosen) == count:
                return PlacementResult(controller_hosts=tuple(chosen))
    raise RuntimeError(
        f"no {count} hosts with pairwise non-adjacent ToRs found "
        f"after {_PLACE_RESTARTS} restarts (seed={seed})"
    )


def bfs_hops(adjacency: dict[int, tuple[int, ...]], source: int) -> dict[int, int]:
    """Unweighted shortest-path hop counts from one source node."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def hop_matrix(topo: Topology, placement: PlacementResult):
    """w[i][j] = hop count from switch i to controller host j."""
    rows = [[0] * placement.controller_count for _ in topo.switches]
    for j, host in enumerate(placement.controller_hosts):
        dist = bfs_hops(topo.adjacency, host)
        for i, s in enumerate(topo.switches):
            if s not in dist:
                raise ValueError(f"switch {s} cannot reach controller host {host}")
            rows[i][j] = dist[s]
    return tuple(tuple(r) for r in rows)


def derive_alpha(w) -> Fraction:
    """Average hop count over all switch-controller pairs."""
    if not w or not w[0]:
        raise ValueError("empty cost matrix")
    total = sum(sum(row) for row in w)
    return Fraction(total, len(w) * len(w[0]))


def build_cost_model(topo: Topology, placement: PlacementResult) -> CostModel:
    w = hop_matrix(topo, placement)
    return CostModel.uniform_alpha(w, derive_alpha(w))


def generate(kind: TopoKind, k: int, seed: int = 0,
             hosts_min: int | None = None, hosts_max: int | None = None) -> Topology:
    """Dispatch helper used by the engine and CLI."""
    if kind is TopoKind.FAT_TREE:
        return gen_fat_tree(k)
    if kind is TopoKind.THREE_TIER:
        return gen_three_tier(k)
    if kind is TopoKind.F10:
        return gen_f10(k)
    if kind is TopoKind.JELLYFISH:
        lo = hosts_min if hosts_min is not None else max(k // 6, 1)
        hi = hosts_max if hosts_max is not None else lo + 1
        return gen_jellyfish(k, lo, hi, seed)
    raise ValueError(f"unknown topology kind: {kind}")


def dump_edge_list(topo: Topology) -> str:
    """Plain-text dump: header line plus one `u v` pair per line with
    node ids rendered as s<idx> / h<idx>."""
    n_sw = topo.n_switches

    def name(n):
        return f"s{n}" if n < n_sw else f"h{n - n_sw}"

    lines = [
        f"# kind={topo.kind.value} k={topo.k} "
        f"switches={topo.n_switches} hosts={topo.n_hosts}"
    ]
    lines.extend(f"{name(u)} {name(v)}" for u, v in topo.edges())
    return "\n".join(lines) + "\n"

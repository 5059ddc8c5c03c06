"""Directed sensor-network topology and communication-redundancy checks.

A directed edge ``j -> i`` means sensor ``i`` receives broadcasts from
sensor ``j``.  The robustness notions here quantify how much trimming-based
aggregation a topology can withstand: a node set is *r-reachable* when at
least one of its members hears r nodes from outside the set, and a graph is
*strongly r-robust with respect to S* when every nonempty subset of the
complement of S is r-reachable.  Scenarios tolerating an f-local attack
need strong (3f+1)-robustness w.r.t. the well-excited set.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

# Guard for the robustness check; callers may raise it (the check itself is
# polynomial, but the contract mirrors a worst-case subset enumeration).
DEFAULT_SUBSET_CAP = 20


class CapacityError(Exception):
    """Complement of S is larger than the configured robustness-check cap."""


class Digraph:
    """Immutable directed graph on nodes 0..node_count-1, no self-loops."""

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]]):
        if node_count < 1:
            raise ValueError(f"node_count must be positive, got {node_count}")
        self.node_count = node_count
        edge_set = frozenset((int(j), int(i)) for j, i in edges)
        for j, i in edge_set:
            if j == i:
                raise ValueError(f"self-loop {j} -> {i} is not allowed")
            if not (0 <= j < node_count and 0 <= i < node_count):
                raise ValueError(f"edge {j} -> {i} out of range for {node_count} nodes")
        self.edges = edge_set
        ins: list[set[int]] = [set() for _ in range(node_count)]
        outs: list[set[int]] = [set() for _ in range(node_count)]
        for j, i in edge_set:
            ins[i].add(j)
            outs[j].add(i)
        self._in = tuple(frozenset(s) for s in ins)
        self._out = tuple(frozenset(s) for s in outs)

    def _check_node(self, i: int) -> None:
        if not (0 <= i < self.node_count):
            raise ValueError(f"node {i} out of range for {self.node_count} nodes")

    def in_neighbors(self, i: int) -> frozenset[int]:
        """Senders sensor i hears from: { j | (j -> i) in edges }."""
        self._check_node(i)
        return self._in[i]

    def out_neighbors(self, i: int) -> frozenset[int]:
        """Receivers of sensor i's broadcasts: { j | (i -> j) in edges }."""
        self._check_node(i)
        return self._out[i]

    def nodes(self) -> range:
        return range(self.node_count)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges))

    def __repr__(self) -> str:
        return f"Digraph(node_count={self.node_count}, edges={len(self.edges)})"


def is_r_reachable(g: Digraph, s: Iterable[int], r: int) -> bool:
    """True iff some node of s has at least r in-neighbors outside s."""
    members = frozenset(s)
    if not members:
        raise ValueError("r-reachability is defined for nonempty sets only")
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    for i in members:
        g._check_node(i)
    return any(len(g.in_neighbors(i) - members) >= r for i in members)


def _check_wrt_args(g: Digraph, s: Iterable[int], r: int, cap: int) -> tuple[frozenset[int], set[int]]:
    members = frozenset(s)
    if not members:
        raise ValueError("S must be nonempty")
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    for i in members:
        g._check_node(i)
    outside = set(g.nodes()) - members
    if len(outside) > cap:
        raise CapacityError(
            f"|V \\ S| = {len(outside)} exceeds the robustness-check cap {cap}; "
            "pass a larger cap to proceed"
        )
    return members, outside


def robustness_deficiency(
    g: Digraph, s: Iterable[int], r: int, *, cap: int = DEFAULT_SUBSET_CAP
) -> frozenset[int]:
    """Largest subset of V \\ S that is not r-reachable (empty iff robust).

    Works by peeling: repeatedly delete any remaining outside node with at
    least r in-neighbors outside the remainder.  If everything peels, every
    nonempty subset of V \\ S is r-reachable (its first-peeled member had r
    in-neighbors outside a superset of the subset); a stalled remainder is
    itself a witness subset in which no node reaches the threshold.
    """
    _, remaining = _check_wrt_args(g, s, r, cap)
    changed = True
    while changed and remaining:
        changed = False
        for i in sorted(remaining):
            if len(g.in_neighbors(i) - remaining) >= r:
                remaining.discard(i)
                changed = True
    return frozenset(remaining)


def is_strongly_r_robust_wrt(
    g: Digraph, s: Iterable[int], r: int, *, cap: int = DEFAULT_SUBSET_CAP
) -> bool:
    """True iff every nonempty subset of V \\ S is r-reachable.

    Vacuously true when S = V.  Raises CapacityError when |V \\ S| > cap.
    """
    return not robustness_deficiency(g, s, r, cap=cap)


def is_f_local_admissible(
    g: Digraph, faulty: Iterable[int], normal: Iterable[int], f: int
) -> bool:
    """True iff no normal sensor has more than f faulty in-neighbors."""
    faulty_set = frozenset(faulty)
    normal_set = frozenset(normal)
    if f < 0:
        raise ValueError(f"f must be nonnegative, got {f}")
    if faulty_set & normal_set:
        raise ValueError(f"faulty and normal sets overlap: {sorted(faulty_set & normal_set)}")
    if faulty_set | normal_set != frozenset(g.nodes()):
        missing = sorted(frozenset(g.nodes()) - (faulty_set | normal_set))
        raise ValueError(f"faulty/normal sets must partition all nodes; missing {missing}")
    return all(len(faulty_set & g.in_neighbors(i)) <= f for i in normal_set)


def generate_robust_topology(
    n: int,
    s_size: int,
    r: int,
    seed: int,
    *,
    extra_edge_prob: float = 0.15,
) -> Digraph:
    """Deterministically generate a digraph that is strongly r-robust w.r.t.
    S = {0..s_size-1}, verified by the checker before returning.

    Construction: order the outside nodes; each picks exactly r in-neighbors
    among S and earlier outside nodes, which makes every outside subset
    r-reachable through its earliest member.  Extra random edges are then
    sprinkled in for texture (adding edges can only preserve robustness).
    """
    if not (1 <= s_size <= n):
        raise ValueError(f"s_size must be in [1, {n}], got {s_size}")
    if r < 0:
        raise ValueError(f"r must be nonnegative, got {r}")
    if s_size < n:
        if r > n - 1:
            raise ValueError(f"r = {r} exceeds n - 1 = {n - 1}: outside nodes cannot have r in-neighbors")
        if r > s_size:
            raise ValueError(
                f"infeasible: the full outside set can reach at most |S| = {s_size} < r = {r} external nodes"
            )
    rng = np.random.default_rng(seed)
    edges: set[tuple[int, int]] = set()
    pool = list(range(s_size))
    for v in range(s_size, n):
        picks = rng.choice(len(pool), size=r, replace=False)
        for c in sorted(int(p) for p in picks):
            edges.add((pool[c], v))
        pool.append(v)
    for j in range(n):
        for i in range(n):
            if i != j and (j, i) not in edges and rng.random() < extra_edge_prob:
                edges.add((j, i))
    g = Digraph(n, edges)
    if not is_strongly_r_robust_wrt(g, range(s_size), r, cap=max(DEFAULT_SUBSET_CAP, n)):
        raise RuntimeError("internal error: generated topology failed robustness verification")
    return g

"""Undirected partitions: half-degree, max-cut and the (1,k) degree problems."""
from __future__ import annotations

from collections import deque

from .errors import ResourceExceeded
from .graphs import Graph, TwoPartition
from .oracle import (
    CHARACTERIZATION_VIOLATED,
    ISOLATED_VERTEX,
    Certificate,
    certify,
    exact_decide,
    refute,
    und,
)

MAX_CUT_BOUND = 20


def crossing_count(G: Graph, P: TwoPartition) -> int:
    return sum(1 for u, v in G.edges if P[u] != P[v])


def half_degree_search(G: Graph) -> tuple[TwoPartition, int]:
    """Local search; returns the partition and the number of flips made.

    Every flip raises the number of crossing edges, so there are at most
    ``|E|`` of them.
    """
    colour = [1] * G.n
    flips = 0
    while True:
        for v in range(G.n):
            across = sum(1 for w in G.adj[v] if colour[w] != colour[v])
            if G.degree(v) - across > across:
                colour[v] = 3 - colour[v]
                flips += 1
                break
        else:
            return TwoPartition(tuple(colour)), flips


def half_degree_partition(G: Graph) -> TwoPartition:
    """Partition where each vertex has at least half its neighbours across."""
    return half_degree_search(G)[0]


def max_cut_partition(G: Graph, bound: int = MAX_CUT_BOUND) -> TwoPartition:
    """Maximum cut by branch and bound; vertex 0 is fixed in part 1."""
    n = G.n
    if n > bound:
        raise ResourceExceeded(f"{n} vertices exceed the max-cut bound {bound}")
    if n == 0:
        return TwoPartition(())
    # edges to earlier vertices, as bitmasks, decide the gain of placing v
    back = [sum(1 << w for w in G.adj[v] if w < v) for v in range(n)]
    remaining = [0] * (n + 1)
    for v in range(n - 1, -1, -1):
        remaining[v] = remaining[v + 1] + back[v].bit_count()
    best = [-1, 0]

    def place(v: int, ones: int, cut: int):
        if cut + remaining[v] <= best[0]:
            return
        if v == n:
            best[0], best[1] = cut, ones
            return
        to_ones = (back[v] & ones).bit_count()
        to_twos = back[v].bit_count() - to_ones
        options = [(to_ones, False), (to_twos, True)]
        options.sort(key=lambda o: -o[0])
        for gain, in_one in options:
            place(v + 1, ones | (1 << v) if in_one else ones, cut + gain)

    place(1, 1, 0)
    ones = best[1]
    return TwoPartition(tuple(1 if ones >> v & 1 else 2 for v in range(n)))


def greedy_stable_set(G: Graph) -> list[int]:
    """Maximal stable set grown in ascending vertex order."""
    chosen, blocked = [], set()
    for v in range(G.n):
        if v not in blocked:
            chosen.append(v)
            blocked |= G.adj[v]
    return chosen


def _isolated(G: Graph) -> int | None:
    return next((v for v in range(G.n) if not G.adj[v]), None)


def delta_1k_partition(G: Graph, k: int, budget: int | None = None) -> Certificate:
    """Part 1 vertices need 1 neighbour across, part 2 vertices need ``k``.

    With minimum degree at least ``k`` a maximal stable set is a valid part 2.
    Below that the exact search decides.
    """
    if k < 1:
        raise ValueError("k must be positive")
    spec = und(1, k)
    v = _isolated(G)
    if v is not None:
        return refute(ISOLATED_VERTEX, f"vertex {v} has no neighbour")
    if G.min_degree() >= k:
        stable = set(greedy_stable_set(G))
        return certify(G, spec, TwoPartition.from_parts(G.n, set(range(G.n)) - stable))
    return exact_decide(G, spec, budget=budget)


def _violated_condition(G: Graph, S1: set[int]) -> str | None:
    for v in sorted(S1):
        for w in G.adj[v]:
            if w in S1:
                return f"degree-1 vertices {min(v, w)} and {max(v, w)} are adjacent"
    near = set().union(*(G.adj[v] for v in S1)) if S1 else set()
    for w in sorted(near):
        if len(G.adj[w] & S1) < 2 and not G.adj[w] - S1 - near:
            return (f"vertex {w} has one degree-1 neighbour and no neighbour "
                    "beyond the degree-1 vertices and their neighbours")
    return None


def delta_12_search(G: Graph) -> tuple[Certificate, int]:
    """Decide the (1,2) problem; also return the number of recolour steps."""
    spec = und(1, 2)
    v = _isolated(G)
    if v is not None:
        return refute(ISOLATED_VERTEX, f"vertex {v} has no neighbour"), 0
    S1 = {v for v in range(G.n) if G.degree(v) == 1}
    if not S1:
        return delta_1k_partition(G, 2), 0
    problem = _violated_condition(G, S1)
    if problem:
        return refute(CHARACTERIZATION_VIOLATED, problem), 0
    colour = {v: 1 for v in S1}
    depth = {v: 1 for v in S1}
    queue = deque(sorted(S1))
    while queue:
        u = queue.popleft()
        for w in sorted(G.adj[u]):
            if w not in depth:
                depth[w] = depth[u] + 1
                colour[w] = 1 if depth[w] % 2 else 2
                queue.append(w)
    # components without degree-1 vertices have minimum degree 2
    rest = sorted(set(range(G.n)) - set(colour))
    if rest:
        sub, labels = G.induced(rest)
        stable = {labels[i] for i in greedy_stable_set(sub)}
        colour.update({v: 2 if v in stable else 1 for v in rest})
    steps = 0
    while True:
        bad = next((w for w in range(G.n) if colour[w] == 2
                    and sum(1 for x in G.adj[w] if colour[x] == 1) == 1), None)
        if bad is None:
            break
        colour[bad] = 1
        steps += 1
    return certify(G, spec, TwoPartition.from_mapping(G.n, colour)), steps


def delta_12_decide(G: Graph) -> Certificate:
    """Part 1 vertices need 1 neighbour across, part 2 vertices need 2.

    Degree-1 vertices must sit in part 1; the answer is yes iff they form a
    stable set and each of their neighbours has two of them as neighbours
    or a neighbour further out.
    """
    return delta_12_search(G)[0]

"""Graph and digraph values plus the structural routines the solvers share.

Vertices are always ``0..n-1``.  Digraphs may contain 2-cycles but never
loops or parallel arcs; repeated arcs passed to the constructor collapse.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import InvalidInput, ResourceExceeded

OUT = "out"
IN = "in"


class Digraph:
    """Immutable simple digraph on ``range(n)``."""

    __slots__ = ("n", "arcs", "succ", "pred", "_masks")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InvalidInput("vertex count must be non-negative")
        arcs = frozenset(map(tuple, arcs))
        succ = [[] for _ in range(n)]
        pred = [[] for _ in range(n)]
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInput(f"arc ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InvalidInput(f"loop at vertex {u}")
            succ[u].append(v)
            pred[v].append(u)
        self.n = n
        self.arcs = arcs
        self.succ = tuple(map(frozenset, succ))
        self.pred = tuple(map(frozenset, pred))
        self._masks = None

    def masks(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Out- and in-neighbourhoods as bitmasks, computed once."""
        if self._masks is None:
            outm = [0] * self.n
            inm = [0] * self.n
            for u, v in self.arcs:
                outm[u] |= 1 << v
                inm[v] |= 1 << u
            self._masks = (tuple(outm), tuple(inm))
        return self._masks

    def __repr__(self) -> str:
        return f"Digraph({self.n}, {sorted(self.arcs)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Digraph) and self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def out_degree(self, v: int) -> int:
        return len(self.succ[v])

    def in_degree(self, v: int) -> int:
        return len(self.pred[v])

    def degree(self, v: int) -> int:
        return len(self.succ[v]) + len(self.pred[v])

    def neighbours(self, v: int) -> frozenset[int]:
        return self.succ[v] | self.pred[v]

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def sinks(self) -> list[int]:
        return [v for v in range(self.n) if not self.succ[v]]

    def sources(self) -> list[int]:
        return [v for v in range(self.n) if not self.pred[v]]

    def reverse(self) -> Digraph:
        return Digraph(self.n, ((v, u) for u, v in self.arcs))

    def underlying(self) -> Graph:
        return Graph(self.n, self.arcs)

    def induced(self, vertices: Iterable[int]) -> tuple[Digraph, tuple[int, ...]]:
        """Induced subdigraph relabelled to ``0..k-1``; also returns the old ids."""
        labels = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(labels)}
        arcs = [(index[u], index[v]) for u in labels for v in self.succ[u] if v in index]
        return Digraph(len(labels), arcs), labels

    def remove_vertices(self, removed: Iterable[int]) -> tuple[Digraph, tuple[int, ...]]:
        gone = set(removed)
        return self.induced(v for v in range(self.n) if v not in gone)


class Graph:
    """Immutable simple undirected graph on ``range(n)``."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InvalidInput("vertex count must be non-negative")
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInput(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InvalidInput(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adj = tuple(frozenset(a) for a in adj)
        self.edges = frozenset((u, v) for u in range(n) for v in self.adj[u] if u < v)

    def __repr__(self) -> str:
        return f"Graph({self.n}, {sorted(self.edges)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbours(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
        labels = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(labels)}
        edges = [(index[u], index[v]) for u in labels for v in self.adj[u] if v in index and u < v]
        return Graph(len(labels), edges), labels


@dataclass(frozen=True)
class TwoPartition:
    """A 2-colouring: ``colors[v]`` is 1 or 2.  Either part may be empty."""

    colors: tuple[int, ...]

    def __post_init__(self):
        for v, c in enumerate(self.colors):
            if c not in (1, 2):
                raise InvalidInput(f"vertex {v} has colour {c!r}, expected 1 or 2")

    @classmethod
    def from_parts(cls, n: int, part1: Iterable[int]) -> TwoPartition:
        ones = set(part1)
        if any(not 0 <= v < n for v in ones):
            raise InvalidInput("part 1 mentions a vertex outside the instance")
        return cls(tuple(1 if v in ones else 2 for v in range(n)))

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[int, int]) -> TwoPartition:
        missing = [v for v in range(n) if v not in mapping]
        if missing:
            raise InvalidInput(f"colouring is not total, missing {missing}")
        return cls(tuple(mapping[v] for v in range(n)))

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def part(self, i: int) -> frozenset[int]:
        return frozenset(v for v, c in enumerate(self.colors) if c == i)

    @property
    def parts(self) -> tuple[frozenset[int], frozenset[int]]:
        return self.part(1), self.part(2)

    def swapped(self) -> TwoPartition:
        return TwoPartition(tuple(3 - c for c in self.colors))


@dataclass(frozen=True)
class Handle:
    """Directed walk ``(entry, *interior, exit)`` attached to a strong subdigraph."""

    entry: int
    interior: tuple[int, ...]
    exit: int

    @property
    def length(self) -> int:
        return len(self.interior) + 1

    @property
    def walk(self) -> tuple[int, ...]:
        return (self.entry, *self.interior, self.exit)


@dataclass(frozen=True)
class HandleDecomposition:
    cycle: tuple[int, ...]
    handles: tuple[Handle, ...]


@dataclass(frozen=True)
class Star:
    """Non-trivial out-star (root dominates leaves) or in-star (leaves dominate root)."""

    root: int
    leaves: tuple[int, ...]
    orientation: str = OUT

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset((self.root, *self.leaves))

    def arcs(self) -> list[tuple[int, int]]:
        if self.orientation == OUT:
            return [(self.root, leaf) for leaf in self.leaves]
        return [(leaf, self.root) for leaf in self.leaves]


@dataclass(frozen=True)
class Branching:
    """Spanning out- or in-branching given by a parent map (root maps to nothing)."""

    root: int
    parent: dict[int, int] = field(hash=False)
    direction: str = OUT
    depth: dict[int, int] = field(default_factory=dict, hash=False, compare=False)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.parent) | {self.root}

    def arcs(self) -> list[tuple[int, int]]:
        if self.direction == OUT:
            return sorted((p, v) for v, p in self.parent.items())
        return sorted((v, p) for v, p in self.parent.items())


class Condensation(NamedTuple):
    components: list[frozenset[int]]
    condensation: Digraph
    component_of: tuple[int, ...]


def reachable(D: Digraph, source: int, reverse: bool = False) -> set[int]:
    nbrs = D.pred if reverse else D.succ
    seen = {source}
    stack = [source]
    while stack:
        u = stack.pop()
        for w in nbrs[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_strong(D: Digraph) -> bool:
    """Empty and one-vertex digraphs count as strong."""
    if D.n <= 1:
        return True
    return len(reachable(D, 0)) == D.n and len(reachable(D, 0, reverse=True)) == D.n


def is_connected(G: Graph | Digraph) -> bool:
    if G.n <= 1:
        return True
    if isinstance(G, Digraph):
        nbrs = [G.succ[v] | G.pred[v] for v in range(G.n)]
    else:
        nbrs = G.adj
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in nbrs[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == G.n


def strong_components(D: Digraph) -> Condensation:
    """Tarjan's algorithm, iterative.

    Components come out sinks-first, i.e. in reverse topological order of the
    condensation.
    """
    n = D.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[frozenset[int]] = []
    counter = 0
    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, iter(sorted(D.succ[start])))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(sorted(D.succ[w]))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.add(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
    component_of = [0] * n
    for i, comp in enumerate(components):
        for v in comp:
            component_of[v] = i
    arcs = {(component_of[u], component_of[v]) for u, v in D.arcs
            if component_of[u] != component_of[v]}
    return Condensation(components, Digraph(len(components), arcs), tuple(component_of))


def terminal_components(D: Digraph) -> list[frozenset[int]]:
    comps, cond, _ = strong_components(D)
    return [comps[i] for i in range(cond.n) if not cond.succ[i]]


def edge_connectivity(G: Graph) -> int:
    """Minimum edge cut, via unit-capacity max-flow from vertex 0 to every other vertex."""
    if G.n < 2:
        raise InvalidInput("edge connectivity needs at least 2 vertices")
    best = None
    for sink in range(1, G.n):
        flow = _unit_max_flow(G, 0, sink, limit=best)
        best = flow if best is None else min(best, flow)
        if best == 0:
            break
    return best


def _unit_max_flow(G: Graph, s: int, t: int, limit: int | None = None) -> int:
    # each undirected edge is a pair of opposite unit-capacity arcs
    residual = {}
    for u, v in G.edges:
        residual[(u, v)] = 1
        residual[(v, u)] = 1
    flow = 0
    while limit is None or flow < limit:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for w in sorted(G.adj[u]):
                if w not in parent and residual[(u, w)] > 0:
                    parent[w] = u
                    queue.append(w)
        if t not in parent:
            break
        w = t
        while parent[w] is not None:
            u = parent[w]
            residual[(u, w)] -= 1
            residual[(w, u)] += 1
            w = u
        flow += 1
    return flow


def is_k_strong(D: Digraph, k: int) -> bool:
    """True iff ``D - S`` is strong for every ``S`` with ``|S| < k``.

    Digraphs with at most ``k`` vertices are never k-strong.
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    if D.n <= k:
        return False
    for size in range(k):
        for removed in itertools.combinations(range(D.n), size):
            if not is_strong(D.remove_vertices(removed)[0]):
                return False
    return True


def is_eulerian(D: Digraph) -> bool:
    if any(len(D.succ[v]) != len(D.pred[v]) for v in range(D.n)):
        return False
    return is_connected(D)


def find_even_cycle(D: Digraph, budget: int = 10**6) -> tuple[int, ...] | None:
    """Return some simple directed cycle of even length, or None.

    Exhaustive simple-cycle enumeration with an early exit; cycles are rooted
    at their smallest vertex.  ``budget`` bounds the number of path extensions.
    """
    nodes = 0
    comps, _, comp_of = strong_components(D)
    for comp in sorted(comps, key=min):
        if len(comp) < 2:
            continue
        for s in sorted(comp):
            path = [s]
            on_path = {s}
            stack = [iter(sorted(w for w in D.succ[s] if w > s and comp_of[w] == comp_of[s]))]
            while stack:
                advanced = False
                for w in stack[-1]:
                    nodes += 1
                    if nodes > budget:
                        raise ResourceExceeded(f"even-cycle search exceeded {budget} steps")
                    if w in on_path:
                        continue
                    if s in D.succ[w] and (len(path) + 1) % 2 == 0:
                        return tuple(path) + (w,)
                    path.append(w)
                    on_path.add(w)
                    stack.append(iter(sorted(x for x in D.succ[w]
                                             if x > s and comp_of[x] == comp_of[s])))
                    advanced = True
                    break
                if not advanced:
                    stack.pop()
                    on_path.discard(path.pop())
    return None


def simple_cycles(D: Digraph) -> list[tuple[int, ...]]:
    """All simple cycles, each rooted at its smallest vertex (exponential)."""
    out = []
    for s in range(D.n):
        def extend(path, on_path):
            for w in sorted(D.succ[path[-1]]):
                if w == s:
                    out.append(tuple(path))
                elif w > s and w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    extend(path, on_path)
                    on_path.discard(path.pop())
        extend([s], {s})
    return out


def _bfs_parents(D: Digraph, source: int, allowed) -> dict[int, int | None]:
    parent = {source: None}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in sorted(D.succ[u]):
            if w not in parent and allowed(w):
                parent[w] = u
                queue.append(w)
    return parent


def shortest_cycle(D: Digraph) -> tuple[int, ...] | None:
    """Shortest directed cycle; ties go to the smallest start vertex, then BFS order."""
    best = None
    for s in range(D.n):
        parent = {s: None}
        depth = {s: 0}
        queue = deque([s])
        found = None
        while queue and found is None:
            u = queue.popleft()
            if best is not None and depth[u] + 1 >= len(best):
                break
            if s in D.succ[u]:
                found = u
                break
            for w in sorted(D.succ[u]):
                if w not in parent:
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(w)
        if found is None:
            continue
        cycle = []
        w = found
        while w is not None:
            cycle.append(w)
            w = parent[w]
        cycle.reverse()
        if best is None or len(cycle) < len(best):
            best = tuple(cycle)
    return best


def _shortest_handle(D: Digraph, covered: set[int]) -> Handle | None:
    best = None
    for s in sorted(covered):
        starts = sorted(w for w in D.succ[s] if w not in covered)
        if not starts:
            continue
        parent: dict[int, int | None] = {}
        depth = {}
        queue = deque()
        for w in starts:
            parent[w] = None
            depth[w] = 1
            queue.append(w)
        while queue:
            u = queue.popleft()
            if best is not None and depth[u] > len(best.interior):
                break
            exits = sorted(w for w in D.succ[u] if w in covered)
            if exits:
                interior = []
                w = u
                while w is not None:
                    interior.append(w)
                    w = parent[w]
                interior.reverse()
                candidate = Handle(s, tuple(interior), exits[0])
                if best is None or len(candidate.interior) < len(best.interior):
                    best = candidate
                break
            for w in sorted(D.succ[u]):
                if w not in covered and w not in parent:
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(w)
    return best


def handle_decomposition(D: Digraph) -> HandleDecomposition:
    """Shortest cycle followed by repeatedly adding a shortest non-trivial handle.

    Ties go to the smallest entry vertex, then the lexicographically smallest
    interior sequence.
    """
    if not D.arcs or not is_strong(D):
        raise InvalidInput("handle decomposition needs a strong digraph with at least one arc")
    cycle = shortest_cycle(D)
    covered = set(cycle)
    handles = []
    while len(covered) < D.n:
        h = _shortest_handle(D, covered)
        handles.append(h)
        covered.update(h.interior)
    return HandleDecomposition(cycle, tuple(handles))


def build_branching(host: Digraph, root: int, direction: str = OUT,
                    forced_leaves: Sequence[int] = ()) -> Branching:
    """Breadth-first branching from ``root``, neighbours scanned in ascending order.

    Vertices in ``forced_leaves`` are attached but never expanded.
    """
    if direction not in (OUT, IN):
        raise InvalidInput(f"direction must be {OUT!r} or {IN!r}")
    nbrs = host.succ if direction == OUT else host.pred
    blocked = set(forced_leaves)
    parent: dict[int, int] = {}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        if u in blocked and u != root:
            continue
        for w in sorted(nbrs[u]):
            if w not in depth:
                parent[w] = u
                depth[w] = depth[u] + 1
                queue.append(w)
    if len(depth) != host.n:
        missing = sorted(set(range(host.n)) - set(depth))
        kind = "reach" if direction == OUT else "be reached from"
        raise InvalidInput(f"root {root} cannot {kind} vertices {missing}")
    return Branching(root, parent, direction, depth)


def peel_branching(branching: Branching) -> tuple[str, list[Star]]:
    """Repeatedly strip the star hanging off the parent of a deepest leaf.

    Returns ``("winning", galaxy)`` when every vertex is consumed and
    ``("losing", galaxy)`` when only the root is left over.
    """
    children: dict[int, set[int]] = {}
    for v, p in branching.parent.items():
        children.setdefault(p, set()).add(v)
    depth = branching.depth
    removed: set[int] = set()
    stars = []
    order = sorted(branching.vertices, key=lambda v: (-depth[v], v))
    for v in order:
        if v in removed:
            continue
        if v == branching.root:
            return "losing", stars
        p = branching.parent[v]
        leaves = tuple(sorted(c for c in children.get(p, ()) if c not in removed))
        stars.append(Star(p, leaves, branching.direction))
        removed.update(leaves)
        removed.add(p)
    return "winning", stars


def branching_galaxy(host: Digraph, root: int, direction: str = OUT):
    """Build a BFS branching at ``root`` and peel it into a galaxy.

    Returns ``(branching, verdict, galaxy)`` with verdict ``"winning"`` or
    ``"losing"``.
    """
    branching = build_branching(host, root, direction)
    verdict, galaxy = peel_branching(branching)
    return branching, verdict, galaxy


def bipartite_subdigraph(D: Digraph | Graph, P: TwoPartition) -> Digraph | Graph:
    """Spanning sub(di)graph keeping the arcs/edges whose ends lie in different parts."""
    if len(P) != D.n:
        raise InvalidInput("partition does not cover the instance")
    c = P.colors
    if isinstance(D, Graph):
        return Graph(D.n, ((u, v) for u, v in D.edges if c[u] != c[v]))
    return Digraph(D.n, ((u, v) for u, v in D.arcs if c[u] != c[v]))


def has_cycle_factor(B: Digraph) -> bool:
    """Spanning collection of disjoint cycles, via a perfect matching of out-copies to in-copies."""
    match_in: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for w in sorted(B.succ[u]):
            if w in seen:
                continue
            seen.add(w)
            if w not in match_in or augment(match_in[w], seen):
                match_in[w] = u
                return True
        return False

    for u in range(B.n):
        if not augment(u, set()):
            return False
    return True

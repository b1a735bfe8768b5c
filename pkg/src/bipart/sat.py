"""Source instances for the reductions and brute-force solvers for them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidInput, ResourceExceeded

SAT = "sat"
NAE = "nae"
DEFAULT_BOUND = 24


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF over variables ``1..n``; literals are signed ints, repeats allowed."""

    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        for j, clause in enumerate(clauses):
            if len(clause) != 3:
                raise InvalidInput(f"clause {j + 1} has {len(clause)} literals, expected 3")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise InvalidInput(f"clause {j + 1}: literal {lit} outside variables 1..{self.n}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment, mode: str = SAT) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        for clause in self.clauses:
            values = [assignment[abs(l) - 1] == (l > 0) for l in clause]
            if not any(values):
                return False
            if mode == NAE and all(values):
                return False
        return True

    def padded(self) -> CnfFormula:
        """Add ``(x ∨ ¬x ∨ ¬x)`` for every variable missing a polarity.

        The added clauses are tautologies, so satisfiability is unchanged.
        """
        pos = {l for c in self.clauses for l in c if l > 0}
        neg = {-l for c in self.clauses for l in c if l < 0}
        extra = [(i, -i, -i) for i in range(1, self.n + 1) if i not in pos or i not in neg]
        return CnfFormula(self.n, self.clauses + tuple(extra))


@dataclass(frozen=True)
class Hypergraph:
    """Uniform hypergraph on ground set ``0..size-1``."""

    size: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        edges = tuple(frozenset(e) for e in self.edges)
        sizes = {len(e) for e in edges}
        if len(sizes) > 1:
            raise InvalidInput(f"hyperedges have mixed sizes {sorted(sizes)}")
        if sizes and min(sizes) < 2:
            raise InvalidInput("hyperedges need at least 2 vertices")
        for e in edges:
            if any(not 0 <= v < self.size for v in e):
                raise InvalidInput(f"hyperedge {sorted(e)} leaves the ground set")
        object.__setattr__(self, "edges", edges)

    @property
    def r(self) -> int:
        return len(self.edges[0]) if self.edges else 0

    def is_connected(self) -> bool:
        if self.size <= 1:
            return True
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            first, *rest = sorted(e)
            for v in rest:
                parent[find(v)] = find(first)
        return len({find(v) for v in range(self.size)}) == 1

    def properly_coloured_by(self, colors) -> bool:
        return all(len({colors[v] for v in e}) == 2 for e in self.edges)


def sat_brute(F: CnfFormula, mode: str = SAT, bound: int = DEFAULT_BOUND) -> tuple[bool, ...] | None:
    """First satisfying (or NAE-satisfying) assignment in counting order."""
    if mode not in (SAT, NAE):
        raise InvalidInput(f"mode must be {SAT!r} or {NAE!r}")
    if F.n > bound:
        raise ResourceExceeded(f"{F.n} variables exceed the brute-force bound {bound}")
    for assignment in itertools.product((False, True), repeat=F.n):
        if F.satisfied_by(assignment, mode):
            return assignment
    return None


def hyper2color_brute(H: Hypergraph, bound: int = DEFAULT_BOUND) -> tuple[int, ...] | None:
    """First 2-colouring (values 1/2) leaving no hyperedge monochromatic."""
    if H.size > bound:
        raise ResourceExceeded(f"ground set of {H.size} exceeds the brute-force bound {bound}")
    for colors in itertools.product((1, 2), repeat=H.size):
        if H.properly_coloured_by(colors):
            return colors
    return None

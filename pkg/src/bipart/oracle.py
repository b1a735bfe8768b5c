"""Partition problems, the definitional checker and the exact search oracle."""
from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass, field
from typing import Any

from .errors import InvalidInput, ResourceExceeded
from .graphs import (
    Digraph,
    Graph,
    TwoPartition,
    bipartite_subdigraph,
    has_cycle_factor,
    is_eulerian,
    is_strong,
)

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    raw = os.environ.get("BIPART_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class Kind(enum.Enum):
    UND = "und"
    OUT_OUT = "out-out"
    OUT_IN = "out-in"
    OUT_TOTAL = "out-total"
    STRONG_B = "strong-b"
    EULER_B_SEMI1 = "euler-b-semi1"
    CYCLEFACTOR_B = "cyclefactor-b"
    TOTALDOM = "totaldom"

    @property
    def has_degrees(self) -> bool:
        return self in (Kind.UND, Kind.OUT_OUT, Kind.OUT_IN, Kind.OUT_TOTAL)

    @property
    def undirected(self) -> bool:
        return self is Kind.UND


@dataclass(frozen=True)
class PartitionSpec:
    """Constraint pair on the two parts, plus optional colour pins."""

    kind: Kind
    k1: int = 0
    k2: int = 0
    pins: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.k1 < 0 or self.k2 < 0:
            raise InvalidInput("degree bounds must be non-negative")
        if not self.kind.has_degrees and (self.k1 or self.k2):
            raise InvalidInput(f"{self.kind.value} takes no degree bounds")
        for v, c in self.pins:
            if c not in (1, 2):
                raise InvalidInput(f"pin {v}={c}: colour must be 1 or 2")
        if len({v for v, _ in self.pins}) != len(self.pins):
            raise InvalidInput("a vertex is pinned twice")
        object.__setattr__(self, "pins", tuple(sorted(self.pins)))

    @classmethod
    def parse(cls, text: str, pins: dict[int, int] | None = None) -> PartitionSpec:
        words = text.split()
        if not words:
            raise InvalidInput("empty spec string")
        try:
            kind = Kind(words[0].lower())
        except ValueError:
            raise InvalidInput(f"unknown spec kind {words[0]!r}") from None
        if kind.has_degrees:
            if len(words) != 3:
                raise InvalidInput(f"{kind.value} needs two integer bounds")
            try:
                k1, k2 = int(words[1]), int(words[2])
            except ValueError:
                raise InvalidInput(f"bad degree bounds in {text!r}") from None
        else:
            if len(words) != 1:
                raise InvalidInput(f"{kind.value} takes no arguments")
            k1 = k2 = 0
        return cls(kind, k1, k2, tuple((pins or {}).items()))

    def __str__(self) -> str:
        if self.kind.has_degrees:
            return f"{self.kind.value} {self.k1} {self.k2}"
        return self.kind.value

    def with_pins(self, pins: dict[int, int]) -> PartitionSpec:
        return PartitionSpec(self.kind, self.k1, self.k2, tuple(pins.items()))

    @property
    def pin_map(self) -> dict[int, int]:
        return dict(self.pins)


def und(k1: int, k2: int) -> PartitionSpec:
    return PartitionSpec(Kind.UND, k1, k2)


def out_out(k1: int, k2: int) -> PartitionSpec:
    return PartitionSpec(Kind.OUT_OUT, k1, k2)


def out_in(k1: int, k2: int) -> PartitionSpec:
    return PartitionSpec(Kind.OUT_IN, k1, k2)


def out_total(k1: int, k2: int) -> PartitionSpec:
    return PartitionSpec(Kind.OUT_TOTAL, k1, k2)


# no-reasons
SINK_EXISTS = "sink-exists"
REDUCED_TO_SINGLE_VERTEX = "reduced-to-single-vertex"
CHARACTERIZATION_VIOLATED = "characterization-violated"
EXHAUSTED_SEARCH = "exhausted-search"
ISOLATED_VERTEX = "isolated-vertex"
NO_EVEN_CYCLE = "no-even-cycle"


@dataclass
class Certificate:
    """Answer to a partition question.

    ``yes`` certificates carry a witness that ``check_partition`` accepted at
    construction time; ``no`` certificates carry a reason code and detail.
    ``note`` flags a yes-decision whose witness could not be produced.
    """

    yes: bool
    witness: TwoPartition | None = None
    reason: str | None = None
    detail: str = ""
    trace: Any = None
    note: str = ""

    @property
    def answer(self) -> str:
        return "yes" if self.yes else "no"


def certify(instance, spec: PartitionSpec, witness: TwoPartition, trace=None) -> Certificate:
    ok, violations = check_partition(instance, spec, witness)
    if not ok:
        raise AssertionError(f"witness rejected for {spec}: {violations[:5]}")
    return Certificate(True, witness, trace=trace)


def refute(reason: str, detail: str = "", trace=None) -> Certificate:
    return Certificate(False, reason=reason, detail=detail, trace=trace)


def check_compatible(instance, spec: PartitionSpec) -> None:
    if spec.kind.undirected and not isinstance(instance, Graph):
        raise InvalidInput(f"{spec.kind.value} applies to graphs, got a digraph")
    if not spec.kind.undirected and not isinstance(instance, Digraph):
        raise InvalidInput(f"{spec.kind.value} applies to digraphs, got a graph")
    for v, _ in spec.pins:
        if not 0 <= v < instance.n:
            raise InvalidInput(f"pin references vertex {v} outside the instance")


def check_partition(instance, spec: PartitionSpec, P: TwoPartition) -> tuple[bool, list[str]]:
    """Evaluate ``spec`` on ``P`` straight from the definitions.

    Returns ``(ok, violations)``; each violation names a vertex or a global
    property of the crossing sub(di)graph.
    """
    check_compatible(instance, spec)
    if len(P) != instance.n:
        raise InvalidInput("partition does not cover the instance")
    c = P.colors
    violations = []
    for v, want in spec.pins:
        if c[v] != want:
            violations.append(f"vertex {v}: pinned to part {want}, found in part {c[v]}")
    kind = spec.kind
    need = (None, spec.k1, spec.k2)
    if kind is Kind.UND:
        for v in range(instance.n):
            got = sum(1 for w in instance.adj[v] if c[w] != c[v])
            if got < need[c[v]]:
                violations.append(f"vertex {v} (part {c[v]}): {got} neighbours across, needs {need[c[v]]}")
        return not violations, violations
    across_out = [sum(1 for w in instance.succ[v] if c[w] != c[v]) for v in range(instance.n)]
    across_in = [sum(1 for w in instance.pred[v] if c[w] != c[v]) for v in range(instance.n)]
    if kind is Kind.OUT_OUT:
        for v in range(instance.n):
            got = across_out[v]
            if got < need[c[v]]:
                violations.append(f"vertex {v} (part {c[v]}): {got} out-neighbours across, needs {need[c[v]]}")
    elif kind is Kind.OUT_IN:
        for v in range(instance.n):
            if c[v] == 1 and across_out[v] < spec.k1:
                violations.append(f"vertex {v} (part 1): {across_out[v]} out-neighbours in part 2, needs {spec.k1}")
            if c[v] == 2 and across_in[v] < spec.k2:
                violations.append(f"vertex {v} (part 2): {across_in[v]} in-neighbours in part 1, needs {spec.k2}")
    elif kind is Kind.OUT_TOTAL:
        for v in range(instance.n):
            if c[v] == 1 and across_out[v] < spec.k1:
                violations.append(f"vertex {v} (part 1): {across_out[v]} out-neighbours in part 2, needs {spec.k1}")
            if c[v] == 2:
                got = sum(1 for w in instance.succ[v] | instance.pred[v] if c[w] == 1)
                if got < spec.k2:
                    violations.append(f"vertex {v} (part 2): {got} neighbours in part 1, needs {spec.k2}")
    elif kind is Kind.STRONG_B:
        if not is_strong(bipartite_subdigraph(instance, P)):
            violations.append("crossing digraph is not strong")
    elif kind is Kind.EULER_B_SEMI1:
        for v in range(instance.n):
            if not across_out[v] or not across_in[v]:
                violations.append(f"vertex {v}: semi-degree 0 in the crossing digraph")
        if not is_eulerian(bipartite_subdigraph(instance, P)):
            violations.append("crossing digraph is not eulerian")
    elif kind is Kind.CYCLEFACTOR_B:
        if not has_cycle_factor(bipartite_subdigraph(instance, P)):
            violations.append("crossing digraph has no cycle factor")
    elif kind is Kind.TOTALDOM:
        for v in range(instance.n):
            same = any(c[w] == c[v] for w in instance.succ[v])
            if not same:
                violations.append(f"vertex {v} (part {c[v]}): no out-neighbour inside its part")
            if not across_out[v]:
                violations.append(f"vertex {v} (part {c[v]}): no out-neighbour across")
    return not violations, violations


def naive_decide(instance, spec: PartitionSpec) -> TwoPartition | None:
    """First valid colouring in plain ``itertools.product`` order, or None.

    No propagation at all; this is the reference the exact search is
    checked against.
    """
    for colors in itertools.product((1, 2), repeat=instance.n):
        P = TwoPartition(colors)
        if check_partition(instance, spec, P)[0]:
            return P
    return None


def _mask(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _requirements(instance, spec: PartitionSpec):
    """Per vertex and colour, the list of ``(neighbour mask, colour, count)`` demands."""
    n = instance.n
    kind = spec.kind
    req = [[None, [], []] for _ in range(n)]
    if kind is Kind.UND:
        for v in range(n):
            m = _mask(instance.adj[v])
            req[v][1].append((m, 2, spec.k1))
            req[v][2].append((m, 1, spec.k2))
    else:
        outm, inm = instance.masks()
        for v in range(n):
            r1, r2 = req[v][1], req[v][2]
            if kind is Kind.OUT_OUT:
                r1.append((outm[v], 2, spec.k1))
                r2.append((outm[v], 1, spec.k2))
            elif kind is Kind.OUT_IN:
                r1.append((outm[v], 2, spec.k1))
                r2.append((inm[v], 1, spec.k2))
            elif kind is Kind.OUT_TOTAL:
                r1.append((outm[v], 2, spec.k1))
                r2.append((outm[v] | inm[v], 1, spec.k2))
            elif kind in (Kind.EULER_B_SEMI1, Kind.CYCLEFACTOR_B) or (
                    kind is Kind.STRONG_B and n >= 2):
                r1.extend([(outm[v], 2, 1), (inm[v], 2, 1)])
                r2.extend([(outm[v], 1, 1), (inm[v], 1, 1)])
            elif kind is Kind.TOTALDOM:
                r1.extend([(outm[v], 1, 1), (outm[v], 2, 1)])
                r2.extend([(outm[v], 2, 1), (outm[v], 1, 1)])
    for v in range(n):
        for i in (1, 2):
            req[v][i] = [r for r in req[v][i] if r[2] > 0]
    return req


class _Search:
    """Backtracking over colourings with degree-count propagation.

    Domains are two bitmasks: ``can[1]`` holds the vertices that may still
    take colour 1, ``can[2]`` those that may still take colour 2.
    """

    def __init__(self, instance, spec: PartitionSpec, budget: int):
        self.instance = instance
        self.spec = spec
        self.budget = budget
        self.nodes = 0
        n = instance.n
        self.n = n
        self.req = _requirements(instance, spec)
        # a domain change at u can only matter to u's neighbours
        if isinstance(instance, Graph):
            self.watchers = [_mask(instance.adj[u]) for u in range(n)]
        else:
            outm, inm = instance.masks()
            self.watchers = [outm[u] | inm[u] for u in range(n)]
        self.full = (1 << n) - 1
        self.leaf_check = None
        if spec.kind is Kind.STRONG_B:
            self.leaf_check = lambda B: is_strong(B)
        elif spec.kind is Kind.CYCLEFACTOR_B:
            self.leaf_check = has_cycle_factor
        elif spec.kind is Kind.EULER_B_SEMI1:
            self.leaf_check = is_eulerian
            self.outm, self.inm = instance.masks()
            self.closure = [self.outm[v] | self.inm[v] | (1 << v) for v in range(n)]

    def propagate(self, c1: int, c2: int, dirty: int):
        """Return narrowed ``(c1, c2)`` or None on a wipe-out."""
        req = self.req
        watchers = self.watchers
        while dirty:
            low = dirty & -dirty
            dirty ^= low
            v = low.bit_length() - 1
            changed = 0
            can = (None, c1, c2)
            for i in (1, 2):
                if not can[i] & low:
                    continue
                for m, t, k in req[v][i]:
                    if (m & can[t]).bit_count() < k:
                        if i == 1:
                            c1 &= ~low
                        else:
                            c2 &= ~low
                        changed |= low
                        break
            if not (c1 | c2) & low:
                return None
            if (c1 & low) and (c2 & low):
                if changed:
                    dirty |= watchers[v]
                continue
            i = 1 if c1 & low else 2
            can = (None, c1, c2)
            for m, t, k in req[v][i]:
                avail = m & can[t]
                if avail.bit_count() == k:
                    # every remaining candidate must take colour t
                    if t == 1:
                        hit = avail & c2
                        if hit:
                            c2 &= ~hit
                            changed |= hit
                    else:
                        hit = avail & c1
                        if hit:
                            c1 &= ~hit
                            changed |= hit
                    can = (None, c1, c2)
            if changed:
                m = changed
                while m:
                    lb = m & -m
                    m ^= lb
                    u = lb.bit_length() - 1
                    if not (c1 | c2) & lb:
                        return None
                    dirty |= watchers[u] | lb
        return c1, c2

    def closed_ok(self, c1: int, c2: int) -> bool:
        # balance test for vertices whose whole neighbourhood is already fixed
        fixed = (c1 ^ c2) & self.full
        for v in range(self.n):
            if self.closure[v] & ~fixed:
                continue
            if c1 >> v & 1:
                other = c2 & ~c1
            else:
                other = c1 & ~c2
            if (self.outm[v] & other).bit_count() != (self.inm[v] & other).bit_count():
                return False
        return True

    def run(self, c1: int, c2: int):
        state = self.propagate(c1, c2, self.full)
        if state is None:
            return None
        return self._search(*state)

    def _search(self, c1: int, c2: int):
        if self.spec.kind is Kind.EULER_B_SEMI1 and not self.closed_ok(c1, c2):
            return None
        both = c1 & c2
        if not both:
            P = TwoPartition(tuple(1 if c1 >> v & 1 else 2 for v in range(self.n)))
            if self.leaf_check is not None:
                B = bipartite_subdigraph(self.instance, P)
                if not self.leaf_check(B):
                    return None
            return P
        low = both & -both
        for colour in (1, 2):
            self.nodes += 1
            if self.nodes > self.budget:
                raise ResourceExceeded(f"exact search exceeded {self.budget} nodes")
            if colour == 1:
                state = self.propagate(c1, c2 & ~low, low | self.watchers[low.bit_length() - 1])
            else:
                state = self.propagate(c1 & ~low, c2, low | self.watchers[low.bit_length() - 1])
            if state is not None:
                found = self._search(*state)
                if found is not None:
                    return found
        return None


def exact_decide(instance, spec: PartitionSpec, budget: int | None = None) -> Certificate:
    """Complete search for a partition satisfying ``spec``.

    Branches on the lowest undecided vertex, colour 1 first, after
    propagating degree shortfalls.  A yes carries a checked witness; a no
    carries ``exhausted-search``.  Running past ``budget`` search nodes
    raises ``ResourceExceeded``.
    """
    check_compatible(instance, spec)
    budget = default_budget() if budget is None else budget
    search = _Search(instance, spec, budget)
    full = search.full
    c1 = c2 = full
    for v, c in spec.pins:
        if c == 1:
            c2 &= ~(1 << v)
        else:
            c1 &= ~(1 << v)
    found = search.run(c1, c2)
    if found is None:
        cert = refute(EXHAUSTED_SEARCH, f"no partition after {search.nodes} search nodes")
    else:
        cert = certify(instance, spec, found)
    cert.trace = {"nodes": search.nodes}
    return cert

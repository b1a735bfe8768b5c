"""Compilers from formulas and hypergraphs to partition instances.

Each generator returns a :class:`Gadget`: the instance, a map from role
names to vertex ids, and the partition spec (with any pins) under which the
instance is a yes-instance exactly when the source is.  Vertex ids follow
the order in which roles are listed in each docstring, so equal inputs give
identical outputs.

Role names are ascii: ``x3`` and ``~x3`` for literal vertices, ``c2`` for the
second clause, ``Q1.y`` for vertex ``y`` of the first variable gadget, and so
on.  Variables and clauses count from 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvalidInput
from .graphs import Digraph, Graph, TwoPartition, is_connected, strong_components
from .oracle import (
    Kind,
    PartitionSpec,
    exact_decide,
    out_in,
    und,
)
from .sat import CnfFormula, Hypergraph

OUTIN11 = out_in(1, 1)
STRONG = PartitionSpec(Kind.STRONG_B)
EULER = PartitionSpec(Kind.EULER_B_SEMI1)


@dataclass(frozen=True)
class Gadget:
    instance: Digraph | Graph
    labels: dict[str, int]
    spec: PartitionSpec

    def __getitem__(self, role: str) -> int:
        return self.labels[role]

    def names(self) -> list[str]:
        """Role names in vertex order."""
        return sorted(self.labels, key=self.labels.get)


@dataclass
class _Builder:
    labels: dict[str, int] = field(default_factory=dict)
    pairs: list[tuple[int, int]] = field(default_factory=list)

    def add(self, name: str) -> int:
        if name in self.labels:
            raise AssertionError(f"role {name} allocated twice")
        self.labels[name] = len(self.labels)
        return self.labels[name]

    def add_all(self, prefix: str, count: int) -> list[int]:
        return [self.add(f"{prefix}[{i}]") for i in range(count)]

    def join(self, sources, targets):
        for u in sources:
            for v in targets:
                if u != v:
                    self.pairs.append((u, v))

    def digraph(self) -> Digraph:
        return Digraph(len(self.labels), self.pairs)

    def graph(self) -> Graph:
        return Graph(len(self.labels), self.pairs)


def _literal(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"~x{-lit}"


def _check_formula(F) -> CnfFormula:
    if not isinstance(F, CnfFormula):
        raise InvalidInput("expected a CnfFormula")
    return F


def _x_prime(b: _Builder, prefix: str, k1: int, k2: int, x: int, xbar: int):
    """The variable gadget without the ``x ~x`` edge, around given literal vertices."""
    v = b.add(f"{prefix}.v")
    z = b.add(f"{prefix}.z")
    X1 = b.add_all(f"{prefix}.X1", k1 - 1)
    X2 = b.add_all(f"{prefix}.X2", k2 - 1)
    X3 = b.add_all(f"{prefix}.X3", k2 - 1)
    X4 = b.add_all(f"{prefix}.X4", k1 - 1)
    b.join([v], X1)
    b.join(X1, X2)
    b.join(X2, [x, xbar])
    b.join([x, xbar], X4)
    b.join(X4, X3)
    b.join(X3, [z])
    b.join([v], [z])


def und_nae_instance(F: CnfFormula, k1: int = 2, k2: int = 2) -> Gadget:
    """Graph with a ``(k1, k2)`` partition iff ``F`` is NAE-satisfiable (``2 <= k1 <= k2``).

    Order: per variable ``i`` the literal vertices ``x{i}``, ``~x{i}`` and then
    ``X{i}.v``, ``X{i}.z``, ``X{i}.X1[..]`` .. ``X{i}.X4[..]``; then per clause
    ``j`` the same roles under ``Y{j}.`` plus ``Y{j}.x`` and ``Y{j}.~x``.  The
    clause gadget's three outer vertices are the literal vertices of the
    clause, so repeated literals collapse.
    """
    F = _check_formula(F)
    if not 2 <= k1 <= k2:
        raise InvalidInput("need 2 <= k1 <= k2")
    b = _Builder()
    for i in range(1, F.n + 1):
        x, xbar = b.add(f"x{i}"), b.add(f"~x{i}")
        _x_prime(b, f"X{i}", k1, k2, x, xbar)
        b.join([x], [xbar])
    for j, clause in enumerate(F.clauses, 1):
        x, xbar = b.add(f"Y{j}.x"), b.add(f"Y{j}.~x")
        _x_prime(b, f"Y{j}", k1, k2, x, xbar)
        b.join([x, xbar], sorted({b.labels[_literal(l)] for l in clause}))
    return Gadget(b.graph(), b.labels, und(k1, k2))


def und_1k_instance(F: CnfFormula, k: int = 3) -> Gadget:
    """Graph of minimum degree ``k - 1`` with a ``(1, k)`` partition iff ``F`` is satisfiable.

    Order: per variable ``i`` the roles ``G{i}.a1, G{i}.a2, x{i}, ~x{i},
    G{i}.y1, G{i}.y2, G{i}.b1, G{i}.b2``; per clause ``j`` the triangle
    ``y{j}, y{j}', y{j}''``; for ``k >= 4`` then per extra level ``t`` the
    clique ``K{t}[0..k-1]`` followed by its hub ``h{t}``, which sees
    ``K{t}[0]`` and every vertex of the ``k = 3`` instance.
    """
    F = _check_formula(F)
    if k < 3:
        raise InvalidInput("k must be at least 3")
    b = _Builder()
    for i in range(1, F.n + 1):
        A = [b.add(f"G{i}.a1"), b.add(f"G{i}.a2")]
        X = [b.add(f"x{i}"), b.add(f"~x{i}")]
        Y = [b.add(f"G{i}.y1"), b.add(f"G{i}.y2")]
        B = [b.add(f"G{i}.b1"), b.add(f"G{i}.b2")]
        b.join(A, X)
        b.join(X, Y)
        b.join(Y, B)
    for j, clause in enumerate(F.clauses, 1):
        tri = [b.add(f"y{j}"), b.add(f"y{j}'"), b.add(f"y{j}''")]
        b.join(tri[:1], tri[1:])
        b.join(tri[1:2], tri[2:])
        b.join(tri[:1], sorted({b.labels[_literal(l)] for l in clause}))
    base = list(range(len(b.labels)))
    for t in range(1, k - 2):
        clique = b.add_all(f"K{t}", k)
        for u, v in itertools.combinations(clique, 2):
            b.pairs.append((u, v))
        hub = b.add(f"h{t}")
        b.join([hub], [clique[0]] + base)
    return Gadget(b.graph(), b.labels, und(1, k))


def acyclic_inout_instance(F: CnfFormula) -> Gadget:
    """Acyclic digraph with an out-in (1,1) partition iff ``F`` is satisfiable.

    Order: per variable ``x{i}, ~x{i}, y{i}, z{i}``; then ``c1..cm``.
    """
    F = _check_formula(F)
    b = _Builder()
    for i in range(1, F.n + 1):
        x, xbar, y, z = b.add(f"x{i}"), b.add(f"~x{i}"), b.add(f"y{i}"), b.add(f"z{i}")
        b.join([y], [x, xbar])
        b.join([x, xbar], [z])
    for j, clause in enumerate(F.clauses, 1):
        c = b.add(f"c{j}")
        b.join(sorted({b.labels[_literal(l)] for l in clause}), [c])
    return Gadget(b.digraph(), b.labels, OUTIN11)


def _check_not_constant(F: CnfFormula) -> None:
    if F.satisfied_by([True] * F.n):
        raise InvalidInput("formula is satisfied by setting every variable true")
    if F.satisfied_by([False] * F.n):
        raise InvalidInput("formula is satisfied by setting every variable false")


def _w_into(b: _Builder, F: CnfFormula, prefix: str = "") -> tuple[int, int]:
    a, bb = b.add(f"{prefix}a"), b.add(f"{prefix}b")
    C = [b.add(f"{prefix}c{j}") for j in range(1, F.m + 1)]
    V = [b.add(f"{prefix}v{i}") for i in range(1, F.n + 1)]
    b.join([a], C)
    b.join(C, [bb])
    b.join([bb], V)
    b.join(V, [a])
    for j, clause in enumerate(F.clauses):
        for lit in clause:
            if lit > 0:
                b.pairs.append((C[j], V[lit - 1]))
            else:
                b.pairs.append((V[-lit - 1], C[j]))
    return a, bb


def w_instance(F: CnfFormula) -> Gadget:
    """Strong digraph with a partition putting ``a`` in part 2 and ``b`` in part 1 iff ``F`` is satisfiable.

    Order: ``a, b, c1..cm, v1..vn``.  Formulas satisfied by the all-true or
    the all-false assignment are rejected.
    """
    F = _check_formula(F)
    _check_not_constant(F)
    b = _Builder()
    a, bb = _w_into(b, F)
    return Gadget(b.digraph(), b.labels, OUTIN11.with_pins({a: 2, bb: 1}))


def w_prime_instance(F: CnfFormula) -> Gadget:
    """``w_instance`` plus ``c, d`` and arcs ``b c, c d, d a``; the single pin is ``c`` in part 2.

    Order: as ``w_instance``, then ``c``, ``d``.
    """
    F = _check_formula(F)
    _check_not_constant(F)
    b = _Builder()
    a, bb = _w_into(b, F)
    c, d = b.add("c"), b.add("d")
    b.pairs += [(bb, c), (c, d), (d, a)]
    return Gadget(b.digraph(), b.labels, OUTIN11.with_pins({c: 2}))


def _acyclic(H: Digraph) -> bool:
    comps, _, _ = strong_components(H)
    return len(comps) == H.n


def maximal_partitionable(H: Digraph) -> list[int]:
    """Grow a vertex set whose induced subdigraph has an out-in (1,1) partition.

    Start from the sinks and their in-neighbours, then add single vertices
    in ascending order while the partition survives, until none can be added.
    """
    sinks = set(H.sinks())
    grown = sinks | {u for s in sinks for u in H.pred[s]}
    changed = True
    while changed:
        changed = False
        for v in range(H.n):
            if v in grown:
                continue
            sub, _ = H.induced(grown | {v})
            if exact_decide(sub, OUTIN11).yes:
                grown.add(v)
                changed = True
                break
    return sorted(grown)


def pattern_instance(H: Digraph, F: CnfFormula) -> Gadget:
    """Digraph whose strong component digraph is ``H``, partitionable iff ``F`` is satisfiable.

    ``H`` must be a connected acyclic digraph on at least two vertices without
    an out-in (1,1) partition.  With ``H'`` from :func:`maximal_partitionable`
    and ``X`` the vertices outside it, ``x`` is the smallest vertex of ``X``
    with an out-neighbour in ``H'`` and ``y`` its smallest such out-neighbour.
    ``y`` is replaced by a copy of the ``w_instance`` digraph (arcs into ``y``
    enter ``W.a``, arcs out of ``y`` leave ``W.b``), and every other vertex
    ``u`` of ``X`` gets a private 4-cycle ``u1 u2 u3 u``.

    Order: ``h{v}`` for the vertices of ``H`` other than ``y``, ascending;
    then ``W.a, W.b, W.c1.., W.v1..``; then ``u{v}.1, u{v}.2, u{v}.3`` per
    vertex of ``X`` other than ``x``.
    """
    F = _check_formula(F)
    if not isinstance(H, Digraph) or H.n < 2:
        raise InvalidInput("pattern must be a digraph on at least two vertices")
    if not _acyclic(H) or not is_connected(H):
        raise InvalidInput("pattern must be connected and acyclic")
    if exact_decide(H, OUTIN11).yes:
        raise InvalidInput("pattern has an out-in (1,1) partition")
    _check_not_constant(F)
    inside = set(maximal_partitionable(H))
    X = [v for v in range(H.n) if v not in inside]
    x = next(v for v in X if H.succ[v] & inside)
    y = min(H.succ[x] & inside)
    b = _Builder()
    ids = {v: b.add(f"h{v}") for v in range(H.n) if v != y}
    a, bb = _w_into(b, F, prefix="W.")
    for u, w in H.sorted_arcs():
        b.pairs.append((bb if u == y else ids[u], a if w == y else ids[w]))
    for u in X:
        if u == x:
            continue
        c = [b.add(f"u{u}.{t}") for t in (1, 2, 3)]
        b.pairs += [(c[0], c[1]), (c[1], c[2]), (c[2], ids[u]), (ids[u], c[0])]
    D = b.digraph()
    where = dict(ids)
    where[y] = a
    _check_condensation(D, H, where)
    return Gadget(D, b.labels, OUTIN11)


def _check_condensation(D: Digraph, H: Digraph, where: dict[int, int]) -> None:
    _, cond, comp = strong_components(D)
    image = {h: comp[v] for h, v in where.items()}
    if cond.n != H.n or len(set(image.values())) != H.n:
        raise AssertionError("strong components do not match the pattern vertices")
    mapped = {(image[u], image[w]) for u, w in H.arcs}
    if mapped != set(cond.arcs):
        raise AssertionError("strong component digraph differs from the pattern")


def strong_outin_k1_instance(F: CnfFormula, k1: int = 2) -> Gadget:
    """Strong digraph with an out-in ``(k1, 1)`` partition iff ``F`` is satisfiable.

    ``F`` is first padded so every variable occurs in both polarities.  Order:
    per variable ``Q{i}.W[..]`` (``k1 - 1`` vertices), ``Q{i}.y``, ``x{i}``,
    ``~x{i}``, ``Q{i}.Z[..]`` (``k1 - 1``); then ``c1..`` for the padded
    clauses.  All ``Z`` vertices lie on one directed cycle in that order
    (no arcs when there is only one).
    """
    F = _check_formula(F).padded()
    if k1 < 2:
        raise InvalidInput("k1 must be at least 2")
    b = _Builder()
    ys, zs = [], []
    for i in range(1, F.n + 1):
        W = b.add_all(f"Q{i}.W", k1 - 1)
        y = b.add(f"Q{i}.y")
        lits = [b.add(f"x{i}"), b.add(f"~x{i}")]
        Z = b.add_all(f"Q{i}.Z", k1 - 1)
        b.join([y], lits)
        b.join(W, [y])
        b.join([y], W)
        b.join(lits, Z)
        b.join(Z, [y])
        ys.append(y)
        zs += Z
    _cycle(b, zs)
    for j, clause in enumerate(F.clauses, 1):
        c = b.add(f"c{j}")
        b.join([c], ys[:1])
        b.join(sorted({b.labels[_literal(l)] for l in clause}), [c])
    return Gadget(b.digraph(), b.labels, out_in(k1, 1))


def _cycle(b: _Builder, vertices: list[int]) -> None:
    if len(vertices) >= 2:
        b.pairs += list(zip(vertices, vertices[1:] + vertices[:1]))


def strong_22_instance(F: CnfFormula, repair: bool = True) -> Gadget:
    """Strong digraph with an out-in (2,2) partition iff ``F`` is satisfiable.

    ``F`` is padded as in :func:`strong_outin_k1_instance`.  Order: per
    variable ``Q{i}.w, Q{i}.y, Q{i}.y', x{i}, ~x{i}, Q{i}.z``; then the clause
    vertices.  The ``z`` vertices form the cycle ``z1 z2 .. zn``.

    A clause vertex needs two in-neighbours in part 1, but its only
    in-neighbours are its literal vertices, so without help it asks for two
    distinct true literals.  With ``repair`` (the default) every clause
    vertex also receives an arc from ``Q1.y'``, which is in part 1 in every
    valid partition, leaving one true literal to be found.  ``repair=False``
    builds the bare construction.
    """
    F = _check_formula(F).padded()
    b = _Builder()
    ys, zs, yps = [], [], []
    for i in range(1, F.n + 1):
        w, y, yp = b.add(f"Q{i}.w"), b.add(f"Q{i}.y"), b.add(f"Q{i}.y'")
        v, vbar, z = b.add(f"x{i}"), b.add(f"~x{i}"), b.add(f"Q{i}.z")
        b.pairs += [(yp, y), (y, w), (yp, w), (w, yp), (y, v), (y, vbar),
                    (yp, v), (yp, vbar), (yp, z), (z, y), (v, z), (vbar, z)]
        ys.append(y)
        yps.append(yp)
        zs.append(z)
    _cycle(b, zs)
    for j, clause in enumerate(F.clauses, 1):
        c = b.add(f"c{j}")
        b.join([c], ys[:1])
        b.join(sorted({b.labels[_literal(l)] for l in clause}), [c])
        if repair:
            b.join(yps[:1], [c])
    return Gadget(b.digraph(), b.labels, out_in(2, 2))


def lift_k1k2(D: Digraph, k1: int = 2, k2: int = 2) -> Gadget:
    """Add ``x1`` (arcs to every vertex) and ``x2`` (arcs from every vertex) with ``x1 x2`` both ways.

    The result has an out-in ``(k1, k2)`` partition iff ``D`` has an out-in
    ``(k1 - 1, k2 - 1)`` partition, for ``k1, k2 >= 2`` and nonempty ``D``.
    Order: the vertices of ``D`` as ``d0..``, then ``x1``, ``x2``.
    """
    if D.n == 0:
        raise InvalidInput("cannot lift the empty digraph")
    if k1 < 2 or k2 < 2:
        raise InvalidInput("k1 and k2 must be at least 2")
    b = _Builder()
    old = [b.add(f"d{v}") for v in range(D.n)]
    b.pairs += D.sorted_arcs()
    x1, x2 = b.add("x1"), b.add("x2")
    b.join([x1], old)
    b.join(old, [x2])
    b.pairs += [(x1, x2), (x2, x1)]
    return Gadget(b.digraph(), b.labels, out_in(k1, k2))


def _gr_into(b: _Builder, X: list[int], tag: str) -> None:
    Y = b.add_all(f"Y{tag}", len(X))
    Z = b.add_all(f"Z{tag}", len(X))
    b.join(X, Y)
    b.join(Y, Z)
    b.join(Z, X)


def gadget_gr(host: Digraph, X) -> Gadget:
    """Attach ``Y_X`` and ``Z_X`` (``r = |X|`` each) with all arcs ``X->Y``, ``Y->Z``, ``Z->X``.

    Order: host vertices ``h{v}``, then ``Y[..]``, then ``Z[..]``.
    """
    X = sorted(set(X))
    if not X:
        raise InvalidInput("X must be nonempty")
    if any(not 0 <= v < host.n for v in X):
        raise InvalidInput("X must be a subset of the host vertices")
    b = _Builder()
    for v in range(host.n):
        b.add(f"h{v}")
    b.pairs += host.sorted_arcs()
    _gr_into(b, X, "")
    return Gadget(b.digraph(), b.labels, STRONG)


def _subset_tag(X) -> str:
    return "_" + "_".join(map(str, X))


def eulerian_counterexample(r: int, U: Digraph | None = None) -> Gadget:
    """An ``r``-strong eulerian digraph with no strong 2-partition.

    ``U`` has ``2r - 1`` vertices, each with equal in- and out-degree
    (default: no arcs).  One ``r``-vertex gadget is attached per ``r``-subset
    of ``U``, subsets in lexicographic order.  Order: ``u{v}`` for ``U``,
    then ``Y_{subset}[..]`` and ``Z_{subset}[..]`` per subset, e.g.
    ``Y_0_1[0]``.
    """
    if r < 1:
        raise InvalidInput("r must be positive")
    if U is None:
        U = Digraph(2 * r - 1)
    if U.n != 2 * r - 1:
        raise InvalidInput(f"U must have {2 * r - 1} vertices")
    if any(U.out_degree(v) != U.in_degree(v) for v in range(U.n)):
        raise InvalidInput("U must have equal in- and out-degree at every vertex")
    b = _Builder()
    for v in range(U.n):
        b.add(f"u{v}")
    b.pairs += U.sorted_arcs()
    for X in itertools.combinations(range(U.n), r):
        _gr_into(b, list(X), _subset_tag(X))
    return Gadget(b.digraph(), b.labels, STRONG)


def hypergraph_instance(H: Hypergraph, spec: PartitionSpec = STRONG) -> Gadget:
    """Digraph with a strong 2-partition iff the hypergraph is 2-colourable.

    The same digraph serves the eulerian semi-degree variant (pass
    ``EULER`` as ``spec``).  ``H`` must be connected with edge size at least 2.
    Order: ground vertices ``g{v}``, then per hyperedge ``i`` (from 1)
    ``Y{i}[..]`` and ``Z{i}[..]``.
    """
    if not isinstance(H, Hypergraph):
        raise InvalidInput("expected a Hypergraph")
    if not H.edges or H.r < 2:
        raise InvalidInput("hypergraph needs edges of size at least 2")
    if not H.is_connected():
        raise InvalidInput("hypergraph must be connected")
    if spec.kind not in (Kind.STRONG_B, Kind.EULER_B_SEMI1):
        raise InvalidInput("spec must be strong-b or euler-b-semi1")
    b = _Builder()
    for v in range(H.size):
        b.add(f"g{v}")
    for i, e in enumerate(H.edges, 1):
        _gr_into(b, sorted(e), str(i))
    return Gadget(b.digraph(), b.labels, spec)


def hypergraph_partition(gadget: Gadget, H: Hypergraph, colors) -> TwoPartition:
    """Partition of the hypergraph digraph built from a proper 2-colouring.

    In a hyperedge with ``p`` vertices of colour 1, the first ``p`` vertices
    of both ``Y`` and ``Z`` get colour 1 and the rest colour 2.  The crossing
    digraph is then eulerian with every semi-degree at least 1.
    """
    if not H.properly_coloured_by(colors):
        raise InvalidInput("colouring leaves a hyperedge monochromatic")
    mapping = {gadget[f"g{v}"]: colors[v] for v in range(H.size)}
    for i, e in enumerate(H.edges, 1):
        p = sum(1 for v in e if colors[v] == 1)
        for t in range(H.r):
            colour = 1 if t < p else 2
            mapping[gadget[f"Y{i}[{t}]"]] = colour
            mapping[gadget[f"Z{i}[{t}]"]] = colour
    return TwoPartition.from_mapping(gadget.instance.n, mapping)

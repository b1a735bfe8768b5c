"""Text formats: edge lists, partitions, DIMACS CNF and hypergraphs.

Edge list::

    digraph 4        (or: graph 4)
    0 1
    1 2

Partition::

    answer yes
    0 1
    1 2

Lines starting with ``#`` and blank lines are ignored on input.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import InvalidInput
from .graphs import Digraph, Graph, TwoPartition
from .oracle import Certificate
from .sat import CnfFormula, Hypergraph


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _ints(number: int, line: str, count: int | None = None) -> list[int]:
    try:
        values = [int(tok) for tok in line.split()]
    except ValueError:
        raise InvalidInput(f"line {number}: expected integers, got {line!r}") from None
    if count is not None and len(values) != count:
        raise InvalidInput(f"line {number}: expected {count} integers, got {len(values)}")
    return values


def parse_edge_list(text: str) -> Digraph | Graph:
    lines = _lines(text)
    header = next(lines, None)
    if header is None:
        raise InvalidInput("empty instance file")
    number, line = header
    parts = line.split()
    if len(parts) != 2 or parts[0] not in ("digraph", "graph"):
        raise InvalidInput(f"line {number}: expected 'digraph N' or 'graph N'")
    n = _ints(number, parts[1], 1)[0]
    pairs = [tuple(_ints(k, l, 2)) for k, l in lines]
    return Digraph(n, pairs) if parts[0] == "digraph" else Graph(n, pairs)


def format_edge_list(instance: Digraph | Graph) -> str:
    if isinstance(instance, Digraph):
        head, pairs = f"digraph {instance.n}", instance.sorted_arcs()
    else:
        head, pairs = f"graph {instance.n}", instance.sorted_edges()
    return "\n".join([head] + [f"{u} {v}" for u, v in pairs]) + "\n"


def parse_partition(text: str, n: int | None = None) -> TwoPartition:
    """Read a partition file; the ``answer`` header is optional but must say yes if present."""
    colour = {}
    for number, line in _lines(text):
        if line.startswith("answer"):
            if line.split()[1:] != ["yes"]:
                raise InvalidInput(f"line {number}: partition file does not hold a yes-answer")
            continue
        v, c = _ints(number, line, 2)
        if v in colour:
            raise InvalidInput(f"line {number}: vertex {v} listed twice")
        colour[v] = c
    size = len(colour) if n is None else n
    return TwoPartition.from_mapping(size, colour)


def format_partition(P: TwoPartition) -> str:
    return "\n".join(["answer yes"] + [f"{v} {c}" for v, c in enumerate(P.colors)]) + "\n"


def format_certificate(cert: Certificate) -> str:
    if cert.yes and cert.witness is not None:
        text = format_partition(cert.witness)
    else:
        text = f"answer {cert.answer}\n"
    notes = []
    if cert.reason:
        notes.append(f"# reason: {cert.reason}")
    if cert.detail:
        notes.append(f"# detail: {cert.detail}")
    if cert.note:
        notes.append(f"# note: {cert.note}")
    return text + "".join(line + "\n" for line in notes)


def parse_dimacs(text: str) -> CnfFormula:
    """DIMACS CNF; short clauses repeat their last literal, long ones are rejected."""
    n = None
    clauses, current = [], []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        if line[0] == "p":
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InvalidInput(f"line {number}: expected 'p cnf VARS CLAUSES'")
            n = _ints(number, parts[2], 1)[0]
            continue
        if n is None:
            raise InvalidInput(f"line {number}: clause before the problem line")
        for lit in _ints(number, line):
            if lit == 0:
                clauses.append(_three(current, len(clauses) + 1))
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(_three(current, len(clauses) + 1))
    if n is None:
        raise InvalidInput("missing problem line")
    return CnfFormula(n, clauses)


def _three(clause: list[int], index: int) -> tuple[int, int, int]:
    if not clause:
        raise InvalidInput(f"clause {index} is empty")
    if len(clause) > 3:
        raise InvalidInput(f"clause {index} has {len(clause)} literals, at most 3 allowed")
    return tuple(clause + [clause[-1]] * (3 - len(clause)))


def format_dimacs(F: CnfFormula) -> str:
    lines = [f"p cnf {F.n} {F.m}"] + [" ".join(map(str, c)) + " 0" for c in F.clauses]
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = _lines(text)
    header = next(lines, None)
    if header is None:
        raise InvalidInput("empty hypergraph file")
    number, line = header
    parts = line.split()
    if len(parts) != 3 or parts[0] != "hypergraph":
        raise InvalidInput(f"line {number}: expected 'hypergraph N r'")
    size, r = _ints(number, " ".join(parts[1:]), 2)
    edges = []
    for k, l in lines:
        edge = _ints(k, l, r)
        if len(set(edge)) != r:
            raise InvalidInput(f"line {k}: repeated vertex in hyperedge")
        edges.append(frozenset(edge))
    return Hypergraph(size, edges)


def format_hypergraph(H: Hypergraph) -> str:
    lines = [f"hypergraph {H.size} {H.r}"] + [" ".join(map(str, sorted(e))) for e in H.edges]
    return "\n".join(lines) + "\n"


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


def write_labels(path, labels: dict[str, int]) -> None:
    ordered = dict(sorted(labels.items(), key=lambda kv: kv[1]))
    Path(path).write_text(json.dumps(ordered, indent=1) + "\n")

"""Acceptance criteria 1-11.

Each test records a one-line summary; ``conftest.py`` prints a PASS/FAIL
line per criterion at the end of the run.  Exhaustive five-vertex digraph
checks compute oracle verdicts once per isomorphism class and run the
algorithm under test on every labeled digraph.
"""
import itertools
import math
import random
import time

import networkx as nx
import pytest

from bipart.cli import random_instance
from bipart.directed import (
    inout11_strong_decide,
    nebula_to_partition,
    out_total_partition,
    outdeg11_decide,
    partition_to_nebula,
)
from bipart.gadgets import (
    EULER,
    STRONG,
    acyclic_inout_instance,
    eulerian_counterexample,
    hypergraph_instance,
    hypergraph_partition,
    lift_k1k2,
    pattern_instance,
    strong_22_instance,
    strong_outin_k1_instance,
    und_1k_instance,
    und_nae_instance,
    w_instance,
)
from bipart.graphs import (
    Digraph,
    Graph,
    TwoPartition,
    bipartite_subdigraph,
    edge_connectivity,
    is_connected,
    is_eulerian,
    is_k_strong,
    is_strong,
)
from bipart.oracle import (
    Kind,
    PartitionSpec,
    check_partition,
    exact_decide,
    naive_decide,
    out_in,
    out_out,
    out_total,
    und,
)
from bipart.sat import NAE, SAT, hyper2color_brute, sat_brute
from bipart.undirected import delta_1k_partition, delta_12_search, half_degree_search, max_cut_partition

from corpus import formula_corpus, hypergraph_corpus
from enumeration import DigraphClasses, all_digraphs, all_graphs, digraph_from_mask

OUTIN11 = out_in(1, 1)
OUTOUT11 = out_out(1, 1)
GLOBAL_KINDS = (Kind.STRONG_B, Kind.EULER_B_SEMI1, Kind.CYCLEFACTOR_B, Kind.TOTALDOM)
DEGREE_KINDS = (Kind.OUT_OUT, Kind.OUT_IN, Kind.OUT_TOTAL)


def report(record_property, text):
    record_property("summary", text)
    print(text)


@pytest.fixture(scope="module")
def classes():
    return {n: DigraphClasses(n) for n in range(1, 6)}


def class_verdicts(C, spec, only=None):
    """Oracle certificate per canonical mask, optionally restricted by a flag array."""
    reps = C.representatives()
    if only is not None:
        reps = [m for m in reps if only[m]]
    return {m: exact_decide(digraph_from_mask(C.n, m), spec) for m in reps}


def digraph_specs(max_k):
    specs = [PartitionSpec(kind) for kind in GLOBAL_KINDS]
    for kind in DEGREE_KINDS:
        specs += [PartitionSpec(kind, a, b) for a in range(max_k + 1) for b in range(max_k + 1)]
    return specs


def graph_specs(max_k):
    return [und(a, b) for a in range(max_k + 1) for b in range(max_k + 1)]


def test_criterion_01_oracle_conformance(record_property):
    start = time.time()
    checked = mismatches = 0
    for n in range(1, 5):
        for D in all_digraphs(n):
            for spec in digraph_specs(2):
                checked += 1
                mismatches += exact_decide(D, spec).yes != (naive_decide(D, spec) is not None)
        for G in all_graphs(n):
            for spec in graph_specs(3):
                checked += 1
                mismatches += exact_decide(G, spec).yes != (naive_decide(G, spec) is not None)
    exhaustive = checked
    rng = random.Random(101)
    d_specs, g_specs = digraph_specs(3), graph_specs(3)
    for trial in range(10_000):
        directed = trial % 4 != 0
        instance = random_instance(rng, 5, rng.choice((0.2, 0.4, 0.6)), directed, False)
        spec = rng.choice(d_specs if directed else g_specs)
        if rng.random() < 0.25:
            spec = spec.with_pins({rng.randrange(5): rng.choice((1, 2))})
        checked += 1
        mismatches += exact_decide(instance, spec).yes != (naive_decide(instance, spec) is not None)
    elapsed = time.time() - start
    report(record_property, f"{checked - mismatches}/{checked} agree ({exhaustive} exhaustive n<=4, "
                            f"10000 random n=5), {elapsed:.0f}s")
    assert mismatches == 0
    assert elapsed < 300


def test_criterion_02_strong_out_in_11(record_property, classes):
    start = time.time()
    checked = mismatches = bad_witness = weak_stage = 0
    for n, C in classes.items():
        verdicts = class_verdicts(C, OUTIN11, only=C.strong)
        for mask in map(int, C.masks[C.strong]):
            D = digraph_from_mask(n, mask)
            cert = inout11_strong_decide(D)
            checked += 1
            mismatches += cert.yes != verdicts[int(C.canon[mask])].yes
            if cert.yes and not check_partition(D, OUTIN11, cert.witness)[0]:
                bad_witness += 1
            if cert.trace.steps:
                weak_stage += sum(1 for stage, _ in cert.trace.replay()[1:] if stage.n and not is_strong(stage))
    exhaustive = checked
    rng = random.Random(202)
    for _ in range(500):
        D = random_instance(rng, rng.randint(6, 9), rng.choice((0.2, 0.4)), True, True)
        cert = inout11_strong_decide(D)
        checked += 1
        mismatches += cert.yes != exact_decide(D, OUTIN11).yes
        if cert.yes and not check_partition(D, OUTIN11, cert.witness)[0]:
            bad_witness += 1
        weak_stage += sum(1 for stage, _ in cert.trace.replay()[1:] if stage.n and not is_strong(stage))
    elapsed = time.time() - start
    report(record_property, f"{checked - mismatches}/{checked} agree ({exhaustive} strong n<=5 + 500 random "
                            f"n=6..9), bad witnesses {bad_witness}, non-strong stages {weak_stage}, "
                            f"{elapsed:.0f}s")
    assert mismatches == 0 and bad_witness == 0 and weak_stage == 0
    assert elapsed < 120


def _graphs_with_min_degree_one():
    for n in range(2, 7):
        for G in all_graphs(n):
            if G.min_degree() == 1:
                yield G
    for H in nx.graph_atlas_g():
        if H.number_of_nodes() == 7 and min(d for _, d in H.degree()) == 1:
            yield Graph(7, H.edges())


def test_criterion_03_und_12_characterisation(record_property):
    checked = mismatches = long_recolour = 0
    for G in _graphs_with_min_degree_one():
        cert, steps = delta_12_search(G)
        checked += 1
        mismatches += cert.yes != exact_decide(G, und(1, 2)).yes
        long_recolour += steps > G.n
    report(record_property, f"{checked - mismatches}/{checked} agree (labeled n<=6 and all n=7 up to "
                            f"isomorphism, min degree 1), recolourings over n steps: {long_recolour}")
    assert mismatches == 0 and long_recolour == 0


def random_graph_min_degree(rng, k):
    n = rng.randint(k + 1, 14)
    edges = {e for e in itertools.combinations(range(n), 2) if rng.random() < 0.25}
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    for v in range(n):
        while len(adj[v]) < k:
            w = rng.choice([w for w in range(n) if w != v and w not in adj[v]])
            adj[v].add(w)
            adj[w].add(v)
    return Graph(n, [(u, v) for u in range(n) for v in adj[u] if u < v])


def test_criterion_04_und_1k_unconditional(record_property):
    rng = random.Random(404)
    good = total = 0
    for k in (1, 2, 3):
        for _ in range(200):
            G = random_graph_min_degree(rng, k)
            assert G.min_degree() >= k
            cert = delta_1k_partition(G, k)
            total += 1
            good += cert.yes and check_partition(G, und(1, k), cert.witness)[0]
    report(record_property, f"{good}/{total} yes with valid witness (200 graphs per k=1,2,3)")
    assert good == total


def _round_trip(instances, source):
    agree = 0
    for item in instances:
        gadget, expected = source(item)
        agree += exact_decide(gadget.instance, gadget.spec).yes == expected
    return agree


def test_criterion_05_gadget_round_trips(record_property):
    start = time.time()
    formulas = formula_corpus(501)
    nae_formulas = formula_corpus(502, mode=NAE)
    plain = formula_corpus(503, per_verdict=25, non_constant=True)
    hypergraphs = hypergraph_corpus(504)
    path3 = Digraph(3, [(0, 1), (1, 2)])

    def sat(F, mode=SAT):
        return sat_brute(F, mode) is not None

    def lift_random(rng_seed):
        rng = random.Random(rng_seed)
        return [random_instance(rng, rng.randint(1, 5), 0.4, True, False) for _ in range(50)]

    cases = {
        "und-nae": (nae_formulas, lambda F: (und_nae_instance(F, 2, 2), sat(F, NAE))),
        "und-1k": (formulas, lambda F: (und_1k_instance(F, 3), sat(F))),
        "m-of-f": (formulas, lambda F: (acyclic_inout_instance(F), sat(F))),
        "w": (plain, lambda F: (w_instance(F), sat(F))),
        "pattern": (plain, lambda F: (pattern_instance(path3, F), sat(F))),
        "q": (formulas, lambda F: (strong_outin_k1_instance(F, 2), sat(F))),
        "q-prime": (formulas, lambda F: (strong_22_instance(F), sat(F))),
        "lift(q)": (formulas, lambda F: (lift_k1k2(strong_outin_k1_instance(F, 2).instance, 3, 2), sat(F))),
        "lift": (lift_random(505), lambda D: (lift_k1k2(D), exact_decide(D, OUTIN11).yes)),
        "hypergraph": (hypergraphs, lambda H: (hypergraph_instance(H, STRONG), hyper2color_brute(H) is not None)),
        "hypergraph-euler": (hypergraphs,
                             lambda H: (hypergraph_instance(H, EULER), hyper2color_brute(H) is not None)),
    }
    parts, failed = [], []
    for name, (instances, source) in cases.items():
        agree = _round_trip(instances, source)
        parts.append(f"{name} {agree}/{len(instances)}")
        if agree != len(instances):
            failed.append(name)
    # the colouring built from a proper hypergraph colouring is itself a witness
    euler_witness = 0
    colourable = [H for H in hypergraphs if hyper2color_brute(H) is not None]
    for H in colourable:
        gadget = hypergraph_instance(H, EULER)
        P = hypergraph_partition(gadget, H, hyper2color_brute(H))
        euler_witness += check_partition(gadget.instance, EULER, P)[0]
    parts.append(f"euler colouring {euler_witness}/{len(colourable)}")
    elapsed = time.time() - start
    report(record_property, ", ".join(parts) + f", {elapsed:.0f}s")
    assert not failed and euler_witness == len(colourable)
    assert elapsed < 900


def _gadget_blocks(gadget, r):
    """(X, Y, Z) vertex lists of every attached gadget."""
    blocks = []
    for X in itertools.combinations(range(2 * r - 1), r):
        tag = "_" + "_".join(map(str, X))
        Y = [gadget[f"Y{tag}[{t}]"] for t in range(r)]
        Z = [gadget[f"Z{tag}[{t}]"] for t in range(r)]
        blocks.append(([gadget[f"u{v}"] for v in X], Y, Z))
    return blocks


def _monochromatic_x_blocks_strong(D, X, Y, Z):
    """True if some colouring with X monochromatic leaves every Y, Z vertex with in and out arcs across."""
    inner = Y + Z
    for c in (1, 2):
        for rest in itertools.product((1, 2), repeat=len(inner)):
            colour = {v: c for v in X}
            colour.update(zip(inner, rest))
            if all(any(colour[w] != colour[v] for w in D.succ[v])
                   and any(colour[u] != colour[v] for u in D.pred[v]) for v in inner):
                return True
    return False


def test_criterion_06_eulerian_counterexample(record_property):
    start = time.time()
    g2 = eulerian_counterexample(2)
    D2 = g2.instance
    cert = exact_decide(D2, STRONG)
    ok2 = D2.n == 15 and is_eulerian(D2) and is_k_strong(D2, 2) and not cert.yes
    elapsed = time.time() - start
    g3 = eulerian_counterexample(3)
    D3 = g3.instance
    blocks = _gadget_blocks(g3, 3)
    block_strong = sum(is_k_strong(D3.induced(X + Y + Z)[0], 3) for X, Y, Z in blocks)
    block_prop = sum(not _monochromatic_x_blocks_strong(D3, X, Y, Z) for X, Y, Z in blocks)
    ok3 = is_eulerian(D3) and block_strong == len(blocks) and block_prop == len(blocks)
    report(record_property, f"r=2: {D2.n} vertices, eulerian {is_eulerian(D2)}, 2-strong {is_k_strong(D2, 2)}, "
                            f"strong partition {cert.answer} ({cert.trace['nodes']} nodes, {elapsed:.1f}s); "
                            f"r=3: {D3.n} vertices, eulerian {is_eulerian(D3)}, 3-strong gadgets "
                            f"{block_strong}/{len(blocks)}, monochromatic X blocked {block_prop}/{len(blocks)}")
    assert ok2 and ok3
    assert elapsed < 60


def random_connected_graph(rng, n):
    while True:
        p = rng.choice((0.3, 0.5, 0.8))
        G = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])
        if is_connected(G):
            return G


def test_criterion_07_max_cut_connectivity(record_property):
    rng = random.Random(707)
    good = 0
    for _ in range(200):
        G = random_connected_graph(rng, rng.randint(2, 10))
        B = bipartite_subdigraph(G, max_cut_partition(G))
        good += edge_connectivity(B) >= edge_connectivity(G) // 2
    report(record_property, f"{good}/200 graphs with crossing edge-connectivity >= half (rounded down)")
    assert good == 200


def test_criterion_08_half_degree(record_property):
    rng = random.Random(808)
    good = 0
    most_flips = 0.0
    for _ in range(500):
        n = rng.randint(1, 40)
        p = rng.choice((0.05, 0.1, 0.3, 0.6))
        G = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])
        P, flips = half_degree_search(G)
        across = [sum(1 for w in G.adj[v] if P[w] != P[v]) for v in range(n)]
        ok = all(across[v] >= math.ceil(G.degree(v) / 2) for v in range(n)) and flips <= len(G.edges)
        good += ok
        if G.edges:
            most_flips = max(most_flips, flips / len(G.edges))
    report(record_property, f"{good}/500 graphs valid, largest flips/|E| ratio {most_flips:.2f}")
    assert good == 500


def test_criterion_09_out_out_11(record_property, classes):
    checked = mismatches = 0
    for n, C in classes.items():
        verdicts = class_verdicts(C, OUTOUT11)
        for mask in range(len(C.masks)):
            D = digraph_from_mask(n, mask)
            cert = outdeg11_decide(D)
            checked += 1
            mismatches += cert.yes != verdicts[int(C.canon[mask])].yes
            if cert.yes:
                mismatches += not check_partition(D, OUTOUT11, cert.witness)[0]
    report(record_property, f"{checked - mismatches}/{checked} labeled digraphs n<=5 agree")
    assert mismatches == 0


def random_digraph_no_isolated(rng):
    n = rng.randint(2, 30)
    p = rng.choice((0.5 / n, 1.0 / n, 2.0 / n, 0.2))
    arcs = {(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p}
    touched = {v for a in arcs for v in a}
    for v in range(n):
        if v not in touched:
            w = rng.choice([w for w in range(n) if w != v])
            arcs.add((v, w) if rng.random() < 0.5 else (w, v))
            touched |= {v, w}
    return Digraph(n, arcs)


def test_criterion_10_out_total_11(record_property):
    rng = random.Random(1010)
    good = 0
    for _ in range(1000):
        D = random_digraph_no_isolated(rng)
        good += check_partition(D, out_total(1, 1), out_total_partition(D))[0]
    report(record_property, f"{good}/1000 random digraphs without isolated vertices, n<=30")
    assert good == 1000


def test_criterion_11_nebula_duality(record_property, classes):
    checked = good = 0
    for n, C in classes.items():
        verdicts = class_verdicts(C, OUTIN11)
        for mask in range(len(C.masks)):
            cert = verdicts[int(C.canon[mask])]
            if not cert.yes:
                continue
            D = digraph_from_mask(n, mask)
            P = TwoPartition(C.transport(mask, cert.witness.colors))
            nebula = partition_to_nebula(D, P)
            checked += 1
            good += nebula.spans(D) and check_partition(D, OUTIN11, nebula_to_partition(D, nebula))[0]
    report(record_property, f"{good}/{checked} yes-digraphs n<=5 round trip")
    assert good == checked

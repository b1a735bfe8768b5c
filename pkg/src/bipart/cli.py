"""Command-line front end.

Exit codes: ``decide`` 0 yes / 1 no; ``verify`` 0 valid / 1 violations;
``fuzz`` 0 all agree / 1 disagreement; every command 2 on errors and
resource overruns.
"""
from __future__ import annotations

import argparse
import random
import sys

from . import gadgets, io
from .directed import inout11_strong_decide, outdeg11_decide, outtotal11_decide
from .errors import InvalidInput, ResourceExceeded
from .graphs import Digraph, Graph, TwoPartition, is_strong
from .oracle import Certificate, Kind, PartitionSpec, check_compatible, check_partition, exact_decide
from .undirected import delta_12_decide, delta_1k_partition

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


class NoPolyRoute(InvalidInput):
    """No polynomial algorithm covers this spec on this instance."""


def _trivial(instance, spec: PartitionSpec) -> Certificate | None:
    # a part whose demand is 0 can take every vertex
    if not spec.kind.has_degrees or (spec.k1 and spec.k2):
        return None
    colour = 1 if spec.k1 == 0 else 2
    return Certificate(True, TwoPartition((colour,) * instance.n))


def poly_decide(instance, spec: PartitionSpec) -> Certificate:
    """Route ``spec`` to a polynomial algorithm or raise :class:`NoPolyRoute`."""
    check_compatible(instance, spec)
    if spec.pins:
        raise NoPolyRoute("polynomial mode does not support pinned vertices")
    cert = _trivial(instance, spec)
    if cert is not None:
        return cert
    k1, k2 = spec.k1, spec.k2
    if spec.kind is Kind.UND and 1 in (k1, k2):
        k, swap = (k2, False) if k1 == 1 else (k1, True)
        if k == 2:
            cert = delta_12_decide(instance)
        elif k == 1 or instance.min_degree() >= k or instance.min_degree() == 0:
            cert = delta_1k_partition(instance, k)
        else:
            raise NoPolyRoute(f"no polynomial algorithm for und 1 {k} when the minimum degree is below {k}")
        if swap and cert.witness is not None:
            cert.witness = cert.witness.swapped()
        return cert
    if (k1, k2) == (1, 1):
        if spec.kind is Kind.OUT_OUT:
            return outdeg11_decide(instance)
        if spec.kind is Kind.OUT_TOTAL:
            return outtotal11_decide(instance)
        if spec.kind is Kind.OUT_IN:
            if not is_strong(instance):
                raise NoPolyRoute("out-in 1 1 has a polynomial algorithm only for strong digraphs")
            return inout11_strong_decide(instance)
    raise NoPolyRoute(f"no polynomial algorithm for {spec}")


def _parse_pins(items) -> dict[int, int]:
    pins = {}
    for item in items or ():
        try:
            v, c = item.split("=")
            pins[int(v)] = int(c)
        except ValueError:
            raise InvalidInput(f"bad pin {item!r}, expected v=1 or v=2") from None
    return pins


def _load_instance(path, strong: bool = False):
    instance = io.parse_edge_list(io.read_text(path))
    if strong and not (isinstance(instance, Digraph) and is_strong(instance)):
        raise InvalidInput(f"{path} is not a strong digraph")
    return instance


def cmd_decide(args) -> int:
    instance = _load_instance(args.file, args.strong)
    spec = PartitionSpec.parse(args.spec, _parse_pins(args.pin))
    if args.mode == "poly":
        cert = poly_decide(instance, spec)
    else:
        cert = exact_decide(instance, spec)
    sys.stdout.write(io.format_certificate(cert))
    return EXIT_YES if cert.yes else EXIT_NO


def cmd_verify(args) -> int:
    instance = _load_instance(args.file)
    spec = PartitionSpec.parse(args.spec, _parse_pins(args.pin))
    P = io.parse_partition(io.read_text(args.partition), instance.n)
    ok, violations = check_partition(instance, spec, P)
    if ok:
        print("ok")
        return EXIT_YES
    for line in violations:
        print(line)
    return EXIT_NO


GADGETS = ("und-nae", "und-1k", "m-of-f", "w", "w-prime", "pattern", "q", "q-prime",
           "lift", "gr", "euler-counterexample", "hypergraph")


def _need(value, flag: str, name: str):
    if value is None:
        raise InvalidInput(f"gadget {name} needs {flag}")
    return value


def build_gadget(args) -> gadgets.Gadget:
    name = args.name
    cnf = lambda: io.parse_dimacs(io.read_text(_need(args.cnf, "--cnf", name)))
    if name == "und-nae":
        k1 = args.k1 or 2
        return gadgets.und_nae_instance(cnf(), k1, args.k2 or k1)
    if name == "und-1k":
        return gadgets.und_1k_instance(cnf(), args.k or 3)
    if name == "m-of-f":
        return gadgets.acyclic_inout_instance(cnf())
    if name == "w":
        return gadgets.w_instance(cnf())
    if name == "w-prime":
        return gadgets.w_prime_instance(cnf())
    if name == "pattern":
        H = _load_instance(_need(args.input, "--input", name))
        if not isinstance(H, Digraph):
            raise InvalidInput("pattern must be a digraph")
        return gadgets.pattern_instance(H, cnf())
    if name == "q":
        return gadgets.strong_outin_k1_instance(cnf(), args.k1 or 2)
    if name == "q-prime":
        return gadgets.strong_22_instance(cnf(), repair=not args.bare)
    if name == "lift":
        D = _load_instance(_need(args.input, "--input", name))
        if not isinstance(D, Digraph):
            raise InvalidInput("lift needs a digraph")
        return gadgets.lift_k1k2(D, args.k1 or 2, args.k2 or 2)
    if name == "gr":
        host = _load_instance(_need(args.input, "--input", name))
        if not isinstance(host, Digraph):
            raise InvalidInput("gr needs a digraph host")
        X = [int(v) for v in _need(args.x, "--x", name).split(",")]
        return gadgets.gadget_gr(host, X)
    if name == "euler-counterexample":
        return gadgets.eulerian_counterexample(_need(args.r, "--r", name))
    if name == "hypergraph":
        H = io.parse_hypergraph(io.read_text(_need(args.hyper, "--hyper", name)))
        spec = gadgets.EULER if args.euler else gadgets.STRONG
        return gadgets.hypergraph_instance(H, spec)
    raise InvalidInput(f"unknown gadget {name}")


def cmd_gadget(args) -> int:
    g = build_gadget(args)
    with open(args.out, "w") as fh:
        fh.write(io.format_edge_list(g.instance))
    io.write_labels(f"{args.out}.labels.json", g.labels)
    pins = " ".join(f"--pin {v}={c}" for v, c in g.spec.pins)
    print(f"wrote {args.out}: {g.instance.n} vertices; decide with --spec '{g.spec}' {pins}".rstrip())
    return EXIT_YES


def parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise InvalidInput(f"bad range {text!r}, expected A..B") from None
    if not 0 <= lo <= hi:
        raise InvalidInput(f"bad range {text!r}")
    return lo, hi


def random_instance(rng: random.Random, n: int, p: float, directed: bool, strong: bool):
    """Erdos-Renyi instance; strong digraphs by rejection, falling back to an added spanning cycle."""
    if not directed:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
        return Graph(n, edges)
    for _ in range(50):
        D = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])
        if not strong or is_strong(D):
            return D
    order = list(range(n))
    rng.shuffle(order)
    cycle = list(zip(order, order[1:] + order[:1])) if n >= 2 else []
    return Digraph(n, set(D.arcs) | set(cycle))


def cmd_fuzz(args) -> int:
    spec = PartitionSpec.parse(args.spec)
    if spec.pins:
        raise InvalidInput("fuzz does not take pins")
    lo, hi = parse_range(args.n)
    rng = random.Random(args.seed)
    agree = overruns = skipped = 0
    for trial in range(args.trials):
        n = rng.randint(lo, hi)
        p = (0.2, 0.4)[trial % 2]
        instance = random_instance(rng, n, p, not spec.kind.undirected, args.strong)
        try:
            fast = poly_decide(instance, spec)
            slow = exact_decide(instance, spec)
        except NoPolyRoute:
            skipped += 1
            continue
        except ResourceExceeded:
            overruns += 1
            continue
        if fast.yes != slow.yes:
            print(f"disagreement on trial {trial}: poly {fast.answer}, exact {slow.answer}")
            sys.stdout.write(io.format_edge_list(instance))
            return EXIT_NO
        agree += 1
    checked = args.trials - overruns - skipped
    print(f"{agree}/{checked} agree")
    if overruns:
        print(f"{overruns} resource overruns")
    if skipped:
        print(f"{skipped} skipped without a polynomial route")
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bipart", description="2-partition laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide a partition spec on an instance")
    p.add_argument("file")
    p.add_argument("--spec", required=True)
    p.add_argument("--mode", choices=("poly", "exact"), default="exact")
    p.add_argument("--pin", action="append", metavar="V=C")
    p.add_argument("--strong", action="store_true", help="reject inputs that are not strong digraphs")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", help="check a partition file against a spec")
    p.add_argument("file")
    p.add_argument("--spec", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--pin", action="append", metavar="V=C")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gadget", help="build a reduction instance")
    p.add_argument("name", choices=GADGETS)
    p.add_argument("--cnf")
    p.add_argument("--hyper")
    p.add_argument("--input", help="digraph file for pattern, lift and gr")
    p.add_argument("--x", help="comma-separated vertex set for gr")
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--bare", action="store_true", help="q-prime without the clause repair arcs")
    p.add_argument("--euler", action="store_true", help="hypergraph instance for euler-b-semi1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("fuzz", help="cross-check polynomial routes against exact search")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", default="4..8")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strong", action="store_true")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInput, ResourceExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
Command-line front end for the Leavitt path algebra toolkit.

    python cli.py closure --graph g1 --set w
    python cli.py nf --graph g3 --expr "f* f + g g*"
    python cli.py ideal-member --graph g3 --gens "v + f" --target v --bound 2

Exit status: 0 on success, 1 on an input or precondition error, 2 on a
usage error.
"""
import sys
import json
import logging
import argparse
from dataclasses import dataclass
from functools import cached_property

import config
from closures import closure, format_set, hs_lattice, lattice_to_dot, noetherian_report, trace_report
from fixtures import resolve
from graph_core import cp_factorize, csp_enumerate, enumerate_cycles, graph_to_dot
from ideals import IdealPresentation, canonical_generators, graded_vertex_trace, membership_bounded
from leavitt import Field, LeavittError
from lpa_algebra import STRATEGIES, LeavittAlgebra, parse_expr, render

logger = logging.getLogger(__name__)

DOT_COMMANDS = ("lattice", "export-dot")


class UsageError(LeavittError):
    pass


@dataclass
class Session:
    """Resolved graph, field and output options for one invocation."""
    graph: object
    field: Field
    bound: int
    format: str
    strategy: str = "leftmost"
    seed: int = None

    @cached_property
    def algebra(self):
        return LeavittAlgebra(self.graph, self.field)

    def parse(self, text):
        return parse_expr(text, self.algebra, strategy=self.strategy, seed=self.seed)

    def ideal(self, gens):
        texts = [t.strip() for t in gens.split(";") if t.strip()]
        if not texts:
            raise UsageError("--gens needs at least one generator")
        return IdealPresentation.parse(self.algebra, texts, self.bound)


def _split_set(text):
    if text is None:
        return []
    return [v.strip() for v in text.split(",") if v.strip()]


def _emit(session, payload, text):
    if session.format == "json":
        return json.dumps(payload, indent=2)
    return text


def _certificate_lines(cert, names):
    lines = []
    for a, i, b, c in cert.records():
        lines.append(f"  {c} · {a} · ({names[i]}) · {b}")
    return lines


def cmd_closure(session, args):
    graph = session.graph
    trace = closure(graph, _split_set(args.set))
    return _emit(session, trace.to_dict(), trace_report(trace))


def cmd_lattice(session, args):
    lattice = hs_lattice(session.graph)
    if session.format == "dot":
        return lattice_to_dot(lattice)
    lines = [f"members ({lattice.size}):"]
    lines += [f"  {format_set(m)}" for m in lattice.members]
    lines.append("longest chain: " + " < ".join(format_set(m) for m in lattice.longest_chain))
    return _emit(session, lattice.to_dict(), "\n".join(lines))


def cmd_noetherian(session, args):
    sequence = _split_set(args.set) or None
    report = noetherian_report(session.graph, sequence=sequence)
    lines = [report.summary()]
    lines.append("chain: " + " < ".join(format_set(m) for m in report.longest_chain))
    if report.growth:
        lines.append("growth: " + " <= ".join(format_set(m) for m in report.growth))
    return _emit(session, report.to_dict(), "\n".join(lines))


def cmd_nf(session, args):
    if len(args.expr) != 1:
        raise UsageError("nf takes exactly one --expr")
    x = session.parse(args.expr[0])
    return _emit(session, {"normal_form": render(x)}, render(x))


def cmd_eq(session, args):
    if len(args.expr) != 2:
        raise UsageError("eq takes exactly two --expr values")
    x, y = (session.parse(e) for e in args.expr)
    equal = x == y
    payload = {"equal": equal, "left": render(x), "right": render(y)}
    text = "\n".join(["equal" if equal else "not equal", f"  {render(x)}", f"  {render(y)}"])
    return _emit(session, payload, text)


def cmd_csp(session, args):
    vertices = _split_set(args.set)
    if len(vertices) != 1:
        raise UsageError("csp takes one vertex in --set")
    paths = csp_enumerate(session.graph, vertices[0], args.max_len)
    payload = {"vertex": vertices[0], "max_len": args.max_len, "paths": [list(p.edges) for p in paths]}
    return _emit(session, payload, "\n".join(str(p) for p in paths))


def cmd_cycles(session, args):
    cycles = enumerate_cycles(session.graph)
    payload = [{"vertex": c.source, "edges": list(c.edges)} for c in cycles]
    return _emit(session, payload, "\n".join(f"{c} @ {c.source}" for c in cycles))


def cmd_factorize(session, args):
    if len(args.expr) != 1:
        raise UsageError("factorize takes one --expr with space-separated edge ids")
    path = session.graph.path(args.expr[0].split())
    factors = cp_factorize(session.graph, path)
    payload = {"path": list(path.edges), "factors": [list(f.edges) for f in factors]}
    return _emit(session, payload, " | ".join(str(f) for f in factors))


def cmd_ideal_canon(session, args):
    ideal = session.ideal(args.gens)
    result = canonical_generators(ideal)
    K = session.field
    lines = []
    for c, element in zip(result.generators, result.elements()):
        lines.append(f"{render(element)}    [{c.describe(K)}]")
    lines.append(f"certificate size: {result.certificate_size}")
    return _emit(session, result.to_dict(), "\n".join(lines))


def cmd_ideal_member(session, args):
    if args.target is None:
        raise UsageError("ideal-member needs --target")
    ideal = session.ideal(args.gens)
    target = session.parse(args.target)
    cert = membership_bounded(ideal, target)
    if cert.found:
        lines = [f"Found at bound {cert.bound}: {render(target)} ="]
        lines += _certificate_lines(cert, [render(x) for x in ideal.generators])
    else:
        suffix = " (complete: not a member)" if cert.complete else ""
        lines = [cert.verdict + suffix]
    return _emit(session, cert.to_dict(), "\n".join(lines))


def cmd_graded_trace(session, args):
    seeds = _split_set(args.set)
    H = closure(session.graph, seeds).closure
    trace = graded_vertex_trace(session.algebra, H, session.bound, seeds=seeds)
    lines = [f"H = {format_set(H)}"]
    lines += [f"{v}: {cert.verdict}" for v, cert in trace.verdicts.items()]
    names = list(trace.seeds)
    for w, cert in trace.closure_certificates.items():
        lines.append(f"{w} =")
        lines += _certificate_lines(cert, names)
    lines.append("consistent: " + ("yes" if trace.consistent else "no"))
    return _emit(session, trace.to_dict(), "\n".join(lines))


def cmd_export_dot(session, args):
    if session.format == "json":
        raise UsageError("export-dot writes DOT only")
    return graph_to_dot(session.graph)


COMMANDS = {
    "closure": cmd_closure,
    "lattice": cmd_lattice,
    "noetherian": cmd_noetherian,
    "nf": cmd_nf,
    "eq": cmd_eq,
    "csp": cmd_csp,
    "cycles": cmd_cycles,
    "factorize": cmd_factorize,
    "ideal-canon": cmd_ideal_canon,
    "ideal-member": cmd_ideal_member,
    "graded-trace": cmd_graded_trace,
    "export-dot": cmd_export_dot,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True,
                        help="Graph JSON file, fixture name (g1, g3, g4, g6, g7, g8), line:N or clock:N")
    common.add_argument("--field", default=config.FIELD, help="Coefficient field: q or gf:P (default: %(default)s)")
    common.add_argument("--bound", type=int, default=config.MEMBERSHIP_BOUND,
                        help="Membership bound N (default: %(default)s)")
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")
    common.add_argument("--logfile", default=None, help="Log file path (default: stderr)")
    common.add_argument("--log-level", default=config.LOG_LEVEL)

    parser = argparse.ArgumentParser(prog="lpa", description="Exact computations in Leavitt path algebras of finite graphs")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("closure", "graded-trace", "csp"):
            p.add_argument("--set", required=True, help="Comma-separated vertex ids")
        if name == "csp":
            p.add_argument("--max-len", type=int, default=6, help="Longest closed simple path to list (default: %(default)s)")
        elif name == "noetherian":
            p.add_argument("--set", default=None, help="Comma-separated vertex sequence for a growth chain")
        if name in ("nf", "eq", "factorize"):
            p.add_argument("--expr", action="append", required=True)
        if name in ("nf", "eq", "ideal-member"):
            p.add_argument("--strategy", choices=STRATEGIES, default="leftmost")
            p.add_argument("--seed", type=int, default=None, help="Seed for --strategy random")
        if name in ("ideal-canon", "ideal-member"):
            p.add_argument("--gens", required=True, help="';'-separated generator expressions")
        if name == "ideal-member":
            p.add_argument("--target", required=True)
    return parser


def _configure_logging(args):
    level = getattr(logging, str(args.log_level).upper(), logging.WARNING)
    logging.basicConfig(
        filename=args.logfile,
        level=level,
        format='%(asctime)s [%(levelname)s] %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        force=True
    )


def run(argv=None, out=None):
    """Run one command; returns the exit status."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    _configure_logging(args)
    if args.format == "dot" and args.command not in DOT_COMMANDS:
        print(f"error: --format dot is only available for {', '.join(DOT_COMMANDS)}", file=sys.stderr)
        return 2
    try:
        session = Session(
            graph=resolve(args.graph),
            field=Field.parse(args.field),
            bound=args.bound,
            format=args.format,
            strategy=getattr(args, "strategy", "leftmost"),
            seed=getattr(args, "seed", None),
        )
        text = COMMANDS[args.command](session, args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except LeavittError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(text.rstrip("\n"), file=out)
    return 0


def main():
    return run()


if __name__ == "__main__":
    sys.exit(main() or 0)

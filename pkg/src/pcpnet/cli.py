"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse/semantic/model error,
3 size guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .aggregation import aggregate, as_pcpnet, condorcet_winners, find_condorcet, is_condorcet
from .dominance import completion_dominance_exists, det_dominance, dominance_prob_fpt
from .errors import ParseError, PCPNetError, SemanticError, TooLargeForOracle
from .generate import SHAPES, generate
from .io import format_outcome, load_net, parse_outcome, serialize_net
from .model import IncompleteCPNet, sample_nets
from .oracle import dominance_prob_oracle, entails_oracle, enumerate_completions
from .optimization import det_optimal, map_optimal, optimal_prob

EXIT_OK, EXIT_USAGE, EXIT_MODEL, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def format_prob(p) -> str:
    return format(float(p), ".12g")


def _emit(args, query, result, method, slots, text, **extra):
    if getattr(args, "json", False):
        payload = {"query": query, "result": result, "method": method, "slots": slots}
        payload.update(extra)
        print(json.dumps(payload))
    else:
        print(text)


def _outcome(doc, text):
    try:
        return parse_outcome(doc.structure, text)
    except PCPNetError as e:
        raise UsageError(str(e)) from None


def cmd_validate(args):
    doc = load_net(args.file)
    s = doc.structure
    absent = len(doc.model.absent) if isinstance(doc.model, IncompleteCPNet) else 0
    extra = f" absent={absent}" if doc.kind == "incomplete" else ""
    print(f"ok kind={doc.kind} vars={s.n} slots={s.n_slots} shape={s.shape_class}{extra}")


def cmd_dominance(args):
    doc = load_net(args.file)
    model, s = doc.model, doc.structure
    o = _outcome(doc, args.from_)
    o2 = _outcome(doc, args.to)
    method = args.method
    if doc.kind == "pcp":
        method = method or ("fpt" if s.is_forest else "oracle")
        if method == "fpt":
            p = dominance_prob_fpt(model, o, o2)
        elif method == "oracle":
            p = dominance_prob_oracle(model, o, o2, threads=args.threads)
        else:
            raise UsageError(f"method {method} does not apply to a pcpnet (use fpt or oracle)")
        _emit(args, "dominance", float(p), method, s.n_slots, format_prob(p))
        return
    if doc.kind == "det":
        method = method or ("linear" if s.is_forest else "oracle")
        if method == "linear":
            ans = det_dominance(model, o, o2)
        elif method == "oracle":
            ans = entails_oracle(model, o, o2)
        else:
            raise UsageError(f"method {method} does not apply to a cpnet (use linear or oracle)")
    else:
        method = method or "completion"
        if method == "completion":
            ans = completion_dominance_exists(model, o, o2)
        elif method == "oracle":
            ans = any(entails_oracle(n, o, o2) for n in enumerate_completions(model))
        elif method == "linear":
            ans = det_dominance(model, o, o2)
        else:
            raise UsageError(f"method {method} does not apply to an incomplete cpnet")
    _emit(args, "dominance", ans, method, s.n_slots, "true" if ans else "false")


def cmd_optimal(args):
    doc = load_net(args.file)
    model, s = doc.model, doc.structure
    if doc.kind == "pcp":
        if args.outcome:
            p = optimal_prob(model, _outcome(doc, args.outcome))
            _emit(args, "optimal", p, "product", s.n_slots, format_prob(p))
        else:
            o, p = map_optimal(model)
            text = format_outcome(s, o)
            _emit(args, "optimal", text, "map", s.n_slots, f"{text} {format_prob(p)}", probability=p)
        return
    best = det_optimal(model)
    if args.outcome:
        ans = _outcome(doc, args.outcome) == best
        _emit(args, "optimal", ans, "sweep", s.n_slots, "true" if ans else "false")
    else:
        text = format_outcome(s, best)
        _emit(args, "optimal", text, "sweep", s.n_slots, text)


def cmd_aggregate(args):
    nets = []
    for path in args.files:
        doc = load_net(path)
        if doc.kind != "det":
            raise SemanticError(None, f"{path}: aggregate needs complete cpnet files, got {doc.kind}")
        nets.append(doc.model)
    text = serialize_net(aggregate(nets))
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _population_model(doc):
    if doc.kind == "incomplete":
        raise SemanticError(None, "condorcet needs a pcpnet or a complete cpnet")
    return as_pcpnet(doc.model)


def cmd_condorcet(args):
    doc = load_net(args.file)
    pn = _population_model(doc)
    s = doc.structure
    if args.outcome:
        ans = is_condorcet(pn, _outcome(doc, args.outcome))
        _emit(args, "condorcet", ans, "swap", s.n_slots, "true" if ans else "false")
    elif args.all:
        winners = [format_outcome(s, o) for o in condorcet_winners(pn)]
        _emit(args, "condorcet", winners, "scan", s.n_slots, "\n".join(winners) or "none")
    else:
        o = find_condorcet(pn)
        text = format_outcome(s, o) if o is not None else None
        _emit(args, "condorcet", text, "scan", s.n_slots, text or "none")


def cmd_sample(args):
    doc = load_net(args.file)
    if doc.kind != "pcp":
        raise SemanticError(None, "sample needs a pcpnet file")
    if args.count < 1:
        raise UsageError("--count must be positive")
    nets = sample_nets(doc.model, args.seed, args.count)
    sys.stdout.write("\n".join(serialize_net(n) for n in nets))


def cmd_gen(args):
    if args.vars < 1:
        raise UsageError("--vars must be positive")
    sys.stdout.write(serialize_net(generate(args.vars, args.shape, args.kind, args.seed)))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pcpnet", description="Probabilistic CP-nets over binary variables.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="parse and check a net file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    d = sub.add_parser("dominance", help="probability or truth of FROM > TO")
    d.add_argument("file")
    d.add_argument("--from", dest="from_", required=True, metavar="OUT")
    d.add_argument("--to", required=True, metavar="OUT")
    d.add_argument("--method", choices=("fpt", "linear", "oracle", "completion"))
    d.add_argument("--threads", type=int, default=1)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_dominance)

    o = sub.add_parser("optimal", help="most probable optimum, or the chance that OUT is optimal")
    o.add_argument("file")
    o.add_argument("--outcome", metavar="OUT")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_optimal)

    a = sub.add_parser("aggregate", help="summarise cpnet files as one pcpnet")
    a.add_argument("files", nargs="+", metavar="FILE")
    a.add_argument("-o", "--output", required=True)
    a.set_defaults(func=cmd_aggregate)

    c = sub.add_parser("condorcet", help="hypercube-wise Condorcet winners")
    c.add_argument("file")
    group = c.add_mutually_exclusive_group()
    group.add_argument("--outcome", metavar="OUT")
    group.add_argument("--all", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_condorcet)

    sm = sub.add_parser("sample", help="draw deterministic nets from a pcpnet")
    sm.add_argument("file")
    sm.add_argument("--seed", type=int, required=True)
    sm.add_argument("--count", type=int, default=1)
    sm.set_defaults(func=cmd_sample)

    g = sub.add_parser("gen", help="write a seeded random net")
    g.add_argument("--vars", type=int, required=True)
    g.add_argument("--shape", choices=SHAPES, required=True)
    g.add_argument("--kind", choices=("det", "pcp"), required=True)
    g.add_argument("--seed", type=int, required=True)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        args.func(args)
    except SystemExit as e:  # --help / --version
        return e.code if isinstance(e.code, int) else EXIT_OK
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TooLargeForOracle as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (ParseError, SemanticError, PCPNetError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MODEL
    except OSError as e:
        print(f"error: {e.filename}: {e.strerror}", file=sys.stderr)
        return EXIT_MODEL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

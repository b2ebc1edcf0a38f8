"""Command-line entry point: padic-loci <command> [options].

Exit codes: 0 success, 1 other failure, 2 invalid input subset, 3 complexity
bound violated, 4 oracle protocol error, 5 resource limit or unsupported field.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from . import crystalline as cr
from . import disks as dk
from . import generate as gen
from . import padic as pa
from . import reconstruction as rc
from . import subsets as ss
from . import wire
from .oracles import SyntheticOracle

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_BOUND = 3
EXIT_PROTOCOL = 4
EXIT_RESOURCE = 5


class UsageError(Exception):
    pass


def parse_base(text):
    """p:f:e[:zeta] (trailing parts optional) -> FieldDescriptor."""
    parts = text.split(":")
    if not 1 <= len(parts) <= 4:
        raise argparse.ArgumentTypeError("base must look like p:f:e[:zeta]")
    try:
        nums = [int(x) for x in parts]
        return pa.FieldDescriptor(*nums)
    except (ValueError, pa.PadicError) as exc:
        raise argparse.ArgumentTypeError("bad base %r: %s" % (text, exc))


def parse_fraction(text):
    try:
        x = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a rational number: %r" % text)
    return x


def positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not an integer: %r" % text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _note(msg):
    print(msg, file=sys.stderr)


def load_subset(path):
    """Parse and validate a subset file; invalid input raises InvalidSubset."""
    try:
        X = cr.locus_from_json(json.loads(_read_text(path)))
    except json.JSONDecodeError as exc:
        raise ss.InvalidSubset(["not JSON: %s" % exc])
    except ss.SchemaError as exc:
        raise ss.InvalidSubset([str(exc)])
    violations = ss.validate(X)
    if violations:
        raise ss.InvalidSubset(violations)
    return X


def _random_subset(p, seed):
    return gen.random_subset(random.Random(seed), p)


# commands

def cmd_complexity(args):
    if args.random is not None:
        X = _random_subset(args.random, args.seed)
    else:
        X = load_subset(args.file)
    base = args.base or X.base
    total = ss.complexity(X, base)
    lines = [str(total)]
    parts = ss.irreducible_decomposition(X, base)
    for k, (part, c) in enumerate(zip(parts, ss.complexity_by_parts(X, base)), 1):
        F = ss.component_field(part.components[0], base)
        lines.append("part %d: complexity %d, %d component(s), field %s"
                     % (k, c, len(part.components), F.label))
    _write_text(None, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_budget(args):
    b = rc.budget(args.base, args.m, args.epsilon)
    header = "m     " + " ".join("%8d" % k for k in range(1, args.m + 1))
    lines = [header]
    for name, row in b.rows():
        lines.append("%-6s" % name + " ".join("%8d" % v for v in row))
    lines.append("degree cap %d" % b.degree_cap)
    _write_text(None, "\n".join(lines) + "\n")
    return EXIT_OK


def _open_oracle(args):
    try:
        return wire.open_oracle(args.oracle, args.epsilon, args.timeout)
    except OSError as exc:
        raise wire.ProtocolError("cannot reach oracle: %s" % exc)


def _log_lines(log):
    out = []
    for e in log.entries:
        out.append(json.dumps({"point": e["point"].to_json(), "answer": e["answer"],
                               "stage": e["stage"]}, sort_keys=True, separators=(",", ":")))
    return "".join(line + "\n" for line in out)


def cmd_reconstruct(args):
    oracle = _open_oracle(args)
    try:
        epsilon = args.epsilon if args.epsilon is not None else oracle.epsilon
        if epsilon is None:
            raise UsageError("--epsilon is required for this oracle")
        res = rc.run_reconstruction(oracle, args.base, args.m, epsilon,
                                    args.max_queries, args.jobs)
    finally:
        oracle.close()
    _write_text(args.out, ss.dumps(res.subset, indent=2) + "\n")
    if args.log:
        _write_text(args.log, _log_lines(res.log))
    _note("complexity %d, %d queries, %d round(s), max degree %d"
          % (ss.complexity(res.subset, args.base), res.query_count, len(res.rounds),
             res.log.max_degree()))
    return EXIT_OK


def cmd_fixtures(args):
    suite = cr.fixture_suite()
    if args.id:
        suite = [fx for fx in suite if fx.id in args.id]
        if not suite:
            raise UsageError("no fixture with id %s" % ", ".join(args.id))
    failed = 0
    lines = []
    for fx in suite:
        rep = cr.verify_fixture(fx)
        parts = " + ".join(str(c) for c in rep.get("parts", []))
        status = "ok" if rep["ok"] else "MISMATCH"
        line = "%-14s p=%d k=%d %-12s complexity %s (%s) bound %s %s" % (
            fx.id, fx.problem.p, fx.problem.k, cr.rbar_label(fx.problem.rbar),
            rep.get("complexity", "?"), parts, rep.get("bound", "?"), status)
        if args.reconstruct and rep["ok"]:
            res = rc.run_reconstruction(fx.oracle(), fx.problem.base, fx.complexity, fx.epsilon,
                                        args.max_queries, args.jobs)
            same = res.subset == fx.locus
            line += ", reconstructed %s in %d queries" % ("exactly" if same else "WRONGLY",
                                                          res.query_count)
            rep["ok"] = same
        if not rep["ok"]:
            failed += 1
            for msg in rep["problems"]:
                _note(msg)
        lines.append(line)
    _write_text(None, "\n".join(lines) + "\n")
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_oracle_serve(args):
    if args.random is not None:
        X = _random_subset(args.random, args.seed)
        _note("serving random subset over %s from seed %d" % (X.base, args.seed))
    elif args.file:
        X = load_subset(args.file)
    else:
        raise UsageError("give a subset file or --random P")
    if args.dump:
        _write_text(args.dump, ss.dumps(X, indent=2) + "\n")
    oracle = SyntheticOracle(X, args.epsilon)
    if args.listen:
        host, _, port = args.listen.rpartition(":")
        server = wire.OracleServer(oracle, host or "127.0.0.1", int(port))
        _note("listening on %s" % server.address)
        sys.stderr.flush()
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            server.server_close()
        count = server.count
    else:
        count = wire.serve_stream(oracle, sys.stdin, sys.stdout)
    _note("answered %d request(s)" % count)
    return EXIT_OK


def cmd_find_point(args):
    try:
        obj = json.loads(_read_text(args.file))
        D = dk.Disk.from_json(obj)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ss.InvalidSubset(["bad disk: %s" % exc])
    base = args.base or pa.FieldDescriptor(D.center.field.p)
    x = dk.find_point(D, base)
    out = {"point": x.to_json(), "degree": pa.degree_over(x, base),
           "field": x.field.to_json()}
    _write_text(None, json.dumps(out, sort_keys=True) + "\n")
    return EXIT_OK


# parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=parse_base, help="base field p:f:e[:zeta]")
    common.add_argument("--seed", type=int, default=0, help="seed for generated subsets")
    common.add_argument("--jobs", type=positive_int, default=1, help="parallel oracle queries")

    parser = argparse.ArgumentParser(prog="padic-loci",
                                     description="Standard subsets of the p-adic line.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complexity", parents=[common], help="complexity of a subset file")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--random", type=int, metavar="P", help="use a random subset over Q_P")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("reconstruct", parents=[common], help="recover a subset from an oracle")
    p.add_argument("--oracle", required=True, help="exec:<cmd> | serve:<host:port> | file:<subset>")
    p.add_argument("--m", type=positive_int, required=True, help="complexity bound")
    p.add_argument("--epsilon", type=parse_fraction, help="locality radius (valuation)")
    p.add_argument("--out", help="where to write the subset (default stdout)")
    p.add_argument("--log", help="where to write the NDJSON query log")
    p.add_argument("--max-queries", type=positive_int, default=rc.DEFAULT_MAX_QUERIES)
    p.add_argument("--timeout", type=float, default=30.0, help="seconds per oracle answer")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("budget", parents=[common], help="query budget tables")
    p.add_argument("--m", type=positive_int, required=True)
    p.add_argument("--epsilon", type=parse_fraction)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("fixtures", parents=[common], help="list and verify the known loci")
    p.add_argument("--id", action="append", help="restrict to this fixture (repeatable)")
    p.add_argument("--reconstruct", action="store_true", help="also reconstruct each locus")
    p.add_argument("--max-queries", type=positive_int, default=rc.DEFAULT_MAX_QUERIES)
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("oracle-serve", parents=[common], help="answer membership queries")
    p.add_argument("file", nargs="?")
    p.add_argument("--random", type=int, metavar="P", help="serve a random subset over Q_P")
    p.add_argument("--dump", help="write the served subset to this file")
    p.add_argument("--listen", metavar="HOST:PORT", help="serve over TCP instead of stdio")
    p.add_argument("--epsilon", type=parse_fraction)
    p.set_defaults(func=cmd_oracle_serve)

    p = sub.add_parser("find-point", parents=[common], help="a small-degree point of a disk")
    p.add_argument("file", nargs="?", default="-", help="disk JSON {center, cut, kind}")
    p.set_defaults(func=cmd_find_point)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "base", None) is None and args.command in ("reconstruct", "budget"):
        parser.error("--base is required for %s" % args.command)
    try:
        return args.func(args)
    except ss.InvalidSubset as exc:
        for msg in exc.violations or [str(exc)]:
            _note("invalid subset: %s" % msg)
        return EXIT_INVALID
    except rc.BoundViolated as exc:
        _note("bound violated: %s" % exc)
        return EXIT_BOUND
    except wire.ProtocolError as exc:
        _note("protocol error: %s" % exc)
        return EXIT_PROTOCOL
    except (rc.ResourceLimit, rc.UnsupportedField) as exc:
        _note("resource limit: %s" % exc)
        return EXIT_RESOURCE
    except UsageError as exc:
        _note("error: %s" % exc)
        return EXIT_FAILURE
    except (OSError, ValueError) as exc:
        _note("error: %s" % exc)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

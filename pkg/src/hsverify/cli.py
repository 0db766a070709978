"""Command-line interface: ``hsverify <command> ...``.

Exit codes: 0 ExactMatch/ComparableBounded, 2 Diverged, 3 Inconclusive,
64 usage or validation error, 1 failed self-test.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from . import quadrature as quad
from .errors import HSError, ParseError
from .hs import Verdict, verify
from .jobs import load_job
from .multiindex import enumerate_degree
from .parser import format_poly, parse_poly
from .report import build_document, convergence_table, emit_report
from .spaces import SourceSpace, SpaceKind, basis_constant_sq

log = logging.getLogger("hsverify")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DIVERGED = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64

VERDICT_EXIT = {
    Verdict.EXACT_MATCH: EXIT_OK,
    Verdict.COMPARABLE_BOUNDED: EXIT_OK,
    Verdict.DIVERGED: EXIT_DIVERGED,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _quad_pair(text):
    try:
        r, a = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected R,A (two integers), got {text!r}") from None
    return r, a


def _write(data: bytes, out: str | None):
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _run_job(args):
    data = Path(args.jobfile).read_bytes()
    job = load_job(data, truncation=args.truncation, quad=args.quad)
    start = time.perf_counter()
    report = verify(job)
    elapsed = time.perf_counter() - start
    log.info("verdict %s in %.3f s", report.verdict.value, elapsed)
    return job, report, (None if args.no_timing else elapsed)


def cmd_verify(args):
    job, report, elapsed = _run_job(args)
    doc = build_document(job, report, elapsed)
    _write(emit_report(doc, args.format), args.out)
    return VERDICT_EXIT[report.verdict]


def cmd_convergence(args):
    job, report, elapsed = _run_job(args)
    _write(convergence_table(build_document(job, report, elapsed)), args.out)
    return VERDICT_EXIT[report.verdict]


def cmd_bases(args):
    src = SourceSpace(SpaceKind(args.space), args.n, args.alpha)
    lines = ["J,degree,basis_constant_sq"]
    for k in range(args.max_degree + 1):
        for J in enumerate_degree(src.n, k):
            label = " ".join(str(j) for j in J)
            lines.append(f"({label}),{k},{format(basis_constant_sq(src, J), '.17g')}")
    _write(("\n".join(lines) + "\n").encode(), None)
    return EXIT_OK


def quad_selftest(betas, n_rad=64, n_ang=128):
    """Yield (name, passed, detail) for the quadrature exactness checks."""
    for beta in betas:
        rule = quad.build_disk_rule(beta, n_rad, n_ang)
        mass = float(np.sum(rule.weights()))
        yield f"mass beta={beta:g}", abs(mass - 1) <= 1e-14, f"|int 1 - 1| = {abs(mass - 1):.3e}"

        j = np.arange(2 * n_rad)
        x, w = rule.radial_nodes, rule.radial_weights
        moments = np.array([np.sum(w * x**jj) for jj in j])
        oracle = np.exp(gammaln(j + 1) + gammaln(beta + 2) - gammaln(j + beta + 2))
        err = float(np.max(np.abs(moments / oracle - 1)))
        yield f"moments beta={beta:g} j<={2 * n_rad - 1}", err <= 1e-12, f"max rel err {err:.3e}"

        pts = rule.points()
        wts = rule.weights()
        worst = 0.0
        for a, b in [(1, 0), (0, 1), (2, 1), (5, 2), (n_ang - 1, 0)]:
            val = np.sum(wts * pts**a * np.conj(pts) ** b)
            worst = max(worst, abs(val))
        yield f"angular beta={beta:g}", worst <= 1e-13, f"max |int z^a conj(z)^b| = {worst:.3e}"


def cmd_quad_selftest(args):
    betas = [args.beta] if args.beta is not None else [-0.5, 0.0, 1.0, 3.0]
    ok = True
    for name, passed, detail in quad_selftest(betas):
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
        ok &= passed
    return EXIT_OK if ok else EXIT_FAILED


def cmd_parse(args):
    p = parse_poly(args.expr, args.m)
    for J, c in p.coeffs.items():
        print(f"{tuple(J)}: {c!r}")
    print(f"# {format_poly(p)}")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="hsverify", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, func, help_ in [
        ("verify", cmd_verify, "run a job file and print the full report"),
        ("convergence", cmd_convergence, "print the (k, S_k, characterization, ratio) table"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("jobfile")
        if name == "verify":
            p.add_argument("--format", choices=["structured", "table"], default="structured")
        p.add_argument("--truncation", type=int, metavar="K")
        p.add_argument("--quad", type=_quad_pair, metavar="R,A")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--no-timing", action="store_true", help="omit wall-clock time (reproducible output)")
        p.set_defaults(func=func)

    p = sub.add_parser("bases", help="dump squared basis constants")
    p.add_argument("--space", required=True, choices=[k.value for k in SpaceKind])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(func=cmd_bases)

    p = sub.add_parser("quad-selftest", help="check quadrature exactness")
    p.add_argument("--beta", type=float)
    p.set_defaults(func=cmd_quad_selftest)

    p = sub.add_parser("parse", help="echo the coefficient map of an expression")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("expr")
    p.set_defaults(func=cmd_parse)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}\n{exc.pointer()}", file=sys.stderr)
        return EXIT_USAGE
    except (HSError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

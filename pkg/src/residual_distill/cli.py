"""Command-line front end.

Subcommands
-----------
curves   rate curves over a grid of singlet fractions, as CSV
toy1     outcome probabilities and yields of the two-copy pure-state example
rug      levels, chordality and root paths of a residual use graph document
verify   run the oracle cross-checks

Exit status: 0 success, 1 verification failure, 2 usage error,
3 validation/parse error, 4 inclusion cycle.
"""
from __future__ import annotations

import argparse
import contextlib
import os
import sys

import numpy as np

from .dw_rates import randomness_curve, toy1_yields
from .entropy import shannon
from .exceptions import CycleError, DomainError, ValidationError
from .gl_protocol import bbpssw_pipeline, gl_pipeline, rate_discrepancies
from .qstate import isotropic
from .rug import enumerate_paths, is_chordal_urug, load_graph, node_indices
from .verify import DEFAULT_SEED, run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_CYCLE = 4

SEED_ENV = "RESIDUAL_DISTILL_SEED"


def fmt(v: float) -> str:
    """Fixed 12-significant-digit rendering, independent of locale."""
    v = float(v)
    if v == 0.0:
        v = 0.0  # drop the sign of -0.0
    return format(v, ".12g")


class UsageError(Exception):
    pass


def curve_rows(protocol: str, f_min: float, f_max: float, points: int,
               r_max: int = 4, mode: str = "corrected"):
    """Header plus data rows for ``curves``; pure function of its arguments."""
    if not 0.0 <= f_min < f_max <= 1.0:
        raise UsageError(f"need 0 <= f-min < f-max <= 1, got [{f_min}, {f_max}]")
    if points < 2:
        raise UsageError("need at least 2 points")
    if r_max < 1:
        raise UsageError("r-max must be at least 1")
    grid = np.linspace(f_min, f_max, points)
    if protocol == "dw":
        header = ["f", "key_rate_raw", "key_rate_clamped", "rand_rate"]
        rows = []
        for f in grid:
            key = 1.0 - shannon(isotropic(f).weights)
            rows.append([f, key, max(key, 0.0), randomness_curve(f)])
        return header, rows
    header = ["f"]
    for r in range(1, r_max + 1):
        header += [f"rate_rand_r{r}", f"key_lb_r{r}"]
    rows = []
    for f in grid:
        s = isotropic(f)
        tr = gl_pipeline(s, r_max, mode) if protocol == "gl" else bbpssw_pipeline(s, r_max)
        row = [f]
        for rand, key in zip(tr.cumulative_rand, tr.cumulative_key):
            row += [rand, key]
        rows.append(row)
    return header, rows


def render_csv(header, rows, comments=()) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    lines += [f"# {c}" for c in comments]
    return "\n".join(lines) + "\n"


def discrepancy_comments(protocol: str, r_max: int) -> list[str]:
    out = []
    for d in rate_discrepancies(r_max):
        if d["protocol"] != protocol:
            continue
        out.append(
            f"discrepancy protocol={protocol} f={fmt(d['f'])} r={d['r']} "
            f"computed={fmt(d['computed'])} reference={fmt(d['reference'])}"
        )
    return out


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        # newline="" keeps LF line endings on every platform
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_curves(args) -> int:
    header, rows = curve_rows(args.protocol, args.f_min, args.f_max, args.points,
                              args.r_max, args.mode)
    comments = [] if args.protocol == "dw" else discrepancy_comments(args.protocol, args.r_max)
    with _open_out(args.output) as fh:
        fh.write(render_csv(header, rows, comments))
    return EXIT_OK


def cmd_toy1(args) -> int:
    y = toy1_yields(args.a_sq)
    header = ["a_sq", "p_ent", "p_00", "p_11", "ebits", "rand_bits", "activity_bits"]
    row = [args.a_sq, y.p_ent, y.p_00, y.p_11, y.ebits, y.rand_bits, y.activity_bits]
    with _open_out(args.output) as fh:
        fh.write(render_csv(header, [row]))
    return EXIT_OK


def cmd_rug(args) -> int:
    g = load_graph(args.path)
    max_len = args.max_len or len(g.nodes)
    idx = node_indices(g)
    lines = ["levels:"]
    for name in g.names:
        lv = g.levels[name]
        tag = f" [{idx[name][0]},{idx[name][1]}]" if name in idx else ""
        lines.append(f"  {name}: {lv}{tag}")
    ch = is_chordal_urug(g)
    if ch.is_chordal:
        lines.append("chordal: yes (elimination order: " + ", ".join(ch.ordering) + ")")
    else:
        lines.append("chordal: no (chordless cycle: " + " - ".join(ch.witness) + ")")
    paths = enumerate_paths(g, max_len)
    lines.append(f"paths ({len(paths)}):")
    lines += ["  " + " -> ".join(p) for p in paths]
    with _open_out(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("samples must be at least 1")
    results = run_checks(args.seed, args.samples)
    with _open_out(args.output) as fh:
        for r in results:
            fh.write(r.line() + "\n")
        failed = sum(not r.passed for r in results)
        fh.write(f"{len(results) - failed}/{len(results)} checks passed\n")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="residual-distill",
        description="Rates of key distillation followed by randomness extraction from residual states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curves", help="rate curves versus singlet fraction (CSV)")
    p.add_argument("--protocol", choices=["gl", "bbpssw", "dw"], default="gl")
    p.add_argument("--f-min", type=float, default=0.75)
    p.add_argument("--f-max", type=float, default=1.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--r-max", type=int, default=4, help="number of B steps (gl/bbpssw)")
    p.add_argument("--mode", choices=["corrected", "verbatim"], default="corrected",
                   help="key accounting for gl rounds k >= 2")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("toy1", help="yields of the two-copy pure-state example")
    p.add_argument("--a-sq", type=float, default=0.5, help="|a|^2 of a|00> + b|11>")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_toy1)

    p = sub.add_parser("rug", help="analyse a residual use graph JSON document")
    p.add_argument("path")
    p.add_argument("--max-len", type=int, default=None, help="longest path, in nodes")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_rug)

    p = sub.add_parser("verify", help="run oracle cross-checks")
    p.add_argument("--seed", type=int, default=None,
                   help=f"defaults to ${SEED_ENV} or {DEFAULT_SEED}")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CycleError as exc:
        print(f"cycle error: {exc}", file=sys.stderr)
        return EXIT_CYCLE
    except (ValidationError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

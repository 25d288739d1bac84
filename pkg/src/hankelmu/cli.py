"""``hml``: command-line front end for the experiments.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence,
4 verdict inconsistency.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import ConvergenceError, QuadratureError, SpecError
from .experiments import COMMANDS, config_from_mapping, read_config_file, write_sweep_plot

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_INCONSISTENT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="hml", description="Hankel operators induced by radial measures.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--measure", help="atoms:t:w,... | powlog:c=,alpha=,gamma= | table:PATH")
    parser.add_argument("--family", help="fb1 | fbp | gb | Flog | one, with optional b=,p=")
    parser.add_argument("--p", type=float)
    parser.add_argument("--jmin", type=float)
    parser.add_argument("--jmax", type=float)
    parser.add_argument("--jstep", type=float)
    parser.add_argument("--degree", help="'auto' or a fixed degree")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--out", help="CSV output path (default: stdout)")
    parser.add_argument("--plot", action="store_true", default=None,
                        help="also write an SVG next to --out (sweeps only)")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--s", type=float, help="Carleson exponent s (carleson command)")
    parser.add_argument("--alpha-log", type=float, dest="alpha_log")
    parser.add_argument("--sizes", help="comma-separated sizes for bench")
    parser.add_argument("--config", help="key=value file; command-line flags take precedence")
    return parser


def resolve_config(args):
    """File values, then ``HML_THREADS``, then explicit flags."""
    values = read_config_file(args.config) if args.config else {}
    env_threads = os.environ.get("HML_THREADS")
    if env_threads:
        values["threads"] = env_threads
    for key in ("measure", "family", "p", "jmin", "jmax", "jstep", "degree", "tol", "out",
                "plot", "threads", "s", "alpha_log", "sizes"):
        val = getattr(args, key)
        if val is not None:
            values[key] = val
    return config_from_mapping(values)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(result):
    if isinstance(result, list):
        lines = []
        for item in result:
            if isinstance(item, tuple):
                spec, rep = item
                lines.append(f"{spec}: N={rep.N} max_abs={rep.max_abs:.3g} "
                             f"stable={'yes' if rep.stable else 'no'}")
            else:
                lines.append(f"N={item.N}: naive {item.naive_seconds:.4g}s fast "
                             f"{item.fast_seconds:.4g}s speedup {item.speedup:.1f}x "
                             f"deviation {item.rel_deviation:.2g}")
        return "\n".join(lines)
    if hasattr(result, "summary"):
        return result.summary()
    if hasattr(result, "verdict"):
        return f"verdict={result.verdict} sup={result.sup!r} argsup={result.argsup!r}"
    return f"{len(result)} moments, max error bound {float(result.error_bound.max()):.3g}"


def _status(command, result):
    if command.startswith("sweep") or command in ("hinf-check",):
        return EXIT_OK if result.consistent else EXIT_INCONSISTENT
    if command == "qs-check":
        if not result.identity_ok:
            return EXIT_NUMERIC
        return EXIT_OK if result.consistent else EXIT_INCONSISTENT
    if command == "agreement":
        return EXIT_OK if all(rep.stable for _, rep in result) else EXIT_NUMERIC
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (SpecError, OSError) as exc:
        print(f"hml: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    run, to_csv = COMMANDS[args.command]
    try:
        result = run(cfg)
    except (SpecError, ValueError) as exc:
        print(f"hml: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, ConvergenceError) as exc:
        print(f"hml: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(to_csv(result), cfg.out)
    if cfg.plot and args.command.startswith("sweep"):
        base = os.path.splitext(cfg.out)[0] if cfg.out else args.command
        write_sweep_plot(result, base + ".svg")
    print(_summary(result), file=sys.stderr)
    return _status(args.command, result)


if __name__ == "__main__":
    sys.exit(main())

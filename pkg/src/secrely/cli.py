"""Command-line front end: ``secrely analytic|simulate|validate|figures``."""

from __future__ import annotations

import argparse
import os
import sys

from .config import load_config, load_sweep, single_point_sweep
from .errors import RangeError, SecrelyError
from .sweep import METRICS, PointError, evaluate_sweep, render_csv, render_json

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, code, message):
        self.code = code
        super().__init__(message)


def _workers():
    raw = os.environ.get("SECRELY_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise CliError(EXIT_CONFIG, f"SECRELY_WORKERS must be a positive integer, got {raw!r}")
    if n < 1:
        raise CliError(EXIT_CONFIG, f"SECRELY_WORKERS must be a positive integer, got {raw!r}")
    return n


def _load_spec(args):
    if args.config is None:
        raise CliError(EXIT_CONFIG, "--config is required")
    try:
        base = load_config(args.config)
        return load_sweep(args.sweep, base) if args.sweep else single_point_sweep(base)
    except OSError as exc:
        raise CliError(EXIT_CONFIG, f"cannot read input: {exc}")
    except RangeError as exc:
        raise CliError(EXIT_CONFIG, f"config error in field '{exc.field}': {exc}")


def _check_trials(args):
    if args.trials < 1:
        raise CliError(EXIT_CONFIG, f"config error in field 'trials': must be >= 1, got {args.trials}")
    if not 0 <= args.seed < 2 ** 64:
        raise CliError(EXIT_CONFIG, "config error in field 'seed': must be an unsigned 64-bit integer")


def _evaluate(spec, **kwargs):
    try:
        return evaluate_sweep(spec, **kwargs)
    except PointError as exc:
        raise CliError(EXIT_NUMERIC, f"numerical error at grid point {exc}")
    except RangeError as exc:
        raise CliError(EXIT_CONFIG, f"config error in field '{exc.field}': {exc}")


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {out}: {exc}")


def _render(rows, spec, fmt):
    return render_json(rows, spec.axis.value) if fmt == "json" else render_csv(rows, spec.axis.value)


def cmd_analytic(args):
    spec = _load_spec(args)
    rows = _evaluate(spec, oracle=args.oracle)
    _emit(_render(rows, spec, args.format), args.out)
    return EXIT_OK


def cmd_simulate(args):
    spec = _load_spec(args)
    _check_trials(args)
    rows = _evaluate(spec, n_trials=args.trials, seed=args.seed, n_workers=_workers())
    _emit(_render(rows, spec, args.format), args.out)
    return EXIT_OK


def cmd_validate(args):
    from .validation import check_rows, format_report

    spec = _load_spec(args)
    _check_trials(args)
    rows = _evaluate(spec, oracle=True, n_trials=args.trials, seed=args.seed,
                     n_workers=_workers(), fault=args.inject_fault)
    checks, complement = check_rows(rows, [cfg for _, cfg in spec.points()])
    report = format_report(spec.axis.value, checks, complement)
    _emit(report, args.out)
    ok = all(c.ok for c in checks) and not complement
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_figures(args):
    from .figures import write_figures

    out = args.out or "figures"
    try:
        paths = write_figures(out, render=not args.no_render)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write figures to {out}: {exc}")
    for p in paths:
        print(p)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="secrely", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, trials_default=None):
        sp.add_argument("--config", help="JSON system config (SNRs in dB)")
        sp.add_argument("--sweep", help="JSON sweep spec; omit for a single point")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output file (default: stdout)")
        if trials_default is not None:
            sp.add_argument("--trials", type=int, default=trials_default,
                            help="Monte Carlo trials per grid point")
            sp.add_argument("--seed", type=int, default=0, help="unsigned 64-bit seed")

    a = sub.add_parser("analytic", help="closed-form metrics over a sweep")
    common(a)
    a.add_argument("--oracle", action="store_true", help="add quadrature oracle columns")
    a.set_defaults(func=cmd_analytic)

    s = sub.add_parser("simulate", help="closed form plus Monte Carlo estimates")
    common(s, trials_default=100_000)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("validate", help="closed form vs quadrature vs Monte Carlo report")
    common(v, trials_default=1_000_000)
    v.add_argument("--inject-fault", choices=METRICS, default=None, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_validate)

    f = sub.add_parser("figures", help="write figure CSVs, gnuplot scripts and PNGs")
    f.add_argument("--out", help="output directory (default: ./figures)")
    f.add_argument("--no-render", action="store_true", help="skip matplotlib PNG rendering")
    f.set_defaults(func=cmd_figures)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"secrely: {exc}", file=sys.stderr)
        return exc.code
    except SecrelyError as exc:
        print(f"secrely: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: simulate, compare, kink, sweep, print-defaults.  Exit code
0 on success, 1 on configuration errors (bad file, bad key, bad flag),
2 on numeric failures (CFL violation, blowup, tolerance not met).
"""

from __future__ import annotations

import argparse
import sys

from . import pipeline
from .config import default_config_text, load_config
from .errors import ConfigError, NumericsError

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; bad flags are
    # configuration errors here, so route them through ConfigError.
    def error(self, message):
        raise ConfigError(message)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", default=None, help="INI config file (defaults apply without it)")
    sp.add_argument(
        "--set",
        action="append",
        default=[],
        dest="overrides",
        metavar="SECTION.KEY=VALUE",
        help="override one config key; repeatable",
    )
    sp.add_argument("--out", default=None, help="output directory (overrides [output] dir)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgbreather", description="nonlinear Klein-Gordon breather toolkit")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("simulate", help="integrate the configured experiment, write snapshots")
    _add_common(sp)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("compare", help="simulate plus envelope/correlation analysis")
    _add_common(sp)
    sp.set_defaults(func=_cmd_compare)

    sp = sub.add_parser("kink", help="compute the topological 2*pi pulse profile")
    _add_common(sp)
    sp.add_argument("--b", type=float, default=None, help="superlattice parameter b > 0 (default: model.b)")
    sp.add_argument("--xi-max", type=float, default=20.0, help="half-width of the xi range")
    sp.add_argument("--n-points", type=int, default=2001, help="sample count of the CSV profile")
    sp.add_argument("--tol", type=float, default=1e-10, help="ODE relative tolerance")
    sp.set_defaults(func=_cmd_kink)

    sp = sub.add_parser("sweep", help="cartesian parameter sweep with per-point outputs")
    _add_common(sp)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("print-defaults", help="write the default config to stdout")
    sp.set_defaults(func=_cmd_print_defaults)

    return parser


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config, tuple(args.overrides))
    out = pipeline.resolve_out_dir(cfg.out_dir, args.out)
    result = pipeline.simulate(cfg, out)
    print(f"simulate: {result.snapshot_times.size} snapshots -> {out}")
    return 0


def _cmd_compare(args) -> int:
    cfg = load_config(args.config, tuple(args.overrides))
    out = pipeline.resolve_out_dir(cfg.out_dir, args.out)
    _result, records = pipeline.compare(cfg, out)
    k = pipeline.final_correlation(records)
    if k is None:
        print(f"compare: no trackable pulse in any snapshot -> {out}")
    else:
        t_last = max(r.t for r in records if not r.is_gap)
        print(f"compare: K_corr(t={t_last:g}) = {k:.6f} -> {out}")
    return 0


def _cmd_kink(args) -> int:
    cfg = load_config(args.config, tuple(args.overrides))
    b = args.b if args.b is not None else cfg.b
    if not b > 0.0:
        raise ConfigError(f"--b: must be > 0, got {b}")
    if not args.xi_max > 0.0:
        raise ConfigError(f"--xi-max: must be > 0, got {args.xi_max}")
    if args.n_points < 2:
        raise ConfigError(f"--n-points: must be >= 2, got {args.n_points}")
    if not args.tol > 0.0:
        raise ConfigError(f"--tol: must be > 0, got {args.tol}")
    out = pipeline.resolve_out_dir(cfg.out_dir, args.out)
    profile = pipeline.kink_to_csv(b, args.xi_max, out, n_points=args.n_points, tol=args.tol)
    print(f"kink: b={b:g}, {profile.xi.size} samples -> {out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config, tuple(args.overrides))
    out = pipeline.resolve_out_dir(cfg.out_dir, args.out)
    rows = pipeline.sweep(cfg, out)
    ok = sum(1 for r in rows if r[4] == "ok")
    print(f"sweep: {ok}/{len(rows)} points ok -> {out}")
    return 0


def _cmd_print_defaults(_args) -> int:
    sys.stdout.write(default_config_text())
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"numeric failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

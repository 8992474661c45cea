"""Command line entry point: ``mmrelay {fig2..fig6,verify,rate} [options]``."""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

from . import experiments, rates
from .errors import InvalidParameterError
from .rates import PowerBudget, db_to_linear
from .scenario import ConfigError, ScenarioConfig

_FLAG_FOR_FIELD = {
    "wavelength": "--lambda",
    "height": "--height",
    "distance": "--distance",
    "l1": "--l1",
    "theta_m": "--theta-m",
    "mu_db": "--mu-db",
    "xi_db": "--xi-db",
    "omega": "--omega",
    "polarization": "--polarization",
}

_ANGLE = re.compile(
    r"^\s*(?P<num>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)?\s*\*?\s*(?P<pi>pi)?"
    r"\s*(?:/\s*(?P<den>[0-9]*\.?[0-9]+))?\s*(?P<unit>rad|deg)\s*$"
)


def parse_angle(text: str) -> float:
    """Parse ``30deg``, ``0.52rad``, ``pi/6rad`` or ``2pi/9 rad`` into radians."""
    m = _ANGLE.match(text)
    if not m or not (m["num"] or m["pi"]):
        raise argparse.ArgumentTypeError(
            f"invalid angle {text!r}; use a unit suffix, e.g. 30deg, 0.5236rad or pi/6rad"
        )
    value = float(m["num"]) if m["num"] else 1.0
    if m["pi"]:
        value *= math.pi
    if m["den"]:
        value /= float(m["den"])
    return math.radians(value) if m["unit"] == "deg" else value


def _add_scenario_flags(p):
    p.add_argument("--lambda", dest="wavelength", type=float, help="wavelength [m] (default 0.005)")
    p.add_argument("--height", type=float, help="common node height [m] (default 5)")
    p.add_argument("--distance", type=float, help="source-destination distance [m] (default 200)")
    p.add_argument("--l1", type=float, help="source-relay distance [m]")
    p.add_argument("--theta-m", dest="theta_m", type=parse_angle, help="main-lobe beamwidth, e.g. 30deg or pi/6rad")
    p.add_argument("--mu-db", dest="mu_db", type=float, help="self-interference coefficient [dB]")
    p.add_argument("--xi-db", dest="xi_db", type=float, help="sum-power constraint [dB]")
    p.add_argument("--omega", type=float, help="ground dielectric constant (default 15)")
    p.add_argument("--polarization", choices=["perpendicular", "horizontal"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmrelay", description="mm-wave AF relaying rates over a two-ray channel")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in experiments.FIGURES:
        p = sub.add_parser(name, help=f"write the {name} data as CSV")
        _add_scenario_flags(p)
        p.add_argument("--points", type=int, help="number of grid steps (samples = steps + 1)")
        p.add_argument("--out", type=Path, help="CSV path (default: stdout)")
        p.add_argument("--plot-script", action="store_true", help="also write <out>.plot.py")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", help="oracles | scaling | convexity | all")
    _add_scenario_flags(p)
    p.add_argument("--draws", type=int, default=1000, help="random draws for oracle checks")
    p.add_argument("--out", type=Path, default=Path("verify_report.csv"), help="name,status,margin CSV")

    p = sub.add_parser("rate", help="evaluate every scheme at one operating point")
    _add_scenario_flags(p)
    return parser


def _config(args, **defaults) -> ScenarioConfig:
    values = dict(defaults)
    for name in _FLAG_FOR_FIELD:
        given = getattr(args, name, None)
        if given is not None:
            values[name] = given
    return ScenarioConfig(**values)


def _figure(args):
    if args.command in ("fig5", "fig6"):
        config = _config(args, theta_m=math.pi / 4, l1=100.0)
    else:
        config = _config(args)
    fn = experiments.FIGURES[args.command]
    if args.points is not None:
        steps = args.points
        grids = {
            "fig2": ("xi_db_grid", experiments.linear_grid(*experiments.XI_DB_RANGE[:2], steps)),
            "fig3": ("theta_grid", experiments.log_grid(*experiments.THETA_RANGE[:2], steps)),
            "fig4": ("theta_grid", experiments.log_grid(*experiments.THETA_RANGE[:2], steps)),
            "fig5": ("mu_db_grid", experiments.linear_grid(*experiments.MU_DB_RANGE[:2], steps)),
            "fig6": ("xi_db_grid", experiments.linear_grid(*experiments.XI_DB_RANGE[:2], steps)),
        }
        key, grid = grids[args.command]
        table = fn(config, **{key: grid})
    else:
        table = fn(config)

    if args.out is None:
        sys.stdout.write(table.to_csv())
    else:
        table.write(args.out)
        if args.plot_script:
            script = args.out.with_suffix(".plot.py")
            script.write_text(experiments.plot_script(args.command, args.out))
    return 0


def _rate(args):
    config = _config(args)
    g1, g2, g_sd = config.gains()
    xi = db_to_linear(config.xi_db)
    budget = PowerBudget(xi, db_to_linear(config.mu_db))
    warning = config.pattern().warning
    rows = [
        ("direct", rates.direct_rate(g_sd, budget)),
        ("hd_opt", rates.hd_optimal_rate(g1, g2, budget)),
        ("hd_half", rates.hd_equal_slot_rate(g1, g2, budget)),
        ("fd", rates.fd_optimal_rate(g1, g2, budget)),
        ("fd_limit", rates.fd_rate_upper_limit(g1, g2, xi)),
    ]
    print(f"g1={g1:.6e} g2={g2:.6e} g_sd={g_sd:.6e} xi_db={config.xi_db:g} mu_db={config.mu_db:g}")
    print("scheme,rate,xi1,xi2,beta,snr,amp")
    for name, sol in rows:
        print(",".join([name] + [experiments.fmt(v) for v in (sol.rate, sol.xi1, sol.xi2, sol.beta, sol.snr, sol.amp)]))
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _verify(args, parser):
    if args.suite not in experiments.SUITES:
        parser.error(f"unknown suite {args.suite!r}; choose from {', '.join(experiments.SUITES)}")
    config = _config(args)
    sweeps = args.out.with_name(args.out.stem + "_sweeps.csv")
    status, results = experiments.run_verify(args.suite, config, out=args.out, sweeps_out=sweeps, draws=args.draws)
    for r in results:
        print(f"{r.name},{'pass' if r.ok else 'fail'},{experiments.fmt(r.margin)}")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args, parser)
        if args.command == "rate":
            return _rate(args)
        return _figure(args)
    except ConfigError as err:
        parser.error(f"invalid {_FLAG_FOR_FIELD.get(err.field, err.field)}: {err}")
    except InvalidParameterError as err:
        parser.error(str(err))


if __name__ == "__main__":
    sys.exit(main())

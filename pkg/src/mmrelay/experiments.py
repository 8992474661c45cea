"""Figure data sweeps and verification suites behind the command line tool."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, rates
from .errors import InvalidParameterError, NumericalError
from .rates import PowerBudget, db_to_linear
from .scenario import ScenarioConfig

FIG2_MU_DB = (-70.0, -90.0, -110.0)
FIG3_MU_DB = (-70.0, -90.0, -110.0)
FIG4_L1 = (60.0, 95.0)
FIG5_XI_DB = (90.0, 100.0, 110.0, 120.0)
FIG6_MU_DB = (-70.0, -90.0, -110.0, -130.0)

# Default grids: (low, high, steps). A grid with n steps has n + 1 samples, so
# doubling the step count keeps every existing sample bit-for-bit.
XI_DB_RANGE = (60.0, 150.0, 45)
THETA_RANGE = (math.pi / 12, math.pi / 3, 39)
MU_DB_RANGE = (-130.0, -60.0, 35)


def linear_grid(lo, hi, steps):
    steps = int(steps)
    if steps < 1:
        raise InvalidParameterError("grid needs at least one step")
    return [lo + (hi - lo) * (k / steps) for k in range(steps + 1)]


def log_grid(lo, hi, steps):
    steps = int(steps)
    if steps < 1:
        raise InvalidParameterError("grid needs at least one step")
    ratio = hi / lo
    return [lo * ratio ** (k / steps) for k in range(steps + 1)]


def fmt(value) -> str:
    if isinstance(value, str):
        return value
    return f"{float(value):.12g}"


@dataclass
class Table:
    """Header plus rows, in grid order; serialized as CSV with ``\\n`` endings."""

    header: list[str]
    rows: list[list] = field(default_factory=list)

    def column(self, name):
        i = self.header.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())
        return path

    @classmethod
    def read(cls, path) -> "Table":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = []
            for raw in reader:
                row = []
                for cell in raw:
                    try:
                        row.append(float(cell))
                    except ValueError:
                        row.append(cell)
                rows.append(row)
        return cls(header, rows)


def _mu_label(mu_db):
    return f"fd_mu{fmt(mu_db)}"


def _scheme_rates(g1, g2, g_sd, xi, mu_db_values):
    budget = PowerBudget(xi)
    row = [
        rates.direct_rate(g_sd, budget).rate,
        rates.hd_optimal_rate(g1, g2, budget).rate,
        rates.hd_equal_slot_rate(g1, g2, budget).rate,
    ]
    for mu_db in mu_db_values:
        row.append(rates.fd_optimal_rate(g1, g2, PowerBudget(xi, db_to_linear(mu_db))).rate)
    return row


def run_fig2(config: ScenarioConfig | None = None, xi_db_grid=None, mu_db_values=FIG2_MU_DB) -> Table:
    """Rates of every scheme versus sum power (``config.theta_m``, ``config.l1``)."""
    config = config or ScenarioConfig()
    xi_db_grid = linear_grid(*XI_DB_RANGE) if xi_db_grid is None else list(xi_db_grid)
    g1, g2, g_sd = config.gains()
    table = Table(["xi_db", "direct", "hd_opt", "hd_half"] + [_mu_label(m) for m in mu_db_values])
    for xi_db in xi_db_grid:
        table.rows.append([xi_db] + _scheme_rates(g1, g2, g_sd, db_to_linear(xi_db), mu_db_values))
    return table


def run_fig3(config: ScenarioConfig | None = None, theta_grid=None, mu_db_values=FIG3_MU_DB) -> Table:
    """Rates of every scheme versus main-lobe beamwidth at ``config.xi_db``."""
    config = config or ScenarioConfig()
    theta_grid = log_grid(*THETA_RANGE) if theta_grid is None else list(theta_grid)
    xi = db_to_linear(config.xi_db)
    table = Table(["theta_m", "direct", "hd_opt", "hd_half"] + [_mu_label(m) for m in mu_db_values])
    for theta in theta_grid:
        g1, g2, g_sd = config.gains(theta)
        table.rows.append([theta] + _scheme_rates(g1, g2, g_sd, xi, mu_db_values))
    return table


def run_fig4(config: ScenarioConfig | None = None, theta_grid=None, l1_values=FIG4_L1) -> Table:
    """Two-ray versus LOS-only rates for HD (optimized) and FD (``config.mu_db``)."""
    config = config or ScenarioConfig()
    theta_grid = log_grid(*THETA_RANGE) if theta_grid is None else list(theta_grid)
    budget = config.budget()
    table = Table(["theta_m", "scheme", "l1", "rate_2ray", "rate_1ray"])
    for theta in theta_grid:
        for l1 in l1_values:
            cfg = config.with_(l1=l1)
            two = cfg.gains(theta, two_ray=True)
            one = cfg.gains(theta, two_ray=False)
            table.rows.append(
                [theta, "hd_opt", l1, rates.hd_optimal_rate(two[0], two[1], budget).rate,
                 rates.hd_optimal_rate(one[0], one[1], budget).rate]
            )
            table.rows.append(
                [theta, "fd", l1, rates.fd_optimal_rate(two[0], two[1], budget).rate,
                 rates.fd_optimal_rate(one[0], one[1], budget).rate]
            )
    return table


def _fig56_config(config):
    # Figures on self-interference use a wider beam and a mid-span relay.
    return config or ScenarioConfig(theta_m=math.pi / 4, l1=100.0)


def run_fig5(config: ScenarioConfig | None = None, mu_db_grid=None, xi_db_values=FIG5_XI_DB) -> Table:
    """Optimal FD rate versus self-interference for a few sum-power levels."""
    config = _fig56_config(config)
    mu_db_grid = linear_grid(*MU_DB_RANGE) if mu_db_grid is None else list(mu_db_grid)
    g1, g2, _ = config.gains()
    table = Table(["mu_db", "xi_db", "fd_rate"])
    for mu_db in mu_db_grid:
        for xi_db in xi_db_values:
            budget = PowerBudget(db_to_linear(xi_db), db_to_linear(mu_db))
            table.rows.append([mu_db, xi_db, rates.fd_optimal_rate(g1, g2, budget).rate])
    return table


def run_fig6(config: ScenarioConfig | None = None, xi_db_grid=None, mu_db_values=FIG6_MU_DB) -> Table:
    """Optimal FD rate against its perfect-cancellation limit versus sum power."""
    config = _fig56_config(config)
    xi_db_grid = linear_grid(*XI_DB_RANGE) if xi_db_grid is None else list(xi_db_grid)
    g1, g2, _ = config.gains()
    table = Table(["xi_db", "mu_db", "fd_rate", "fd_upper_limit", "gap", "kappa"])
    for xi_db in xi_db_grid:
        xi = db_to_linear(xi_db)
        limit = rates.fd_rate_upper_limit(g1, g2, xi).rate
        for mu_db in mu_db_values:
            budget = PowerBudget(xi, db_to_linear(mu_db))
            rate = rates.fd_optimal_rate(g1, g2, budget).rate
            table.rows.append([xi_db, mu_db, rate, limit, limit - rate, rates.kappa(g1, g2, budget)])
    return table


def time_sharing_gain_db(table: Table, lo_frac=0.25, hi_frac=0.75, levels=21) -> np.ndarray:
    """Horizontal dB distance between the equal-slot and optimized HD curves.

    Rate levels are spread between ``lo_frac`` and ``hi_frac`` of the rate
    span both curves cover on the grid; each curve is inverted by linear
    interpolation in dB.
    """
    xi_db = np.asarray(table.column("xi_db"), dtype=float)
    opt = np.asarray(table.column("hd_opt"), dtype=float)
    half = np.asarray(table.column("hd_half"), dtype=float)
    lo = max(opt.min(), half.min())
    hi = min(opt.max(), half.max())
    targets = lo + (hi - lo) * np.linspace(lo_frac, hi_frac, levels)
    return np.interp(targets, half, xi_db) - np.interp(targets, opt, xi_db)


FIGURES = {"fig2": run_fig2, "fig3": run_fig3, "fig4": run_fig4, "fig5": run_fig5, "fig6": run_fig6}

_PLOT_SPECS = {
    "fig2": ("xi_db", "sum power xi [dB]", None),
    "fig3": ("theta_m", "main-lobe beamwidth [rad]", None),
    "fig4": ("theta_m", "main-lobe beamwidth [rad]", ("scheme", "l1")),
    "fig5": ("mu_db", "self-interference mu [dB]", ("xi_db",)),
    "fig6": ("xi_db", "sum power xi [dB]", ("mu_db",)),
}


def plot_script(figure: str, csv_path) -> str:
    """Matplotlib script that plots ``csv_path``; not executed here."""
    x, xlabel, groups = _PLOT_SPECS[figure]
    name = Path(csv_path).name
    lines = [
        "import pandas as pd",
        "import matplotlib.pyplot as plt",
        "",
        f"df = pd.read_csv({name!r})",
        "fig, ax = plt.subplots()",
    ]
    if groups is None:
        lines.append(f"for col in df.columns.drop({x!r}):")
        lines.append(f"    ax.plot(df[{x!r}], df[col], label=col)")
    else:
        value_cols = [c for c in {"fig4": ["rate_2ray", "rate_1ray"], "fig5": ["fd_rate"],
                                  "fig6": ["fd_rate", "fd_upper_limit"]}[figure]]
        lines.append(f"for key, sub in df.groupby({list(groups)!r}):")
        lines.append(f"    for col in {value_cols!r}:")
        lines.append(f"        ax.plot(sub[{x!r}], sub[col], label=f'{{col}} {{key}}')")
    lines += [
        f"ax.set_xlabel({xlabel!r})",
        "ax.set_ylabel('rate [bits/s/Hz]')",
        "ax.legend()",
        f"fig.savefig({(Path(name).stem + '.png')!r}, dpi=150)",
        "",
    ]
    return "\n".join(lines)


# --- verification suites ----------------------------------------------------

SUITES = ("oracles", "scaling", "convexity", "all")


@dataclass
class CheckResult:
    name: str
    ok: bool
    margin: float


def _oracle_checks(config, draws, rng):
    results = []
    worst_hd = worst_fd = 0.0
    for _ in range(draws):
        g1, g2 = 10.0 ** rng.uniform(-12, -2, 2)
        xi = 10.0 ** rng.uniform(2, 13)
        mu = 10.0 ** rng.uniform(-13, -1)
        half = rates.hd_equal_slot_rate(g1, g2, PowerBudget(xi)).rate
        fd = rates.fd_optimal_rate(g1, g2, PowerBudget(xi, mu)).rate
        worst_hd = max(worst_hd, abs(half - analysis.hd_equal_slot_oracle(g1, g2, xi)) / half)
        worst_fd = max(worst_fd, abs(fd - analysis.fd_oracle(g1, g2, xi, mu)) / fd)
    results.append(CheckResult("oracle:hd_equal_slot", worst_hd <= 1e-6, 1e-6 - worst_hd))
    results.append(CheckResult("oracle:fd_optimal", worst_fd <= 1e-6, 1e-6 - worst_fd))

    g1, g2, _ = config.gains()
    worst = math.inf
    ok = True
    for xi_db in (80.0, 100.0, 120.0):
        budget = PowerBudget(db_to_linear(xi_db))
        try:
            opt = rates.hd_optimal_rate(g1, g2, budget)
        except NumericalError:
            ok = False
            continue
        half = rates.hd_equal_slot_rate(g1, g2, budget)
        grid_value = rates.hd_certification_grid(g1, g2, budget.xi)[0]
        slack = min(opt.rate - grid_value, opt.rate - half.rate + 1e-9)
        ok &= slack >= -1e-9
        worst = min(worst, slack)
    results.append(CheckResult("oracle:hd_time_sharing", ok, worst))

    worst_mu = 0.0
    found = 0
    while found < max(draws // 10, 5):
        g1, g2 = 10.0 ** rng.uniform(-10, -6, 2)
        xi = 10.0 ** rng.uniform(8, 12)
        mu = 10.0 ** rng.uniform(-3, 0) / xi
        if not mu < 1.0:
            continue
        chi = rates.fd_optimal_rate(g1, g2, PowerBudget(xi, mu)).rate
        region = rates.fd_mu_feasible_set(g1, g2, xi, chi)
        if region.kind != "interval":
            continue
        found += 1
        ref = analysis.mu_threshold_bisection(g1, g2, xi, chi)
        worst_mu = max(worst_mu, abs(region.mu_low - ref) / ref)
    results.append(CheckResult("oracle:mu_threshold", worst_mu <= 1e-6, 1e-6 - worst_mu))
    return results


def _report_result(report):
    return CheckResult(report.name, report.ok, report.worst_margin)


def _scaling_checks(config, sweeps):
    theta_grid = log_grid(*THETA_RANGE)
    reports = analysis.beamwidth_scaling_check(config, theta_grid)
    reports += analysis.gain_beamwidth_check(config, theta_grid)
    wide = log_grid(1.0, 3.0, 10)
    reports += [r for r in analysis.beamwidth_scaling_check(config, wide) if r.name.startswith("beamwidth")]
    reports += analysis.mu_scaling_check(1e-8, 1e-8, 1e10, np.geomspace(1e-13, 1e-1, 61))
    sweeps.extend(reports)

    rng = np.random.default_rng(7)
    xs = np.concatenate([[0.0, 3.0], rng.uniform(0.0, 1e6, 10_000)])
    try:
        for x in xs:
            analysis.log_sqrt_chain_check(x)
        chain_ok = True
    except AssertionError:
        chain_ok = False
    return [_report_result(r) for r in reports] + [CheckResult("log_sqrt_chain", chain_ok, 0.0)]


def _convexity_checks(config, sweeps, rng):
    results = []
    worst = 0.0
    signs = True
    for _ in range(100):
        g1, g2 = 10.0 ** rng.uniform(-10, -6, 2)
        xi = 10.0 ** rng.uniform(8, 12)
        mu = 10.0 ** rng.uniform(-9, -1)
        rep = analysis.derivative_consistency_check(g1, g2, xi, mu)
        worst = max(worst, max(rep.rel_error.values()))
        signs &= rep.signs_ok
    results.append(CheckResult("fd_mu_derivatives", worst <= 1e-5 and signs, 1e-5 - worst))

    g1, g2, _ = _fig56_config(None).gains()
    reports = analysis.kappa_monotonicity_check(g1, g2, 1e-9, db_to_linear(np.asarray(linear_grid(*XI_DB_RANGE))))
    reports += analysis.kappa_monotonicity_check(1.0, 1.0, 0.01, np.geomspace(1.0, 1e6, 61))
    reports += analysis.mu_scaling_check(g1, g2, 1e10, db_to_linear(np.asarray(linear_grid(*MU_DB_RANGE))))
    sweeps.extend(reports)
    return results + [_report_result(r) for r in reports]


def run_verify(suite: str = "all", config: ScenarioConfig | None = None, out=None, sweeps_out=None, draws=1000):
    """Run verification suites; returns ``(exit_status, results)``.

    Writes a ``name,status,margin`` CSV to ``out`` and, when given, every
    sweep point to ``sweeps_out``.
    """
    if suite not in SUITES:
        raise InvalidParameterError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    config = config or ScenarioConfig()
    rng = np.random.default_rng(2024)
    sweeps: list = []
    results: list[CheckResult] = []
    if suite in ("oracles", "all"):
        results += _oracle_checks(config, draws, rng)
    if suite in ("scaling", "all"):
        results += _scaling_checks(config, sweeps)
    if suite in ("convexity", "all"):
        results += _convexity_checks(config, sweeps, rng)

    if out is not None:
        report = Table(["name", "status", "margin"],
                       [[r.name, "pass" if r.ok else "fail", r.margin] for r in results])
        report.write(out)
    if sweeps_out is not None:
        sweep_table = Table(["name", "parameter", "x", "value", "bound", "pass"])
        for rep in sweeps:
            for x, v, b, p in rep.rows():
                sweep_table.rows.append([rep.name, rep.parameter, x, v, b, "pass" if p else "fail"])
        sweep_table.write(sweeps_out)
    status = 0 if all(r.ok for r in results) else 1
    return status, results

import math

import numpy as np
import pytest

from mmrelay import experiments as E
from mmrelay.cli import main, parse_angle
from mmrelay.scenario import ConfigError, ScenarioConfig


def test_grids_are_nested_when_doubled():
    coarse = E.linear_grid(60, 150, 9)
    fine = E.linear_grid(60, 150, 18)
    assert fine[::2] == coarse
    assert E.log_grid(1, 8, 36)[::2] == E.log_grid(1, 8, 18)


def test_table_roundtrip(tmp_path):
    t = E.Table(["x", "y"], [[1.0, 2.5], [2.0, 3.25]])
    path = t.write(tmp_path / "t.csv")
    assert path.read_bytes() == b"x,y\n1,2.5\n2,3.25\n"
    assert E.Table.read(path).rows == t.rows


def test_fig5_rate_falls_with_self_interference():
    table = E.run_fig5(mu_db_grid=E.linear_grid(-130, -60, 7))
    for xi_db in E.FIG5_XI_DB:
        rates = [r[2] for r in table.rows if r[1] == xi_db]
        assert np.all(np.diff(rates) < 0)


def test_fig6_gap_matches_kappa():
    table = E.run_fig6(xi_db_grid=E.linear_grid(60, 150, 9))
    for row in table.rows:
        _, _, fd, limit, gap, kappa = row
        assert gap == pytest.approx(limit - fd, abs=1e-12)
        assert kappa >= 1.0


@pytest.mark.parametrize(
    "text,expected",
    [("30deg", math.pi / 6), ("0.5rad", 0.5), ("pi/6rad", math.pi / 6), ("2pi/9 rad", 2 * math.pi / 9)],
)
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected, rel=1e-15)


def test_parse_angle_requires_unit():
    with pytest.raises(Exception):
        parse_angle("0.5")


def test_config_validation():
    with pytest.raises(ConfigError) as err:
        ScenarioConfig(l1=250.0)
    assert err.value.field == "l1"


def test_cli_rejects_relay_beyond_destination(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fig2", "--l1", "250"])
    assert exc.value.code == 2
    assert "--l1" in capsys.readouterr().err


def test_cli_figure_determinism_and_superset(tmp_path):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert main(["fig3", "--points", "6", "--out", str(a)]) == 0
    assert main(["fig3", "--points", "6", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["fig3", "--points", "12", "--out", str(c)]) == 0
    coarse = a.read_text().splitlines()
    fine = c.read_text().splitlines()
    assert fine[0] == coarse[0]
    assert set(coarse[1:]) <= set(fine[1:])


def test_cli_plot_script(tmp_path):
    out = tmp_path / "fig2.csv"
    assert main(["fig2", "--points", "3", "--out", str(out), "--plot-script"]) == 0
    script = tmp_path / "fig2.plot.py"
    assert script.exists()
    compile(script.read_text(), str(script), "exec")


def test_cli_rate(capsys):
    assert main(["rate", "--theta-m", "30deg"]) == 0
    out = capsys.readouterr().out
    assert "hd_opt" in out and "fd_limit" in out


def test_cli_verify(tmp_path, capsys):
    out = tmp_path / "report.csv"
    assert main(["verify", "all", "--draws", "100", "--out", str(out)]) == 0
    assert out.exists()
    assert (tmp_path / "report_sweeps.csv").exists()
    assert ",fail," not in capsys.readouterr().out


def test_cli_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2

"""Command-line interface: subcommands, config files, exit codes."""

import json

import numpy as np
import pytest

from selrtest import Dataset
from selrtest.cli import main
from selrtest.dataio import write_csv


@pytest.fixture
def csv_path(tmp_path, rng):
    n = 60
    u = rng.random(n)
    y = np.sqrt(1 + u**2) * rng.normal(size=n)
    path = tmp_path / "data.csv"
    write_csv(Dataset(u, np.ones((n, 1)), y), str(path))
    return str(path)


@pytest.fixture
def csv_path_p2(tmp_path, rng):
    n = 70
    u = rng.random(n)
    x = np.column_stack([np.ones(n), rng.normal(size=n)])
    y = x[:, 1] * 0.5 + rng.normal(size=n)
    path = tmp_path / "data2.csv"
    write_csv(Dataset(u, x, y), str(path))
    return str(path)


def test_kernel_constants_output(capsys):
    assert main(["kernel-constants", "--kernel", "triweight"]) == 0
    out = capsys.readouterr().out
    assert "r_K: 2.462222784" in out
    assert "c_K: 1.607045174" in out


def test_kernel_constants_tabulated(tmp_path, capsys):
    t = np.linspace(-1, 1, 2001)
    k = 0.75 * (1 - t**2)
    table = tmp_path / "kern.txt"
    np.savetxt(table, np.column_stack([t, k]))
    assert main(["kernel-constants", "--tabulated-kernel", str(table)]) == 0
    assert "kernel: tabulated" in capsys.readouterr().out


def test_test_subcommand_json_report(csv_path, tmp_path):
    report = tmp_path / "report.json"
    code = main(
        ["test", "--input", csv_path, "--h", "0.4", "--seed", "1",
         "--omega", "0,1", "--output", str(report)]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["hypothesis"] == "simple_null"
    assert doc["kernel"] == "triweight"
    assert doc["statistic"] >= 0
    assert "created" in doc["metadata"]


def test_test_subcommand_bootstrap_and_const_null(csv_path, tmp_path):
    report = tmp_path / "report.json"
    code = main(
        ["test", "--input", csv_path, "--h", "0.45", "--null", "const:0.2",
         "--bootstrap", "5", "--seed", "7", "--output", str(report)]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["B"] == 5
    assert 1 / 6 <= doc["p_bootstrap"] <= 1.0


def test_test_subcommand_composite_fix(csv_path_p2, tmp_path):
    report = tmp_path / "report.json"
    code = main(
        ["test", "--input", csv_path_p2, "--h", "0.5", "--fix", "1=0.5",
         "--output", str(report)]
    )
    assert code == 0
    assert json.loads(report.read_text())["hypothesis"] == "composite_null"


def test_test_subcommand_gof(csv_path, tmp_path):
    report = tmp_path / "report.json"
    code = main(
        ["test", "--input", csv_path, "--h", "0.5", "--gof",
         "--g", "smoothed:1,4:0.4", "--output", str(report)]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["hypothesis"] == "goodness_of_fit"
    assert doc["df"] > 0


def test_exit_codes(tmp_path, csv_path):
    # data error: missing file
    assert main(["test", "--input", str(tmp_path / "no.csv"), "--h", "0.4"]) == 3
    # config error: unknown kernel
    assert main(
        ["test", "--input", csv_path, "--h", "0.4", "--kernel", "gauss"]
    ) == 2
    # config error: malformed omega
    assert main(["test", "--input", csv_path, "--h", "0.4", "--omega", "zzz"]) == 2
    # config error: bad estimating-function spec
    assert main(["test", "--input", csv_path, "--h", "0.4", "--g", "wavelet"]) == 2


def test_seed_echo_when_drawn(csv_path, capsys, tmp_path):
    report = tmp_path / "r.json"
    code = main(
        ["test", "--input", csv_path, "--h", "0.45", "--bootstrap", "2",
         "--output", str(report)]
    )
    assert code == 0
    assert "pass --seed" in capsys.readouterr().out


def test_simulate_table1(tmp_path, capsys):
    out = tmp_path / "table.csv"
    code = main(
        ["simulate", "--table1", "--n", "40", "--reps", "6", "--seed", "2",
         "--output", str(out)]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,h,variance,mu,sigma,reps"
    assert lines[1].startswith("40,")


def test_simulate_power_with_plot_data(tmp_path):
    out = tmp_path / "power.csv"
    plot = tmp_path / "power.dat"
    code = main(
        ["simulate", "--power", "--n", "40", "--reps", "8", "--seed", "2",
         "--r-grid", "0,10", "--threshold-selr", "3.0", "--threshold-f", "0.2",
         "--output", str(out), "--plot-data", str(plot)]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,h,c1,r,power_selr,power_f"
    assert len(lines) == 3
    plot_lines = plot.read_text().strip().splitlines()
    assert plot_lines[0].startswith("#")
    assert len(plot_lines) == 4


def test_calibrate_subcommand(csv_path, tmp_path):
    report = tmp_path / "cal.json"
    code = main(
        ["calibrate", "--input", csv_path, "--h", "0.45", "--bootstrap", "6",
         "--seed", "4", "--output", str(report)]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["B"] == 6
    assert len(doc["null_sample"]) == 6


def test_bandwidth_subcommand(csv_path, tmp_path):
    report = tmp_path / "bw.json"
    code = main(
        ["bandwidth", "--input", csv_path, "--grid", "0.3,0.45",
         "--output", str(report)]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["h_selected"] in (0.3, 0.45)
    assert set(doc["per_h"]) == {"0.3", "0.45"}


def test_config_file_defaults_flags_win(csv_path, tmp_path):
    cfg = tmp_path / "defaults.cfg"
    cfg.write_text("# defaults\nh = 0.45\nseed = 11\nkernel = biweight\n")
    report = tmp_path / "r.json"
    code = main(
        ["--config", str(cfg), "test", "--input", csv_path,
         "--kernel", "triweight", "--output", str(report)]
    )
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["h"] == 0.45  # from the config file
    assert doc["kernel"] == "triweight"  # flag wins

    bad = tmp_path / "bad.cfg"
    bad.write_text("h 0.45\n")
    assert main(
        ["--config", str(bad), "test", "--input", csv_path, "--h", "0.4"]
    ) == 2

import csv
import os

import pytest

from tfsdc.cli import EXIT_INVALID, EXIT_OUTPUT, EXIT_PRESET, main, parse_n_grid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_capacity_headline(capsys, tmp_path):
    code, out, _ = run(capsys, "capacity", "--preset", "ppln", "--out", str(tmp_path))
    assert code == 0
    assert out.splitlines()[0] == "freq 6.98, time 1.93, total 8.91 bits, 481 messages"
    assert (tmp_path / "capacity_ppln.csv").exists()


def test_unknown_preset(capsys, tmp_path):
    code, _, err = run(capsys, "capacity", "--preset", "bbo", "--out", str(tmp_path))
    assert code == EXIT_PRESET
    assert "known presets: ppktp, ppln" in err


def test_zero_trials(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--preset", "ppln", "--trials", "0", "--out", str(tmp_path))
    assert code == EXIT_INVALID
    assert "--trials" in err


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_output_permissions(capsys, tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir(mode=0o500)
    code, _, err = run(capsys, "capacity", "--out", str(locked))
    assert code == EXIT_OUTPUT


def test_unwritable_output(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code, _, err = run(capsys, "capacity", "--out", str(blocker / "sub"))
    assert code == EXIT_OUTPUT
    assert "output directory" in err


def test_bad_flag_exits(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--n-grid", "10:5"])
    assert exc.value.code == EXIT_INVALID


def test_override_validation(capsys, tmp_path):
    code, _, err = run(capsys, "capacity", "--set", "colour=1", "--out", str(tmp_path))
    assert code == EXIT_INVALID and "colour" in err


def test_n_grid_parser():
    assert parse_n_grid("10:1000:3") == [10, 100, 1000]
    assert parse_n_grid("5,3,5") == [3, 5]


def test_out_dir_created(capsys, tmp_path):
    out = tmp_path / "a" / "b"
    code, _, _ = run(capsys, "sweep", "--preset", "ppktp", "--n-grid", "10:100:3", "--out", str(out))
    assert code == 0
    for name in ("sweep_ppktp_frequency.csv", "sweep_ppktp_time.csv", "sweep_ppktp.svg"):
        assert (out / name).exists()


def test_simulate_is_byte_reproducible(capsys, tmp_path):
    args = ["simulate", "--preset", "ppln", "--trials", "20000", "--c", "4", "--d", "4",
            "--seed", "9", "--format", "csv"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "simulate_ppln.csv").read_bytes()
    assert a == (tmp_path / "b" / "simulate_ppln.csv").read_bytes()
    out = capsys.readouterr().out
    assert "plug-in mutual information" in out


@pytest.mark.parametrize("command", ["spectra", "correlation", "compare"])
def test_figure_commands(capsys, tmp_path, command):
    code, _, _ = run(capsys, command, "--preset", "ppktp", "--out", str(tmp_path))
    assert code == 0
    csvs = list(tmp_path.glob("*.csv"))
    assert csvs and list(tmp_path.glob("*.svg"))
    for path in csvs:
        with path.open() as fh:
            header = next(csv.reader(fh))
        assert all("[" in h for h in header)


def test_svg_reproducible(capsys, tmp_path):
    for sub in ("a", "b"):
        assert main(["compare", "--format", "svg", "--out", str(tmp_path / sub)]) == 0
    assert (tmp_path / "a" / "comparison.svg").read_bytes() == (tmp_path / "b" / "comparison.svg").read_bytes()


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert "[FAIL]" not in out and out.count("[PASS]") >= 10

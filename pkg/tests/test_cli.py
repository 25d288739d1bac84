import shutil
import subprocess
import sys

import pytest

from hankelmu.cli import EXIT_CONFIG, EXIT_INCONSISTENT, EXIT_NUMERIC, EXIT_OK, main
from hankelmu.experiments import CSV_HEADER, HinfReport, QsReport

SHORT = ["--jmin", "4", "--jmax", "6", "--jstep", "1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sweep_to_stdout(capsys):
    code, out, err = run(capsys, "sweep-h1", "--measure", "atoms:0.5:1", *SHORT)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 4
    assert "consistent=yes" in err


def test_out_file_is_lf_only(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sweep-hp", "--measure", "atoms:0.9:1", "--p", "3", *SHORT,
                       "--out", str(path))
    assert code == EXIT_OK and out == ""
    data = path.read_bytes()
    assert b"\r" not in data and data.endswith(b"\n")


def test_byte_identical_reruns(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run(capsys, "sweep-h1", *SHORT, "--out", str(p))[0] == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("argv", [
    ["sweep-h1", "--measure", "powlog:alpha=0"],
    ["sweep-h1", "--family", "zz"],
    ["sweep-hp", "--p", "1"],
    ["moments", "--tol", "-1"],
    ["sweep-h1", "--jmin", "9", "--jmax", "3"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CONFIG and "configuration error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["moments", "--p", "abc"])
    assert exc.value.code == EXIT_CONFIG


def test_nonconvergence_exit_3(capsys):
    code, _, err = run(capsys, "moments", "--measure", "powlog:alpha=0.25,gamma=1",
                       "--degree", "2000", "--tol", "1e-30")
    assert code == EXIT_NUMERIC and "numerical failure" in err


def test_inconsistent_verdict_exit_4(capsys, monkeypatch):
    bad = HinfReport("x", [], 0.0, "inconsistent", False)
    monkeypatch.setitem(sys.modules["hankelmu.cli"].COMMANDS, "hinf-check",
                        (lambda cfg: bad, lambda rep: ""))
    monkeypatch.setattr("hankelmu.cli._summary", lambda result: "")
    assert run(capsys, "hinf-check")[0] == EXIT_INCONSISTENT


def test_identity_failure_exit_3(capsys, monkeypatch):
    bad = QsReport("x", [], [], 0.0, 0, "bounded", 1.0, 1e-8, 0.0, "stable", "bounded",
                   "bounded", True)
    monkeypatch.setitem(sys.modules["hankelmu.cli"].COMMANDS, "qs-check",
                        (lambda cfg: bad, lambda rep: ""))
    monkeypatch.setattr("hankelmu.cli._summary", lambda result: "")
    assert run(capsys, "qs-check")[0] == EXIT_NUMERIC


def test_config_file_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "run.cfg"
    conf.write_text("command_is_not_a_key = 1\n")
    assert run(capsys, "moments", "--config", str(conf))[0] == EXIT_CONFIG
    conf.write_text("measure = atoms:0.5:1\ndegree = 3\n")
    code, out, _ = run(capsys, "moments", "--config", str(conf))
    assert code == EXIT_OK and out.splitlines()[2].split(",")[1] == "0.5"
    code, out, _ = run(capsys, "moments", "--config", str(conf), "--degree", "5")
    assert len(out.splitlines()) == 7


def test_env_threads(capsys, monkeypatch):
    monkeypatch.setenv("HML_THREADS", "0")
    assert run(capsys, "moments")[0] == EXIT_CONFIG
    # the flag wins over the environment
    assert run(capsys, "moments", "--threads", "2")[0] == EXIT_OK


def test_plot_writes_svg(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep-h1", "--measure", "atoms:0.5:1", *SHORT, "--out",
                     str(path), "--plot")
    assert code == EXIT_OK
    svg = (tmp_path / "sweep.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg


@pytest.mark.parametrize("command,first", [
    ("carleson", "b,one_minus_b,K"),
    ("agreement", "family,N,max_abs,max_rel,stable"),
    ("hinf-check", "j,sum_mu_n,int_dmu_over_1_minus_t,sup_H_mu_one"),
])
def test_other_commands(capsys, command, first):
    code, out, _ = run(capsys, command, "--measure", "atoms:0.5:1")
    assert code == EXIT_OK and out.splitlines()[0] == first


def test_bench_small(capsys):
    code, out, err = run(capsys, "bench", "--sizes", "1,64")
    assert code == EXIT_OK and len(out.splitlines()) == 3 and "speedup" in err


@pytest.mark.skipif(shutil.which("hml") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["hml", "carleson", "--measure", "atoms:0.5:1", "--s", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("b,one_minus_b,K")

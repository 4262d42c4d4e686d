import os
import subprocess
import sys

import pytest

from jetrec.cli import main, parse_grid

CUBIC = "n 2\nm 3\nfield exact\ncoeff 3 1\n"
GENERIC = "n 1\nm 3\nfield exact\ncoeff 3 1\ncoeff 4 1\n"


def run(*argv, env=None):
    """Run the installed module in a fresh interpreter."""
    return subprocess.run([sys.executable, "-m", "jetrec", *argv], capture_output=True, text=True,
                          env={**os.environ, **(env or {})})


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def report(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


def test_forward_to_stdout(files, capsys):
    assert main(["forward", "--jet", files("u.jet", CUBIC), "--terms", "4"]) == 0
    out, err = capsys.readouterr()
    assert out == "n 2\nm 3\na 1\nfield exact\ntrunc 4\nterm 0 6\n"
    rep = report(err)
    assert rep["status"] == "pass" and rep["leading_coefficient"] == "6"


def test_forward_to_file(files, tmp_path, capsys):
    out_path = tmp_path / "f.ps"
    assert main(["forward", "--jet", files("u.jet", GENERIC), "--terms", "4", "--out", str(out_path)]) == 0
    out, err = capsys.readouterr()
    assert report(out)["b2"] == "-1/3" and err == ""
    assert "term 3 56/27" in out_path.read_text()


def test_round_trip_is_byte_identical(files, tmp_path):
    series = tmp_path / "f.ps"
    back = tmp_path / "back.jet"
    assert main(["forward", "--jet", files("u.jet", GENERIC), "--terms", "4", "--out", str(series)]) == 0
    assert main(["recover", "--f", str(series), "--out", str(back)]) == 0
    assert back.read_text() == GENERIC


def test_negative_leading_coefficient(files, capsys):
    path = files("neg.jet", "n 2\nm 3\nfield exact\ncoeff 3 -1\n")
    assert main(["forward", "--jet", path, "--terms", "2"]) == 3
    assert main(["forward", "--jet", path, "--terms", "2", "--reflect"]) == 0
    assert "reflected: true" in capsys.readouterr().err


def test_inconsistent_series(files, capsys):
    path = files("bad.ps", "n 2\nm 3\na 2\nfield exact\nterm 0 6\n")
    assert main(["recover", "--f", path]) == 1
    assert "InconsistentSeries" in capsys.readouterr().out


def test_recover_builtin(capsys):
    assert main(["recover", "--builtin", "ex1", "--terms", "2"]) == 0
    out, err = capsys.readouterr()
    assert out.startswith("n 2\nm 3\nfield float\ncoeff 3 ")
    assert report(err)["mode"] == "numeric"


def test_flat_builtin_aborts(capsys):
    assert main(["recover", "--builtin", "flat"]) == 3
    assert "NoAdmissibleOrder" in capsys.readouterr().out


def test_usage_errors(files, capsys):
    assert main(["recover", "--builtin", "ex1", "--mode", "symbolic"]) == 2
    assert main(["recover"]) == 2
    assert main(["recover", "--builtin", "ex1", "--rho", "2"]) == 2
    assert main(["forward", "--jet", files("x.jet", "n 2\nm\n"), "--terms", "1"]) == 2
    assert main(["forward", "--jet", "/nonexistent/u.jet", "--terms", "1"]) == 2
    assert main(["holder", "--builtin", "ex1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["forward"])
    assert exc.value.code == 2
    assert "error" in capsys.readouterr().err


def test_decimal_warning(files, capsys):
    assert main(["forward", "--jet", files("d.jet", "n 1\nm 1\nfield exact\ncoeff 1 0.5\n"), "--terms", "1"]) == 0
    assert "warning: decimal literal" in capsys.readouterr().err


def test_verify(files, tmp_path, capsys):
    jet = files("u.jet", CUBIC)
    series = tmp_path / "f.ps"
    main(["forward", "--jet", jet, "--terms", "4", "--out", str(series)])
    capsys.readouterr()
    assert main(["verify", "--jet", jet, "--f", str(series)]) == 0
    assert report(capsys.readouterr().out)["status"] == "pass"
    other = files("v.jet", "n 2\nm 3\nfield exact\ncoeff 3 1\ncoeff 4 1\n")
    assert main(["verify", "--jet", other, "--f", str(series)]) == 1
    assert main(["verify", "--jet", jet, "--f", str(series), "--t0", "0.5", "--t1", "0.1"]) == 2


def test_verify_domain_exit(files, tmp_path, capsys):
    series = tmp_path / "f.ps"
    main(["forward", "--jet", files("u.jet", "n 1\nm 1\nfield exact\ncoeff 1 1\n"), "--terms", "0",
          "--out", str(series)])
    bad = files("v.jet", "n 1\nm 1\nfield exact\ncoeff 1 1\ncoeff 2 -20\n")
    assert main(["verify", "--jet", bad, "--f", str(series), "--t0", "0.1", "--t1", "0.2"]) == 3


def test_holder(files, capsys):
    assert main(["holder", "--builtin", "ex1", "--alpha", "1/3", "--samples", "2000"]) == 0
    rep = report(capsys.readouterr().out)
    assert rep["alpha"] == "1/3" and 5.9 <= float(rep["max_quotient"]) <= 6.0001
    assert main(["holder", "--jet", files("u.jet", GENERIC), "--samples", "500"]) == 0
    assert report(capsys.readouterr().out)["alpha"] == "1/3"


def test_holder_seed_from_environment():
    args = ("holder", "--builtin", "ex1", "--alpha", "1/3", "--samples", "300")
    a = run(*args, env={"JETREC_SEED": "5"})
    b = run(*args, env={"JETREC_SEED": "5"})
    c = run(*args, env={"JETREC_SEED": "6"})
    assert a.returncode == 0 and a.stdout == b.stdout != c.stdout
    assert "seed: 5" in a.stdout


def test_flatness(files, capsys):
    assert main(["flatness", "--builtin", "expflat", "--n", "1", "--expect", "unbounded"]) == 0
    assert main(["flatness", "--builtin", "expflat", "--n", "1", "--expect", "bounded"]) == 1
    jet = files("u.jet", CUBIC)
    assert main(["flatness", "--jet", jet, "--n", "2", "--expect", "bounded"]) == 0
    assert "sup_ratio: 1.5" in capsys.readouterr().out
    assert main(["flatness", "--jet", jet, "--minus", jet, "--n", "2", "--grid", "0.1,0.01"]) == 0
    assert "zero_over_zero: 2" in capsys.readouterr().out
    assert main(["flatness", "--builtin", "exp", "--n", "1", "--grid", "log:1:0:3"]) == 2


def test_parse_grid():
    assert parse_grid("log:1e-1:1e-3:3") == pytest.approx([0.1, 0.01, 0.001])
    assert parse_grid("lin:0.1:0.3:3") == pytest.approx([0.1, 0.2, 0.3])
    assert parse_grid("0.5,0.25") == [0.5, 0.25]


def test_outputs_are_byte_deterministic(files):
    jet = files("u.jet", GENERIC)
    for argv in (["forward", "--jet", jet, "--terms", "4"], ["recover", "--builtin", "ex4"]):
        first, second = run(*argv), run(*argv)
        assert first.returncode == 0
        assert (first.stdout, first.stderr) == (second.stdout, second.stderr)


def test_selftest():
    first = run("selftest")
    assert first.returncode == 0, first.stdout
    assert first.stdout.splitlines()[-1] == "13/13 criteria passed"
    assert run("selftest").stdout == first.stdout

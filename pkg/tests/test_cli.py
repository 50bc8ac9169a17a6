import json
import subprocess
import sys

import numpy as np
import pytest

from qcachain import cli
from qcachain import compiler as cc
from qcachain import statevec as sv
from qcachain.schedule import PulseSchedule


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compile_example(tmp_path, capsys):
    (tmp_path / "c.txt").write_text("n 1\nrz 1 0.5\n")
    code, out, _ = run(["compile", "--in", str(tmp_path / "c.txt"), "--out", str(tmp_path / "s.txt")], capsys)
    assert code == 0
    lines = (tmp_path / "s.txt").read_text().splitlines()
    assert lines[0] == "N 6"
    assert sum(l == "T" for l in lines) == 14
    assert sum(l.startswith("P ") for l in lines) == 6
    assert "clock_cycles=1" in out


def test_compile_to_stdout_is_a_valid_schedule(tmp_path, capsys):
    (tmp_path / "c.txt").write_text("n 2\ncflip 1 2\n")
    code, out, _ = run(["compile", "--in", str(tmp_path / "c.txt")], capsys)
    assert code == 0
    assert PulseSchedule.from_text(out).n_sites == 10


def test_compile_empty_and_malformed(tmp_path, capsys):
    (tmp_path / "e.txt").write_text("n 2\n")
    code, out, _ = run(["compile", "--in", str(tmp_path / "e.txt"), "--out", str(tmp_path / "s.txt")], capsys)
    assert code == 0 and (tmp_path / "s.txt").read_text() == "N 10\n"
    (tmp_path / "bad.txt").write_text("n 1\nrz 1 0.5\nwat\n")
    code, _, err = run(["compile", "--in", str(tmp_path / "bad.txt")], capsys)
    assert code == 2 and "line 3" in err


def test_round_trip_matches_in_memory(tmp_path, capsys):
    text = "n 1\nrx 1 0.3\nrz 1 -1.1\n"
    (tmp_path / "c.txt").write_text(text)
    run(["compile", "--in", str(tmp_path / "c.txt"), "--out", str(tmp_path / "s.txt")], capsys)
    code, out, _ = run(["simulate", "--in", str(tmp_path / "s.txt"), "--amplitudes", "--cutoff", "0"], capsys)
    assert code == 0
    sched, _ = cc.compile_circuit(cc.LogicalCircuit.from_text(text))
    want = sv.apply_schedule(sv.init_zero(6), sched).amplitudes
    rows = out.splitlines()[3:]
    got = np.array([complex(float(r.split()[1]), float(r.split()[2])) for r in rows])
    assert np.array_equal(got, want)


def test_simulate_full_cycle_returns_to_zero(tmp_path, capsys):
    n = 5
    (tmp_path / "s.txt").write_text(f"N {n}\n" + "T\n" * (2 * (n + 1)))
    code, out, _ = run(["simulate", "--in", str(tmp_path / "s.txt"), "--N", str(n)], capsys)
    assert code == 0
    rows = out.splitlines()[3:]
    assert len(rows) == 1 and rows[0].startswith("00000 ")
    assert float(rows[0].split()[1]) == pytest.approx(1, abs=1e-12)


def test_simulate_empty_and_mismatch(tmp_path, capsys):
    (tmp_path / "s.txt").write_text("N 3\n")
    code, out, _ = run(["simulate", "--in", str(tmp_path / "s.txt"), "--init", "101"], capsys)
    assert code == 0 and out.splitlines()[3] == "101 1.0"
    code, _, err = run(["simulate", "--in", str(tmp_path / "s.txt"), "--N", "4"], capsys)
    assert code == 2 and "does not match" in err


def test_verify_pass_and_injected_fault(capsys):
    code, out, _ = run(["verify", "reversal", "--max-n", "8"], capsys)
    assert code == 0 and out.rstrip().endswith("ALL PASS")
    code, out, _ = run(["verify", "mz", "--max-n", "6", "--inject-fault"], capsys)
    assert code == 1 and "FAIL" in out


def test_lightcone_text_and_svg(tmp_path, capsys):
    code, out, _ = run(["lightcone", "--p", "3", "--axis", "Z", "--N", "8", "--t-max", "9"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "9 IIIIIZII  *"
    code, out, _ = run(["lightcone", "--p", "3", "--N", "8", "--t-max", "0"], capsys)
    assert out == "0 IIZIIIII  *\n"
    code, _, _ = run(["lightcone", "--p", "3", "--N", "8", "--format", "svg", "--out", str(tmp_path / "c.svg")], capsys)
    assert (tmp_path / "c.svg").read_text().startswith("<svg")
    code, _, _ = run(["lightcone", "--p", "9", "--N", "8"], capsys)
    assert code == 2


def test_readout_demo(capsys):
    code, out, _ = run(["readout-demo", "--n", "2", "--state", "10"], capsys)
    assert code == 0 and len(json.loads(out)["solutions"]) == 1
    code, out, _ = run(["readout-demo", "--n", "2", "--state", "10,01", "--model", "dephasing"], capsys)
    assert code == 0 and len(json.loads(out)["solutions"]) == 2
    code, _, _ = run(["readout-demo", "--n", "2", "--state", "101"], capsys)
    assert code == 2


@pytest.mark.parametrize("n, t_max, code, last", [(4, None, 0, "N 4"), (1, None, 0, "N 1"), (7, "5", 1, None)])
def test_detect_length(n, t_max, code, last, capsys):
    argv = ["detect-length", "--N", str(n)] + (["--t-max", t_max] if t_max else [])
    got, out, _ = run(argv, capsys)
    assert got == code
    if last:
        assert out.splitlines()[-1] == last
    else:
        assert "inconclusive" in out


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["readout-demo", "--n", "2", "--state", "10", "--model", "weird"])
    assert exc.value.code == 2


def test_byte_identical_outputs(tmp_path):
    cmd = [sys.executable, "-m", "qcachain", "readout-demo", "--n", "3", "--state", "110,011",
           "--model", "dephasing", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a

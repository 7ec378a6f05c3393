import json
import os
import subprocess
from fractions import Fraction

import pytest

import ndt_lab


def test_lower_bound_and_closed_form():
    lb = ndt_lab.lower_bound(3, 1, "4/5")
    assert lb["value"] == Fraction(8, 5)
    assert lb["witness"] == {"ell": 1, "s": 1}
    assert ndt_lab.lower_bound(2, 2, Fraction(4, 9))["value"] == Fraction(4, 3)
    assert ndt_lab.lower_bound(2, 3, 0)["value"] == 5
    assert ndt_lab.optimal_tradeoff_closed(2, 2, "1/2") == Fraction(5, 4)


def test_oneshot():
    assert ndt_lab.delta_os(2, 2, "1/2") == Fraction(5, 4)
    assert ndt_lab.delta_man("1/2", 2) == Fraction(1, 2)
    c = ndt_lab.subpacketize(2, 2, "1/2")
    assert (c["T1"], c["T2"], c["symbols_per_file"]) == (2, Fraction(3), 4)
    assert ndt_lab.classify_region(1, 2, "1/2") in {"A", "B", "C", "D", "E"}


def test_envelope_and_dof():
    pts = [(0, 4), ("1/2", "5/4"), (1, 1)]
    assert ndt_lab.envelope(pts, "1/4") == Fraction(21, 8)
    assert ndt_lab.achievable_dof(2, 2, "1/2", "5/4") == Fraction(12, 5)


def test_simulate_and_gap():
    r = ndt_lab.simulate(3, 1, "4/5", seed=4)
    assert r["pass"] and r["ndt"] == "8/5" and r["T"] == 8
    assert ndt_lab.simulate(3, 1, "4/5", seed=4) == r
    g = ndt_lab.empirical_gap(2, 2, "4/9")
    assert g["ratio"] == "7/6"
    sw = ndt_lab.gap_sweep(4, 4, 12)
    assert sw["all_hold"] and sw["high_cache_max"] <= Fraction(8, 3)


def test_errors():
    with pytest.raises(ValueError):
        ndt_lab.lower_bound(2, 2, 0.5)
    with pytest.raises(ndt_lab.NdtError):
        ndt_lab.lower_bound(2, 2, "3/2")


def test_cli_in_process():
    code, out, _ = ndt_lab.cli(["bound", "--k", "2", "--m", "2", "--mu", "1/2", "--format", "json"])
    assert code == 0
    j = json.loads(out)
    assert j["schema"] == ndt_lab.SCHEMA == "ndt-lab/1"
    assert ndt_lab.cli(["simulate", "--k", "3", "--m", "1", "--mu", "1/3"])[0] == 4


@pytest.mark.skipif("NDT_LAB" not in os.environ, reason="binary path not provided")
def test_binary():
    p = subprocess.run([os.environ["NDT_LAB"], "bound", "--k", "3", "--m", "1", "--mu", "4/5"],
                       capture_output=True, text=True, check=True)
    assert p.stdout.startswith("8/5")

import json
import subprocess
import sys

import numpy as np
import pytest

from dsobounds.cli import run
from dsobounds.serialization import state_to_dict
from dsobounds.states import random_state


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, _ = call(capsys, *argv)
    assert code == 0
    return json.loads(out)


def test_bounds_singlet(capsys):
    out = call_json(capsys, "bounds", "--state", "bell:psi-")
    assert out["gamma"] == 1.0
    assert out["beta_chsh"] == 0.5
    assert out["beta_bell"] == 0.666666666667
    assert out["reduced_equal"] is True


def test_bounds_with_noise(capsys):
    out = call_json(capsys, "bounds", "--state", "bell:psi-", "--noise", "0.5")
    assert out["gamma"] == 1.0


@pytest.mark.parametrize("construction,beta", [("right", "0.5"), ("left", "0.5"), ("bell", "0.6666666667")])
def test_certify(capsys, construction, beta):
    out = call_json(capsys, "certify", "--state", "bell:psi-", "--beta", beta, "--construction", construction)
    assert out["is_dso"] is True
    assert out["min_eigenvalue"] >= out["analytic_lower_bound"] - 1e-9


def test_certify_below_threshold(capsys):
    out = call_json(capsys, "certify", "--state", "bell:psi-", "--beta", "0")
    assert out["is_dso"] is False
    assert out["min_eigenvalue"] == -0.125


def test_min_beta(capsys):
    out = call_json(capsys, "min-beta", "--state", "bell:psi-", "--construction", "bell")
    assert abs(out["minimal_beta"] - 2 / 3) <= 1e-8
    assert out["formula_bound"] == 0.666666666667


def test_chsh_max(capsys):
    out = call_json(capsys, "chsh-max", "--state", "bell:psi-", "--restarts", "3")
    assert abs(out["closed_form"]["value"] - 2 * np.sqrt(2)) <= 1e-11
    assert abs(out["seesaw"]["value"] - 2 * np.sqrt(2)) <= 1e-6
    assert out["violated"] is True


def test_chsh_max_same_seed_byte_identical(capsys):
    argv = ("chsh-max", "--state", "phased:d=3", "--restarts", "3", "--seed", "5")
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second


def test_bell_check_named_observables(capsys):
    out = call_json(capsys, "bell-check", "--state", "bell:psi-",
                    "--w1", '{"alpha": 0, "n": [0.7071067811865476, 0, -0.7071067811865476]}',
                    "--w2", "sz", "--w2t", "sx")
    assert out["satisfied"] is False
    assert abs(out["lines"][0]["lhs"] - np.sqrt(2)) <= 1e-11


def test_bell_check_random_above_threshold(capsys):
    out = call_json(capsys, "bell-check", "--state", "werner:beta=0.7", "--random", "200")
    assert out["satisfied"] == 200


def test_extended_chsh(capsys):
    out = call_json(capsys, "extended-chsh", "--state", "bell:psi-", "--gamma", "2,2,2,-2",
                    "--a1", "sz", "--a2", "sx",
                    "--b1", '{"alpha": 0, "n": [-0.7071067811865476, 0, -0.7071067811865476]}',
                    "--b2", '{"alpha": 0, "n": [0.7071067811865476, 0, -0.7071067811865476]}')
    assert abs(out["value"] - 4 * np.sqrt(2)) <= 1e-11
    assert out["bound"] == 4.0 and out["violated"] is True


def test_extended_chsh_invalid_coefficients(capsys):
    code, _, err = call(capsys, "extended-chsh", "--state", "bell:psi-", "--gamma", "2,1,1,2", "--random", "5")
    assert code == 1 and "relation" in err


def test_singlet(capsys):
    out = call_json(capsys, "singlet", "--beta", "0.6666666666666666")
    assert out["correlation"] == -0.333333333333
    p = out["probabilities"]
    assert p["plus_plus"] == 0.166666666667 and p["plus_minus"] == 0.333333333333


def test_peres(capsys):
    out = call_json(capsys, "peres", "--d", "3", "--beta", "0")
    assert out["analytic"] == -0.333333333333
    assert out["ppt"] is False


def test_state_file_round_trip(capsys, tmp_path, rng):
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(state_to_dict(random_state(2, 3, rng))))
    out = call_json(capsys, "bounds", "--state", str(path))
    assert out["beta_bell"] is None
    assert 0.5 <= out["beta_chsh"] < 1


def test_text_format(capsys):
    code, out, _ = call(capsys, "bounds", "--state", "bell:psi-", "--format", "text")
    assert code == 0 and "beta_chsh" in out and "{" not in out


def test_demo_text(capsys):
    code, out, _ = call(capsys, "demo", "--format", "text", "--restarts", "2")
    assert code == 0
    assert "phased:d=3" in out and "P(same | Bob)" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("bounds", "--state", "nosuch.json"),
        ("certify", "--state", "bell:psi-", "--beta", "1.5"),
        ("bounds", "--state", "mixed:d1=2,d2=3", "--noise", "-1"),
        ("certify", "--state", "mixed:d1=2,d2=3", "--beta", "0.5", "--construction", "bell"),
        ("certify", "--state", "mixed:d1=2,d2=17", "--beta", "0.5"),
        ("bell-check", "--state", "bell:psi-"),
    ],
)
def test_domain_errors_exit_one(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 1 and out == "" and err.startswith("error:")


@pytest.mark.parametrize(
    "argv",
    [(), ("bounds",), ("certify", "--state", "bell:psi-"), ("nope",),
     ("certify", "--state", "bell:psi-", "--beta", "x"), ("min-beta", "--state", "bell:psi-", "--construction", "up")],
)
def test_usage_errors_exit_two(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dsobounds", "peres", "--d", "2", "--beta", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["numeric"] == 0.25


def test_reports_reparse(capsys):
    from dsobounds.serialization import observable_from_dict

    out = call_json(capsys, "chsh-max", "--state", "werner:beta=0.1", "--restarts", "2")
    for block in (out["closed_form"], out["seesaw"]):
        for w in block["settings"].values():
            assert observable_from_dict(w).norm <= 1 + 1e-10
    for argv in (("bounds", "--state", "bell:phi+"), ("certify", "--state", "bell:phi+", "--beta", "0.7"),
                 ("min-beta", "--state", "bell:phi+"), ("peres", "--d", "2", "--beta", "0.5"),
                 ("demo", "--restarts", "1")):
        assert isinstance(call_json(capsys, *argv), dict)

import json
import math
from fractions import Fraction

import pytest

import gordonlab as gl


def test_cf_expand_round_trip():
    assert gl.cf_expand(5, 7) == [1, 2, 2]
    q = gl.cf_expand(355, 452)
    x = Fraction(0)
    for a in reversed(q):
        x = 1 / (a + x)
    assert x == Fraction(355, 452)
    with pytest.raises(ValueError):
        gl.cf_expand(3, 2)


def test_convergents_and_certificates():
    assert gl.convergents([1, 2, 2])[-1] == (5, 7)
    lv = gl.frequency("liouville-default")
    assert lv["cf"][3] == 3**25
    assert lv["max_order"] == 3
    assert gl.liouville_certify(lv["cf"], m_max=3) == [True, True, True]
    golden = gl.liouville_certify([1] * 20, m_max=10)
    assert not any(golden[6:])


def test_potential_dsl():
    assert gl.canonical_potential("step{ 0 : 1 , 0.5 : 0 }") == "step{0:1, 1/2:0}"
    assert gl.eval_potential("cos(1, 2, 0)", 0.5) == pytest.approx(-2.0)
    with pytest.raises(gl.ParseError) as err:
        gl.canonical_potential("step{0:1, 1/2:0, 1/4:3}")
    assert "1:18" in str(err.value)


def test_monodromy_invariants():
    for m in (1, 2, 3):
        mono = gl.monodromy(m=m, energy=0.5)
        a, b, c, d = mono["matrix"]
        assert a * d - b * c == pytest.approx(1.0, abs=1e-10)
        assert mono["trace"] == pytest.approx(a + d)
    assert gl.monodromy(m=3, energy=0.5)["period"] == 25


def test_gordon_sequence_and_distance():
    r = gl.gordon_sequence(D=4.0, delta=1.0)
    assert [row["q_m"] for row in r["rows"]] == [1, 3, 25]
    for row in r["rows"]:
        assert row["I_m"] <= row["osc_bound"]
    d = gl.l1_distance("step{0:1, 1/2:0}", m=1)
    assert d["method"] == "exact-step"
    p, q = d["exact"]
    assert d["value"] == pytest.approx(p / q)


def test_witness_demo():
    rows = gl.witness(energy=0.5, m_lo=3, m_hi=3)
    assert rows[0]["pass"]
    assert rows[0]["sup_diff_sampled"] <= 0.25
    assert all(norm >= 0.25 for _, norm, _ in rows[0]["witnesses"])


def test_run_matches_cli_contract():
    code, out, err = gl.run(command="gordon")
    assert code == 0
    assert out.splitlines()[0] == "m,a_m,q_m,alpha_err_upper,I_m,C,log_scaled,osc_bound,sing_bound"
    code, out, err = gl.run({"command": "gordon", "osc_D": 1e-9, "osc_delta": 1.0})
    assert code == 2
    assert "assertion failure" in err
    cfg = json.loads(gl.default_config())
    assert cfg["alpha"] == "liouville-default"
    assert math.isfinite(cfg["tol"])

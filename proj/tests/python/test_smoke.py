import math

import pytest

import qutrit_qkd as q


def test_key_rate_breakdown():
    b = q.key_rate("qutrit", mu=0.05, length_km=20)
    assert b["protocol"] == "qutrit"
    assert b["k"] == pytest.approx(0.00016510237225001537, rel=1e-10)
    assert 0.0 <= b["i_e"] <= 1.0
    assert q.key_rate("bb84", length_km=0)["gamma_q"] == 1.0


def test_invalid_parameters_raise():
    with pytest.raises(ValueError, match="q_opt"):
        q.key_rate("bb84", q_opt=0.6)
    with pytest.raises(TypeError):
        q.key_rate("bb84", wavelength=1550)
    with pytest.raises(ValueError):
        q.key_rate("e91")


def test_optimizer_and_distance():
    near = q.optimize_mu("bb84", 10.0)
    far = q.optimize_mu("bb84", 30.0)
    assert 0.0 < far["mu_opt"] < near["mu_opt"] < 1.0
    km_bb, status_bb = q.secure_distance("bb84")
    km_qt, status_qt = q.secure_distance("qutrit")
    assert status_bb == status_qt == "ok"
    assert km_qt - km_bb >= 10.0


def test_curve_order_and_workers():
    lengths = [0.0, 5.0, 10.0, 20.0]
    one = q.curve("qutrit", lengths)
    four = q.curve("qutrit", lengths, workers=4)
    assert [p["length_km"] for p in one] == lengths
    assert one == four


def test_encoding_routes_agree():
    quarter = math.pi / 2
    for a in range(4):
        for b in range(4):
            direct = q.encode_qutrit(a * quarter, b * quarter)
            projected = q.encode_via_projection(a * quarter, b * quarter)
            overlap = abs(sum(x.conjugate() * y for x, y in zip(direct, projected)))
            assert overlap == pytest.approx(1.0, abs=1e-12)
            assert q.decode_success_probability(a * quarter, b * quarter, 1) == pytest.approx(2 / 3, abs=1e-12)
    with pytest.raises(ValueError):
        q.encode_qutrit(0.3, 0.0)


def test_simulate_is_seeded():
    kwargs = dict(strategy="qubit_forward", source="single_photon", rounds=20000, seed=9,
                  length_km=0, gamma_b=1, eta=1, p_d=0, q_opt=0)
    a = q.simulate("qutrit", **kwargs)
    b = q.simulate("qutrit", workers=3, **kwargs)
    assert a == b
    assert a["counts"]["rounds"] == 20000
    assert abs(a["rates"]["qber"] - 1 / 3) < 4 * a["standard_errors"]["qber"]

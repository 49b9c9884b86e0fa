import math

import numpy as np
import pytest

import comb_qmc

BETA2 = 0.5 * math.log(2.0)


def test_params_theta_two():
    p = comb_qmc.model_params(BETA2, 1.0)
    assert p["tau1"] == pytest.approx(3.5, rel=1e-12)
    assert p["tau3"] == pytest.approx(3.0, rel=1e-12)
    assert p["alpha"] == pytest.approx(2 / 7, rel=1e-12)


def test_branches_theta_three():
    out = comb_qmc.branches(0.5 * math.log(3.0), 1.0)
    assert [b["admissible"] for b in out] == [True, False, False]
    assert np.allclose(out[0]["h"], np.eye(2) / 9)


def test_routes_agree():
    zz = [((0, 0), "sz"), ((1, 0), "sz")]
    values = [comb_qmc.evaluate(zz, 2, BETA2, 1.0, route) for route in ("iterative", "product", "oracle")]
    for v in values:
        assert v == pytest.approx(3 / 7, abs=1e-10)


def test_general_factor():
    m = np.array([[0.2, 1j], [-1j, 0.7]])
    a = comb_qmc.evaluate([((0, 1), m)], 1, BETA2, 1.0)
    b = comb_qmc.evaluate([((0, 1), m)], 2, BETA2, 1.0, "oracle")
    assert a == pytest.approx(b, abs=1e-12)


def test_clustering_rate():
    r = comb_qmc.clustering(BETA2, 1.0, 6)
    assert r["clustering"]
    assert r["lambda"] == pytest.approx(3 / 7, abs=1e-8)
    assert r["match"] == "tau3/(2tau1)"


def test_errors():
    with pytest.raises(ValueError):
        comb_qmc.model_params(-1.0, 1.0)
    with pytest.raises(comb_qmc.VolumeTooLarge):
        comb_qmc.evaluate([], 5, BETA2, 1.0, "oracle")

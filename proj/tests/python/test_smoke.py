"""Python smoke tests for the semidecay extension.

Run either against an installed package or a CMake build tree (the ctest
harness points SEMIDECAY_EXT_DIR at the built extension).
"""

import json
import math
import os
import sys

import numpy as np
import pytest

for var in ("SEMIDECAY_EXT_DIR", "SEMIDECAY_PY_SRC"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)

sd = pytest.importorskip("semidecay")


def test_catalog_quadrature_matches_closed_forms():
    for name in sd.catalog_names():
        for lam in (0.1, 1.0, 7.0, 2.0 + 3.0j):
            q = sd.eval_cbf(name, lam)
            cf = sd.eval_cbf_closed_form(name, lam)
            assert abs(q - cf) <= 1e-6 * (1 + abs(cf))


def test_operator_basics():
    A = sd.OperatorModel.diagonal(np.array([1.0 + 1.0j, 2.0, 3.0 - 0.5j]))
    assert A.dim == 3
    eigs = sd.spectrum(A)
    assert abs(eigs[0] - (1.0 + 1.0j)) < 1e-14

    R = sd.resolvent_shift(A, 0.0)
    assert abs(R[0, 0] - 1.0 / (1.0 + 1.0j)) < 1e-14

    value, estimated = sd.operator_norm(np.array([[0.0, 2.0], [0.0, 0.0]]), 2.0)
    assert not estimated
    assert abs(value - 2.0) < 1e-12


def test_evolve_and_decay_curve():
    A = sd.OperatorModel.diagonal(np.array([1.0 + 0j]))
    T = sd.evolve(A, 1.0)
    assert abs(T[0, 0] - math.exp(-1.0)) < 1e-14

    fam = sd.build_family({"kind": "DiagInf", "beta": 1.0, "b": 0.0, "N": 64})
    t, v = sd.decay_curve(fam, "infinity", nu=2.0, t_min=1.0, t_max=100.0, per_decade=10)
    assert len(t) == len(v)
    # decays at least like the Hilbert envelope t^{-1}
    assert v[-1] < v[0] * (t[0] / t[-1])


def test_dunford_against_oracle():
    A = sd.OperatorModel.jordan2(2.0 + 0.4j, 1.0)
    value, oracle, rel, tail = sd.dunford(A, alpha=1.0, beta=1.0, upsilon1=1.0)
    assert rel <= 1e-6
    assert tail <= 1e-6
    assert value.shape == (2, 2)


def test_log_operator_identity():
    A = sd.OperatorModel.diagonal(np.array([math.e + 0j]))
    L = sd.log_operator(A)
    assert abs(L[0, 0] - 1.0) < 1e-8


def test_laplace_orbit_matches_weighted_semigroup():
    A = sd.OperatorModel.diagonal(np.array([1.0 + 0j]))
    y = np.ones(1, dtype=complex)
    value, tail = sd.laplace_orbit_infinity(A, 2.0, 1.0, 0.0, y)
    assert abs(value[0] - 0.25 / math.log(3.0)) < 1e-6


def test_predict_decay_and_gate():
    pred = sd.predict_decay("CorHilbertInf", {"beta": 1.0, "b": 0.0, "tau": 2.0})
    assert pred["poly"] == pytest.approx(-1.0)
    with pytest.raises(sd.SemidecayError):
        sd.predict_decay("CorHilbertInf", {"beta": 1.0, "tau": 0.5})


def test_run_experiment_smoke():
    spec = {
        "name": "py-smoke",
        "family": {"kind": "DiagInf", "beta": 1.0, "b": 0.0, "N": 128},
        "theorem": "CorHilbertInf",
        "params": {"beta": 1.0, "b": 0.0, "tau": 2.0},
        "t_grid": {"t_min": 1.0, "t_max": 1000.0, "per_decade": 10},
    }
    rep = sd.run_experiment(spec)
    assert rep["verdict"] == "PASS"
    assert rep["fitted_poly_exponent"] < -1.5


def test_paper_suite_shape():
    suite = sd.paper_suite()
    assert len(suite) == 7
    names = {e["name"] for e in suite}
    assert "thminf-jordan-unbounded" in names
    # specs are JSON round-trippable
    json.dumps(suite)

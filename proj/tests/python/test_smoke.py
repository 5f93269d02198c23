"""Smoke tests for the python bindings.

These do not retest the numerics (the C++ unit and acceptance suites own
that); they check that the extension loads, arrays round-trip, argument
defaults behave, and a small solve is deterministic and feasible.
"""

import math

import numpy as np
import pytest

import spgm


def test_prox_matches_scalar_cases():
    # Below the threshold kappa*lam = 0.02 the MCP prox collapses to zero;
    # past the vanishing point nu*kappa = 2 the penalty is flat and the prox
    # is the identity.
    w = np.array([0.01, -5.0, 5.0])
    z = spgm.prox(w, kind="mcp", kappa=2.0, nu=1.0, lam=0.01)
    assert z[0] == 0.0
    assert z[1] == -5.0 and z[2] == 5.0

    # zero penalty: prox is the identity for any lam
    w = np.linspace(-2, 2, 7)
    np.testing.assert_array_equal(spgm.prox(w, kind="zero", lam=0.3), w)

    with pytest.raises(ValueError):
        spgm.prox(w, kind="lasso")


def test_penalty_value_zero_at_origin():
    w = np.zeros(4)
    assert spgm.penalty_value(w, kind="mcp", kappa=0.5) == 0.0
    assert spgm.penalty_value(w, kind="scad", kappa=0.5) == 0.0
    v = spgm.penalty_value(np.ones(4), kind="mcp", kappa=0.5, nu=1.0)
    assert v > 0.0


def test_project_simplex():
    w = np.array([2.0, 1.0, -3.0])
    z = spgm.project(w, kind="simplex")
    assert z.shape == (3,)
    assert abs(z.sum() - 1.0) < 1e-12
    assert (z >= 0).all()
    np.testing.assert_allclose(z, [1.0, 0.0, 0.0])

    z = spgm.project(np.full(5, -1.0), kind="nonneg-ball")
    np.testing.assert_array_equal(z, np.zeros(5))


def test_synthetic_pca_shape_and_determinism():
    x1, u1 = spgm.synthetic_pca(d=12, n=30, sparsity=0.75, seed=7, noise_std=0.05)
    x2, u2 = spgm.synthetic_pca(d=12, n=30, sparsity=0.75, seed=7, noise_std=0.05)
    assert x1.shape == (12, 30)
    assert u1.shape == (12,)
    np.testing.assert_array_equal(x1, x2)
    np.testing.assert_array_equal(u1, u2)
    assert abs(np.linalg.norm(u1) - 1.0) < 1e-12
    # sparsity 0.75 of 12 coordinates leaves 3 nonzeros
    assert np.count_nonzero(u1) == 3


def test_solve_pca_report():
    x, _ = spgm.synthetic_pca(d=6, n=32, sparsity=0.5, seed=5, noise_std=0.2)

    rep = spgm.solve_pca(x, algorithm="vrspa", budget=12, seed=11)
    # n=32: m=ceil(32^(1/3))=4, b=16, S=3 epochs; snapshot n plus m*b per epoch
    assert rep["gradient_calls"] == 3 * 32 + 3 * 4 * 16
    assert rep["prox_g_calls"] == 12
    assert rep["prox_h_calls"] == 12
    assert rep["schedule"]["inner_m"] == 4
    assert rep["schedule"]["batch_b"] == 16
    assert rep["schedule"]["epochs_S"] == 3

    w = rep["final"]
    assert w.shape == (6,)
    assert (w >= -1e-12).all()
    assert np.linalg.norm(w) <= 1.0 + 1e-10
    assert math.isfinite(rep["phi"]) and math.isfinite(rep["stationarity"])
    assert rep["trace_phi"], "trace should have at least the final row"
    # default start is the uniform feasible point, not the origin (which is
    # a fixed point of this problem and would pin every solver)
    assert rep["phi"] != 0.0
    assert np.any(w != 0.0)

    # same config, same stream: bitwise identical run
    rep2 = spgm.solve_pca(x, algorithm="vrspa", budget=12, seed=11)
    np.testing.assert_array_equal(rep2["final"], w)
    np.testing.assert_array_equal(rep2["output"], rep["output"])
    assert rep2["phi"] == rep["phi"]

    # theory mode stops at the pre-drawn index; counters shrink accordingly
    thin = spgm.solve_pca(x, algorithm="mbspa", budget=1, seed=0, theory=True)
    assert thin["gradient_calls"] == 0
    assert thin["prox_g_calls"] == 1
    assert thin["prox_h_calls"] == 0
    assert thin["r_index"] == 1


def test_run_benchmark_json(tmp_path):
    out = tmp_path / "bench-out"
    cfg = """
    {
      "problem": {
        "application": "pca",
        "synthetic": {"d": 5, "n": 16, "sparsity": 0.5, "noise_std": 0.2, "seed": 3},
        "regularizer": {"kind": "mcp"}
      },
      "solvers": [{"name": "quick", "algorithm": "mbspa", "budget": 8}],
      "seeds": [1],
      "output_dir": "%s"
    }
    """ % str(out).replace("\\", "/")
    assert spgm.run_benchmark_json(cfg) == 0
    trace = out / "quick_seed1.csv"
    summary = out / "summary.csv"
    assert trace.is_file() and summary.is_file()
    header = trace.read_text().splitlines()[0]
    assert header == "iter,grad_calls,prox_calls,phi,stationarity,elapsed_s"

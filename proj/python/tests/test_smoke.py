import os
import subprocess

import numpy as np
import pytest

import rock


def test_gram_is_symmetric_with_unit_diagonal():
    X = np.random.default_rng(0).normal(size=(3, 7))
    G = rock.gram(rock.KernelSpec.gaussian(1.3), X, X)
    assert G.shape == (7, 7)
    np.testing.assert_allclose(G, G.T, atol=1e-14)
    np.testing.assert_allclose(np.diag(G), 1.0)


def test_legendre_columns_are_orthonormal():
    ts = np.linspace(-0.5, 2.0, 4001)
    P = rock.legendre_features(ts, 4, -0.5, 2.0)
    w = rock.trapezoid_weights(ts)
    np.testing.assert_allclose(P.T @ (w[:, None] * P), np.eye(5), atol=1e-5)


def test_train_forecast_and_roundtrip(tmp_path):
    data = rock.generate("lorenz63", n_traj=4, samples=81, dt=0.01, seed=2)
    model = rock.train(rock.cut_trajectories(data, 11), rock.KernelSpec.gaussian(8.0), 1e-6, 2)
    assert model.dim == 3
    report = rock.evaluate(model, data)
    assert np.isfinite(report["one_err"]) and report["one_err"] < 0.5

    path = tmp_path / "m.rock"
    rock.save_model(str(path), model)
    loaded = rock.load_model(str(path))
    grid = np.linspace(0.0, 0.3, 31)
    a = model.forecast(data[0][1][:, 0], grid)
    b = loaded.forecast(data[0][1][:, 0], grid)
    assert np.array_equal(a, b)


def test_invalid_lambda_raises():
    data = rock.generate("fitzhugh_nagumo", n_traj=2, samples=11)
    with pytest.raises(rock.RockError, match="lambda"):
        rock.train(data, rock.KernelSpec.gaussian(1.0), 0.0, 1)


def test_parameter_count():
    assert rock.count_parameters(240, 6, 16384) == 23592960


def test_heat_coefficients():
    u, ts, xs = rock.generate_field("heat1d", n_space=128, n_times=100, dt=0.02, seed=1)
    model = rock.train_pde(u, ts, xs, lam=1e-10, coarsen=1)
    coeffs = dict(zip(model.feature_names, model.alpha))
    assert abs(coeffs["u_xx"] - 0.1) < 0.005


@pytest.mark.skipif("ROCK_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_reports_schema_errors(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"dataset": {"generator": {"system": "lorenz63"}}, "model": {"lambda": -1}}')
    proc = subprocess.run([os.environ["ROCK_CLI"], "train", "--config", str(cfg)],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stderr.startswith("error: schema:")

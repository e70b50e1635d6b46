import math

import numpy as np
import pytest

import logens


@pytest.fixture(scope="module")
def desk():
    raw = logens.generate_synthetic(rows=6000, features=16, periods=3, seed=11)
    train, holdout = logens.prepare(raw)
    model = logens.train_ensemble(train, samples_per_period=4, feature_fraction=0.5, seed=3)
    return train, holdout, model


def test_saturated_logit():
    x = np.array([[1.0]] * 4 + [[0.0]] * 4)
    y = np.array([1, 1, 1, 0, 1, 0, 0, 0], dtype=float)
    fit = logens.fit_logit(x, y)
    assert fit["intercept"] == pytest.approx(math.log(1 / 3), abs=1e-8)
    assert fit["coefficients"][0] == pytest.approx(math.log(9), abs=1e-8)


def test_simplex_worked_example():
    p = np.array([[0.8, 0.6], [0.4, 0.2]])
    y = np.array([1.0, 0.0])
    sol = logens.solve_weights(p, y)
    assert sol["weights"] == pytest.approx([0.5, 0.5], abs=1e-8)
    assert sol["objective"] == pytest.approx(0.18, abs=1e-10)
    assert sum(sol["weights"]) == pytest.approx(1.0, abs=1e-12)


def test_projection_lands_on_simplex():
    w = logens.project_to_simplex(np.array([3.0, -1.0, 0.5]))
    assert w.min() >= 0 and w.sum() == pytest.approx(1.0)


def test_metrics_hand_example():
    assert logens.ks_statistic([0.9, 0.7, 0.4, 0.2], [1, 0, 1, 0]) == pytest.approx(0.5)
    assert logens.concordance([0.9, 0.7, 0.4, 0.2], [1, 0, 1, 0]) == (3, 1, 0)


def test_ensemble_scores_are_convex_combinations(desk):
    _, holdout, model = desk
    scores = model.score(holdout)
    members = model.member_scores(holdout)
    assert math.isclose(sum(model.weights), 1.0, abs_tol=1e-12)
    assert np.all(scores >= members.min(axis=1)) and np.all(scores <= members.max(axis=1))
    assert logens.evaluate(list(scores), holdout.labels)["ks"] > 0.1


def test_ensemble_json_round_trip(desk):
    _, holdout, model = desk
    again = logens.Ensemble.from_json(model.to_json())
    assert np.max(np.abs(again.score(holdout) - model.score(holdout))) <= 1e-12


def test_reason_codes_sorted(desk):
    _, _, model = desk
    row = model.reference_row("median")
    codes = model.reason_codes(row, top_n=3)
    assert len(codes) == 3
    mags = [abs(c[1]) for c in codes]
    assert mags == sorted(mags, reverse=True)


def test_baseline_trains_and_scores(desk):
    train, holdout, _ = desk
    base = logens.train_baseline(train, bins=5)
    s = base.score(holdout)
    assert s.shape == (len(holdout),) and np.all((s > 0) & (s < 1))


def test_errors_map_to_python_types():
    with pytest.raises(logens.ConfigError):
        logens.fit_logit(np.ones((4, 1)), np.array([0.0, 1.0, 0.0, 1.0]), alpha=1.5)
    with pytest.raises(logens.Error):
        logens.Dataset(["a"], np.ones((2, 1)), [0, 2])

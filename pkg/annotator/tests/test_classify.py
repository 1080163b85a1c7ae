from __future__ import annotations

import numpy as np
import pytest

from artannot.classify import (
    benchmark_classifiers,
    frequency_weighted_baseline,
    train_classifier,
)


def separable_two_class(n=60, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.normal(loc=-5.0, size=(n // 2, 4))
    b = rng.normal(loc=+5.0, size=(n // 2, 4))
    features = np.vstack([a, b])
    labels = np.array(["left"] * (n // 2) + ["right"] * (n // 2))
    return features, labels


class TestTrainClassifier:
    def test_separable_case_perfect_accuracy(self):
        features, labels = separable_two_class()
        trained = train_classifier(features, labels, "side", seed=3)
        assert trained.accuracy == 1.0
        assert trained.beats_baseline is True
        assert trained.n_train == 48 and trained.n_test == 12

    def test_shuffled_labels_hover_at_chance(self):
        # Monte-Carlo over shuffles: random features cannot beat the
        # frequency-weighted predictor beyond noise on 3 balanced classes.
        rng = np.random.default_rng(0)
        n, runs = 120, 20
        features = rng.normal(size=(n, 6))
        accuracies = []
        for run in range(runs):
            labels = np.array(["a", "b", "c"] * (n // 3))
            rng.shuffle(labels)
            trained = train_classifier(features, labels, "noise", seed=run)
            accuracies.append(trained.accuracy)
            assert trained.baseline_accuracy == pytest.approx(1 / 3, abs=0.02)
        mean = float(np.mean(accuracies))
        sigma = float(np.std(accuracies) / np.sqrt(runs))
        # no edge over the frequency-weighted predictor beyond MC noise
        assert abs(mean - 1 / 3) <= 3 * sigma + 0.02

    def test_fixed_seed_reproducible(self):
        features, labels = separable_two_class(seed=5)
        first = train_classifier(features, labels, "side", seed=11)
        second = train_classifier(features, labels, "side", seed=11)
        assert first.accuracy == second.accuracy
        assert first.baseline_accuracy == second.baseline_accuracy

    def test_single_class_rejected(self):
        features = np.zeros((20, 3))
        labels = np.array(["same"] * 20)
        with pytest.raises(ValueError, match="single class"):
            train_classifier(features, labels, "flat")

    def test_thin_class_warns(self):
        rng = np.random.default_rng(1)
        features = rng.normal(size=(15, 3))
        labels = np.array(["a"] * 10 + ["b"] * 5)
        with pytest.warns(UserWarning, match="below 10"):
            train_classifier(features, labels, "thin")

    def test_unknown_classifier_kind(self):
        features, labels = separable_two_class()
        with pytest.raises(ValueError, match="unknown classifier"):
            train_classifier(features, labels, "side", classifier="quantum")


class TestBaseline:
    def test_balanced_three_class(self):
        train = ["a"] * 10 + ["b"] * 10 + ["c"] * 10
        test = ["a", "b", "c"] * 4
        assert frequency_weighted_baseline(train, test) == pytest.approx(1 / 3)

    def test_skewed_distribution(self):
        train = ["a"] * 90 + ["b"] * 10
        test = ["a"] * 9 + ["b"]
        assert frequency_weighted_baseline(train, test) == pytest.approx(
            0.9 * 0.9 + 0.1 * 0.1
        )


def test_benchmark_covers_all_kinds():
    features, labels = separable_two_class()
    scores = benchmark_classifiers(features, labels, "side", seed=0)
    assert set(scores) == {"svc", "random_forest", "perceptron"}
    assert all(0.0 <= v <= 1.0 for v in scores.values())

"""Per-variable classifiers on frozen image features.

Linear SVM is the production choice; random forest and perceptron stay
available for benchmark comparisons. Every trained classifier is scored on a
stratified 20% holdout and compared against the frequency-weighted random
predictor; variables that fail to beat it are flagged, not dropped.
"""
from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass

import numpy as np
from sklearn.ensemble import RandomForestClassifier
from sklearn.linear_model import Perceptron
from sklearn.model_selection import train_test_split
from sklearn.pipeline import Pipeline, make_pipeline
from sklearn.preprocessing import StandardScaler
from sklearn.svm import LinearSVC

CLASSIFIERS = ("svc", "random_forest", "perceptron")
MIN_RECOMMENDED_PER_CLASS = 10


@dataclass(frozen=True)
class TrainedVariable:
    variable: str
    model: Pipeline
    accuracy: float
    baseline_accuracy: float
    beats_baseline: bool
    n_train: int
    n_test: int


def _make_model(kind: str, seed: int) -> Pipeline:
    if kind == "svc":
        estimator = LinearSVC(random_state=seed)
    elif kind == "random_forest":
        estimator = RandomForestClassifier(n_estimators=100, random_state=seed)
    elif kind == "perceptron":
        estimator = Perceptron(random_state=seed)
    else:
        raise ValueError(f"unknown classifier {kind!r}, expected one of {CLASSIFIERS}")
    return make_pipeline(StandardScaler(), estimator)


def frequency_weighted_baseline(train_labels, test_labels) -> float:
    """Expected accuracy of predicting class c with its training frequency."""
    train_freq = Counter(train_labels)
    n_train = len(train_labels)
    test_freq = Counter(test_labels)
    n_test = len(test_labels)
    return sum(
        (train_freq[c] / n_train) * (test_freq[c] / n_test) for c in test_freq
    )


def train_classifier(
    features: np.ndarray,
    labels,
    variable: str,
    seed: int = 0,
    classifier: str = "svc",
) -> TrainedVariable:
    """Stratified 80/20 split, fit on train, score on test.

    Raises on single-class labels; warns below 10 samples per class.
    """
    labels = np.asarray(labels)
    if features.shape[0] != labels.shape[0]:
        raise ValueError("features and labels length mismatch")
    class_counts = Counter(labels.tolist())
    if len(class_counts) < 2:
        raise ValueError(f"variable {variable!r} has a single class")
    thin = [c for c, n in class_counts.items() if n < MIN_RECOMMENDED_PER_CLASS]
    if thin:
        warnings.warn(
            f"variable {variable!r}: classes below {MIN_RECOMMENDED_PER_CLASS} samples: {sorted(thin)}",
            stacklevel=2,
        )

    x_train, x_test, y_train, y_test = train_test_split(
        features, labels, test_size=0.2, stratify=labels, random_state=seed
    )
    model = _make_model(classifier, seed)
    model.fit(x_train, y_train)
    accuracy = float(model.score(x_test, y_test))
    baseline = frequency_weighted_baseline(y_train.tolist(), y_test.tolist())
    return TrainedVariable(
        variable=variable,
        model=model,
        accuracy=accuracy,
        baseline_accuracy=baseline,
        beats_baseline=accuracy > baseline,
        n_train=len(y_train),
        n_test=len(y_test),
    )


def benchmark_classifiers(
    features: np.ndarray, labels, variable: str, seed: int = 0
) -> dict[str, float]:
    """Test accuracy per classifier kind, for side-by-side comparison."""
    return {
        kind: train_classifier(features, labels, variable, seed, kind).accuracy
        for kind in CLASSIFIERS
    }

"""Logistic-regression score calibration with stratified k-fold cross-validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .metrics import NONTARGET, TARGET, TrialRecord

# canonical feature order; a feature set is any subset of these names
FEATURE_ORDER = ("raw", "lns", "cu", "wcu")

NET_SPEECH_FLOOR = 0.01  # seconds, applied before the log

MAX_ITER = 100
GRAD_TOL = 1e-8
RIDGE = 1e-9


def log_net_speech(net_speech: float) -> float:
    """Natural log of net speech, floored at 0.01 s so zero duration stays finite."""
    return math.log(max(net_speech, NET_SPEECH_FLOOR))


@dataclass
class CalibrationModel:
    """Affine logit model over (raw score, quality features)."""

    coefficients: np.ndarray
    intercept: float
    feature_names: tuple[str, ...]
    class_weights: tuple[float, float] = (1.0, 1.0)  # (w_target, w_nontarget)
    converged: bool = True
    seed: int | None = None

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (len(self.feature_names),):
            raise ValueError("coefficient count must equal feature count")


def build_features(trials: list[TrialRecord], qmfs: dict[str, dict[str, float]],
                   feature_set) -> tuple[np.ndarray, tuple[str, ...]]:
    """Assemble the (n, d) feature matrix in canonical feature order.

    ``raw`` comes from the trial score; ``lns``, ``cu``, ``wcu`` come from
    the per-test QMF map (``lns`` may be given directly or derived from
    ``net_speech``).
    """
    names = tuple(n for n in FEATURE_ORDER if n in set(feature_set))
    unknown = set(feature_set) - set(FEATURE_ORDER)
    if unknown:
        raise ValueError(f"unknown feature names: {sorted(unknown)}")
    rows = []
    for t in trials:
        row = []
        for name in names:
            if name == "raw":
                row.append(t.raw_score)
                continue
            q = qmfs.get(t.test_id)
            if q is None:
                raise ValueError(f"missing QMF values for test {t.test_id!r}")
            if name == "lns":
                if "lns" in q:
                    row.append(q["lns"])
                elif "net_speech" in q:
                    row.append(log_net_speech(q["net_speech"]))
                else:
                    raise ValueError(f"no lns/net_speech for test {t.test_id!r}")
            else:
                if name not in q:
                    raise ValueError(f"missing QMF {name!r} for test {t.test_id!r}")
                row.append(q[name])
        rows.append(row)
    X = np.asarray(rows, dtype=float).reshape(len(trials), len(names))
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite feature value")
    return X, names


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # overflow-safe piecewise form
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def fit_lr(features: np.ndarray, labels, feature_names=(), class_weighting: bool = True) -> CalibrationModel:
    """Newton/IRLS fit of class-weighted logistic regression.

    labels are 1 for target, 0 for nontarget (or the string labels).
    Deterministic: zero initialization, convergence when max |gradient|
    < 1e-8, at most 100 iterations, ridge 1e-9 on the Hessian.
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2:
        raise ValueError("features must be a 2-D array")
    y = np.array([1.0 if lab in (1, 1.0, True, TARGET) else 0.0 for lab in labels])
    n, d = X.shape
    if y.size != n:
        raise ValueError("feature/label count mismatch")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite feature value")
    n_tar = int(y.sum())
    n_non = n - n_tar
    if n_tar == 0 or n_non == 0:
        raise ValueError("fit_lr requires both classes present")

    if class_weighting:
        w_tar = n / (2.0 * n_tar)
        w_non = n / (2.0 * n_non)
    else:
        w_tar = w_non = 1.0
    sample_w = np.where(y == 1.0, w_tar, w_non)

    Xb = np.hstack([np.ones((n, 1)), X])  # intercept first

    def loglik(b):
        z = Xb @ b
        return float(np.sum(sample_w * (y * z - np.logaddexp(0.0, z))))

    beta = np.zeros(d + 1)
    converged = False
    for _ in range(MAX_ITER):
        z = Xb @ beta
        p = _sigmoid(z)
        grad = Xb.T @ (sample_w * (y - p))
        if np.max(np.abs(grad)) < GRAD_TOL:
            converged = True
            break
        r = sample_w * p * (1.0 - p)
        H = Xb.T @ (Xb * r[:, None]) + RIDGE * np.eye(d + 1)
        step = np.linalg.solve(H, grad)
        # halve the Newton step until the weighted log-likelihood does not
        # decrease; keeps separable data growing monotonically instead of
        # oscillating once the Hessian degenerates
        base = loglik(beta)
        for _ in range(30):
            if loglik(beta + step) >= base:
                break
            step = step / 2.0
        else:
            break
        beta = beta + step

    return CalibrationModel(
        coefficients=beta[1:],
        intercept=float(beta[0]),
        feature_names=tuple(feature_names) if feature_names else tuple(f"f{i}" for i in range(d)),
        class_weights=(w_tar, w_non),
        converged=converged,
    )


def apply_lr(model: CalibrationModel, features: np.ndarray, feature_names=None) -> np.ndarray:
    """Calibrated scores in the logit (log-odds) domain."""
    X = np.asarray(features, dtype=float)
    if feature_names is not None and tuple(feature_names) != tuple(model.feature_names):
        raise ValueError(f"feature names {tuple(feature_names)} do not match model {model.feature_names}")
    if X.shape[1] != model.coefficients.shape[0]:
        raise ValueError("feature dimension does not match model")
    return model.intercept + X @ model.coefficients


def stratified_folds(labels: list[str], k: int, seed: int) -> np.ndarray:
    """Seeded shuffle then round-robin fold assignment within each class.

    Returns an array of fold indices in [0, k). Per-class fold counts
    differ by at most one trial.
    """
    labels = list(labels)
    n = len(labels)
    rng = np.random.default_rng(seed)
    folds = np.empty(n, dtype=int)
    for label in (TARGET, NONTARGET):
        idx = np.array([i for i, lab in enumerate(labels) if lab == label])
        if idx.size < k:
            raise ValueError(f"need at least {k} {label} trials for {k}-fold split, got {idx.size}")
        rng.shuffle(idx)
        folds[idx] = np.arange(idx.size) % k
    return folds


def cross_validated_calibration(trials: list[TrialRecord], qmfs: dict[str, dict[str, float]],
                                feature_set, k: int = 5, seed: int = 0):
    """Out-of-fold calibrated scores from stratified k-fold logistic regression.

    Each fold is scored by the model fit on the other k-1 folds; pooled
    scores are returned in the original trial order together with the
    per-fold models.
    """
    X, names = build_features(trials, qmfs, feature_set)
    labels = [t.label for t in trials]

    if k == 1:
        # degenerate case: train on everything, score everything
        model = fit_lr(X, labels, feature_names=names, class_weighting=True)
        model.seed = seed
        scores = apply_lr(model, X)
        calibrated = [TrialRecord(t.model_id, t.test_id, t.label, float(scores[i]))
                      for i, t in enumerate(trials)]
        return calibrated, [model]

    folds = stratified_folds(labels, k, seed)

    pooled = np.empty(len(trials))
    models = []
    for fold in range(k):
        train = folds != fold
        test = ~train
        model = fit_lr(X[train], [labels[i] for i in np.flatnonzero(train)],
                       feature_names=names, class_weighting=True)
        model.seed = seed
        pooled[test] = apply_lr(model, X[test])
        models.append(model)

    calibrated = [
        TrialRecord(t.model_id, t.test_id, t.label, float(pooled[i]))
        for i, t in enumerate(trials)
    ]
    return calibrated, models


def save_model(model: CalibrationModel, path: str | Path, provenance: str | None = None) -> None:
    lines = []
    if provenance:
        lines.append(provenance)
    lines.append(f"intercept\t{model.intercept:.17g}")
    lines.append(f"class_weight_target\t{model.class_weights[0]:.17g}")
    lines.append(f"class_weight_nontarget\t{model.class_weights[1]:.17g}")
    lines.append(f"converged\t{int(model.converged)}")
    lines.append(f"seed\t{'' if model.seed is None else model.seed}")
    for name, coef in zip(model.feature_names, model.coefficients):
        lines.append(f"coef:{name}\t{coef:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_model(path: str | Path) -> CalibrationModel:
    intercept = 0.0
    cw = [1.0, 1.0]
    converged = True
    seed = None
    names, coefs = [], []
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, value = line.split("\t", 1)
        if key == "intercept":
            intercept = float(value)
        elif key == "class_weight_target":
            cw[0] = float(value)
        elif key == "class_weight_nontarget":
            cw[1] = float(value)
        elif key == "converged":
            converged = bool(int(value))
        elif key == "seed":
            seed = int(value) if value else None
        elif key.startswith("coef:"):
            names.append(key[5:])
            coefs.append(float(value))
    return CalibrationModel(np.array(coefs), intercept, tuple(names), (cw[0], cw[1]), converged, seed)

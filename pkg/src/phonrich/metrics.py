"""EER, minC_primary, Kendall's tau-b, and protocol descriptive statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# NIST SRE primary-cost operating points: two target priors, unit costs.
MIN_C_PRIMARY_PRIORS = (0.01, 0.005)

TARGET = "target"
NONTARGET = "nontarget"


@dataclass(frozen=True)
class TrialRecord:
    """One verification trial: enrollment model vs. test utterance."""

    model_id: str
    test_id: str
    label: str  # "target" or "nontarget"
    raw_score: float

    def __post_init__(self):
        if self.label not in (TARGET, NONTARGET):
            raise ValueError(f"label must be target/nontarget, got {self.label!r}")
        if not math.isfinite(self.raw_score):
            raise ValueError(f"non-finite score for trial ({self.model_id}, {self.test_id})")


@dataclass
class MetricsReport:
    eer: float
    min_c_primary: float
    n_target: int
    n_nontarget: int
    threshold_at_eer: float


def split_scores(trials: list[TrialRecord]) -> tuple[np.ndarray, np.ndarray]:
    tar = np.array([t.raw_score for t in trials if t.label == TARGET], dtype=float)
    non = np.array([t.raw_score for t in trials if t.label == NONTARGET], dtype=float)
    if tar.size == 0 or non.size == 0:
        raise ValueError("need at least one target and one nontarget trial")
    return tar, non


def roc_points(tar: np.ndarray, non: np.ndarray):
    """Operating points swept over the distinct scores, accept iff score >= t.

    Returns (thresholds, far, frr) with a final virtual reject-all point.
    FAR and FRR depend on the scores only through their order, so every
    strictly increasing transform of the scores yields identical curves.
    """
    tar = np.sort(np.asarray(tar, dtype=float))
    non = np.sort(np.asarray(non, dtype=float))
    thresholds = np.unique(np.concatenate([tar, non]))
    far = 1.0 - np.searchsorted(non, thresholds, side="left") / non.size
    frr = np.searchsorted(tar, thresholds, side="left") / tar.size
    thresholds = np.append(thresholds, np.inf)
    far = np.append(far, 0.0)
    frr = np.append(frr, 1.0)
    return thresholds, far, frr


def compute_eer(trials: list[TrialRecord]) -> tuple[float, float]:
    """Equal error rate with linear interpolation between adjacent ROC points."""
    tar, non = split_scores(trials)
    return eer_from_scores(tar, non)


def eer_from_scores(tar, non) -> tuple[float, float]:
    thresholds, far, frr = roc_points(np.asarray(tar), np.asarray(non))
    diff = far - frr  # non-increasing along the sweep, starts at 1, ends at -1
    idx = int(np.argmax(diff <= 0))
    if diff[idx] == 0 or idx == 0:
        return float(far[idx]), float(thresholds[idx])
    d0, d1 = diff[idx - 1], diff[idx]
    alpha = d0 / (d0 - d1)
    eer = far[idx - 1] + alpha * (far[idx] - far[idx - 1])
    t0, t1 = thresholds[idx - 1], thresholds[idx]
    thr = t0 if not np.isfinite(t1) else t0 + alpha * (t1 - t0)
    return float(eer), float(thr)


def compute_min_c_primary(trials: list[TrialRecord]) -> float:
    """Mean normalized minimum detection cost at target priors 0.01 and 0.005."""
    tar, non = split_scores(trials)
    return min_c_primary_from_scores(tar, non)


def min_c_primary_from_scores(tar, non) -> float:
    _, far, frr = roc_points(np.asarray(tar), np.asarray(non))
    costs = []
    for p_target in MIN_C_PRIMARY_PRIORS:
        dcf = p_target * frr + (1.0 - p_target) * far
        costs.append(dcf.min() / min(p_target, 1.0 - p_target))
    return float(np.mean(costs))


def _count_inversions(seq: list[int]) -> int:
    """Merge-sort inversion count."""

    def sort(a):
        n = len(a)
        if n <= 1:
            return a, 0
        left, li = sort(a[: n // 2])
        right, ri = sort(a[n // 2:])
        merged = []
        inv = li + ri
        i = j = 0
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                merged.append(left[i])
                i += 1
            else:
                merged.append(right[j])
                j += 1
                inv += len(left) - i
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged, inv

    return sort(list(seq))[1]


def _tied_pairs(values: np.ndarray) -> int:
    _, counts = np.unique(values, return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def kendall_tau(x, y) -> float:
    """Kendall's tau-b: (C - D) / sqrt((n0 - tx)(n0 - ty)) with tie corrections.

    Knight's construction: sort by (x, y), count inversions of y for the
    discordant pairs, and correct concordant counts for ties.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("kendall_tau needs two equal-length 1-D sequences")
    n = x.size
    if n < 2:
        raise ValueError("kendall_tau needs at least 2 observations")

    n0 = n * (n - 1) // 2
    tx = _tied_pairs(x)
    ty = _tied_pairs(y)
    if tx == n0 or ty == n0:
        raise ValueError("all values tied in one list: tau-b undefined")

    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    # joint ties
    pair_view = np.stack([xs, ys], axis=1)
    changed = np.any(np.diff(pair_view, axis=0) != 0, axis=1)
    group_sizes = np.diff(np.concatenate([[0], np.flatnonzero(changed) + 1, [n]]))
    txy = int((group_sizes * (group_sizes - 1) // 2).sum())

    # inversions of y after the (x, y) sort; tied-x pairs contribute none
    y_ranks = np.searchsorted(np.unique(ys), ys).tolist()
    discordant = _count_inversions(y_ranks)
    concordant = n0 - tx - ty + txy - discordant
    return float((concordant - discordant) / math.sqrt((n0 - tx) * (n0 - ty)))


def correlation_report(trials: list[TrialRecord], qmfs: dict[str, dict[str, float]]):
    """Per class and per QMF: tau between the QMF and the raw score.

    Returns (taus, scatter_rows) where taus maps (label, qmf_name) -> tau
    and scatter_rows are (test_id, qmf_name, qmf_value, score, label).
    """
    qmf_names = None
    for t in trials:
        if t.test_id not in qmfs:
            raise ValueError(f"missing QMF values for test {t.test_id!r}")
        names = sorted(qmfs[t.test_id])
        qmf_names = names if qmf_names is None else qmf_names
    taus: dict[tuple[str, str], float] = {}
    scatter = []
    for label in (TARGET, NONTARGET):
        subset = [t for t in trials if t.label == label]
        if not subset:
            continue
        scores = [t.raw_score for t in subset]
        for name in qmf_names or []:
            values = [qmfs[t.test_id][name] for t in subset]
            taus[(label, name)] = kendall_tau(values, scores)
    for t in trials:
        for name in qmf_names or []:
            scatter.append((t.test_id, name, qmfs[t.test_id][name], t.raw_score, t.label))
    return taus, scatter


def protocol_stats(utterances: list[tuple[float, float]]):
    """Mean and population std of (net_speech, CU) columns."""
    if not utterances:
        raise ValueError("protocol_stats requires a non-empty list")
    arr = np.asarray(utterances, dtype=float)
    ns, cu = arr[:, 0], arr[:, 1]
    return (float(ns.mean()), float(ns.std()), float(cu.mean()), float(cu.std()))

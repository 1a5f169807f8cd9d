"""Count-unique (CU) and weighted count-unique (WCU) phonetic-richness measures."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .inventory import PhonemeInventory, PresenceVector
from .lexicon import PhonemeTranscription
from .nnls import nnls


def count_unique(p: PresenceVector) -> int:
    """Number of distinct inventory phonemes present in the utterance."""
    return int(p.bits.sum())


@dataclass
class RichnessWeights:
    """Learned non-negative per-phoneme weight vector for WCU."""

    weights: np.ndarray
    fit_residual: float = 0.0
    n_train: int = 0

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (39,):
            raise ValueError(f"weights must have length 39, got shape {self.weights.shape}")
        if np.any(self.weights < 0):
            raise ValueError("weights must be non-negative")


def weighted_count_unique(p: PresenceVector, w: RichnessWeights) -> float:
    """Dot product of the weight vector with the phoneme-presence bits."""
    if w.weights.shape[0] != p.bits.shape[0]:
        raise ValueError("weight/presence length mismatch")
    return float(w.weights @ p.bits)


def fit_weights(pairs: list[tuple[PresenceVector, float]], seed: int = 0) -> RichnessWeights:
    """Fit non-negative per-phoneme weights to positive-trial scores.

    Solves min_w ||P w - s||^2 subject to w >= 0 with no intercept, where
    row u of P is the presence vector of utterance u and s_u is the ASV
    score of that utterance against its own speaker's enrollment. The
    active-set solve is deterministic; ``seed`` is accepted for interface
    uniformity and recorded nowhere.
    """
    if not pairs:
        raise ValueError("fit_weights requires a non-empty training set")
    P = np.array([p.bits for p, _ in pairs], dtype=float)
    s = np.array([score for _, score in pairs], dtype=float)
    if not P.any():
        raise ValueError("all-zero presence matrix: no identifiable weights")
    w, rnorm = nnls(P, s)
    rms = rnorm / np.sqrt(len(pairs))
    return RichnessWeights(w, fit_residual=float(rms), n_train=len(pairs))


def weight_report(w: RichnessWeights, corpus: list[PhonemeTranscription],
                  inventory: PhonemeInventory | None = None) -> list[tuple[str, float, float]]:
    """Per phoneme: weight normalized to sum to one vs. corpus token frequency.

    Rows are in inventory order: (symbol, normalized_weight, frequency).
    """
    inventory = inventory or PhonemeInventory()
    if not corpus:
        raise ValueError("weight_report requires a non-empty corpus")
    total_weight = w.weights.sum()
    if total_weight == 0:
        raise ValueError("all-zero weight vector: normalization undefined")
    counts = np.zeros(inventory.size)
    for trans in corpus:
        for sym in trans.phonemes:
            counts[inventory.index(sym)] += 1
    total_tokens = counts.sum()
    freqs = counts / total_tokens if total_tokens > 0 else counts
    norm = w.weights / total_weight
    return [(sym, float(norm[i]), float(freqs[i])) for i, sym in enumerate(inventory.symbols)]


def save_weights(w: RichnessWeights, path: str | Path,
                 inventory: PhonemeInventory | None = None, provenance: str | None = None) -> None:
    """Persist weights as PHONEME<TAB>weight lines, 17 significant digits."""
    inventory = inventory or PhonemeInventory()
    lines = []
    if provenance:
        lines.append(provenance)
    lines.append(f"# n_train={w.n_train}\tfit_residual={w.fit_residual:.17g}")
    for i, sym in enumerate(inventory.symbols):
        lines.append(f"{sym}\t{w.weights[i]:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_weights(path: str | Path, inventory: PhonemeInventory | None = None) -> RichnessWeights:
    inventory = inventory or PhonemeInventory()
    n_train = 0
    fit_residual = 0.0
    values: dict[str, float] = {}
    for line in Path(path).read_text().splitlines():
        if line.startswith("# n_train="):
            head, tail = line[2:].split("\t")
            n_train = int(head.split("=")[1])
            fit_residual = float(tail.split("=")[1])
            continue
        if not line.strip() or line.startswith("#"):
            continue
        sym, val = line.split("\t")
        values[sym] = float(val)
    missing = [s for s in inventory.symbols if s not in values]
    if missing:
        raise ValueError(f"weights file {path} missing symbols: {missing}")
    weights = np.array([values[s] for s in inventory.symbols])
    return RichnessWeights(weights, fit_residual=fit_residual, n_train=n_train)

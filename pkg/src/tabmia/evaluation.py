"""Metrics over attack results: ROC, AUC, TPR@FPR, advantage, Brier, effective ε.

The decision rule everywhere is the strict threshold test "member iff
score > γ". The ROC is exact and empirical — thresholds are the observed
unique scores (descending) behind a +∞ sentinel, tied scores share a
threshold, and nothing is interpolated. All rate metrics are derived from
integer (TP, FP) counts so they match an exhaustive threshold-sweep oracle
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import beta as _beta

from .core import AttackResult

FPR_TARGETS = (0.0, 0.001, 0.01, 0.1)
EPSILON_MODES = ("point", "clopper_pearson")


@dataclass(frozen=True, eq=False)
class RocCurve:
    """Exact empirical ROC.

    ``thresholds[0]`` is +∞ (the predict-nobody point); the rest are the
    unique observed scores in descending order. At stored threshold t the
    operating point counts score ≥ t — equivalently the strict rule
    score > γ for γ just below t — so the curve starts at (0,0) and ends at
    (1,1). Integer TP/FP counts are kept alongside the rates.
    """

    thresholds: np.ndarray
    tp: np.ndarray
    fp: np.ndarray
    n_members: int
    n_nonmembers: int

    @property
    def tpr(self) -> np.ndarray:
        return self.tp / self.n_members

    @property
    def fpr(self) -> np.ndarray:
        return self.fp / self.n_nonmembers


def _require_both_classes(result: AttackResult) -> None:
    if result.n_members == 0 or result.n_nonmembers == 0:
        raise ValueError("metrics need at least one member and one non-member")


def _counts(scores: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per unique descending threshold: (thresholds, TP, FP) with ≥-rule counts."""
    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    y = labels[order]
    tp_cum = np.cumsum(y)
    fp_cum = np.cumsum(1 - y)
    # last index of each tied block = the point where all scores ≥ s[i] counted
    block_ends = np.flatnonzero(np.diff(s) != 0)
    idx = np.concatenate([block_ends, [len(s) - 1]])
    return s[idx], tp_cum[idx], fp_cum[idx]


def roc(result: AttackResult) -> RocCurve:
    """Exact empirical ROC curve of one attack result.

    Raises:
        ValueError: single-class labels.
    """
    _require_both_classes(result)
    thresholds, tp, fp = _counts(result.scores, result.labels)
    return RocCurve(
        thresholds=np.concatenate([[np.inf], thresholds]),
        tp=np.concatenate([[0], tp]),
        fp=np.concatenate([[0], fp]),
        n_members=result.n_members,
        n_nonmembers=result.n_nonmembers,
    )


def auc(result: AttackResult) -> float:
    """Mann–Whitney AUC: P(member score > non-member score) + ½·P(tie).

    Computed by tie-averaged rank sums, which is exactly (not just
    approximately) the pairwise win/half-tie count divided by n₁·n₂.
    """
    _require_both_classes(result)
    scores, labels = result.scores, result.labels
    n = len(scores)
    order = np.argsort(scores, kind="stable")
    s = scores[order]
    ranks = np.empty(n)
    i = 0
    while i < n:
        j = i
        while j < n and s[j] == s[i]:
            j += 1
        ranks[order[i:j]] = (i + 1 + j) / 2
        i = j
    n1 = result.n_members
    n2 = result.n_nonmembers
    u1 = float(ranks[labels == 1].sum()) - n1 * (n1 + 1) / 2
    return u1 / (n1 * n2)


def tpr_at_fpr(result: AttackResult, alpha: float) -> float:
    """Best TPR over thresholds whose empirical FPR ≤ alpha; no interpolation."""
    if not (0.0 <= alpha <= 1.0):
        raise ValueError("alpha must lie in [0, 1]")
    curve = roc(result)
    eligible = curve.fpr <= alpha
    return float(curve.tpr[eligible].max())


def advantage_and_privacy_gain(result: AttackResult) -> tuple[float, float]:
    """(max_γ TPR−FPR, 1 − that). The γ=+∞ point pins advantage ≥ 0."""
    curve = roc(result)
    advantage = float((curve.tpr - curve.fpr).max())
    return advantage, 1.0 - advantage


def accuracy_best(result: AttackResult) -> float:
    """Best achievable accuracy over all thresholds: max (TP+TN)/N."""
    curve = roc(result)
    n = curve.n_members + curve.n_nonmembers
    correct = curve.tp + (curve.n_nonmembers - curve.fp)
    return float(correct.max() / n)


def brier(result: AttackResult) -> float:
    """Mean squared error of min-max-normalized scores against labels.

    Scores are normalized over the joint evaluation set to [0,1] (constant
    scores collapse to 0.5), making this a calibration-free squared-error
    diagnostic rather than a proper Brier score of predicted probabilities.
    """
    _require_both_classes(result)
    scores = result.scores
    lo, hi = float(scores.min()), float(scores.max())
    if hi > lo:
        p = (scores - lo) / (hi - lo)
    else:
        p = np.full_like(scores, 0.5)
    return float(np.mean((p - result.labels) ** 2))


def _epsilon_candidates(
    tp: np.ndarray,
    fp: np.ndarray,
    n1: int,
    n2: int,
    delta: float,
    mode: str,
    confidence: float,
) -> float:
    best = 0.0
    floor = 1.0 / (3.0 * n2)
    for k_tp, k_fp in zip(tp.tolist(), fp.tolist()):
        if mode == "point":
            tpr = k_tp / n1
            fpr = max(k_fp / n2, floor)
        else:
            tpr = 0.0 if k_tp == 0 else float(_beta.ppf(1.0 - confidence, k_tp, n1 - k_tp + 1))
            fpr = 1.0 if k_fp == n2 else float(_beta.ppf(confidence, k_fp + 1, n2 - k_fp))
        if tpr > delta:
            best = max(best, math.log((tpr - delta) / fpr))
    return best


def effective_epsilon(
    result: AttackResult,
    delta: float = 0.0,
    mode: str = "point",
    confidence: float = 0.95,
) -> float:
    """Empirical differential-privacy parameter from TPR ≤ e^ε·FPR + δ.

    Point mode sweeps all thresholds with TPR > δ and takes
    max ln((TPR−δ)/FPR) with the FPR floored at 1/(3·n_nonmembers) — the
    floor keeps ε finite when a threshold achieves FPR = 0. The sweep runs on
    the scores and on their negation (the flipped membership test) and keeps
    the larger value. Clopper–Pearson mode replaces TPR with its one-sided
    lower bound and FPR with its one-sided upper bound at the given
    confidence before the same sweep. If no threshold qualifies, ε = 0;
    the result is never negative.

    Args:
        delta: the additive slack δ ∈ [0, 1).
        mode: ``"point"`` or ``"clopper_pearson"`` (alias ``"cp"``).
        confidence: one-sided bound level for Clopper–Pearson mode.
    """
    _require_both_classes(result)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta >= 1:
        raise ValueError("delta must be below 1")
    mode = "clopper_pearson" if mode == "cp" else mode
    if mode not in EPSILON_MODES:
        raise ValueError(f"unknown epsilon mode {mode!r}")
    n1, n2 = result.n_members, result.n_nonmembers
    best = 0.0
    for scores in (result.scores, -result.scores):
        _, tp, fp = _counts(scores, result.labels)
        best = max(best, _epsilon_candidates(tp, fp, n1, n2, delta, mode, confidence))
    return best


@dataclass(frozen=True)
class MetricReport:
    """All evaluation metrics for one attack instance."""

    auc: float
    tpr_at_fpr: dict
    accuracy_best: float
    advantage: float
    privacy_gain: float
    brier: float
    effective_epsilon: float
    n_members: int
    n_nonmembers: int

    def to_json_dict(self) -> dict:
        out = {"auc": self.auc}
        for alpha in sorted(self.tpr_at_fpr):
            out[f"tpr_at_fpr_{_alpha_key(alpha)}"] = self.tpr_at_fpr[alpha]
        out.update(
            {
                "accuracy": self.accuracy_best,
                "advantage": self.advantage,
                "privacy_gain": self.privacy_gain,
                "brier": self.brier,
                "effective_epsilon": self.effective_epsilon,
                "n_members": self.n_members,
                "n_nonmembers": self.n_nonmembers,
            }
        )
        return out

    @classmethod
    def from_json_dict(cls, obj: dict) -> "MetricReport":
        tprs = {
            _alpha_from_key(key[len("tpr_at_fpr_") :]): value
            for key, value in obj.items()
            if key.startswith("tpr_at_fpr_")
        }
        return cls(
            auc=obj["auc"],
            tpr_at_fpr=tprs,
            accuracy_best=obj["accuracy"],
            advantage=obj["advantage"],
            privacy_gain=obj["privacy_gain"],
            brier=obj["brier"],
            effective_epsilon=obj["effective_epsilon"],
            n_members=obj["n_members"],
            n_nonmembers=obj["n_nonmembers"],
        )


def _alpha_key(alpha: float) -> str:
    return format(alpha, "g").replace(".", "p").replace("-", "m")


def _alpha_from_key(key: str) -> float:
    return float(key.replace("p", ".").replace("m", "-"))


def metric_report(
    result: AttackResult,
    fpr_targets: tuple = FPR_TARGETS,
    delta: float = 0.0,
    epsilon_mode: str = "point",
    confidence: float = 0.95,
) -> MetricReport:
    """Evaluate every reported metric on one attack result."""
    advantage, privacy_gain = advantage_and_privacy_gain(result)
    return MetricReport(
        auc=auc(result),
        tpr_at_fpr={float(a): tpr_at_fpr(result, float(a)) for a in fpr_targets},
        accuracy_best=accuracy_best(result),
        advantage=advantage,
        privacy_gain=privacy_gain,
        brier=brier(result),
        effective_epsilon=effective_epsilon(
            result, delta=delta, mode=epsilon_mode, confidence=confidence
        ),
        n_members=result.n_members,
        n_nonmembers=result.n_nonmembers,
    )

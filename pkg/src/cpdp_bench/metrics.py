"""Confusion-matrix measures, expressed in percent.

Four measures are provided: recall (pd), probability of false alarm (pf),
g-measure (harmonic mean of pd and 100-pf), and AUC. Undefined values
(empty denominator, single-class truth) come back as NaN so callers can
flag and exclude the record instead of imputing.

Precision and F-measure are deliberately not implemented: they are unstable
on heavily imbalanced data and are out of scope here.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        for field in ("tp", "fp", "tn", "fn"):
            if getattr(self, field) < 0:
                raise ValueError(f"{field} must be nonnegative")

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn


def confusion(predicted, truth):
    """Tabulate predictions against truth; positive class = defective."""
    predicted = np.asarray(predicted, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    if predicted.shape != truth.shape or predicted.ndim != 1:
        raise ValueError("predicted and truth must be equal-length vectors")
    if predicted.size == 0:
        raise ValueError("nothing to evaluate")
    return ConfusionMatrix(
        tp=int((predicted & truth).sum()),
        fp=int((predicted & ~truth).sum()),
        tn=int((~predicted & ~truth).sum()),
        fn=int((~predicted & truth).sum()),
    )


def recall_pd(cm):
    """100 * TP / (TP + FN); NaN when no defective instances exist."""
    denom = cm.tp + cm.fn
    if denom == 0:
        return math.nan
    return 100.0 * cm.tp / denom


def false_alarm_pf(cm):
    """100 * FP / (FP + TN); NaN when no clean instances exist."""
    denom = cm.fp + cm.tn
    if denom == 0:
        return math.nan
    return 100.0 * cm.fp / denom


def g_measure(pd, pf):
    """Harmonic mean of pd and (100 - pf), in percent.

    The degenerate corner pd == 0, pf == 100 returns 0 by convention.
    """
    if math.isnan(pd) or math.isnan(pf):
        return math.nan
    denom = pd + (100.0 - pf)
    if denom == 0.0:
        return 0.0
    return 2.0 * pd * (100.0 - pf) / denom


def auc(scores, truth):
    """Rank-based AUC (Mann-Whitney with mid-ranks for ties), in percent.

    Equals the fraction of (defective, clean) pairs where the defective
    instance scores higher, ties counting one half. NaN for single-class
    truth.
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth, dtype=bool)
    if scores.shape != truth.shape or scores.ndim != 1:
        raise ValueError("scores and truth must be equal-length vectors")
    n_pos = int(truth.sum())
    n_neg = truth.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return math.nan
    ranks = rankdata(scores, method="average")
    rank_sum_pos = float(ranks[truth].sum())
    return 100.0 * (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)

"""Nonparametric comparison protocol.

Pairwise Brunner-Munzel tests (rank-based Behrens-Fisher), Cliff's delta
with magnitude bands, Hochberg step-up adjustment, and win-tie-loss
aggregation across paired per-target performance vectors.
"""

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np
from scipy.stats import rankdata, t as t_dist

__all__ = [
    "BMResult",
    "CliffResult",
    "ComparisonCell",
    "EffectMagnitude",
    "WinTieLossRow",
    "WinTieLossTable",
    "brunner_munzel",
    "cliffs_delta",
    "hochberg_adjust",
    "magnitude_of_delta",
    "win_tie_loss",
]

# |delta| bands. Values below MEDIUM count as negligible ("no effect"); the
# conventional small band collapses into it under this threshold pair.
MEDIUM_THRESHOLD = 0.112
LARGE_THRESHOLD = 0.428


class EffectMagnitude(str, Enum):
    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


@dataclass(frozen=True)
class BMResult:
    """Brunner-Munzel outcome for samples (x, y).

    ``relative_effect`` estimates P(X < Y) + 0.5 P(X = Y); 0.5 means no
    tendency. ``degenerate`` marks zero estimated rank variance with no
    separation (e.g. all values tied); callers must treat that as a tie.
    """

    relative_effect: float
    statistic: float
    df: float
    p_value: float
    degenerate: bool


@dataclass(frozen=True)
class CliffResult:
    delta: float
    magnitude: EffectMagnitude


@dataclass(frozen=True)
class ComparisonCell:
    """One pairwise comparison; outcome is from subject_a's perspective."""

    subject_a: object
    subject_b: object
    measure: str
    outcome: str  # win | tie | loss
    p_value: float
    delta: float
    magnitude: EffectMagnitude
    n_common: int


@dataclass(frozen=True)
class WinTieLossRow:
    subject: object
    wins: int
    ties: int
    losses: int

    @property
    def wins_minus_losses(self):
        return self.wins - self.losses


@dataclass
class WinTieLossTable:
    rows: list
    cells: list
    notes: list


def brunner_munzel(x, y):
    """Two-sided Brunner-Munzel test via pooled mid-ranks.

    Uses the studentized statistic with Satterthwaite-approximated degrees
    of freedom and a t-distribution tail. Complete separation (zero rank
    variance with a shifted relative effect) yields an infinite statistic
    and p = 0; zero variance without separation is flagged degenerate with
    p = 1.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, m = len(x), len(y)
    if n < 2 or m < 2:
        raise ValueError("brunner_munzel needs at least 2 values per sample")
    if np.isnan(x).any() or np.isnan(y).any():
        raise ValueError("samples must not contain NaN")

    pooled = rankdata(np.concatenate([x, y]), method="average")
    rx, ry = pooled[:n], pooled[n:]
    wx = rankdata(x, method="average")
    wy = rankdata(y, method="average")

    # relative effect as one exact division: equals the pair-count estimate
    p_hat = (float(ry.sum()) - m * (m + 1) / 2.0) / (m * n)

    mean_rx = rx.mean()
    mean_ry = ry.mean()
    vx = float(((rx - wx - mean_rx + (n + 1) / 2.0) ** 2).sum()) / (n - 1)
    vy = float(((ry - wy - mean_ry + (m + 1) / 2.0) ** 2).sum()) / (m - 1)
    pooled_var = n * vx + m * vy

    if pooled_var == 0.0:
        if p_hat == 0.5:
            return BMResult(p_hat, 0.0, math.nan, 1.0, True)
        statistic = math.inf if p_hat > 0.5 else -math.inf
        return BMResult(p_hat, statistic, math.nan, 0.0, False)

    statistic = n * m * (mean_ry - mean_rx) / (n + m) / math.sqrt(pooled_var)
    df = pooled_var**2 / ((n * vx) ** 2 / (n - 1) + (m * vy) ** 2 / (m - 1))
    p_value = 2.0 * float(t_dist.sf(abs(statistic), df))
    return BMResult(p_hat, statistic, df, min(p_value, 1.0), False)


def magnitude_of_delta(delta):
    """Magnitude band of a Cliff's delta value (flips at 0.112 and 0.428)."""
    a = abs(delta)
    if a >= LARGE_THRESHOLD:
        return EffectMagnitude.LARGE
    if a >= MEDIUM_THRESHOLD:
        return EffectMagnitude.MEDIUM
    return EffectMagnitude.NEGLIGIBLE


def cliffs_delta(x, y):
    """Cliff's delta: (#{x_i > y_j} - #{x_i < y_j}) / (|x| |y|)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) == 0 or len(y) == 0:
        raise ValueError("cliffs_delta needs nonempty samples")
    gt = int((x[:, None] > y[None, :]).sum())
    lt = int((x[:, None] < y[None, :]).sum())
    delta = (gt - lt) / (len(x) * len(y))
    return CliffResult(delta=delta, magnitude=magnitude_of_delta(delta))


def hochberg_adjust(p_values):
    """Hochberg step-up adjusted p-values, original order preserved.

    With p(1) <= ... <= p(m), adjusted(i) = min over j >= i of
    (m - j + 1) * p(j), clipped to 1.
    """
    p = np.asarray(p_values, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("p_values must be a vector")
    if p.size == 0:
        return p.copy()
    if np.isnan(p).any() or (p < 0).any() or (p > 1).any():
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="stable")
    scaled = (m - np.arange(m)) * p[order]
    adjusted_sorted = np.minimum.accumulate(scaled[::-1])[::-1]
    adjusted_sorted = np.minimum(adjusted_sorted, 1.0)
    out = np.empty(m, dtype=np.float64)
    out[order] = adjusted_sorted
    return out


def win_tie_loss(values, measure="", alpha=0.05, higher_is_better=True):
    """Pairwise Brunner-Munzel tournament over paired per-target vectors.

    ``values`` maps subject -> {target: value}; NaN entries are treated as
    missing. Each unordered pair is compared on its common targets; a
    significant test (p < alpha, non-degenerate) awards a win to the subject
    on the favourable side of the relative effect (direction inverted when
    lower values are better). Pairs with fewer than 2 common targets are
    forced ties and noted. Rows come back sorted by wins - losses
    (descending), then subject.
    """
    subjects = sorted(values)
    tallies = {s: [0, 0, 0] for s in subjects}  # wins, ties, losses
    cells = []
    notes = []

    for a, b in combinations(subjects, 2):
        va, vb = values[a], values[b]
        common = sorted(
            k for k in va
            if k in vb and not math.isnan(va[k]) and not math.isnan(vb[k])
        )
        if len(common) < 2:
            notes.append(
                f"{a} vs {b} ({measure}): fewer than 2 common targets; forced tie"
            )
            cells.append(ComparisonCell(a, b, measure, "tie", math.nan,
                                        math.nan, EffectMagnitude.NEGLIGIBLE,
                                        len(common)))
            tallies[a][1] += 1
            tallies[b][1] += 1
            continue

        xa = np.array([va[k] for k in common])
        xb = np.array([vb[k] for k in common])
        bm = brunner_munzel(xa, xb)
        cd = cliffs_delta(xa, xb)
        outcome = "tie"
        if not bm.degenerate and bm.p_value < alpha:
            b_favoured = bm.relative_effect > 0.5  # y = b stochastically larger
            a_wins = (not b_favoured) if higher_is_better else b_favoured
            outcome = "win" if a_wins else "loss"
        cells.append(ComparisonCell(a, b, measure, outcome, bm.p_value,
                                    cd.delta, cd.magnitude, len(common)))
        if outcome == "win":
            tallies[a][0] += 1
            tallies[b][2] += 1
        elif outcome == "loss":
            tallies[a][2] += 1
            tallies[b][0] += 1
        else:
            tallies[a][1] += 1
            tallies[b][1] += 1

    rows = [WinTieLossRow(s, *tallies[s]) for s in subjects]
    rows.sort(key=lambda r: (-(r.wins - r.losses), r.subject))
    return WinTieLossTable(rows=rows, cells=cells, notes=notes)

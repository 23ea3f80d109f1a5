"""Data resampling treatments for imbalanced training sets.

Nine treatments: a no-resampling baseline (NOS), five oversamplers (ROS,
SMOTE, Borderline-SMOTE, ADASYN, MAHAKIL) that append minority instances
until the classes balance exactly, and three undersamplers (RUS, Tomek-link
removal, One-Sided Selection) that delete majority instances. All are pure
functions of (dataset, parameters): identical inputs give identical outputs
regardless of scheduling.

Synthetic rows carry a synthetic origin tag plus lineage (seed/neighbour/gap
for the SMOTE family, parent pairs for MAHAKIL) so every generated point can
be audited against its generating segment. Neighbour searches use Euclidean
distance on the features as given, with exact-distance ties broken by the
lower row index.

Degenerate inputs never abort: single-class data passes through unchanged
with a note, SMOTE-family calls with one minority instance fall back to ROS,
and an empty Borderline danger set falls back to plain SMOTE. Every fallback
and clamp is recorded in the result notes.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .data import SYNTHETIC_TAG, Dataset


class ResamplerKind(str, Enum):
    NOS = "nos"
    ROS = "ros"
    RUS = "rus"
    SMOTE = "smote"
    BORDERLINE_SMOTE = "borderline"
    ADASYN = "adasyn"
    MAHAKIL = "mahakil"
    TOMEK = "tomek"
    OSS = "oss"


_ALIASES = {
    "borderline-smote": ResamplerKind.BORDERLINE_SMOTE,
    "borderline_smote": ResamplerKind.BORDERLINE_SMOTE,
    "bsmote": ResamplerKind.BORDERLINE_SMOTE,
    "tomek-links": ResamplerKind.TOMEK,
    "tomek_links": ResamplerKind.TOMEK,
    "one-sided-selection": ResamplerKind.OSS,
    "one_sided_selection": ResamplerKind.OSS,
}

OVERSAMPLERS = frozenset({
    ResamplerKind.ROS, ResamplerKind.SMOTE, ResamplerKind.BORDERLINE_SMOTE,
    ResamplerKind.ADASYN, ResamplerKind.MAHAKIL,
})
UNDERSAMPLERS = frozenset({
    ResamplerKind.RUS, ResamplerKind.TOMEK, ResamplerKind.OSS,
})


def parse_resampler(name):
    if isinstance(name, ResamplerKind):
        return name
    key = str(name).strip().lower()
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return ResamplerKind(key)
    except ValueError:
        valid = ", ".join(k.value for k in ResamplerKind)
        raise ValueError(f"unknown resampler {name!r} (expected one of: {valid})") from None


@dataclass(frozen=True)
class ResampleParams:
    """Knobs shared by the treatments.

    k_smote feeds the SMOTE-family neighbour searches; seed drives all
    randomized treatments; target_ratio is fixed at 1.0 (exact balance).
    """

    k_smote: int = 5
    seed: int = 0
    target_ratio: float = 1.0

    def __post_init__(self):
        if self.k_smote < 1:
            raise ValueError(f"k_smote must be >= 1, got {self.k_smote}")
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.target_ratio != 1.0:
            raise ValueError("only the balanced target (ratio 1.0) is supported")


@dataclass(frozen=True)
class ResampleResult:
    """Resampled dataset plus audit trail.

    synthetic_flags marks generated rows (always False for undersamplers);
    notes lists degeneracy warnings; lineage records, per synthetic row, how
    it was generated.
    """

    data: Dataset
    synthetic_flags: np.ndarray
    notes: tuple
    lineage: dict | None = None


def _identity(data, notes=()):
    return ResampleResult(
        data=data,
        synthetic_flags=np.zeros(len(data), dtype=bool),
        notes=tuple(notes),
        lineage=None,
    )


def _split(data):
    """(minority positions, majority positions, minority label).

    The minority class is the rarer one; an exact tie counts the defective
    class as minority (all balancing ops are no-ops then anyway).
    """
    n_def = int(data.labels.sum())
    minority_label = n_def <= len(data) - n_def
    min_idx = np.flatnonzero(data.labels == minority_label)
    maj_idx = np.flatnonzero(data.labels != minority_label)
    return min_idx, maj_idx, minority_label


def _append_synthetic(data, kind, features, minority_label, lineage, notes):
    n_new = len(features)
    counts = np.full(n_new, 1 if minority_label else 0, dtype=np.int64)
    out = data.append_rows(
        features, counts,
        np.full(n_new, f"{SYNTHETIC_TAG}/{kind.value}", dtype=object),
        np.arange(n_new, dtype=np.int64),
    )
    flags = np.zeros(len(out), dtype=bool)
    flags[len(data):] = True
    return ResampleResult(out, flags, tuple(notes), lineage)


def _subset(data, keep, notes=()):
    keep = np.asarray(keep, dtype=np.int64)
    if len(keep) == len(data):
        return _identity(data, notes)
    return ResampleResult(
        data=data.take(keep),
        synthetic_flags=np.zeros(len(keep), dtype=bool),
        notes=tuple(notes),
        lineage=None,
    )


# ---------------------------------------------------------------------------
# oversamplers


def _ros_core(data, rng, notes):
    min_idx, maj_idx, minority_label = _split(data)
    need = len(maj_idx) - len(min_idx)
    if need == 0:
        return _identity(data, notes)
    picks = rng.choice(min_idx, size=need, replace=True)
    return _append_synthetic(
        data, ResamplerKind.ROS, data.features[picks], minority_label,
        {"source_row": picks.astype(np.int64)}, notes,
    )


def _smote_neighbour_table(features, idx, k, notes, label):
    """k nearest minority neighbours of each minority row, self excluded."""
    k_eff = min(k, len(idx) - 1)
    if k_eff < k:
        notes.append(f"{label}: k clamped to {k_eff} (only {len(idx)} minority rows)")
    mins = features[idx]
    local = kernels.knn_indices(mins, mins, k_eff, exclude=np.arange(len(idx)))
    return local, k_eff


def _interpolate(features, min_idx, seed_order, neighbour_table, k_eff, need, rng):
    """Emit ``need`` points along minority segments; returns rows + lineage."""
    p = features.shape[1]
    children = np.empty((need, p), dtype=np.float64)
    seed_rows = np.empty(need, dtype=np.int64)
    neighbour_rows = np.empty(need, dtype=np.int64)
    gaps = np.empty(need, dtype=np.float64)
    mins = features[min_idx]
    for t in range(need):
        s_local = seed_order[t % len(seed_order)]
        q_local = neighbour_table[s_local][rng.integers(k_eff)]
        lam = rng.random()
        children[t] = mins[s_local] + lam * (mins[q_local] - mins[s_local])
        seed_rows[t] = min_idx[s_local]
        neighbour_rows[t] = min_idx[q_local]
        gaps[t] = lam
    return children, {"seed_row": seed_rows, "neighbor_row": neighbour_rows, "gap": gaps}


def _smote_core(data, k, rng, notes, kind=ResamplerKind.SMOTE):
    min_idx, maj_idx, minority_label = _split(data)
    need = len(maj_idx) - len(min_idx)
    if need == 0:
        return _identity(data, notes)
    if len(min_idx) == 1:
        notes.append(f"{kind.value}: single minority instance; fell back to ros")
        return _ros_core(data, rng, notes)
    table, k_eff = _smote_neighbour_table(data.features, min_idx, k, notes, kind.value)
    seed_order = rng.permutation(len(min_idx))
    children, lineage = _interpolate(
        data.features, min_idx, seed_order, table, k_eff, need, rng
    )
    return _append_synthetic(data, kind, children, minority_label, lineage, notes)


def _borderline_core(data, k, rng, notes):
    min_idx, maj_idx, minority_label = _split(data)
    need = len(maj_idx) - len(min_idx)
    if need == 0:
        return _identity(data, notes)
    k_whole = min(k, len(data) - 1)
    if k_whole < k:
        notes.append(f"borderline: whole-set k clamped to {k_whole}")
    whole = kernels.knn_indices(
        data.features[min_idx], data.features, k_whole, exclude=min_idx
    )
    majority_neighbours = (data.labels[whole] != minority_label).sum(axis=1)
    danger_mask = (majority_neighbours >= k_whole / 2.0) & (majority_neighbours < k_whole)
    danger_local = np.flatnonzero(danger_mask)
    if danger_local.size == 0:
        notes.append("borderline: empty danger set; fell back to plain smote")
        return _smote_core(data, k, rng, notes, kind=ResamplerKind.BORDERLINE_SMOTE)

    table, k_eff = _smote_neighbour_table(
        data.features, min_idx, k, notes, "borderline"
    )
    seed_order = danger_local[rng.permutation(danger_local.size)]
    children, lineage = _interpolate(
        data.features, min_idx, seed_order, table, k_eff, need, rng
    )
    return _append_synthetic(
        data, ResamplerKind.BORDERLINE_SMOTE, children, minority_label, lineage, notes
    )


def _largest_remainder(weights, total):
    """Integer quotas summing exactly to ``total``, proportional to weights."""
    exact = weights * total
    base = np.floor(exact).astype(np.int64)
    deficit = int(total - base.sum())
    remainders = exact - base
    order = np.lexsort((np.arange(len(weights)), -remainders))
    base[order[:deficit]] += 1
    return base


def _adasyn_core(data, k, rng, notes):
    min_idx, maj_idx, minority_label = _split(data)
    need = len(maj_idx) - len(min_idx)
    if need == 0:
        return _identity(data, notes)
    if len(min_idx) == 1:
        notes.append("adasyn: single minority instance; fell back to ros")
        return _ros_core(data, rng, notes)
    k_whole = min(k, len(data) - 1)
    if k_whole < k:
        notes.append(f"adasyn: whole-set k clamped to {k_whole}")
    whole = kernels.knn_indices(
        data.features[min_idx], data.features, k_whole, exclude=min_idx
    )
    r = (data.labels[whole] != minority_label).sum(axis=1) / k_whole
    if r.sum() == 0.0:
        notes.append("adasyn: no minority instance has majority neighbours; uniform quotas")
        weights = np.full(len(min_idx), 1.0 / len(min_idx))
    else:
        weights = r / r.sum()
    quotas = _largest_remainder(weights, need)

    table, k_eff = _smote_neighbour_table(data.features, min_idx, k, notes, "adasyn")
    # per-seed quotas, seeds visited in minority row order
    seed_order = np.repeat(np.arange(len(min_idx)), quotas)
    children, lineage = _interpolate(
        data.features, min_idx, seed_order, table, k_eff, need, rng
    )
    return _append_synthetic(
        data, ResamplerKind.ADASYN, children, minority_label, lineage, notes
    )


def _mahakil_core(data, rng, notes):
    min_idx, maj_idx, minority_label = _split(data)
    need = len(maj_idx) - len(min_idx)
    if need == 0:
        return _identity(data, notes)
    if len(min_idx) < 4:
        notes.append(
            f"mahakil: {len(min_idx)} minority rows (< 4); fell back to ros"
        )
        return _ros_core(data, rng, notes)

    x = data.features[min_idx]
    p = x.shape[1]
    centered = x - x.mean(axis=0)
    cov = np.atleast_2d(np.cov(x, rowvar=False, ddof=1))
    trace = float(np.trace(cov))
    if trace == 0.0:
        # all minority rows identical: distances vanish, ranking by row order
        distances = np.zeros(len(min_idx))
    else:
        regularized = cov + (1e-6 * trace / p) * np.eye(p)
        solved = np.linalg.solve(regularized, centered.T)
        distances = np.einsum("ij,ji->i", centered, solved)

    order = np.argsort(-distances, kind="stable")  # descending, ties by row
    half = math.ceil(len(order) / 2)  # odd count: extra element to bin1
    bin1, bin2 = order[:half], order[half:]

    n = len(data)
    children = []
    parent_a, parent_b, generation = [], [], []

    def row_features(i):
        return data.features[i] if i < n else children[i - n]

    pairs = [(int(min_idx[bin1[i]]), int(min_idx[bin2[i]])) for i in range(len(bin2))]
    gen = 1
    remaining = need
    while remaining > 0:
        next_pairs = []
        for a, b in pairs:
            if remaining == 0:
                break
            child_idx = n + len(children)
            children.append((row_features(a) + row_features(b)) / 2.0)
            parent_a.append(a)
            parent_b.append(b)
            generation.append(gen)
            remaining -= 1
            next_pairs.append((a, child_idx))
            next_pairs.append((b, child_idx))
        pairs = next_pairs
        gen += 1

    lineage = {
        "parent_a": np.array(parent_a, dtype=np.int64),
        "parent_b": np.array(parent_b, dtype=np.int64),
        "generation": np.array(generation, dtype=np.int64),
    }
    return _append_synthetic(
        data, ResamplerKind.MAHAKIL, np.array(children), minority_label, lineage, notes
    )


# ---------------------------------------------------------------------------
# undersamplers


def _rus_core(data, rng, notes):
    min_idx, maj_idx, _ = _split(data)
    if len(maj_idx) == len(min_idx):
        return _identity(data, notes)
    kept = rng.choice(maj_idx, size=len(min_idx), replace=False)
    keep = np.sort(np.concatenate([min_idx, kept]))
    return _subset(data, keep, notes)


def _tomek_core(data, notes):
    minority_mask = data.labels == _split(data)[2]
    keep = np.arange(len(data), dtype=np.int64)
    while True:
        flagged = kernels.tomek_majority_mask(
            data.features[keep], minority_mask[keep]
        )
        if not flagged.any():
            break
        keep = keep[~flagged]
    return _subset(data, keep, notes)


def _oss_core(data, rng, notes):
    min_idx, maj_idx, minority_label = _split(data)
    chosen = int(rng.choice(maj_idx))
    s = np.sort(np.concatenate([min_idx, [chosen]])).astype(np.int64)

    in_s = np.zeros(len(data), dtype=bool)
    in_s[s] = True
    remaining = np.flatnonzero(~in_s)
    if remaining.size:
        nearest = kernels.knn_indices(data.features[remaining], data.features[s], 1)[:, 0]
        predicted_minority = data.labels[s[nearest]] == minority_label
        # remaining rows are all majority: a minority-labelled neighbour
        # means the 1-NN rule misclassifies them
        s = np.sort(np.concatenate([s, remaining[predicted_minority]]))

    flagged = kernels.tomek_majority_mask(
        data.features[s], data.labels[s] == minority_label
    )
    return _subset(data, s[~flagged], notes)


# ---------------------------------------------------------------------------
# dispatch

def resample(data, kind, params=ResampleParams()):
    """Apply one treatment; NOS and degenerate inputs pass through unchanged."""
    kind = parse_resampler(kind)
    if kind is ResamplerKind.NOS:
        return _identity(data)
    min_idx, _, _ = _split(data)
    if len(min_idx) == 0:
        return _identity(
            data, [f"{kind.value}: no minority instances; input returned unchanged"]
        )
    rng = np.random.default_rng(int(params.seed))
    notes = []
    if kind is ResamplerKind.ROS:
        return _ros_core(data, rng, notes)
    if kind is ResamplerKind.RUS:
        return _rus_core(data, rng, notes)
    if kind is ResamplerKind.SMOTE:
        return _smote_core(data, params.k_smote, rng, notes)
    if kind is ResamplerKind.BORDERLINE_SMOTE:
        return _borderline_core(data, params.k_smote, rng, notes)
    if kind is ResamplerKind.ADASYN:
        return _adasyn_core(data, params.k_smote, rng, notes)
    if kind is ResamplerKind.MAHAKIL:
        return _mahakil_core(data, rng, notes)
    if kind is ResamplerKind.TOMEK:
        return _tomek_core(data, notes)
    if kind is ResamplerKind.OSS:
        return _oss_core(data, rng, notes)
    raise AssertionError(f"unhandled kind {kind}")


# spec-level convenience wrappers -------------------------------------------

def ros(data, seed=0):
    return resample(data, ResamplerKind.ROS, ResampleParams(seed=seed))


def rus(data, seed=0):
    return resample(data, ResamplerKind.RUS, ResampleParams(seed=seed))


def smote(data, k=5, seed=0):
    return resample(data, ResamplerKind.SMOTE, ResampleParams(k_smote=k, seed=seed))


def borderline_smote(data, k=5, seed=0):
    return resample(data, ResamplerKind.BORDERLINE_SMOTE, ResampleParams(k_smote=k, seed=seed))


def adasyn(data, k=5, seed=0):
    return resample(data, ResamplerKind.ADASYN, ResampleParams(k_smote=k, seed=seed))


def mahakil(data, seed=0):
    return resample(data, ResamplerKind.MAHAKIL, ResampleParams(seed=seed))


def tomek_links(data):
    return resample(data, ResamplerKind.TOMEK)


def one_sided_selection(data, seed=0):
    return resample(data, ResamplerKind.OSS, ResampleParams(seed=seed))

"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the package's own kernels and numeric
shortcuts: they are brute-force reimplementations (full broadcasting,
exhaustive pair enumeration, permutation draws) used to pin expected values.
"""

import csv
import itertools
import math

import numpy as np

from cpdp_bench.data import DEFAULT_SCHEMA, DEFECT_COLUMN, Dataset

# ---------------------------------------------------------------------------
# builders


def make_dataset(features, counts=None, labels=None, name="synth", schema=None):
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    n, p = features.shape
    if schema is None:
        schema = tuple(f"m{j}" for j in range(p))
    if counts is None:
        if labels is None:
            raise ValueError("need counts or labels")
        counts = np.asarray(labels, dtype=np.int64)
    return Dataset(name, "", schema, features, counts)


def random_imbalanced(rng, n, defect_ratio, p, name="synth", spread=1.0):
    """Two-blob dataset with the requested defective fraction (>= 1 of each)."""
    n_def = int(round(n * defect_ratio))
    n_def = min(max(n_def, 1), n - 1)
    labels = np.zeros(n, dtype=bool)
    labels[rng.choice(n, size=n_def, replace=False)] = True
    centers = np.where(labels[:, None], 1.5, -0.5)
    features = centers + rng.normal(scale=spread, size=(n, p))
    return make_dataset(features, counts=labels.astype(np.int64), name=name)


def write_promise_csv(path, features, counts, schema=DEFAULT_SCHEMA, extra_cols=True):
    """Write a PROMISE-shaped metric file (name/version columns included)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = list(schema) + [DEFECT_COLUMN]
        if extra_cols:
            header = ["name", "version"] + header
        writer.writerow(header)
        for i, row in enumerate(features):
            cells = [repr(float(v)) for v in row] + [int(counts[i])]
            if extra_cols:
                cells = [f"{path.stem}.Cls{i}", "1.0"] + cells
            writer.writerow(cells)
    return path


def random_promise_file(rng, path, n, defect_ratio, schema=DEFAULT_SCHEMA):
    """PROMISE-shaped file with plausible positive metric magnitudes."""
    p = len(schema)
    n_def = min(max(int(round(n * defect_ratio)), 1), n - 1)
    labels = np.zeros(n, dtype=bool)
    labels[rng.choice(n, size=n_def, replace=False)] = True
    scales = rng.uniform(1.0, 50.0, size=p)
    base = rng.gamma(2.0, 1.0, size=(n, p)) * scales
    base[labels] *= rng.uniform(1.1, 1.8)
    counts = np.where(labels, rng.integers(1, 4, size=n), 0)
    return write_promise_csv(path, np.round(base, 4), counts, schema=schema)


# ---------------------------------------------------------------------------
# oracles


def sq_dists_brute(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    diff = a[:, None, :] - b[None, :, :]
    return (diff * diff).sum(axis=-1)


def knn_brute(a, b, k, exclude=None):
    d = sq_dists_brute(a, b)
    if exclude is not None:
        d[np.arange(len(a)), exclude] = np.inf
    k_eff = min(k, d.shape[1] - (1 if exclude is not None else 0))
    return np.argsort(d, axis=1, kind="stable")[:, :k_eff]


def tomek_links_brute(x, minority):
    """All cross-class pairs with no strictly closer third row to either end."""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    d = sq_dists_brute(x, x)
    np.fill_diagonal(d, np.inf)
    links = set()
    for i in range(n):
        for j in range(i + 1, n):
            if minority[i] == minority[j]:
                continue
            dij = d[i, j]
            if (d[i] < dij).any() or (d[j] < dij).any():
                continue
            links.add((i, j))
    return links


def auc_paircount(scores, truth):
    """Exhaustive positive/negative pair comparison, ties counted 1/2."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth, dtype=bool)
    pos = scores[truth]
    neg = scores[~truth]
    if len(pos) == 0 or len(neg) == 0:
        return math.nan
    wins = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                wins += 1.0
            elif sp == sn:
                wins += 0.5
    return 100.0 * wins / (len(pos) * len(neg))


def cliff_enum(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    gt = sum(1 for a, b in itertools.product(x, y) if a > b)
    lt = sum(1 for a, b in itertools.product(x, y) if a < b)
    return (gt - lt) / (len(x) * len(y))


def relative_effect_paircount(x, y):
    """P(X < Y) + 0.5 P(X = Y) by exhaustive enumeration."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    num = 0.0
    for a in x:
        for b in y:
            if a < b:
                num += 1.0
            elif a == b:
                num += 0.5
    return num / (len(x) * len(y))


def bm_permutation_pvalue(x, y, draws=20000, seed=0):
    """Two-sided permutation tail probability of the relative effect."""
    rng = np.random.default_rng(seed)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    pooled = np.concatenate([x, y])
    n = len(x)
    observed = abs(relative_effect_paircount(x, y) - 0.5)
    hits = 0
    for _ in range(draws):
        perm = rng.permutation(pooled)
        stat = abs(relative_effect_paircount(perm[:n], perm[n:]) - 0.5)
        if stat >= observed - 1e-12:
            hits += 1
    return hits / draws


def percentiles_sorted(values, qs=(25, 50, 75)):
    """Linear-interpolation percentiles computed from first principles."""
    v = sorted(float(x) for x in values)
    n = len(v)
    out = []
    for q in qs:
        if n == 1:
            out.append(v[0])
            continue
        h = (n - 1) * q / 100.0
        lo = int(math.floor(h))
        hi = min(lo + 1, n - 1)
        out.append(v[lo] + (h - lo) * (v[hi] - v[lo]))
    return out


def oss_oracle(features, labels, chosen_majority):
    """One-sided selection semantics re-derived from first principles."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    n = len(features)
    s = sorted(set(np.flatnonzero(labels)) | {chosen_majority})
    remaining = [i for i in range(n) if i not in set(s)]
    if remaining:
        d = sq_dists_brute(features[remaining], features[s])
        # 1-NN over S with lowest-index tie break
        nearest = np.array([int(np.flatnonzero(row == row.min())[0]) for row in d])
        predicted = labels[np.asarray(s)[nearest]]
        misclassified = [r for r, p in zip(remaining, predicted) if p != labels[r]]
        s = sorted(set(s) | set(misclassified))
    links = tomek_links_brute(features[s], labels[np.asarray(s)])
    in_link_majority = set()
    for i, j in links:
        gi, gj = s[i], s[j]
        if not labels[gi]:
            in_link_majority.add(gi)
        if not labels[gj]:
            in_link_majority.add(gj)
    return [i for i in s if i not in in_link_majority]

"""Dataset ingestion, merging, and feature standardization.

Input files are comma-separated UTF-8 text with a header row. Required
columns: the 20 static-code metric names of ``DEFAULT_SCHEMA`` plus ``bug``
(a nonnegative defect count); extra columns are ignored. A module is
labelled defective iff its defect count is positive.
"""

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyDatasetError, ParseError, SchemaError

# Class-level CK/OO metric suite, in canonical schema order.
DEFAULT_SCHEMA = (
    "wmc", "dit", "noc", "cbo", "rfc", "lcom", "lcom3", "npm", "dam", "moa",
    "mfa", "cam", "ic", "cbm", "amc", "ca", "ce", "max_cc", "avg_cc", "loc",
)
DEFECT_COLUMN = "bug"

# Origin tag prefix for rows generated by a resampler.
SYNTHETIC_TAG = "@synthetic"


@dataclass(frozen=True)
class Instance:
    """One software module: metric vector, defect count, label, provenance."""

    features: np.ndarray
    defect_count: int
    label: bool
    origin: tuple  # (dataset name, row index)


class Dataset:
    """Named, schema-consistent collection of instances (columnar storage).

    Immutable after construction; safe to share across workers.
    """

    def __init__(self, name, release, schema, features, defect_counts,
                 origin_names=None, origin_rows=None):
        # Private copies: instances are frozen read-only and must not alias
        # caller-owned buffers.
        features = np.array(features, dtype=np.float64, order="C", copy=True)
        defect_counts = np.array(defect_counts, dtype=np.int64, copy=True)
        if features.ndim != 2:
            raise ValueError("features must be a 2-d array")
        n = features.shape[0]
        if n == 0:
            raise EmptyDatasetError(f"dataset {name!r} has no instances")
        if features.shape[1] != len(schema):
            raise SchemaError(
                f"dataset {name!r}: {features.shape[1]} feature columns "
                f"vs schema of length {len(schema)}"
            )
        if defect_counts.shape != (n,):
            raise ValueError("defect_counts must hold one value per instance")
        if not np.isfinite(features).all():
            raise ValueError(f"dataset {name!r} contains non-finite feature values")
        if (defect_counts < 0).any():
            raise ValueError(f"dataset {name!r} contains negative defect counts")
        if origin_names is None:
            origin_names = np.full(n, name, dtype=object)
        else:
            origin_names = np.array(origin_names, dtype=object, copy=True)
        if origin_rows is None:
            origin_rows = np.arange(n, dtype=np.int64)
        else:
            origin_rows = np.array(origin_rows, dtype=np.int64, copy=True)
        if origin_names.shape != (n,) or origin_rows.shape != (n,):
            raise ValueError("origins must hold one entry per instance")

        self.name = str(name)
        self.release = str(release)
        self.schema = tuple(schema)
        self.features = features
        self.defect_counts = defect_counts
        self.labels = defect_counts > 0
        self.origin_names = origin_names
        self.origin_rows = origin_rows
        for arr in (self.features, self.defect_counts, self.labels,
                    self.origin_names, self.origin_rows):
            arr.flags.writeable = False

    def __len__(self):
        return self.features.shape[0]

    @property
    def n_defective(self):
        return int(self.labels.sum())

    @property
    def n_clean(self):
        return len(self) - self.n_defective

    @property
    def defect_ratio(self):
        return self.n_defective / len(self)

    @property
    def instances(self):
        return [self.instance(i) for i in range(len(self))]

    def instance(self, i):
        return Instance(
            features=self.features[i],
            defect_count=int(self.defect_counts[i]),
            label=bool(self.labels[i]),
            origin=(self.origin_names[i], int(self.origin_rows[i])),
        )

    def take(self, indices):
        """Row subset (by position) preserving provenance and metadata."""
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(
            self.name, self.release, self.schema,
            self.features[indices], self.defect_counts[indices],
            self.origin_names[indices], self.origin_rows[indices],
        )

    def with_features(self, features):
        """Same rows with a replaced feature matrix (e.g. standardized)."""
        return Dataset(
            self.name, self.release, self.schema,
            features, self.defect_counts, self.origin_names, self.origin_rows,
        )

    def append_rows(self, features, defect_counts, origin_names, origin_rows):
        """New dataset with extra rows appended after the existing ones."""
        return Dataset(
            self.name, self.release, self.schema,
            np.vstack([self.features, np.atleast_2d(features)]),
            np.concatenate([self.defect_counts, defect_counts]),
            np.concatenate([self.origin_names, np.asarray(origin_names, dtype=object)]),
            np.concatenate([self.origin_rows, np.asarray(origin_rows, dtype=np.int64)]),
        )

    def __repr__(self):
        return (f"Dataset({self.name!r}, n={len(self)}, "
                f"defective={self.n_defective})")


# A merged pool of source datasets is itself a schema-consistent dataset
# whose per-row provenance points back at the member datasets.
SourcePool = Dataset


def _parse_count(raw, row, column):
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(
            f"row {row}, column {column!r}: cannot parse {raw!r} as a number"
        ) from None
    if not math.isfinite(value) or value < 0 or value != int(value):
        raise ParseError(
            f"row {row}, column {column!r}: defect count must be a "
            f"nonnegative integer, got {raw!r}"
        )
    return int(value)


def load_dataset(path, schema=DEFAULT_SCHEMA):
    """Load one metric file into a Dataset.

    Header matching is case-insensitive. Raises SchemaError when a schema
    column (or the defect-count column) is missing, ParseError on any
    non-numeric or missing cell, and EmptyDatasetError when no data rows
    follow the header.
    """
    path = Path(path)
    name = path.stem
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDatasetError(f"{path}: file is empty") from None
        positions = {}
        for idx, col in enumerate(header):
            positions.setdefault(col.strip().lower(), idx)
        missing = [c for c in (*schema, DEFECT_COLUMN) if c not in positions]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        feat_pos = [positions[c] for c in schema]
        bug_pos = positions[DEFECT_COLUMN]
        version_pos = positions.get("version")

        features = []
        counts = []
        release = ""
        for row_idx, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) <= max(*feat_pos, bug_pos):
                raise ParseError(f"{path}: row {row_idx} has too few cells")
            vec = np.empty(len(schema), dtype=np.float64)
            for j, pos in enumerate(feat_pos):
                cell = row[pos].strip()
                if not cell:
                    raise ParseError(
                        f"{path}: row {row_idx}, column {schema[j]!r}: missing value"
                    )
                try:
                    vec[j] = float(cell)
                except ValueError:
                    raise ParseError(
                        f"{path}: row {row_idx}, column {schema[j]!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
                if not math.isfinite(vec[j]):
                    raise ParseError(
                        f"{path}: row {row_idx}, column {schema[j]!r}: "
                        f"non-finite value {cell!r}"
                    )
            counts.append(_parse_count(row[bug_pos].strip(), row_idx, DEFECT_COLUMN))
            features.append(vec)
            if version_pos is not None and not release and len(row) > version_pos:
                release = row[version_pos].strip()

    if not features:
        raise EmptyDatasetError(f"{path}: no data rows")
    return Dataset(name, release, schema, np.array(features), np.array(counts))


def write_dataset(dataset, path, synthetic=None):
    """Write a Dataset to the external CSV format.

    Floats are serialized with repr so a reload reproduces them bit-exactly.
    ``synthetic`` optionally adds a per-row generated/original flag column.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ["origin_dataset", "origin_row", *dataset.schema, DEFECT_COLUMN]
    if synthetic is not None:
        header.append("synthetic")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(len(dataset)):
            row = [dataset.origin_names[i], int(dataset.origin_rows[i])]
            row.extend(repr(float(v)) for v in dataset.features[i])
            row.append(int(dataset.defect_counts[i]))
            if synthetic is not None:
                row.append(int(synthetic[i]))
            writer.writerow(row)
    return path


def merge_sources(datasets):
    """Concatenate source datasets into one pool, keeping per-row provenance.

    No deduplication happens here; the pool size is the sum of the member
    sizes. All members must share one schema.
    """
    datasets = list(datasets)
    if not datasets:
        raise ValueError("merge_sources needs at least one dataset")
    first = datasets[0]
    for other in datasets[1:]:
        if other.schema != first.schema:
            raise SchemaError(
                f"schema mismatch between {first.name!r} and {other.name!r}"
            )
    return Dataset(
        "<pool>", "",
        first.schema,
        np.vstack([d.features for d in datasets]),
        np.concatenate([d.defect_counts for d in datasets]),
        np.concatenate([d.origin_names for d in datasets]),
        np.concatenate([d.origin_rows for d in datasets]),
    )


@dataclass(frozen=True)
class Standardizer:
    """Per-feature z-score transform fit on a reference collection.

    Zero-variance features map to 0 in the transformed space and back to
    their reference mean on inversion.
    """

    mean: np.ndarray
    std: np.ndarray

    @property
    def degenerate(self):
        return self.std == 0.0

    def transform(self, features):
        features = np.asarray(features, dtype=np.float64)
        scale = np.where(self.degenerate, 1.0, self.std)
        z = (features - self.mean) / scale
        z[..., self.degenerate] = 0.0
        return z

    def inverse_transform(self, z):
        z = np.asarray(z, dtype=np.float64)
        scale = np.where(self.degenerate, 1.0, self.std)
        return z * scale + self.mean


def _feature_matrix(data):
    return data.features if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)


def fit_standardizer(reference):
    """Fit per-feature mean/std on a Dataset or raw (n, p) matrix."""
    x = _feature_matrix(reference)
    if x.shape[0] == 0:
        raise ValueError("reference collection is empty")
    return Standardizer(mean=x.mean(axis=0), std=x.std(axis=0))


def apply_standardizer(standardizer, data):
    """Standardize a Dataset (returning a new Dataset) or a raw matrix."""
    if isinstance(data, Dataset):
        return data.with_features(standardizer.transform(data.features))
    return standardizer.transform(_feature_matrix(data))

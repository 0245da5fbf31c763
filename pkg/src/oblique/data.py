"""Dataset representation, CSV ingestion, and preprocessing transforms.

Features are held in an n x m float64 matrix with NaN marking missing
cells.  Labels are dense integer class ids; the original label strings are
kept in class_names, ordered by first appearance in the source file.
"""

import csv
import math

import numpy as np

from .errors import (
    ConfigurationError,
    EmptyDatasetError,
    FormatError,
    PreprocessingError,
)

DEFAULT_MISSING_TOKENS = frozenset({"", "NA", "NaN", "?"})


class ClassCounts:
    """Per-class sample counts plus their total."""

    def __init__(self, counts):
        self.counts = [int(c) for c in counts]
        if any(c < 0 for c in self.counts):
            raise ConfigurationError("class counts must be non-negative")
        self.total = sum(self.counts)

    def __repr__(self):
        return "ClassCounts(%r)" % (self.counts,)


class Dataset:
    """Immutable n x m feature matrix with integer labels and column names."""

    def __init__(self, features, labels, class_names, feature_names):
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2:
            raise ConfigurationError("features must be a 2-d matrix")
        labels = np.asarray(labels, dtype=np.int64)
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise ConfigurationError("labels must parallel the feature rows")
        class_names = [str(c) for c in class_names]
        feature_names = [str(f) for f in feature_names]
        if len(feature_names) != features.shape[1]:
            raise ConfigurationError("feature_names must match column count")
        if labels.size and (labels.min() < 0 or labels.max() >= len(class_names)):
            raise ConfigurationError("label id outside class_names range")
        self.features = features
        self.labels = labels
        self.class_names = class_names
        self.feature_names = feature_names
        self.features.setflags(write=False)
        self.labels.setflags(write=False)

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def m(self):
        return self.features.shape[1]

    def __repr__(self):
        return "Dataset(n=%d, m=%d, classes=%r)" % (
            self.n,
            self.m,
            self.class_names,
        )


def load_csv(path, label_column="last", missing_tokens=DEFAULT_MISSING_TOKENS, column_names=None):
    """Read a CSV file into a Dataset.

    The label column is selected by name, by the sentinel "last" (default),
    or by None to treat every column as a feature (labels all 0).  Cells
    matching a missing token become NaN; every other cell must parse as a
    finite real number.  The first row is the header unless column_names is
    given, in which case the file is headerless and every row is data.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh)]
    if not rows:
        raise EmptyDatasetError("%s: file is empty" % (path,))
    if column_names is None:
        header = [h.strip() for h in rows[0]]
        data_rows = [r for r in rows[1:] if r]
        row_offset = 2
    else:
        header = [str(h).strip() for h in column_names]
        data_rows = [r for r in rows if r]
        row_offset = 1
    if not data_rows:
        raise EmptyDatasetError("%s: no data rows after the header" % (path,))

    if label_column is None:
        label_idx = None
    elif label_column == "last":
        label_idx = len(header) - 1
    else:
        if label_column not in header:
            raise ConfigurationError(
                "label column %r not in header %r" % (label_column, header)
            )
        label_idx = header.index(label_column)

    feature_names = [h for i, h in enumerate(header) if i != label_idx]
    n = len(data_rows)
    m = len(feature_names)
    features = np.empty((n, m), dtype=np.float64)
    label_strings = []
    for i, row in enumerate(data_rows):
        if len(row) != len(header):
            raise FormatError(
                "row %d has %d cells, header has %d" % (i + row_offset, len(row), len(header))
            )
        col = 0
        for j, cell in enumerate(row):
            cell = cell.strip()
            if j == label_idx:
                if cell in missing_tokens:
                    raise FormatError(
                        "row %d, column %r: missing label" % (i + row_offset, header[j])
                    )
                label_strings.append(cell)
                continue
            if cell in missing_tokens:
                features[i, col] = math.nan
            else:
                try:
                    value = float(cell)
                except ValueError:
                    raise FormatError(
                        "row %d, column %r: cannot parse %r as a number"
                        % (i + row_offset, header[j], cell)
                    ) from None
                if not math.isfinite(value):
                    raise FormatError(
                        "row %d, column %r: non-finite value %r"
                        % (i + row_offset, header[j], cell)
                    )
                features[i, col] = value
            col += 1

    if label_idx is None:
        return Dataset(features, np.zeros(n, dtype=np.int64), ["0"], feature_names)

    class_names = []
    class_ids = {}
    labels = np.empty(n, dtype=np.int64)
    for i, s in enumerate(label_strings):
        if s not in class_ids:
            class_ids[s] = len(class_names)
            class_names.append(s)
        labels[i] = class_ids[s]
    return Dataset(features, labels, class_names, feature_names)


def discretize_label(values, threshold):
    """Map real-valued labels to two classes split at a threshold.

    Returns (labels, class_names) where class "one" (id 0) holds values
    strictly below the threshold and class "two" (id 1) holds the rest.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ConfigurationError("values must be one-dimensional")
    if np.isnan(values).any():
        idx = int(np.isnan(values).argmax())
        raise PreprocessingError("value %d is missing; cannot discretize" % (idx,))
    labels = (values >= threshold).astype(np.int64)
    return labels, ["one", "two"]


def remove_rows_missing(dataset, feature):
    """Drop every row whose named feature is missing, preserving order."""
    if feature not in dataset.feature_names:
        raise ConfigurationError(
            "unknown feature %r; have %r" % (feature, dataset.feature_names)
        )
    col = dataset.feature_names.index(feature)
    keep = ~np.isnan(dataset.features[:, col])
    if not keep.any():
        raise EmptyDatasetError("every row is missing feature %r" % (feature,))
    return Dataset(
        dataset.features[keep],
        dataset.labels[keep],
        dataset.class_names,
        dataset.feature_names,
    )


def mean_impute(dataset):
    """Replace each missing cell with its column's mean over present values."""
    features = np.array(dataset.features, dtype=np.float64)
    for j in range(features.shape[1]):
        col = features[:, j]
        missing = np.isnan(col)
        if not missing.any():
            continue
        if missing.all():
            raise PreprocessingError(
                "column %r has no present values to average"
                % (dataset.feature_names[j],)
            )
        col[missing] = col[~missing].mean()
    return Dataset(
        features, dataset.labels, dataset.class_names, dataset.feature_names
    )

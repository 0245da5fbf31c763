"""Splitting criteria: twoing, Gini, and information gain.

All three consume PartitionCounts (per-class counts on each side of a
candidate split).  Twoing and information gain compare higher-is-better,
Gini lower-is-better; is_better is strict so the first-enumerated candidate
wins ties.

The *_from_counts helpers operate on plain count lists and are the single
authoritative arithmetic for each formula; every search path in the package
funnels through them so identical partitions always produce bit-identical
scores.
"""

import enum
import math

from .data import ClassCounts
from .errors import ConfigurationError


class Criterion(enum.Enum):
    TWOING = "twoing"
    GINI = "gini"
    INFO_GAIN = "igain"

    @classmethod
    def from_name(cls, name):
        for kind in cls:
            if kind.value == name:
                return kind
        raise ConfigurationError(
            "unknown criterion %r; choose from %s"
            % (name, ", ".join(k.value for k in cls))
        )


class PartitionCounts:
    """Per-class counts on both sides of a split, zero-padded to equal length."""

    def __init__(self, left, right):
        if not isinstance(left, ClassCounts):
            left = ClassCounts(left)
        if not isinstance(right, ClassCounts):
            right = ClassCounts(right)
        if len(left.counts) != len(right.counts):
            raise ConfigurationError("left and right must cover the same classes")
        if left.total + right.total < 1:
            raise ConfigurationError("a split must contain at least one sample")
        self.left = left
        self.right = right

    def __repr__(self):
        return "PartitionCounts(%r, %r)" % (self.left.counts, self.right.counts)


def twoing_from_counts(left, right):
    n_left = sum(left)
    n_right = sum(right)
    n = n_left + n_right
    if n_left == 0 or n_right == 0:
        return 0.0
    p_left = n_left / n
    p_right = n_right / n
    diff = 0.0
    for cl, cr in zip(left, right):
        diff += abs(cl / n_left - cr / n_right)
    return (p_left * p_right / 4.0) * (diff * diff)


def gini_from_counts(left, right):
    n = sum(left) + sum(right)
    score = 0.0
    for counts in (left, right):
        total = sum(counts)
        if total == 0:
            continue
        sum_sq = 0.0
        for c in counts:
            p = c / total
            sum_sq += p * p
        score += (total / n) * (1.0 - sum_sq)
    return score


def _entropy(counts, total):
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def info_gain_from_counts(left, right):
    n_left = sum(left)
    n_right = sum(right)
    n = n_left + n_right
    parent = [cl + cr for cl, cr in zip(left, right)]
    children = (n_left / n) * _entropy(left, n_left) + (n_right / n) * _entropy(
        right, n_right
    )
    return _entropy(parent, n) - children


def twoing(counts):
    """Twoing score: (p_L p_R / 4) (sum_j |p_Lj - p_Rj|)^2, in [0, 0.25]."""
    return twoing_from_counts(counts.left.counts, counts.right.counts)


def gini(counts):
    """Partition-weighted Gini impurity, in [0, 1); lower is better."""
    return gini_from_counts(counts.left.counts, counts.right.counts)


def info_gain(counts):
    """Parent entropy minus size-weighted child entropies, in bits."""
    return info_gain_from_counts(counts.left.counts, counts.right.counts)


SCORERS = {
    Criterion.TWOING: twoing_from_counts,
    Criterion.GINI: gini_from_counts,
    Criterion.INFO_GAIN: info_gain_from_counts,
}


def is_better(kind, candidate, incumbent):
    """Strictly better in the criterion's direction (ties keep the incumbent)."""
    if kind is Criterion.GINI:
        return candidate < incumbent
    return candidate > incumbent


def worst_score(kind):
    """A sentinel every achievable score beats."""
    if kind is Criterion.GINI:
        return math.inf
    return -math.inf

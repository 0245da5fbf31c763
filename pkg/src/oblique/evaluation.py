"""Repeated k-fold cross-validation, grid search over (r, max_depth),
and the statistics used to compare two sets of accuracy results.

Fold membership is a pure function of (seed, repeat, n, folds), so every
grid cell inside one repeat sees identical folds, and re-runs reproduce
results exactly.  Within a (r, repeat, fold) task the tree is fitted once
at the deepest grid depth and truncated to each shallower depth, which is
equivalent to refitting because greedy splits do not depend on the depth
budget above the cut.
"""

import concurrent.futures
import math

import numpy as np

from .criteria import Criterion
from .errors import ConfigurationError, ContractViolationError, UndefinedEffectError
from .induction import Algorithm, InductionConfig, fit, predict, tree_size, truncate_tree


class CVConfig:
    def __init__(self, folds=5, repeats=10, seed=0, grid_r_max=2, grid_depth_max=5):
        self.folds = int(folds)
        self.repeats = int(repeats)
        self.seed = int(seed)
        self.grid_r_max = int(grid_r_max)
        self.grid_depth_max = int(grid_depth_max)
        if self.folds < 2:
            raise ConfigurationError("folds must be at least 2")
        if self.repeats < 1:
            raise ConfigurationError("repeats must be at least 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError("seed must be a 64-bit non-negative integer")
        if self.grid_r_max < 1:
            raise ConfigurationError("grid_r_max must be at least 1")
        if self.grid_depth_max < 1:
            raise ConfigurationError("grid_depth_max must be at least 1")


class GridCell:
    __slots__ = (
        "r",
        "depth",
        "mean_accuracy",
        "std_accuracy",
        "mean_tree_size",
        "std_tree_size",
    )

    def __init__(self, r, depth, mean_accuracy, std_accuracy, mean_tree_size, std_tree_size):
        self.r = int(r)
        self.depth = int(depth)
        self.mean_accuracy = float(mean_accuracy)
        self.std_accuracy = float(std_accuracy)
        self.mean_tree_size = float(mean_tree_size)
        self.std_tree_size = float(std_tree_size)


class CVReport:
    def __init__(self, algorithm, criterion, folds, repeats, seed, cells, selected_r, selected_depth):
        self.algorithm = algorithm
        self.criterion = criterion
        self.folds = int(folds)
        self.repeats = int(repeats)
        self.seed = int(seed)
        self.cells = list(cells)
        self.selected_r = int(selected_r)
        self.selected_depth = int(selected_depth)

    def selected_cell(self):
        for cell in self.cells:
            if cell.r == self.selected_r and cell.depth == self.selected_depth:
                return cell
        raise ConfigurationError("report is missing its selected cell")

    def to_json_dict(self):
        return {
            "algorithm": self.algorithm,
            "criterion": self.criterion,
            "folds": self.folds,
            "repeats": self.repeats,
            "seed": self.seed,
            "cells": [
                {
                    "r": c.r,
                    "depth": c.depth,
                    "mean_acc": c.mean_accuracy,
                    "std_acc": c.std_accuracy,
                    "mean_size": c.mean_tree_size,
                    "std_size": c.std_tree_size,
                }
                for c in self.cells
            ],
            "selected": {"r": self.selected_r, "depth": self.selected_depth},
        }

    def to_csv_text(self):
        lines = ["r,depth,mean_acc,std_acc,mean_size,std_size"]
        for c in self.cells:
            lines.append(
                "%d,%d,%s,%s,%s,%s"
                % (
                    c.r,
                    c.depth,
                    format(c.mean_accuracy, ".17g"),
                    format(c.std_accuracy, ".17g"),
                    format(c.mean_tree_size, ".17g"),
                    format(c.std_tree_size, ".17g"),
                )
            )
        return "\n".join(lines) + "\n"


def partition_folds(n, folds, rng):
    """Assign n sample indices to folds by permutation then contiguous
    chunks, the first n mod folds chunks one sample larger."""
    if folds < 2:
        raise ConfigurationError("folds must be at least 2")
    if n < folds:
        raise ConfigurationError("need at least one sample per fold")
    perm = rng.permutation(n)
    base = n // folds
    extra = n % folds
    assignment = np.empty(n, dtype=np.int64)
    pos = 0
    for fold in range(folds):
        size = base + (1 if fold < extra else 0)
        assignment[perm[pos : pos + size]] = fold
        pos += size
    return assignment


def _accuracy(tree, features, labels):
    correct = 0
    for i in range(features.shape[0]):
        if predict(tree, features[i]) == labels[i]:
            correct += 1
    return correct / features.shape[0]


def cross_validate(dataset, config, cv):
    """Per-repeat mean test accuracy and mean leaf count.

    Returns (accuracies, tree_sizes), one entry per repeat; folds for
    repeat j are drawn from a generator seeded with [seed, j].
    """
    accs = []
    sizes = []
    for repeat in range(cv.repeats):
        rng = np.random.default_rng([cv.seed, repeat])
        assignment = partition_folds(dataset.n, cv.folds, rng)
        fold_accs = []
        fold_sizes = []
        for fold in range(cv.folds):
            test = assignment == fold
            train = ~test
            tree = fit(
                config,
                dataset.features[train],
                dataset.labels[train],
                dataset.class_names,
            )
            fold_accs.append(_accuracy(tree, dataset.features[test], dataset.labels[test]))
            fold_sizes.append(tree_size(tree))
        accs.append(sum(fold_accs) / cv.folds)
        sizes.append(sum(fold_sizes) / cv.folds)
    return accs, sizes


def _grid_task(args):
    """One (r, repeat) unit of grid-search work.

    Fits each fold once at the deepest grid depth, truncates to every
    shallower depth, and returns {depth: (mean accuracy, mean size)}.
    """
    (features, labels, class_names, algorithm, criterion, r, repeat, seed, folds, depth_max) = args
    rng = np.random.default_rng([seed, repeat])
    assignment = partition_folds(features.shape[0], folds, rng)
    accs = {depth: [] for depth in range(1, depth_max + 1)}
    sizes = {depth: [] for depth in range(1, depth_max + 1)}
    config = InductionConfig(criterion, r, depth_max, algorithm)
    for fold in range(folds):
        test = assignment == fold
        train = ~test
        tree = fit(config, features[train], labels[train], class_names)
        for depth in range(1, depth_max + 1):
            sub = truncate_tree(tree, depth) if depth < depth_max else tree
            accs[depth].append(_accuracy(sub, features[test], labels[test]))
            sizes[depth].append(tree_size(sub))
    return {
        depth: (sum(accs[depth]) / folds, sum(sizes[depth]) / folds)
        for depth in range(1, depth_max + 1)
    }


def _std(values):
    if len(values) < 2:
        return 0.0
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return math.sqrt(var)


def grid_search(dataset, cv, criterion, algorithm, workers=1):
    """Evaluate every (r, depth) grid cell by repeated k-fold CV.

    r ranges over 1..grid_r_max for the exhaustive algorithm and is
    pinned to 1 for the others.  Tasks are one (r, repeat) pair each and
    may run in worker processes; results are reduced in task order, so
    the report is identical for any worker count.
    """
    if isinstance(criterion, str):
        criterion = Criterion.from_name(criterion)
    if isinstance(algorithm, str):
        algorithm = Algorithm.from_name(algorithm)
    if workers < 1:
        raise ConfigurationError("workers must be at least 1")
    if algorithm is Algorithm.CART_ELC:
        if cv.grid_r_max > dataset.m:
            raise ConfigurationError(
                "grid_r_max=%d exceeds feature count m=%d" % (cv.grid_r_max, dataset.m)
            )
        r_values = list(range(1, cv.grid_r_max + 1))
    else:
        r_values = [1]
    tasks = [
        (
            dataset.features,
            dataset.labels,
            dataset.class_names,
            algorithm,
            criterion,
            r,
            repeat,
            cv.seed,
            cv.folds,
            cv.grid_depth_max,
        )
        for r in r_values
        for repeat in range(cv.repeats)
    ]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_grid_task, tasks))
    else:
        results = [_grid_task(task) for task in tasks]
    keyed = {}
    pos = 0
    for r in r_values:
        for repeat in range(cv.repeats):
            keyed[(r, repeat)] = results[pos]
            pos += 1
    cells = []
    for r in r_values:
        for depth in range(1, cv.grid_depth_max + 1):
            accs = [keyed[(r, repeat)][depth][0] for repeat in range(cv.repeats)]
            szs = [keyed[(r, repeat)][depth][1] for repeat in range(cv.repeats)]
            cells.append(
                GridCell(
                    r,
                    depth,
                    sum(accs) / len(accs),
                    _std(accs),
                    sum(szs) / len(szs),
                    _std(szs),
                )
            )
    selected_r, selected_depth = select_best(cells)
    return CVReport(
        algorithm.value,
        criterion.value,
        cv.folds,
        cv.repeats,
        cv.seed,
        cells,
        selected_r,
        selected_depth,
    )


def select_best(cells):
    """Pick the grid cell to report: highest mean accuracy, with ties
    (within 1e-12) broken by smallest mean tree size, then smallest r,
    then smallest depth.  Order-invariant in the cell list."""
    if not cells:
        raise ConfigurationError("cannot select from an empty grid")
    best_acc = max(cell.mean_accuracy for cell in cells)
    ties = [cell for cell in cells if cell.mean_accuracy >= best_acc - 1e-12]
    winner = min(ties, key=lambda c: (c.mean_tree_size, c.r, c.depth))
    return winner.r, winner.depth


def _beta_cf(a, b, x):
    """Continued fraction for the regularized incomplete beta, by the
    modified Lentz method."""
    max_iter = 300
    eps = 1e-14
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for it in range(1, max_iter + 1):
        m2 = 2 * it
        aa = it * (b - it) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + it) * (qab + it) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ContractViolationError("incomplete beta continued fraction failed to converge")


def regularized_incomplete_beta(a, b, x):
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0.0 or b <= 0.0:
        raise ConfigurationError("shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ConfigurationError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    bt = math.exp(ln_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _beta_cf(a, b, x) / a
    return 1.0 - bt * _beta_cf(b, a, 1.0 - x) / b


def welch_t_test(mean_a, std_a, n_a, mean_b, std_b, n_b):
    """Two-sided Welch's t-test from summary statistics.

    Returns (t, df, p) with Welch-Satterthwaite degrees of freedom.  When
    both variances are zero the test degenerates: p is 1.0 for equal
    means and 0.0 otherwise.
    """
    if n_a < 2 or n_b < 2:
        raise ConfigurationError("each group needs at least two observations")
    if std_a < 0.0 or std_b < 0.0:
        raise ConfigurationError("standard deviations cannot be negative")
    va = std_a * std_a / n_a
    vb = std_b * std_b / n_b
    denom = va + vb
    if denom == 0.0:
        if mean_a == mean_b:
            return 0.0, float(n_a + n_b - 2), 1.0
        t = math.inf if mean_a > mean_b else -math.inf
        return t, float(n_a + n_b - 2), 0.0
    t = (mean_a - mean_b) / math.sqrt(denom)
    df = denom * denom / (va * va / (n_a - 1) + vb * vb / (n_b - 1))
    x = df / (df + t * t)
    p = regularized_incomplete_beta(df / 2.0, 0.5, x)
    return t, df, p


def cohens_d(mean_a, std_a, mean_b, std_b):
    """Effect size (mean_a - mean_b) over the root mean square of the two
    standard deviations."""
    if std_a < 0.0 or std_b < 0.0:
        raise ConfigurationError("standard deviations cannot be negative")
    pooled = math.sqrt((std_a * std_a + std_b * std_b) / 2.0)
    if pooled == 0.0:
        raise UndefinedEffectError("effect size is undefined when both groups have zero spread")
    return (mean_a - mean_b) / pooled

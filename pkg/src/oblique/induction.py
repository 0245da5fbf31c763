"""Decision tree induction, prediction, metrics, and JSON serialization.

Four algorithms share one recursive builder and differ only in how they
search for the best split of a node:

- cart-elc: exhaustive enumeration of hyperplanes through every r-sample
  combination on every r-feature combination.
- cart-axis: axis-aligned thresholds at every (sample, feature) value.
- hhcart-d / hhcart-a: axis-aligned search in spaces reflected so that a
  per-class covariance eigenvector lines up with coordinate axis 0, using
  the dominant eigenvector only (D) or all of them (A).

All searches enumerate candidates in a fixed lexicographic order and keep
the first-encountered best (strict comparisons), which makes trees a pure
function of (config, samples, labels).
"""

import enum
import itertools
import json
import math

import numpy as np

from . import _batch
from .criteria import Criterion, PartitionCounts, SCORERS, is_better, worst_score
from .errors import ConfigurationError, ContractViolationError, FormatError, PreprocessingError
from .geometry import (
    Hyperplane,
    Side,
    canonical_plane,
    fit_hyperplane,
    householder_reflection,
    side_of,
    symmetric_eigen,
)

HHCART_AXIS_SKIP_TOL = 1e-6


class Algorithm(enum.Enum):
    CART_ELC = "cart-elc"
    CART_AXIS = "cart-axis"
    HHCART_D = "hhcart-d"
    HHCART_A = "hhcart-a"

    @classmethod
    def from_name(cls, name):
        for algo in cls:
            if algo.value == name:
                return algo
        raise ConfigurationError(
            "unknown algorithm %r; choose from %s"
            % (name, ", ".join(a.value for a in cls))
        )


class Leaf:
    __slots__ = ("class_id",)

    def __init__(self, class_id):
        self.class_id = int(class_id)


class Split:
    __slots__ = ("plane", "left", "right", "majority")

    def __init__(self, plane, left, right, majority=None):
        self.plane = plane
        self.left = left
        self.right = right
        # Majority class of the training samples that reached this node;
        # kept so a deep tree can be truncated to any shallower max_depth
        # without refitting.  Not serialized.
        self.majority = majority


class Tree:
    def __init__(self, m, class_names, root):
        self.m = int(m)
        self.class_names = [str(c) for c in class_names]
        self.root = root


class InductionConfig:
    def __init__(self, criterion, r, max_depth, algorithm):
        if isinstance(criterion, str):
            criterion = Criterion.from_name(criterion)
        if isinstance(algorithm, str):
            algorithm = Algorithm.from_name(algorithm)
        self.criterion = criterion
        self.r = int(r)
        self.max_depth = int(max_depth)
        self.algorithm = algorithm
        if self.r < 1:
            raise ConfigurationError("r must be a positive integer")
        if self.max_depth < 1:
            raise ConfigurationError("max_depth must be a positive integer")


class SplitCandidate:
    __slots__ = ("plane", "score", "enumeration_index")

    def __init__(self, plane, score, enumeration_index):
        self.plane = plane
        self.score = float(score)
        self.enumeration_index = int(enumeration_index)


def _as_matrix(samples):
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 2:
        raise ConfigurationError("samples must be a 2-d matrix")
    return x


def _as_labels(labels, n):
    y = np.asarray(labels, dtype=np.int64)
    if y.ndim != 1 or y.shape[0] != n:
        raise ConfigurationError("labels must parallel samples")
    if n and y.min() < 0:
        raise ConfigurationError("labels must be non-negative class ids")
    return y


def evaluate_split(plane, samples, labels):
    """Count per-class samples on each side of a plane."""
    x = _as_matrix(samples)
    y = _as_labels(labels, x.shape[0])
    n_classes = int(y.max()) + 1 if y.size else 1
    left = [0] * n_classes
    right = [0] * n_classes
    for i in range(x.shape[0]):
        if side_of(plane, x[i]) is Side.LEFT:
            left[y[i]] += 1
        else:
            right[y[i]] += 1
    return PartitionCounts(left, right)


def best_split_elc(samples, labels, r, criterion, engine="auto"):
    """Exhaustive search over hyperplanes through r samples on r features.

    Sample-index combinations iterate in the outer loop and feature-index
    combinations in the inner loop, both lexicographic; a selection where
    any chosen sample is missing any chosen feature is skipped.  Returns
    the first-enumerated best candidate, or None when every selection is
    skipped.

    engine selects the implementation: "scalar" is the straightforward
    loop, "batch" the vectorized path (r <= 2), "auto" picks for you.
    The two produce bit-identical results; the test suite holds them to
    that.
    """
    x = _as_matrix(samples)
    y = _as_labels(labels, x.shape[0])
    n, m = x.shape
    if n < 1:
        raise ConfigurationError("need at least one sample")
    if not 1 <= r <= m:
        raise ConfigurationError("need 1 <= r <= m; got r=%d, m=%d" % (r, m))
    if r > n:
        raise ConfigurationError("need r <= n; got r=%d, n=%d" % (r, n))
    if not isinstance(criterion, Criterion):
        criterion = Criterion.from_name(criterion)
    if engine == "auto":
        engine = "batch" if r <= 2 else "scalar"
    if engine == "batch":
        if r > 2:
            raise ConfigurationError("batch engine supports r <= 2")
        result = _batch.best_split_elc_batch(x, y, r, criterion)
        if result is None:
            return None
        plane, score, index = result
        return SplitCandidate(plane, score, index)
    if engine != "scalar":
        raise ConfigurationError("engine must be auto, scalar, or batch")
    return _best_split_elc_scalar(x, y, r, criterion)


def _best_split_elc_scalar(x, y, r, criterion):
    n, m = x.shape
    n_classes = int(y.max()) + 1
    scorer = SCORERS[criterion]
    best_score = worst_score(criterion)
    best_plane = None
    best_index = -1
    index = -1
    for sample_combo in itertools.combinations(range(n), r):
        for feature_combo in itertools.combinations(range(m), r):
            index += 1
            pts = x[np.ix_(sample_combo, feature_combo)]
            if np.isnan(pts).any():
                continue
            plane = fit_hyperplane(pts, feature_combo, m)
            left = [0] * n_classes
            right = [0] * n_classes
            for i in range(n):
                if side_of(plane, x[i]) is Side.LEFT:
                    left[y[i]] += 1
                else:
                    right[y[i]] += 1
            score = scorer(left, right)
            if is_better(criterion, score, best_score):
                best_score = score
                best_plane = plane
                best_index = index
    if best_plane is None:
        return None
    return SplitCandidate(best_plane, best_score, best_index)


def best_split_axis(samples, labels, criterion):
    """Axis-aligned search: every sample value of every feature is a
    threshold candidate; samples iterate in the outer loop."""
    x = _as_matrix(samples)
    y = _as_labels(labels, x.shape[0])
    if np.isnan(x).any():
        raise PreprocessingError("axis-aligned search cannot accept missing cells")
    if x.shape[0] < 1:
        raise ConfigurationError("need at least one sample")
    if not isinstance(criterion, Criterion):
        criterion = Criterion.from_name(criterion)
    plane, score, index = _batch.best_split_elc_batch(x, y, 1, criterion)
    return SplitCandidate(plane, score, index)


def _class_covariance(x):
    """Sample covariance of the rows of x, accumulated in fixed order."""
    nc, m = x.shape
    mu = x.sum(axis=0) / nc
    centered = x - mu
    cov = np.empty((m, m))
    for j in range(m):
        for k in range(j, m):
            cov[j, k] = float((centered[:, j] * centered[:, k]).sum()) / (nc - 1)
            cov[k, j] = cov[j, k]
    return cov


def best_split_hhcart(samples, labels, criterion, variant):
    """Householder-reflection search.

    The candidate pool is every axis-aligned split in the original space,
    followed, for each class in id order, by axis-aligned splits in the
    space reflected so that one of the class's covariance eigenvectors
    (dominant only for variant "D", all of them in descending-eigenvalue
    order for "A") aligns with coordinate axis 0.  Eigenvectors already
    lying on a coordinate axis are skipped, as are single-sample classes.
    """
    x = _as_matrix(samples)
    y = _as_labels(labels, x.shape[0])
    if variant not in ("D", "A"):
        raise ConfigurationError("variant must be 'D' or 'A'")
    if np.isnan(x).any():
        raise PreprocessingError("hhcart cannot accept missing cells")
    n, m = x.shape
    if n < 1:
        raise ConfigurationError("need at least one sample")
    if not isinstance(criterion, Criterion):
        criterion = Criterion.from_name(criterion)

    n_classes = int(y.max()) + 1
    cache = {}
    best_score = worst_score(criterion)
    best_index = -1
    best_maker = None

    # Block 0: axis-aligned splits in the original space.
    score, local, i, f = _batch.best_axis_candidate(x, y, criterion, cache)
    if score is not None:
        best_score = score
        best_index = local
        best_maker = (None, i, f)
    base = n * m

    for c in range(n_classes):
        class_rows = x[y == c]
        if class_rows.shape[0] < 2:
            continue
        _, vectors = symmetric_eigen(_class_covariance(class_rows))
        if variant == "D":
            columns = [m - 1]
        else:
            columns = list(range(m - 1, -1, -1))
        for col in columns:
            d = vectors[:, col]
            if np.abs(d).max() > 1.0 - HHCART_AXIS_SKIP_TOL:
                continue
            h = householder_reflection(d, 0)
            reflected = _batch.ordered_matmul(x, h)
            flips = [_column_flips(h[:, k]) for k in range(m)]
            score, local, i, k = _batch.best_axis_candidate(
                reflected, y, criterion, cache, flips=flips
            )
            if score is not None:
                gidx = base + local
                take = is_better(criterion, score, best_score)
                if not take and score == best_score and gidx < best_index:
                    take = True
                if take:
                    best_score = score
                    best_index = gidx
                    best_maker = (h, i, k)
            base += n * m

    if best_maker is None:
        return None
    h, i, k = best_maker
    if h is None:
        w = np.zeros(m)
        w[k] = 1.0
        plane = Hyperplane(w, x[i, k])
    else:
        reflected = _batch.ordered_matmul(x, h)
        plane = canonical_plane(h[:, k].copy(), reflected[i, k])
    return SplitCandidate(plane, best_score, best_index)


def _column_flips(column):
    """True when canonicalizing a plane with this normal negates it."""
    for v in column:
        if v != 0.0:
            return bool(v < 0.0)
    raise ContractViolationError("reflection produced a zero column")


def _majority(y, n_classes):
    counts = np.bincount(y, minlength=n_classes)
    return int(counts.argmax())


def fit(config, samples, labels, class_names=None, engine="auto"):
    """Grow a tree by recursive greedy splitting.

    Recursion stops on class homogeneity, at max_depth, when no split
    candidate exists, or when the best split leaves one side empty; each
    of those produces a majority-class leaf (ties to the lowest class id).
    """
    x = _as_matrix(samples)
    y = _as_labels(labels, x.shape[0])
    if x.shape[0] < 1:
        raise ConfigurationError("cannot fit on an empty sample set")
    n, m = x.shape
    if config.algorithm is Algorithm.CART_ELC:
        if config.r > m:
            raise ConfigurationError(
                "r=%d exceeds feature count m=%d" % (config.r, m)
            )
    elif np.isnan(x).any():
        raise PreprocessingError(
            "%s cannot accept missing cells; impute first"
            % (config.algorithm.value,)
        )
    n_classes = int(y.max()) + 1
    if class_names is None:
        class_names = [str(c) for c in range(n_classes)]
    elif len(class_names) < n_classes:
        raise ConfigurationError("class_names shorter than the label range")

    def search(xs, ys):
        if config.algorithm is Algorithm.CART_ELC:
            if xs.shape[0] < config.r:
                return None
            return best_split_elc(xs, ys, config.r, config.criterion, engine)
        if config.algorithm is Algorithm.CART_AXIS:
            return best_split_axis(xs, ys, config.criterion)
        variant = "D" if config.algorithm is Algorithm.HHCART_D else "A"
        return best_split_hhcart(xs, ys, config.criterion, variant)

    def grow(xs, ys, depth):
        maj = _majority(ys, n_classes)
        if (ys == ys[0]).all():
            return Leaf(maj)
        if depth == config.max_depth:
            return Leaf(maj)
        candidate = search(xs, ys)
        if candidate is None:
            return Leaf(maj)
        left_mask = np.empty(xs.shape[0], dtype=bool)
        for i in range(xs.shape[0]):
            left_mask[i] = side_of(candidate.plane, xs[i]) is Side.LEFT
        n_left = int(left_mask.sum())
        if n_left == 0 or n_left == xs.shape[0]:
            return Leaf(maj)
        left = grow(xs[left_mask], ys[left_mask], depth + 1)
        right = grow(xs[~left_mask], ys[~left_mask], depth + 1)
        return Split(candidate.plane, left, right, majority=maj)

    return Tree(m, class_names, grow(x, y, 0))


def truncate_tree(tree, max_depth):
    """Cut a tree to a depth budget, turning over-deep splits into leaves
    labeled with their stored training majority.

    Greedy splits do not depend on the depth budget above the cut, so the
    result equals fitting from scratch with the smaller max_depth.
    """

    def cut(node, budget):
        if isinstance(node, Leaf):
            return node
        if budget == 0:
            if node.majority is None:
                raise ConfigurationError(
                    "cannot truncate a deserialized tree; majorities are unknown"
                )
            return Leaf(node.majority)
        return Split(
            node.plane,
            cut(node.left, budget - 1),
            cut(node.right, budget - 1),
            majority=node.majority,
        )

    if max_depth < 1:
        raise ConfigurationError("max_depth must be a positive integer")
    return Tree(tree.m, tree.class_names, cut(tree.root, max_depth))


def predict(tree, sample):
    """Walk a sample from the root to a leaf and return its class id."""
    node = tree.root
    while isinstance(node, Split):
        if side_of(node.plane, sample) is Side.LEFT:
            node = node.left
        else:
            node = node.right
    return node.class_id


def tree_size(tree):
    """Number of leaves."""

    def count(node):
        if isinstance(node, Leaf):
            return 1
        return count(node.left) + count(node.right)

    return count(tree.root)


def tree_depth(tree):
    """Longest root-to-leaf edge count."""

    def depth(node):
        if isinstance(node, Leaf):
            return 0
        return 1 + max(depth(node.left), depth(node.right))

    return depth(tree.root)


def _format_real(x):
    return format(float(x), ".17g")


def _node_json(node):
    if isinstance(node, Leaf):
        return '{"type":"leaf","class":%d}' % (node.class_id,)
    coeffs = ",".join(_format_real(c) for c in node.plane.coefficients)
    return '{"type":"split","coefficients":[%s],"bias":%s,"left":%s,"right":%s}' % (
        coeffs,
        _format_real(node.plane.bias),
        _node_json(node.left),
        _node_json(node.right),
    )


def serialize(tree):
    """Render a tree as JSON bytes with reals at 17 significant digits."""
    classes = ",".join(json.dumps(c) for c in tree.class_names)
    text = '{"m":%d,"classes":[%s],"root":%s}' % (
        tree.m,
        classes,
        _node_json(tree.root),
    )
    return text.encode("utf-8")


def _require(condition, path, message):
    if not condition:
        raise FormatError("%s: %s" % (path, message))


def _is_real(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _node_from_json(doc, m, n_classes, path):
    _require(isinstance(doc, dict), path, "node must be an object")
    kind = doc.get("type")
    if kind == "leaf":
        _require(set(doc) == {"type", "class"}, path, "leaf needs exactly type and class")
        cls = doc["class"]
        _require(
            isinstance(cls, int) and not isinstance(cls, bool), path + ".class", "must be an integer"
        )
        _require(0 <= cls < n_classes, path + ".class", "class id out of range")
        return Leaf(cls)
    if kind == "split":
        _require(
            set(doc) == {"type", "coefficients", "bias", "left", "right"},
            path,
            "split needs exactly type, coefficients, bias, left, right",
        )
        coeffs = doc["coefficients"]
        _require(isinstance(coeffs, list), path + ".coefficients", "must be an array")
        _require(len(coeffs) == m, path + ".coefficients", "must have length m=%d" % (m,))
        for i, v in enumerate(coeffs):
            _require(_is_real(v), "%s.coefficients[%d]" % (path, i), "must be a number")
        _require(_is_real(doc["bias"]), path + ".bias", "must be a number")
        try:
            plane = Hyperplane(coeffs, doc["bias"])
        except (ConfigurationError, ContractViolationError) as exc:
            raise FormatError("%s: %s" % (path, exc)) from None
        left = _node_from_json(doc["left"], m, n_classes, path + ".left")
        right = _node_from_json(doc["right"], m, n_classes, path + ".right")
        return Split(plane, left, right)
    raise FormatError("%s.type: must be 'leaf' or 'split'" % (path,))


def deserialize(data):
    """Parse tree JSON back into a Tree, validating the schema.

    Errors name the JSON path of the offending element.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except ValueError as exc:
        raise FormatError("$: invalid JSON: %s" % (exc,)) from None
    _require(isinstance(doc, dict), "$", "document must be an object")
    _require(set(doc) == {"m", "classes", "root"}, "$", "needs exactly m, classes, root")
    m = doc["m"]
    _require(isinstance(m, int) and not isinstance(m, bool), "$.m", "must be an integer")
    _require(m >= 1, "$.m", "must be positive")
    classes = doc["classes"]
    _require(isinstance(classes, list) and classes, "$.classes", "must be a non-empty array")
    for i, c in enumerate(classes):
        _require(isinstance(c, str), "$.classes[%d]" % (i,), "must be a string")
    root = _node_from_json(doc["root"], m, len(classes), "$.root")
    return Tree(m, classes, root)

"""Hyperplane fitting and side tests, plus the small-matrix eigensolver and
Householder reflection they are built on.

A hyperplane is stored in canonical orientation: unit-norm coefficient
vector whose first non-zero entry is strictly positive.  A sample is Left
when coefficients . sample >= bias ("on or above" the plane), Right
otherwise; a sample missing any active feature is routed Right.

Numerical determinism matters here: trees must be reproducible bit-for-bit
across runs and worker counts, so the eigensolver is a fixed-order cyclic
Jacobi iteration and all accumulations happen in pinned order.  The
vectorized search in _batch.py mirrors these exact operations; change one
side only in lockstep with the other.
"""

import enum
import math

import numpy as np

from .errors import ConfigurationError, ContractViolationError

UNIT_NORM_TOL = 1e-9
JACOBI_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 64
AXIS_ALIGNED_TOL = 1e-12


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class Hyperplane:
    """Oriented split boundary w . x = b with unit-norm w.

    active_features lists the indices with non-zero coefficients; every
    other coefficient is exactly zero.
    """

    def __init__(self, coefficients, bias):
        w = np.array(coefficients, dtype=np.float64)
        if w.ndim != 1:
            raise ConfigurationError("coefficients must be a vector")
        norm = math.sqrt(float((w * w).sum()))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ContractViolationError(
                "coefficient norm %.17g is not 1 within %g" % (norm, UNIT_NORM_TOL)
            )
        first = _first_nonzero(w)
        if w[first] < 0.0:
            raise ContractViolationError(
                "plane is not canonically oriented; coefficient %d is negative"
                % (first,)
            )
        self.coefficients = w
        self.bias = float(bias)
        self.active_features = tuple(int(j) for j in np.nonzero(w)[0])
        self.coefficients.setflags(write=False)

    def __repr__(self):
        return "Hyperplane(%r, %r)" % (list(self.coefficients), self.bias)


def _first_nonzero(vector):
    for j in range(vector.shape[0]):
        if vector[j] != 0.0:
            return j
    raise ContractViolationError("zero vector cannot define a hyperplane")


def canonical_plane(coefficients, bias):
    """Build a Hyperplane, flipping signs so the first non-zero coefficient
    is positive (the bias flips with it)."""
    w = np.array(coefficients, dtype=np.float64)
    if w[_first_nonzero(w)] < 0.0:
        w = -w
        bias = -bias
    return Hyperplane(w, bias)


def symmetric_eigen(matrix):
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi.

    Returns (eigenvalues ascending, eigenvectors as matching columns).
    Sorting is stable, so equal eigenvalues keep their original column
    order, and each eigenvector's first non-zero entry is made positive.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigurationError("matrix must be square")
    r = a.shape[0]
    if not 1 <= r <= 32:
        raise ConfigurationError("matrix order %d outside [1, 32]" % (r,))
    asym = float(np.abs(a - a.T).max()) if r > 1 else 0.0
    if asym > 1e-9:
        raise ContractViolationError(
            "matrix is asymmetric by %.3g (tolerance 1e-9)" % (asym,)
        )
    if r == 1:
        return a[0, :1].copy(), np.ones((1, 1))
    for i in range(r):
        for j in range(i + 1, r):
            a[j, i] = a[i, j]

    v = np.eye(r)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for p in range(r - 1):
            for q in range(p + 1, r):
                off += a[p, q] * a[p, q]
        if math.sqrt(2.0 * off) < JACOBI_OFF_TOL:
            break
        for p in range(r - 1):
            for q in range(p + 1, r):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                a[p, p] = a[p, p] - t * apq
                a[q, q] = a[q, q] + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(r):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[p, i] = a[i, p]
                    a[i, q] = s * aip + c * aiq
                    a[q, i] = a[i, q]
                for i in range(r):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq

    eigenvalues = np.array([a[i, i] for i in range(r)])
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = v[:, order]
    for k in range(r):
        col = vectors[:, k]
        for i in range(r):
            if col[i] != 0.0:
                if col[i] < 0.0:
                    vectors[:, k] = -col
                break
    return eigenvalues, vectors


def fit_hyperplane(points, selected_features, m):
    """Fit the hyperplane through r points using r selected features.

    points is an r x r matrix: each row is one sample restricted to the
    selected features (ascending feature order).  The normal direction is
    the smallest-eigenvalue eigenvector of the points' sample covariance
    (the zero matrix when r = 1), embedded into m dimensions with zeros on
    unselected features; bias places the plane through the column means.
    """
    pts = np.asarray(points, dtype=np.float64)
    features = [int(f) for f in selected_features]
    r = len(features)
    if pts.ndim != 2 or pts.shape[0] != r or pts.shape[1] != r:
        raise ConfigurationError(
            "points must be r x r for r selected features; got %r" % (pts.shape,)
        )
    if not 1 <= r <= m:
        raise ConfigurationError("need 1 <= r <= m; got r=%d, m=%d" % (r, m))
    if any(features[i] >= features[i + 1] for i in range(r - 1)):
        raise ConfigurationError("selected_features must be strictly ascending")
    if features[0] < 0 or features[-1] >= m:
        raise ConfigurationError("selected feature index outside [0, m)")
    if np.isnan(pts).any():
        raise ContractViolationError("a point is missing a selected coordinate")

    mu = np.empty(r)
    for j in range(r):
        s = pts[0, j]
        for i in range(1, r):
            s = s + pts[i, j]
        mu[j] = s / r

    cov = np.zeros((r, r))
    if r > 1:
        centered = np.empty((r, r))
        for i in range(r):
            for j in range(r):
                centered[i, j] = pts[i, j] - mu[j]
        for j in range(r):
            for k in range(j, r):
                acc = centered[0, j] * centered[0, k]
                for i in range(1, r):
                    acc = acc + centered[i, j] * centered[i, k]
                cov[j, k] = acc / (r - 1)
                cov[k, j] = cov[j, k]

    _, vectors = symmetric_eigen(cov)
    normal = vectors[:, 0]

    coefficients = np.zeros(m)
    for idx, f in enumerate(features):
        coefficients[f] = normal[idx]
    bias = normal[0] * mu[0]
    for j in range(1, r):
        bias = bias + normal[j] * mu[j]
    return canonical_plane(coefficients, bias)


def side_of(plane, sample):
    """Route a sample: Left when w . x >= b, Right otherwise or when the
    sample is missing any active feature."""
    x = np.asarray(sample, dtype=np.float64)
    acc = 0.0
    for f in plane.active_features:
        value = x[f]
        if math.isnan(value):
            return Side.RIGHT
        acc += plane.coefficients[f] * value
    return Side.LEFT if acc >= plane.bias else Side.RIGHT


def householder_reflection(direction, axis_index):
    """Reflection H = I - 2uu^T/(u^Tu) with u = direction - e_axis.

    H is symmetric and orthogonal and maps the unit vector `direction`
    onto the coordinate axis e_axis.  Returns the identity when direction
    already lies on that axis.
    """
    d = np.asarray(direction, dtype=np.float64)
    if d.ndim != 1:
        raise ConfigurationError("direction must be a vector")
    m = d.shape[0]
    if not 0 <= axis_index < m:
        raise ConfigurationError("axis index %d outside [0, %d)" % (axis_index, m))
    norm = math.sqrt(float((d * d).sum()))
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise ContractViolationError(
            "direction norm %.17g is not 1 within %g" % (norm, UNIT_NORM_TOL)
        )
    u = d.copy()
    u[axis_index] -= 1.0
    uu = float((u * u).sum())
    if math.sqrt(uu) < AXIS_ALIGNED_TOL:
        return np.eye(m)
    return np.eye(m) - (2.0 / uu) * np.outer(u, u)

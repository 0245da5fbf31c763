"""Vectorized split-search kernels.

These mirror, operation for operation, the scalar arithmetic in geometry
(hyperplane fitting, the 2x2 Jacobi rotation, signed-side projection) so
that the batch and scalar searches select bit-identical winners.  Only
elementwise numpy operations appear here; nothing routes through matrix
back ends whose reduction order is unspecified.  Winning candidates are
re-fit through the scalar fit so the returned plane is byte-for-byte the
one the scalar search would have produced.

Scores are computed from integer class counts, so identical counts give
identical floats; each distinct count vector is scored once per search
through a small cache keyed by a mixed-radix encoding.
"""

import itertools
import math

import numpy as np

from .criteria import Criterion, SCORERS, is_better, worst_score
from .geometry import JACOBI_OFF_TOL, fit_hyperplane

CHUNK_PAIRS = 2048


def ordered_matmul(x, h):
    """Matrix product x @ h accumulated column-by-column in ascending
    feature order, matching the order signed-side projection uses."""
    n, m = x.shape
    out = np.empty((n, h.shape[1]))
    for k in range(h.shape[1]):
        acc = x[:, 0] * h[0, k]
        for j in range(1, m):
            acc = acc + x[:, j] * h[j, k]
        out[:, k] = acc
    return out


def _score_rows(lefts, totals, criterion, cache):
    """Score (rows, k) left-side class counts against fixed node totals."""
    rows = lefts.shape[0]
    scorer = SCORERS[criterion]
    k = len(totals)
    base = sum(totals) + 1
    if k * math.log2(base) >= 62.0:
        out = np.empty(rows)
        for idx in range(rows):
            left = [int(v) for v in lefts[idx]]
            right = [totals[c] - left[c] for c in range(k)]
            out[idx] = scorer(left, right)
        return out
    keys = np.zeros(rows, dtype=np.int64)
    mult = 1
    for c in range(k):
        keys = keys + lefts[:, c] * mult
        mult *= base
    uniq, inverse = np.unique(keys, return_inverse=True)
    uscores = np.empty(uniq.shape[0])
    for j, key in enumerate(uniq.tolist()):
        s = cache.get(key)
        if s is None:
            kk = key
            left = []
            for c in range(k):
                left.append(kk % base)
                kk //= base
            right = [totals[c] - left[c] for c in range(k)]
            s = scorer(left, right)
            cache[key] = s
        uscores[j] = s
    return uscores[inverse]


def _block_winner(scores, criterion):
    """Best score in a block and the first position achieving it."""
    if scores.shape[0] == 0:
        return None
    if criterion is Criterion.GINI:
        bb = scores.min()
    else:
        bb = scores.max()
    if not math.isfinite(bb):
        return None
    return float(bb), int(np.argmax(scores == bb))


def _take(best, criterion, score, gidx, payload):
    if best is None:
        return (score, gidx) + payload
    if is_better(criterion, score, best[0]):
        return (score, gidx) + payload
    if score == best[0] and gidx < best[1]:
        return (score, gidx) + payload
    return best


def best_axis_candidate(x, y, criterion, cache, flips=None, allow_missing=False):
    """Best axis-aligned threshold over all (sample, feature) candidates.

    Candidate (i, f) tests column f against threshold x[i, f]; its rank is
    i * m + f (samples outer, features inner).  A flipped column compares
    with <= instead of >=, matching a sign-canonicalized plane whose
    normal's first non-zero entry was negative.  With allow_missing, a
    candidate whose threshold cell is missing is skipped, and missing
    sample cells fall to the right side.  Returns (score, rank, i, f) or
    (None, None, None, None) when every candidate is skipped.
    """
    n, m = x.shape
    k = int(y.max()) + 1
    class_masks = [y == c for c in range(k)]
    totals = [int(mask.sum()) for mask in class_masks]
    sentinel = worst_score(criterion)
    best = None
    with np.errstate(all="ignore"):
        for f in range(m):
            col = x[:, f]
            if flips is not None and flips[f]:
                comp = col[None, :] <= col[:, None]
            else:
                comp = col[None, :] >= col[:, None]
            lefts = np.empty((n, k), dtype=np.int64)
            for c in range(k):
                lefts[:, c] = comp[:, class_masks[c]].sum(axis=1)
            scores = _score_rows(lefts, totals, criterion, cache)
            if allow_missing:
                missing = np.isnan(col)
                if missing.any():
                    scores = np.where(missing, sentinel, scores)
            win = _block_winner(scores, criterion)
            if win is not None:
                bb, pos = win
                best = _take(best, criterion, bb, pos * m + f, (pos, f))
    if best is None:
        return None, None, None, None
    return best


def _pair_chunks(n, chunk):
    """Yield (i1, i2, base_rank) blocks of lexicographic index pairs."""
    pending1 = []
    pending2 = []
    count = 0
    base = 0
    for i1 in range(n - 1):
        tail = np.arange(i1 + 1, n, dtype=np.int64)
        pending1.append(np.full(tail.shape[0], i1, dtype=np.int64))
        pending2.append(tail)
        count += tail.shape[0]
        if count >= chunk:
            yield np.concatenate(pending1), np.concatenate(pending2), base
            base += count
            pending1 = []
            pending2 = []
            count = 0
    if count:
        yield np.concatenate(pending1), np.concatenate(pending2), base


def _fit_pairs(x1, y1, x2, y2):
    """Two-point hyperplane fit on feature pair (f1, f2), vectorized.

    Follows the scalar fit step for step: column means, centering, the
    2x2 covariance, one Jacobi rotation (skipped below the off-diagonal
    tolerance, exactly as the scalar sweep skips it), eigenvector of the
    smaller eigenvalue with stable tie order, sign canonicalization, and
    the bias accumulation.  Lanes fed NaN produce NaN and are masked by
    the caller.
    """
    with np.errstate(all="ignore"):
        mu0 = (x1 + x2) / 2.0
        mu1 = (y1 + y2) / 2.0
        c00 = x1 - mu0
        c01 = y1 - mu1
        c10 = x2 - mu0
        c11 = y2 - mu1
        a = (c00 * c00 + c10 * c10) / 1.0
        b = (c00 * c01 + c10 * c11) / 1.0
        d = (c01 * c01 + c11 * c11) / 1.0
        rotate = np.sqrt(2.0 * (b * b)) >= JACOBI_OFF_TOL
        theta = (d - a) / (2.0 * b)
        sign = np.where(theta >= 0.0, 1.0, -1.0)
        t = sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
        t = np.where(rotate, t, 0.0)
        c_ = 1.0 / np.sqrt(t * t + 1.0)
        s_ = t * c_
        lam_p = a - t * b
        lam_q = d + t * b
        swap = lam_q < lam_p
        nx = np.where(swap, s_, c_)
        ny = np.where(swap, c_, -s_)
        flip = np.where(nx != 0.0, nx < 0.0, ny < 0.0)
        nx = np.where(flip, -nx, nx)
        ny = np.where(flip, -ny, ny)
        bias = nx * mu0 + ny * mu1
    return nx, ny, bias


def best_split_elc_batch(x, y, r, criterion):
    """Vectorized exhaustive search for r in {1, 2}.

    Returns (plane, score, enumeration_index) or None when every
    selection is skipped for missing cells.
    """
    n, m = x.shape
    if r == 1:
        score, gidx, i, f = best_axis_candidate(
            x, y, criterion, {}, allow_missing=True
        )
        if score is None:
            return None
        plane = fit_hyperplane(x[np.ix_([i], [f])], (f,), m)
        return plane, score, gidx

    k = int(y.max()) + 1
    class_masks = [y == c for c in range(k)]
    totals = [int(mask.sum()) for mask in class_masks]
    nan_mask = np.isnan(x)
    xf = np.where(nan_mask, 0.0, x)
    fpairs = list(itertools.combinations(range(m), 2))
    n_fc = len(fpairs)
    sentinel = worst_score(criterion)
    cache = {}
    best = None
    with np.errstate(all="ignore"):
        for fc_rank, (f1, f2) in enumerate(fpairs):
            xf1 = xf[:, f1]
            xf2 = xf[:, f2]
            nan1 = nan_mask[:, f1]
            nan2 = nan_mask[:, f2]
            for i1s, i2s, base in _pair_chunks(n, CHUNK_PAIRS):
                x1 = x[i1s, f1]
                y1 = x[i1s, f2]
                x2 = x[i2s, f1]
                y2 = x[i2s, f2]
                invalid = np.isnan(x1) | np.isnan(y1) | np.isnan(x2) | np.isnan(y2)
                if invalid.all():
                    continue
                nx, ny, bias = _fit_pairs(x1, y1, x2, y2)
                proj = nx[:, None] * xf1[None, :] + ny[:, None] * xf2[None, :]
                forced_right = ((nx != 0.0)[:, None] & nan1[None, :]) | (
                    (ny != 0.0)[:, None] & nan2[None, :]
                )
                left = (proj >= bias[:, None]) & ~forced_right
                lefts = np.empty((left.shape[0], k), dtype=np.int64)
                for c in range(k):
                    lefts[:, c] = left[:, class_masks[c]].sum(axis=1)
                scores = _score_rows(lefts, totals, criterion, cache)
                if invalid.any():
                    scores = np.where(invalid, sentinel, scores)
                win = _block_winner(scores, criterion)
                if win is not None:
                    bb, pos = win
                    gidx = (base + pos) * n_fc + fc_rank
                    payload = (int(i1s[pos]), int(i2s[pos]), f1, f2)
                    best = _take(best, criterion, bb, gidx, payload)
    if best is None:
        return None
    score, gidx, i1, i2, f1, f2 = best
    plane = fit_hyperplane(x[np.ix_([i1, i2], [f1, f2])], (f1, f2), m)
    return plane, score, gidx

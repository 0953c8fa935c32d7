"""Hot numeric kernels with optional numba acceleration.

The simulation engine calls the smallest-enclosing-circle and point
clustering kernels once per configuration change, which dominates the
runtime of long adversarial runs.  Both kernels exist twice: a numba
``@njit`` build and a pure numpy/python build.  Set ``OBLOT_PURE_NUMPY=1``
to force the fallback path (used by the benchmark and by environments
without a working numba).
"""

import math
import os

import numpy as np

USE_NUMBA = os.environ.get("OBLOT_PURE_NUMPY", "") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:
        USE_NUMBA = False

# Relative slack for in-circle tests; keeps the incremental construction
# stable without hiding genuinely smaller circles.
_REL_SLACK = 1e-12


def _sec_impl(xs, ys):
    # Incremental smallest enclosing circle (Welzl-style, move-to-front
    # free variant).  Deterministic: processes points in input order.
    n = xs.shape[0]
    cx = xs[0]
    cy = ys[0]
    r = 0.0
    for i in range(1, n):
        if _dist(xs[i], ys[i], cx, cy) > r * (1.0 + _REL_SLACK):
            cx, cy, r = _sec_one(xs, ys, i)
    return cx, cy, r


def _sec_one(xs, ys, i):
    # Smallest circle of points[0..i] with points[i] on the boundary.
    cx = xs[i]
    cy = ys[i]
    r = 0.0
    for j in range(i):
        if _dist(xs[j], ys[j], cx, cy) > r * (1.0 + _REL_SLACK):
            if r == 0.0:
                cx, cy, r = _diameter(xs[i], ys[i], xs[j], ys[j])
            else:
                cx, cy, r = _sec_two(xs, ys, i, j)
    return cx, cy, r


def _sec_two(xs, ys, i, j):
    # Smallest circle of points[0..j] with points[i] and points[j] on the
    # boundary.
    cx, cy, r = _diameter(xs[i], ys[i], xs[j], ys[j])
    lcx = lcy = lr = -1.0
    rcx = rcy = rr = -1.0
    px, py = xs[i], ys[i]
    qx, qy = xs[j], ys[j]
    for k in range(j):
        if _dist(xs[k], ys[k], cx, cy) <= r * (1.0 + _REL_SLACK):
            continue
        cross = _cross(px, py, qx, qy, xs[k], ys[k])
        ccx, ccy, cr = _circumcircle(px, py, qx, qy, xs[k], ys[k])
        if cr < 0.0:
            continue
        if cross > 0.0 and (
            lr < 0.0
            or _cross(px, py, qx, qy, ccx, ccy) > _cross(px, py, qx, qy, lcx, lcy)
        ):
            lcx, lcy, lr = ccx, ccy, cr
        elif cross < 0.0 and (
            rr < 0.0
            or _cross(px, py, qx, qy, ccx, ccy) < _cross(px, py, qx, qy, rcx, rcy)
        ):
            rcx, rcy, rr = ccx, ccy, cr
    if lr < 0.0 and rr < 0.0:
        return cx, cy, r
    if lr < 0.0:
        return rcx, rcy, rr
    if rr < 0.0:
        return lcx, lcy, lr
    if lr <= rr:
        return lcx, lcy, lr
    return rcx, rcy, rr


def _diameter(ax, ay, bx, by):
    cx = (ax + bx) / 2.0
    cy = (ay + by) / 2.0
    r = max(_dist(cx, cy, ax, ay), _dist(cx, cy, bx, by))
    return cx, cy, r


def _circumcircle(ax, ay, bx, by, cx, cy):
    # Shift to the bounding-box midpoint for numerical stability.
    ox = (min(ax, bx, cx) + max(ax, bx, cx)) / 2.0
    oy = (min(ay, by, cy) + max(ay, by, cy)) / 2.0
    ax_ = ax - ox
    ay_ = ay - oy
    bx_ = bx - ox
    by_ = by - oy
    cx_ = cx - ox
    cy_ = cy - oy
    d = (ax_ * (by_ - cy_) + bx_ * (cy_ - ay_) + cx_ * (ay_ - by_)) * 2.0
    if d == 0.0:
        return 0.0, 0.0, -1.0
    x = ox + (
        (ax_ * ax_ + ay_ * ay_) * (by_ - cy_)
        + (bx_ * bx_ + by_ * by_) * (cy_ - ay_)
        + (cx_ * cx_ + cy_ * cy_) * (ay_ - by_)
    ) / d
    y = oy + (
        (ax_ * ax_ + ay_ * ay_) * (cx_ - bx_)
        + (bx_ * bx_ + by_ * by_) * (ax_ - cx_)
        + (cx_ * cx_ + cy_ * cy_) * (bx_ - ax_)
    ) / d
    r = max(_dist(x, y, ax, ay), _dist(x, y, bx, by), _dist(x, y, cx, cy))
    return x, y, r


def _dist(ax, ay, bx, by):
    return math.hypot(ax - bx, ay - by)


def _cross(px, py, qx, qy, rx, ry):
    return (qx - px) * (ry - py) - (qy - py) * (rx - px)


def _cluster_impl(xs, ys, eps):
    # Greedy eps-ball clustering in input order.  Returns, per point, the
    # index of the first point of its cluster (so later members snap to
    # the coordinates of the first-created member).
    n = xs.shape[0]
    owner = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        for j in range(i):
            if owner[j] == j and _dist(xs[i], ys[i], xs[j], ys[j]) <= eps:
                owner[i] = j
                break
        if owner[i] < 0:
            owner[i] = i
    return owner


if USE_NUMBA:
    _dist = njit(cache=True)(_dist)
    _cross = njit(cache=True)(_cross)
    _diameter = njit(cache=True)(_diameter)
    _circumcircle = njit(cache=True)(_circumcircle)
    _sec_two = njit(cache=True)(_sec_two)
    _sec_one = njit(cache=True)(_sec_one)
    _sec_kernel = njit(cache=True)(_sec_impl)
    _cluster_kernel = njit(cache=True)(_cluster_impl)
else:
    _sec_kernel = _sec_impl
    _cluster_kernel = _cluster_impl


def smallest_circle_xy(points):
    """Smallest enclosing circle of an (n, 2) float array -> (cx, cy, r)."""
    arr = np.ascontiguousarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] != 2:
        raise ValueError("expected a nonempty (n, 2) array")
    cx, cy, r = _sec_kernel(arr[:, 0].copy(), arr[:, 1].copy())
    return float(cx), float(cy), float(r)


def cluster_owners(points, eps):
    """Cluster an (n, 2) array by eps-balls; returns first-member indices."""
    arr = np.ascontiguousarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected an (n, 2) array")
    if arr.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return _cluster_kernel(arr[:, 0].copy(), arr[:, 1].copy(), float(eps))

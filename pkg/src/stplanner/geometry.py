"""Planar geometry helpers: polylines, oriented rectangles, overlap tests."""

from __future__ import annotations

import math

import numpy as np


def normalize_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    a = math.fmod(angle, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    elif a > math.pi:
        a -= 2.0 * math.pi
    return a


def angle_diff(a: float, b: float) -> float:
    """Signed smallest difference a - b in (-pi, pi]."""
    return normalize_angle(a - b)


def arc_lengths(points: np.ndarray) -> np.ndarray:
    seg = np.diff(points, axis=0)
    return np.concatenate([[0.0], np.cumsum(np.hypot(seg[:, 0], seg[:, 1]))])


def resample_polyline(points, step: float = 0.5):
    """Resample a polyline at (at most) `step` spacing.

    Returns (xy, s) where xy is (N, 2) and s the accumulated arc length.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2 or pts.shape[1] != 2:
        raise ValueError("polyline needs at least two 2-D points")
    s = arc_lengths(pts)
    total = float(s[-1])
    if total <= 0.0:
        raise ValueError("polyline has zero length")
    n = max(2, int(math.ceil(total / step)) + 1)
    s_new = np.linspace(0.0, total, n)
    x = np.interp(s_new, s, pts[:, 0])
    y = np.interp(s_new, s, pts[:, 1])
    return np.column_stack([x, y]), s_new


def headings_of(points: np.ndarray) -> np.ndarray:
    """Tangent headings of a polyline, one per vertex."""
    dx = np.gradient(points[:, 0])
    dy = np.gradient(points[:, 1])
    return np.arctan2(dy, dx)


def curvature_of(s: np.ndarray, headings: np.ndarray) -> np.ndarray:
    """Signed curvature d(heading)/ds by central differences."""
    theta = np.unwrap(headings)
    return np.gradient(theta, s)


def rect_corners(cx: float, cy: float, heading: float, length: float, width: float) -> np.ndarray:
    """Corners (4, 2) of an oriented rectangle centred at (cx, cy)."""
    c, sn = math.cos(heading), math.sin(heading)
    hl, hw = 0.5 * length, 0.5 * width
    local = np.array([[hl, hw], [hl, -hw], [-hl, -hw], [-hl, hw]])
    rot = np.array([[c, -sn], [sn, c]])
    return local @ rot.T + np.array([cx, cy])


def _axes_of(corners: np.ndarray) -> np.ndarray:
    e1 = corners[1] - corners[0]
    e2 = corners[3] - corners[0]
    axes = np.stack([e1, e2])
    norms = np.hypot(axes[:, 0], axes[:, 1])
    return axes / norms[:, None]


def rects_overlap(corners_a: np.ndarray, corners_b: np.ndarray) -> bool:
    """Separating-axis test for two oriented rectangles."""
    for axes in (_axes_of(corners_a), _axes_of(corners_b)):
        pa = corners_a @ axes.T
        pb = corners_b @ axes.T
        if np.any(pa.max(axis=0) < pb.min(axis=0)) or np.any(pb.max(axis=0) < pa.min(axis=0)):
            return False
    return True


def rects_overlap_many(
    centers: np.ndarray,
    headings: np.ndarray,
    length: float,
    width: float,
    other_corners: np.ndarray,
) -> np.ndarray:
    """Overlap mask between N oriented rectangles and one fixed rectangle.

    Rectangle i is centred at centers[i] with heading headings[i]; the fixed
    rectangle is given by its corners (4, 2).
    """
    n = centers.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    other_center = other_corners.mean(axis=0)
    other_radius = np.max(np.hypot(*(other_corners - other_center).T))
    own_radius = 0.5 * math.hypot(length, width)
    d = np.hypot(centers[:, 0] - other_center[0], centers[:, 1] - other_center[1])
    cand = d <= (other_radius + own_radius)
    out = np.zeros(n, dtype=bool)
    if not np.any(cand):
        return out

    idx = np.nonzero(cand)[0]
    ctr = centers[idx]
    hdg = headings[idx]
    cos, sin = np.cos(hdg), np.sin(hdg)
    dirs = np.stack([cos, sin], axis=1)          # (M, 2)
    nrm = np.stack([-sin, cos], axis=1)          # (M, 2)
    hl, hw = 0.5 * length, 0.5 * width
    # corners: (M, 4, 2)
    corners = (
        ctr[:, None, :]
        + np.stack([hl * dirs + hw * nrm, hl * dirs - hw * nrm,
                    -hl * dirs - hw * nrm, -hl * dirs + hw * nrm], axis=1)
    )
    own_axes = np.stack([dirs, nrm], axis=1)     # (M, 2, 2)

    # Projections on the moving rectangles' axes.
    p_self = np.einsum("mkc,mac->mak", corners, own_axes)        # (M, 2, 4)
    p_other = np.einsum("kc,mac->mak", other_corners, own_axes)  # (M, 2, 4)
    sep1 = (p_self.max(axis=2) < p_other.min(axis=2)) | (p_other.max(axis=2) < p_self.min(axis=2))

    # Projections on the fixed rectangle's axes.
    fixed_axes = _axes_of(other_corners)                          # (2, 2)
    q_self = np.einsum("mkc,ac->mak", corners, fixed_axes)        # (M, 2, 4)
    q_other = other_corners @ fixed_axes.T                        # (4, 2)
    q_other_min = q_other.min(axis=0)
    q_other_max = q_other.max(axis=0)
    sep2 = (q_self.max(axis=2) < q_other_min) | (q_other_max < q_self.min(axis=2))

    out[idx] = ~(sep1.any(axis=1) | sep2.any(axis=1))
    return out


def deepest_contact(corners_a: np.ndarray, corners_b: np.ndarray):
    """Approximate deepest contact point of two overlapping rectangles.

    Picks the corner of one rectangle lying furthest inside the other.
    Returns None when no corner is contained (degenerate cross overlap);
    callers fall back to the midpoint of the two centres.
    """
    best = None
    best_depth = -1.0
    for own, other in ((corners_a, corners_b), (corners_b, corners_a)):
        axes = _axes_of(other)
        proj = other @ axes.T
        lo, hi = proj.min(axis=0), proj.max(axis=0)
        for corner in own:
            p = corner @ axes.T
            if np.all(p >= lo) and np.all(p <= hi):
                depth = float(np.min(np.minimum(p - lo, hi - p)))
                if depth > best_depth:
                    best_depth = depth
                    best = corner
    return best


def point_in_rect(point: np.ndarray, corners: np.ndarray) -> bool:
    axes = _axes_of(corners)
    proj = corners @ axes.T
    p = point @ axes.T
    return bool(np.all(p >= proj.min(axis=0)) and np.all(p <= proj.max(axis=0)))

"""Reference-route frame, quintic merge paths, curvature-limited speed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PlannerConfig, PoseState
from .geometry import (
    angle_diff,
    curvature_of,
    headings_of,
    normalize_angle,
    resample_polyline,
)


class ProjectionError(ValueError):
    """Pose too far from the reference route to project."""


class PathGenerationError(ValueError):
    """No merge-path candidate satisfies the curvature cap."""


class Route:
    """A reference route: resampled polyline with arc length and headings."""

    def __init__(self, points, step: float = 0.5):
        self.xy, self.s = resample_polyline(points, step)
        self.headings = headings_of(self.xy)
        self._theta = np.unwrap(self.headings)
        self.curvature = curvature_of(self.s, self.headings)

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def point_at(self, s: float) -> np.ndarray:
        """Position at arc length s; extrapolates linearly beyond the ends."""
        if s < 0.0:
            d = self.xy[1] - self.xy[0]
            d = d / np.hypot(*d)
            return self.xy[0] + s * d
        if s > self.length:
            d = self.xy[-1] - self.xy[-2]
            d = d / np.hypot(*d)
            return self.xy[-1] + (s - self.length) * d
        return np.array([np.interp(s, self.s, self.xy[:, 0]),
                         np.interp(s, self.s, self.xy[:, 1])])

    def heading_at(self, s: float) -> float:
        s = min(max(s, 0.0), self.length)
        return normalize_angle(float(np.interp(s, self.s, self._theta)))

    def pose_at(self, s: float) -> PoseState:
        p = self.point_at(s)
        return PoseState(x=float(p[0]), y=float(p[1]), heading=self.heading_at(s))

    def left_normal_at(self, s: float) -> np.ndarray:
        h = self.heading_at(s)
        return np.array([-math.sin(h), math.cos(h)])

    def project(self, x: float, y: float) -> tuple[float, float]:
        """Nearest-point projection; returns (s, signed d), d positive to the left.

        s may run negative before the start / beyond the end (tangential
        extension of the terminal segments).
        """
        return project_polyline(self.xy, self.s, x, y)


def project_polyline(xy: np.ndarray, s_arr: np.ndarray, x: float, y: float) -> tuple[float, float]:
    """Signed projection of a point onto a polyline with known arc lengths."""
    q = np.array([x, y])
    p0 = xy[:-1]
    d = xy[1:] - p0
    seg_len2 = np.einsum("ij,ij->i", d, d)
    t = np.clip(np.einsum("ij,ij->i", q - p0, d) / np.maximum(seg_len2, 1e-12), 0.0, 1.0)
    foot = p0 + t[:, None] * d
    dist2 = np.einsum("ij,ij->i", q - foot, q - foot)
    i = int(np.argmin(dist2))
    seg_len = math.sqrt(seg_len2[i])
    tangent = d[i] / max(seg_len, 1e-12)
    along = float(np.dot(q - p0[i], tangent))
    if i == 0 and along < 0.0:
        s_r = along
    elif i == len(d) - 1 and along > seg_len:
        s_r = float(s_arr[i]) + along
    else:
        s_r = float(s_arr[i]) + min(max(along, 0.0), seg_len)
    lateral = float(tangent[0] * (q[1] - p0[i][1]) - tangent[1] * (q[0] - p0[i][0]))
    return s_r, lateral


@dataclass(frozen=True)
class FrenetState:
    """Lateral state relative to the reference route at arc length s_r."""

    s_r: float
    d: float
    d_p: float    # dd/ds_r
    d_pp: float   # d2d/ds_r2


def project_to_frenet(route: Route, pose: PoseState, max_lateral: float = 20.0) -> FrenetState:
    s_r, d = route.project(pose.x, pose.y)
    if abs(d) > max_lateral:
        raise ProjectionError(f"pose is {abs(d):.1f} m off the route (limit {max_lateral} m)")
    rel = angle_diff(pose.heading, route.heading_at(s_r))
    return FrenetState(s_r=s_r, d=d, d_p=math.tan(rel), d_pp=0.0)


def quintic_coefficients(d0, df, s_f: float) -> np.ndarray:
    """Quintic lateral profile coefficients from boundary states at 0 and s_f."""
    if s_f <= 0.0:
        raise ValueError("s_f must be > 0")
    d0_v, d0_p, d0_pp = (float(v) for v in d0)
    df_v, df_p, df_pp = (float(v) for v in df)
    c0, c1, c2 = d0_v, d0_p, 0.5 * d0_pp
    a = np.array([
        [s_f ** 3, s_f ** 4, s_f ** 5],
        [3 * s_f ** 2, 4 * s_f ** 3, 5 * s_f ** 4],
        [6 * s_f, 12 * s_f ** 2, 20 * s_f ** 3],
    ])
    b = np.array([
        (df_v - d0_v) - d0_p * s_f - 0.5 * d0_pp * s_f ** 2,
        df_p - d0_p - d0_pp * s_f,
        df_pp - d0_pp,
    ])
    c3, c4, c5 = np.linalg.solve(a, b)
    return np.array([c0, c1, c2, c3, c4, c5])


def quintic_eval(coeffs: np.ndarray, s, order: int = 0):
    """Evaluate the quintic or one of its first two derivatives."""
    c = np.asarray(coeffs, dtype=float)
    p = np.polynomial.Polynomial(c)
    for _ in range(order):
        p = p.deriv()
    return p(s)


class PlannedPath:
    """The AV's path: merge section blended into the route, sampled at a fixed step.

    Arrays are indexed by arc length along the composed path (attribute s);
    route_s0 is the route arc length at the path origin.
    """

    def __init__(self, xy: np.ndarray, route_s0: float, s_f: float,
                 coefficients: np.ndarray, step: float):
        self.xy, self.s = resample_polyline(xy, step)
        self.headings = headings_of(self.xy)
        self._theta = np.unwrap(self.headings)
        self.curvature = curvature_of(self.s, self.headings)
        self.route_s0 = route_s0
        self.s_f = s_f
        self.coefficients = coefficients
        self.step = float(self.s[1] - self.s[0])

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def index_at(self, s: float) -> int:
        return int(min(max(round(s / self.step), 0), len(self.s) - 1))

    def point_at(self, s: float) -> np.ndarray:
        return np.array([np.interp(s, self.s, self.xy[:, 0]),
                         np.interp(s, self.s, self.xy[:, 1])])

    def heading_at(self, s: float) -> float:
        return normalize_angle(float(np.interp(s, self.s, self._theta)))

    def pose_at(self, s: float) -> PoseState:
        p = self.point_at(s)
        return PoseState(x=float(p[0]), y=float(p[1]), heading=self.heading_at(s))

    def curvature_at(self, s: float) -> float:
        return float(np.interp(s, self.s, self.curvature))

    def project(self, x: float, y: float) -> tuple[float, float]:
        return project_polyline(self.xy, self.s, x, y)

    def max_abs_curvature(self) -> float:
        return float(np.max(np.abs(self.curvature)))


def compose_path(route: Route, fr: FrenetState, s_f: float, cfg: PlannerConfig,
                 total_length: float | None = None) -> PlannedPath:
    """Build the composed path: quintic merge over [0, s_f], then the route."""
    coeffs = quintic_coefficients((fr.d, fr.d_p, fr.d_pp), (0.0, 0.0, 0.0), s_f)
    if total_length is None:
        total_length = cfg.c_s + 2.0 * cfg.ds_max
    s_r0 = max(fr.s_r, 0.0)
    end = min(route.length, s_r0 + max(total_length, s_f + 1.0))
    n = max(3, int(math.ceil((end - s_r0) / cfg.path_step)) + 1)
    s_rel = np.linspace(0.0, end - s_r0, n)
    lateral = np.where(s_rel < s_f, quintic_eval(coeffs, np.minimum(s_rel, s_f)), 0.0)
    s_abs = s_r0 + s_rel
    base_x = np.interp(s_abs, route.s, route.xy[:, 0])
    base_y = np.interp(s_abs, route.s, route.xy[:, 1])
    theta = np.interp(s_abs, route.s, route._theta)
    pts = np.column_stack([base_x - lateral * np.sin(theta),
                           base_y + lateral * np.cos(theta)])
    return PlannedPath(pts, route_s0=s_r0, s_f=s_f, coefficients=coeffs, step=cfg.path_step)


def generate_merge_path(route: Route, fr: FrenetState, candidates, cfg: PlannerConfig,
                        total_length: float | None = None) -> PlannedPath:
    """Pick the merge path balancing merging distance against peak curvature."""
    if not candidates:
        raise ValueError("candidate list must be non-empty")
    best = None
    best_score = math.inf
    for s_f in candidates:
        if s_f <= 0.0:
            raise ValueError("s_f candidates must be > 0")
        path = compose_path(route, fr, s_f, cfg, total_length)
        kappa = path.max_abs_curvature()
        if kappa > cfg.curvature_cap:
            continue
        score = cfg.merge_w_len * s_f + cfg.merge_w_smooth * kappa
        if score < best_score:
            best = path
            best_score = score
    if best is None:
        raise PathGenerationError(
            f"all merge candidates exceed the curvature cap {cfg.curvature_cap} 1/m")
    return best


def curvature_speed_limit(path: PlannedPath, s: float, cfg: PlannerConfig) -> float:
    """Curvature-limited speed at s, capped at the configured speed limit."""
    kappa = abs(path.curvature_at(s))
    if kappa < 1e-6:
        return cfg.v_limit
    return min(cfg.v_limit, math.sqrt(cfg.a_lat_max / kappa))


def curvature_speed_profile(path: PlannedPath, cfg: PlannerConfig, v_bar: float) -> np.ndarray:
    """Per-sample curvature speed bound over the whole path (capped at v_bar)."""
    kappa = np.abs(path.curvature)
    with np.errstate(divide="ignore"):
        v = np.sqrt(cfg.a_lat_max / np.maximum(kappa, 1e-12))
    v[kappa < 1e-6] = v_bar
    return np.minimum(v, v_bar)

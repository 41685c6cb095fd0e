"""Polyline and oriented-rectangle geometry tests.

Overlap oracles are hand-constructed axis-aligned and rotated cases; the
vectorized many-vs-one test is cross-checked against the pairwise SAT test
on randomized inputs.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stplanner.geometry import (
    angle_diff,
    arc_lengths,
    deepest_contact,
    headings_of,
    normalize_angle,
    point_in_rect,
    rect_corners,
    rects_overlap,
    rects_overlap_many,
    resample_polyline,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


class TestAngles:
    @given(finite)
    def test_normalize_range_and_congruence(self, a):
        out = normalize_angle(a)
        assert -math.pi < out <= math.pi + 1e-12
        # congruent modulo 2 pi
        assert math.isclose(math.sin(out), math.sin(a), abs_tol=1e-6)
        assert math.isclose(math.cos(out), math.cos(a), abs_tol=1e-6)

    def test_angle_diff_signed(self):
        assert angle_diff(0.1, -0.1) == pytest.approx(0.2)
        assert angle_diff(-3.0, 3.0) == pytest.approx(2 * math.pi - 6.0)


class TestPolyline:
    def test_arc_lengths_simple(self):
        pts = np.array([[0.0, 0.0], [3.0, 4.0], [3.0, 10.0]])
        np.testing.assert_allclose(arc_lengths(pts), [0.0, 5.0, 11.0])

    def test_resample_preserves_ends_and_spacing(self):
        xy, s = resample_polyline([(0.0, 0.0), (10.0, 0.0), (10.0, 5.0)], step=0.5)
        np.testing.assert_allclose(xy[0], [0.0, 0.0])
        np.testing.assert_allclose(xy[-1], [10.0, 5.0])
        assert s[0] == 0.0 and s[-1] == pytest.approx(15.0)
        assert np.all(np.diff(s) <= 0.5 + 1e-12)

    def test_resample_rejects_degenerate(self):
        with pytest.raises(ValueError):
            resample_polyline([(1.0, 1.0)])
        with pytest.raises(ValueError):
            resample_polyline([(1.0, 1.0), (1.0, 1.0)])

    def test_headings_straight_line(self):
        xy, _ = resample_polyline([(0.0, 0.0), (0.0, 8.0)], step=1.0)
        np.testing.assert_allclose(headings_of(xy), math.pi / 2)


class TestRectangles:
    def test_corners_axis_aligned(self):
        c = rect_corners(1.0, 2.0, 0.0, 4.0, 2.0)
        expected = {(3.0, 3.0), (3.0, 1.0), (-1.0, 1.0), (-1.0, 3.0)}
        assert {(round(x, 9), round(y, 9)) for x, y in c} == expected

    def test_corners_rotated_quarter_turn(self):
        c = rect_corners(0.0, 0.0, math.pi / 2, 4.0, 2.0)
        # length now spans y, width spans x
        assert np.max(c[:, 1]) == pytest.approx(2.0)
        assert np.max(c[:, 0]) == pytest.approx(1.0)

    def test_overlap_oracle_cases(self):
        a = rect_corners(0.0, 0.0, 0.0, 4.0, 2.0)
        assert rects_overlap(a, rect_corners(3.0, 0.0, 0.0, 4.0, 2.0))       # overlapping
        assert not rects_overlap(a, rect_corners(10.0, 0.0, 0.0, 4.0, 2.0))  # disjoint
        # unit diamond: half-diagonal sqrt(2), so its lowest vertex sits at
        # center_y - sqrt(2); the box top edge is y = 1
        diamond_clear = rect_corners(0.0, 1.0 + math.sqrt(2.0) + 0.1, math.pi / 4, 2.0, 2.0)
        assert not rects_overlap(a, diamond_clear)
        diamond_hit = rect_corners(0.0, 1.0 + math.sqrt(2.0) - 0.1, math.pi / 4, 2.0, 2.0)
        assert rects_overlap(a, diamond_hit)

    def test_touching_edges_count_as_overlap(self):
        a = rect_corners(0.0, 0.0, 0.0, 4.0, 2.0)
        b = rect_corners(4.0, 0.0, 0.0, 4.0, 2.0)
        assert rects_overlap(a, b)

    @given(st.integers(0, 10 ** 9))
    @settings(max_examples=150, deadline=None)
    def test_many_matches_pairwise(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(0, 12))
        centers = rng.uniform(-8.0, 8.0, size=(n, 2))
        headings = rng.uniform(-math.pi, math.pi, size=n)
        length, width = float(rng.uniform(0.5, 6.0)), float(rng.uniform(0.5, 3.0))
        other = rect_corners(float(rng.uniform(-4, 4)), float(rng.uniform(-4, 4)),
                             float(rng.uniform(-math.pi, math.pi)),
                             float(rng.uniform(0.5, 6.0)), float(rng.uniform(0.5, 3.0)))
        mask = rects_overlap_many(centers, headings, length, width, other)
        expected = np.array([
            rects_overlap(rect_corners(cx, cy, h, length, width), other)
            for (cx, cy), h in zip(centers, headings)
        ], dtype=bool)
        np.testing.assert_array_equal(mask, expected)

    def test_point_in_rect(self):
        r = rect_corners(2.0, 1.0, 0.3, 4.0, 2.0)
        assert point_in_rect(np.array([2.0, 1.0]), r)
        assert not point_in_rect(np.array([8.0, 1.0]), r)

    def test_deepest_contact_inside_corner(self):
        a = rect_corners(0.0, 0.0, 0.0, 4.0, 2.0)
        b = rect_corners(2.5, 0.0, 0.0, 4.0, 2.0)
        contact = deepest_contact(a, b)
        assert contact is not None
        # the reported contact lies inside both rectangles
        assert point_in_rect(contact, a) and point_in_rect(contact, b)

    def test_deepest_contact_cross_degenerate(self):
        # long thin cross: no corner of either rectangle inside the other
        a = rect_corners(0.0, 0.0, 0.0, 10.0, 1.0)
        b = rect_corners(0.0, 0.0, math.pi / 2, 10.0, 1.0)
        assert deepest_contact(a, b) is None

"""Arc and rectangle measure machinery."""

import pytest

from fuchsian.arcs import (DirectedArc, Rect, arc_overlap_length,
                           clip_to_u_band, max_pairwise_overlap,
                           region_intersection_measure, region_measure,
                           symmetric_difference_measure)
from fuchsian.mobius import TAU, BoundaryPoint


def arc(start, sweep):
    return DirectedArc.from_angles(start, sweep)


def rect(us, usw, ws, wsw):
    return Rect(arc(us, usw), arc(ws, wsw), 0, 0)


class TestDirectedArc:
    def test_ccw_basic(self):
        a = DirectedArc.ccw(BoundaryPoint.from_angle(1.0),
                            BoundaryPoint.from_angle(2.5))
        assert abs(a.sweep - 1.5) < 1e-15
        assert a.contains(2.0) and not a.contains(0.5)

    def test_cw_is_swapped_ccw(self):
        p, q = BoundaryPoint.from_angle(1.0), BoundaryPoint.from_angle(2.5)
        assert DirectedArc.cw(p, q).sweep == DirectedArc.ccw(q, p).sweep
        assert DirectedArc.cw(p, q).start is q

    def test_wrap_membership(self):
        a = arc(6.0, 1.0)  # crosses the seam
        assert a.contains(6.2) and a.contains(0.5) and not a.contains(3.0)

    def test_full_circle(self):
        a = DirectedArc.ccw(BoundaryPoint.from_angle(1.0),
                            BoundaryPoint.from_angle(1.0), full_if_equal=True)
        assert a.is_full_circle and a.contains(4.0)

    def test_zero_sweep_rejected(self):
        with pytest.raises(ValueError):
            arc(1.0, 0.0)

    def test_intervals_split_at_seam(self):
        ints = arc(6.0, 1.0).intervals()
        assert len(ints) == 2
        assert abs(ints[0][1] - TAU) < 1e-15 and ints[1][0] == 0.0

    def test_interior_angles_ordered(self):
        a = arc(5.5, 2.0)
        inner = a.interior_angles([0.2, 6.0, 5.6, 1.4, 1.2])
        assert inner == [5.6, 6.0, 0.2, 1.2]

    def test_overlap_length(self):
        assert abs(arc_overlap_length(arc(0.0, 2.0), arc(1.0, 2.0)) - 1.0) < 1e-12
        assert arc_overlap_length(arc(0.0, 1.0), arc(2.0, 1.0)) == 0.0
        # wrap against plain
        assert abs(arc_overlap_length(arc(6.0, 1.0), arc(0.0, 1.0))
                   - (1.0 - (TAU - 6.0))) < 1e-12


class TestMeasure:
    def test_disjoint_union(self):
        rs = [rect(0, 1, 0, 1), rect(2, 1, 2, 1)]
        assert abs(region_measure(rs) - 2.0) < 1e-12
        assert max_pairwise_overlap(rs) == 0.0

    def test_overlap_counted_once(self):
        rs = [rect(0, 2, 0, 2), rect(1, 2, 1, 2)]
        assert abs(region_measure(rs) - 7.0) < 1e-12
        assert abs(max_pairwise_overlap(rs) - 1.0) < 1e-12

    def test_symmetric_difference(self):
        a = [rect(0, 2, 0, 2)]
        b = [rect(1, 2, 0, 2)]
        assert abs(symmetric_difference_measure(a, b) - 4.0) < 1e-12
        assert symmetric_difference_measure(a, a) == 0.0

    def test_seam_crossing_measure(self):
        r = rect(6.0, 1.0, 6.1, 0.5)
        assert abs(region_measure([r]) - 0.5) < 1e-12

    def test_intersection_measure(self):
        a = [rect(0, 2, 0, 2)]
        b = [rect(1, 4, 1, 4)]
        assert abs(region_intersection_measure(a, b) - 1.0) < 1e-12

    def test_clip_to_band(self):
        r = rect(0, 3, 0, 1)
        pieces = clip_to_u_band([r], arc(1.0, 1.0))
        assert len(pieces) == 1
        assert abs(pieces[0].u_arc.sweep - 1.0) < 1e-12
        assert pieces[0].w_arc is r.w_arc

    def test_clip_band_wraps(self):
        r = rect(0.0, TAU, 0, 1)
        pieces = clip_to_u_band([r], arc(6.0, 1.0))
        total = sum(p.u_arc.sweep for p in pieces)
        assert abs(total - 1.0) < 1e-12

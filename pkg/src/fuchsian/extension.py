"""Two-dimensional natural extension and its rectangular attractor.

States are pairs (u, w) of distinct boundary points; one step applies the
gluing of the cell containing w to both coordinates.  The attractor is a
finite union of closed arc-rectangles, one horizontal strip per building
block, each strip the diagonal-rotation image of a standard-position strip.
Membership on rectangle edges counts as inside; all tiling statements hold
up to angular measure zero.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import tolerances
from .arcs import (DirectedArc, Rect, clip_to_u_band, max_pairwise_overlap,
                   region_intersection_measure, region_measure,
                   symmetric_difference_measure)
from .boundary import CycleData, Partition, cycle
from .errors import DiagonalPoint, NotElliptic, PartitionOutOfGuaranteeRange
from .mobius import TAU, BoundaryPoint, angular_distance
from .polygon import INFINITY, SQUARE, Block, MarkedPolygon


def F_apply(poly: MarkedPolygon, part: Partition, u: BoundaryPoint,
            w: BoundaryPoint) -> tuple[int, BoundaryPoint, BoundaryPoint]:
    """One step of the planar extension; the cell of w picks the gluing."""
    if angular_distance(u.theta, w.theta) <= 1e-12:
        raise DiagonalPoint("u and w coincide")
    k = part.cell_of(w.theta)
    g = poly.generators[k]
    return k, g.apply_boundary(u), g.apply_boundary(w)


@dataclass(frozen=True)
class StripInfo:
    block: int
    symbol: object
    count: int
    degenerate: bool
    cycle: CycleData | None = None


@dataclass(frozen=True)
class AttractorDomain:
    """Finite rectangle union on which the extension is bijective."""

    poly: MarkedPolygon
    part: Partition
    rects: tuple[Rect, ...]
    strips: tuple[tuple[Rect, ...], ...]   # per block
    info: tuple[StripInfo, ...]
    guarantee: bool                        # all elliptic cuts inside [P, Q]

    @property
    def measure(self) -> float:
        return sum(r.area for r in self.rects)

    def contains(self, theta_u: float, theta_w: float,
                 tol: float | None = None) -> bool:
        t = tol if tol is not None else tolerances.active().structural
        return any(r.contains(theta_u, theta_w, t) for r in self.rects)

    def membership_arrays(self):
        us = np.array([r.u_arc.start.theta for r in self.rects])
        usw = np.array([r.u_arc.sweep for r in self.rects])
        ws = np.array([r.w_arc.start.theta for r in self.rects])
        wsw = np.array([r.w_arc.sweep for r in self.rects])
        return us, usw, ws, wsw

    def to_dict(self) -> dict:
        rects = [{"u": [r.u_arc.start.theta, r.u_arc.sweep],
                  "w": [r.w_arc.start.theta, r.w_arc.sweep],
                  "block": r.block, "gamma": r.gamma_index}
                 for r in self.rects]
        return {"signature": str(self.poly.signature),
                "partition": {"mode": self.part.mode,
                              "points": list(self.part.thetas)},
                "guarantee_range": self.guarantee,
                "strip_counts": [i.count for i in self.info],
                "rects": rects,
                "measure": self.measure}


def _square_strip(poly: MarkedPolygon, blk: Block) -> list[Rect]:
    h = TAU / (4 * poly.ell)
    base = blk.base_angle
    out = []
    for k in range(4):
        w = DirectedArc.from_angles(base + k * h, h)
        u = DirectedArc.from_angles(base + (k + 1) * h, TAU - h)
        out.append(Rect(u, w, blk.index, blk.side_start + k))
    return out


def _infinity_strip(poly: MarkedPolygon, blk: Block) -> list[Rect]:
    h = TAU / (2 * poly.ell)
    base = blk.base_angle
    return [Rect(DirectedArc.from_angles(base + h, TAU - h),
                 DirectedArc.from_angles(base, h), blk.index, blk.side_start),
            Rect(DirectedArc.from_angles(base + 2 * h, TAU - h),
                 DirectedArc.from_angles(base + h, h), blk.index,
                 blk.side_start + 1)]


def _order_two_strip(poly: MarkedPolygon, blk: Block) -> list[Rect]:
    h = TAU / poly.ell
    base = blk.base_angle
    # single rectangle; the gluing is an involution, so the whole block arc
    # maps by one transformation even though it spans two cells
    return [Rect(DirectedArc.from_angles(base + h, TAU - h),
                 DirectedArc.from_angles(base, h), blk.index, blk.side_start)]


def _elliptic_strip(poly: MarkedPolygon, part: Partition,
                    blk: Block) -> tuple[list[Rect], CycleData]:
    """Lower/upper rectangle fan of an order >= 3 block.

    The w-arcs cut the block at the rotation orbit of the block's cut point;
    the u-arcs are bounded by the matching orbit of the block corners.  With
    a degenerate cycle (cut point on a corner orbit) the fan has one fewer
    rectangle and still tiles the block arc exactly.
    """
    k = blk.vertex_start + 1
    data = cycle(poly, part, k)
    J, I = data.J, data.I
    c = poly.generators[blk.side_start]
    c_inv = poly.generators[blk.side_start + 1]
    a = part.points[k]
    start = poly.vertices[blk.vertex_start].point
    end_theta = blk.base_angle + TAU / poly.ell
    end = BoundaryPoint.from_angle(end_theta)

    low_w = [a] + list(data.lower_points[:J])          # c^j(a), j = 0..J
    up_w = [a] + list(data.upper_points[:I])           # c^{-i}(a), i = 0..I
    low_u = [end]
    for _ in range(J):
        low_u.append(c.apply_boundary(low_u[-1]))      # c^j(end), j = 0..J
    up_u = [start]
    for _ in range(I):
        up_u.append(c_inv.apply_boundary(up_u[-1]))    # c^{-i}(start)

    rects = []
    for j in range(1, J + 1):
        u = DirectedArc.ccw(low_u[j - 1], start, full_if_equal=True)
        w = DirectedArc.ccw(low_w[j], low_w[j - 1])
        rects.append(Rect(u, w, blk.index, blk.side_start))
    u = DirectedArc.ccw(low_u[J], start, full_if_equal=True)
    w = DirectedArc.ccw(start, low_w[J])
    rects.append(Rect(u, w, blk.index, blk.side_start))
    for i in range(1, I + 1):
        u = DirectedArc.ccw(end, up_u[i - 1], full_if_equal=True)
        w = DirectedArc.ccw(up_w[i - 1], up_w[i])
        rects.append(Rect(u, w, blk.index, blk.side_start + 1))
    u = DirectedArc.ccw(end, up_u[I], full_if_equal=True)
    w = DirectedArc.ccw(up_w[I], end)
    rects.append(Rect(u, w, blk.index, blk.side_start + 1))
    return rects, data


def build_attractor(poly: MarkedPolygon, part: Partition,
                    require_guarantee: bool = False) -> AttractorDomain:
    """Assemble the rectangle union, one horizontal strip per block.

    Strip sizes: 4 for a quadruple block, 1 for order 2, 2 for a cusp
    block, and I + J + 2 for order m >= 3 (equal to m generically, m - 1
    when the block's cycle is degenerate).
    """
    guarantee = part.in_guarantee_range()
    if not guarantee:
        msg = ("some elliptic partition point lies outside its [P, Q] arc; "
               "attraction is not guaranteed")
        if require_guarantee:
            raise ValueError(msg)
        warnings.warn(msg, PartitionOutOfGuaranteeRange, stacklevel=2)

    strips: list[tuple[Rect, ...]] = []
    info: list[StripInfo] = []
    for blk in poly.blocks:
        if blk.symbol == SQUARE:
            rects, data = _square_strip(poly, blk), None
        elif blk.symbol == INFINITY:
            rects, data = _infinity_strip(poly, blk), None
        elif blk.symbol == 2:
            rects, data = _order_two_strip(poly, blk), None
        else:
            rects, data = _elliptic_strip(poly, part, blk)
        strips.append(tuple(rects))
        info.append(StripInfo(blk.index, blk.symbol, len(rects),
                              bool(data and data.degenerate), data))
    rects = tuple(r for strip in strips for r in strip)
    return AttractorDomain(poly, part, rects, tuple(strips), tuple(info),
                           guarantee)


# -- imaging and bijectivity ---------------------------------------------------


def _arc_image(g, arc: DirectedArc) -> DirectedArc:
    if arc.is_full_circle:
        return DirectedArc.from_angles(g.apply_angle(arc.start.theta), TAU)
    return DirectedArc.ccw(g.apply_boundary(arc.start),
                           g.apply_boundary(arc.end))


def rect_image(poly: MarkedPolygon, part: Partition, rect: Rect) -> list[Rect]:
    """Forward image of a closed rectangle, split at interior cut points so
    that each piece is carried by a single transformation."""
    cuts = sorted(set(part.thetas))
    inner = rect.w_arc.interior_angles(cuts, tol=1e-11)
    bounds = [rect.w_arc.start.theta] + inner + [rect.w_arc.end.theta]
    out = []
    for lo, hi in zip(bounds, bounds[1:]):
        sweep = (hi - lo) % TAU
        if not inner:
            sweep = rect.w_arc.sweep
        elif sweep < 1e-13:
            continue
        piece = DirectedArc.from_angles(lo, sweep)
        k = part.cell_of(piece.midpoint_angle())
        g = poly.generators[k]
        out.append(Rect(_arc_image(g, rect.u_arc), _arc_image(g, piece),
                        rect.block, k))
    return out


@dataclass
class BijectivityReport:
    signature: str
    mode: str
    guarantee: bool
    image_overlap: float
    symmetric_difference: float
    strip_residuals: list[float]

    @property
    def passed(self) -> bool:
        tols = tolerances.active()
        return (self.image_overlap < tols.overlap
                and self.symmetric_difference < tols.residual
                and all(r < tols.residual for r in self.strip_residuals))

    def to_dict(self) -> dict:
        return {"signature": self.signature, "mode": self.mode,
                "guarantee_range": self.guarantee,
                "image_overlap": self.image_overlap,
                "symmetric_difference": self.symmetric_difference,
                "strip_residuals": self.strip_residuals,
                "passed": self.passed}


def verify_bijectivity(poly: MarkedPolygon, part: Partition,
                       dom: AttractorDomain) -> BijectivityReport:
    """Check that the extension permutes the rectangle union.

    Verifies (i) forward images are pairwise interior-disjoint, (ii) their
    union reproduces the domain up to measure zero, and (iii) each block's
    horizontal strip maps exactly onto the domain's vertical band over that
    block's sector.
    """
    images_by_block: list[list[Rect]] = []
    all_images: list[Rect] = []
    for strip in dom.strips:
        imgs: list[Rect] = []
        for r in strip:
            imgs.extend(rect_image(poly, part, r))
        images_by_block.append(imgs)
        all_images.extend(imgs)

    overlap = max_pairwise_overlap(all_images)
    sym = symmetric_difference_measure(all_images, list(dom.rects))

    sector = TAU / poly.ell
    strip_res = []
    for blk, imgs in zip(poly.blocks, images_by_block):
        band = DirectedArc.from_angles(blk.base_angle, sector)
        target = clip_to_u_band(list(dom.rects), band)
        strip_res.append(symmetric_difference_measure(imgs, target))

    return BijectivityReport(str(poly.signature), part.mode, dom.guarantee,
                             overlap, sym, strip_res)


# -- escape set and exceptional rectangles ------------------------------------


def phi_set(poly: MarkedPolygon, part: Partition) -> list[Rect]:
    """Diagonal-neighbourhood rectangles that every orbit must leave.

    One rectangle per cell: the cell itself squared when both bounding
    vertices are ideal, widened to the side extension (Q forward, P
    backward) next to an interior vertex.
    """
    n = poly.n_sides
    out = []
    for i in range(n):
        lo, sweep = part.cell_arc(i)
        if sweep <= 1e-12:
            continue
        w = DirectedArc.from_angles(lo, sweep)
        v_lo, v_hi = poly.vertices[i], poly.vertices[(i + 1) % n]
        if not v_hi.is_ideal:
            u = DirectedArc.ccw(v_lo.point, poly.aux[(i + 1) % n].Q)
        elif not v_lo.is_ideal:
            u = DirectedArc.ccw(poly.aux[i].P, v_hi.point)
        else:
            u = DirectedArc.ccw(v_lo.point, v_hi.point)
        out.append(Rect(u, w, poly.block_of_side(i).index, i))
    return out


def exceptional_set(poly: MarkedPolygon, part: Partition, k: int) -> list[Rect]:
    """Rectangles between the attractor and the escape set at an interior
    vertex of order >= 3 (empty for order 2)."""
    v = poly.vertices[k % poly.n_sides]
    if v.is_ideal:
        raise NotElliptic(f"vertex {k} is ideal")
    if v.order == 2:
        return []
    blk = poly.block_of_vertex(k % poly.n_sides)
    data = cycle(poly, part, k)
    J, I = data.J, data.I
    c = poly.generators[blk.side_start]
    c_inv = poly.generators[blk.side_start + 1]
    a = part.points[k % poly.n_sides]
    aux = poly.aux[k % poly.n_sides]
    start = poly.vertices[blk.vertex_start].point
    end = BoundaryPoint.from_angle(blk.base_angle + TAU / poly.ell)

    low_w = [a] + list(data.lower_points[:J])
    up_w = [a] + list(data.upper_points[:I])
    low_u = [end]
    for _ in range(J):
        low_u.append(c.apply_boundary(low_u[-1]))
    up_u = [start]
    for _ in range(I):
        up_u.append(c_inv.apply_boundary(up_u[-1]))

    from .arcs import ccw_sweep
    out = []

    def hat(p1, p2, w1, w2, side, inside):
        # a hat exists only while the corner-orbit point stays between the
        # side extension and its block corner; it shrinks to nothing when
        # the orbit point reaches (order 4, arc midpoint) or passes (last
        # fan step of an edge partition) the extension point
        if not inside:
            return
        if ccw_sweep(p1.theta, p2.theta) < 1e-12:
            return
        if ccw_sweep(w1.theta, w2.theta) < 1e-12:
            return
        out.append(Rect(DirectedArc.ccw(p1, p2), DirectedArc.ccw(w1, w2),
                        blk.index, side))

    q_to_end = ccw_sweep(aux.Q.theta, end.theta, full_if_equal=True)
    start_to_p = ccw_sweep(start.theta, aux.P.theta, full_if_equal=True)
    for j in range(1, J + 1):
        ok = ccw_sweep(aux.Q.theta, low_u[j - 1].theta) <= q_to_end + 1e-12
        hat(aux.Q, low_u[j - 1], low_w[j], low_w[j - 1], blk.side_start, ok)
    ok = ccw_sweep(aux.Q.theta, low_u[J].theta) <= q_to_end + 1e-12
    hat(aux.Q, low_u[J], start, low_w[J], blk.side_start, ok)
    for i in range(1, I + 1):
        ok = ccw_sweep(start.theta, up_u[i - 1].theta) <= start_to_p + 1e-12
        hat(up_u[i - 1], aux.P, up_w[i - 1], up_w[i], blk.side_start + 1, ok)
    ok = ccw_sweep(start.theta, up_u[I].theta) <= start_to_p + 1e-12
    hat(up_u[I], aux.P, up_w[I], end, blk.side_start + 1, ok)
    return out


@dataclass
class ExceptionalReport:
    containment_residual: float
    escaped_measure: float       # measure still outside the attractor
    steps_used: int

    @property
    def passed(self) -> bool:
        tol = tolerances.active().residual
        return self.containment_residual < tol and self.escaped_measure < tol


def verify_exceptional(poly: MarkedPolygon, part: Partition, k: int,
                       dom: AttractorDomain) -> ExceptionalReport:
    """Track the exceptional rectangles into the attractor.

    Checks the nesting of successive lower rectangles inside the forward
    images of the first one, and that every piece of both fans lands inside
    the attractor within the cycle length plus two steps.
    """
    hats = exceptional_set(poly, part, k)
    if not hats:
        return ExceptionalReport(0.0, 0.0, 0)
    data = cycle(poly, part, k)
    J, I = data.J, data.I
    blk = poly.block_of_vertex(k % poly.n_sides)
    lower = [r for r in hats if r.gamma_index == blk.side_start]
    upper = [r for r in hats if r.gamma_index == blk.side_start + 1]
    domain = list(dom.rects)

    worst = 0.0
    if lower:
        region = [lower[0]]
        for j in range(1, len(lower)):
            nxt: list[Rect] = []
            for r in region:
                nxt.extend(rect_image(poly, part, r))
            region = nxt
            miss = lower[j].area - region_intersection_measure([lower[j]], region)
            worst = max(worst, miss)

    escaped = 0.0
    steps = 0
    for first in (lower[:1] + upper[:1]):
        region = [first]
        for step in range(max(J, I) + 3):
            remaining = [r for r in region
                         if r.area - region_intersection_measure([r], domain)
                         > tolerances.active().residual]
            if not remaining:
                break
            nxt = []
            for r in remaining:
                nxt.extend(rect_image(poly, part, r))
            region = nxt
            steps = max(steps, step + 1)
        else:
            escaped += sum(max(0.0, r.area -
                               region_intersection_measure([r], domain))
                           for r in region)
    return ExceptionalReport(worst, escaped, steps)


# -- simulation ----------------------------------------------------------------


@dataclass(frozen=True)
class EntryTrace:
    sample: int
    u0: float
    w0: float
    K: int                # iterations to enter the attractor, -1 on budget
    escape_step: int      # first step outside the escape set, -1 on budget
    entered: bool
    entry_u: float = math.nan
    entry_w: float = math.nan


def _draw_pair(seed: int, index: int, buffer: float) -> tuple[float, float]:
    rng = np.random.default_rng([seed, index])
    while True:
        tu, tw = rng.uniform(0.0, TAU, size=2)
        if angular_distance(tu, tw) >= buffer:
            return tu, tw


def simulate_entry(poly: MarkedPolygon, part: Partition, dom: AttractorDomain,
                   samples: int, seed: int, max_iters: int = 100_000,
                   buffer: float = 1e-6) -> list[EntryTrace]:
    """Iterate random plane points until they enter the attractor.

    Sampling is uniform in both angles outside a diagonal buffer; each
    sample's stream is derived from (seed, sample index), so results are
    reproducible and order-independent.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    starts = [_draw_pair(seed, i, buffer) for i in range(samples)]
    tu = np.array([s[0] for s in starts])
    tw = np.array([s[1] for s in starts])

    cuts = np.array(part.lifted[:part.n])
    ga = np.array([g.a for g in poly.generators])
    gb = np.array([g.b for g in poly.generators])
    us, usw, ws, wsw = dom.membership_arrays()
    phi = phi_set(poly, part)
    ps = np.array([r.u_arc.start.theta for r in phi])
    psw = np.array([r.u_arc.sweep for r in phi])
    qs = np.array([r.w_arc.start.theta for r in phi])
    qsw = np.array([r.w_arc.sweep for r in phi])
    tol = tolerances.active().structural

    def member(a_s, a_sw, b_s, b_sw, pu, pw):
        du = (pu[:, None] - a_s[None, :]) % TAU
        dw = (pw[:, None] - b_s[None, :]) % TAU
        in_u = (du <= a_sw[None, :] + tol) | (du >= TAU - tol)
        in_w = (dw <= b_sw[None, :] + tol) | (dw >= TAU - tol)
        return (in_u & in_w).any(axis=1)

    K = np.full(samples, -1, dtype=np.int64)
    esc = np.full(samples, -1, dtype=np.int64)
    entry_u = np.full(samples, np.nan)
    entry_w = np.full(samples, np.nan)

    inside0 = member(us, usw, ws, wsw, tu, tw)
    K[inside0] = 0
    entry_u[inside0] = tu[inside0]
    entry_w[inside0] = tw[inside0]
    esc[~member(ps, psw, qs, qsw, tu, tw)] = 0

    cu, cw = np.exp(1j * tu), np.exp(1j * tw)
    live = np.arange(samples)[(K < 0) | (esc < 0)]
    for n in range(1, max_iters + 1):
        if live.size == 0:
            break
        zw = cw[live]
        cells = np.searchsorted(cuts, np.angle(zw) % TAU, side="right") - 1
        np.clip(cells, 0, part.n - 1, out=cells)
        a, b = ga[cells], gb[cells]
        nw = (a * zw + b) / (np.conj(b) * zw + np.conj(a))
        zu = cu[live]
        nu = (a * zu + b) / (np.conj(b) * zu + np.conj(a))
        # renormalize: modulus drift would otherwise amplify exponentially
        cw[live] = nw / np.abs(nw)
        cu[live] = nu / np.abs(nu)

        pu = np.angle(cu[live]) % TAU
        pw = np.angle(cw[live]) % TAU
        pending = K[live] < 0
        if pending.any():
            hit = member(us, usw, ws, wsw, pu, pw) & pending
            idx = live[hit]
            K[idx] = n
            entry_u[idx] = pu[hit]
            entry_w[idx] = pw[hit]
        pending_phi = esc[live] < 0
        if pending_phi.any():
            out = ~member(ps, psw, qs, qsw, pu, pw) & pending_phi
            esc[live[out]] = n
        live = live[(K[live] < 0) | (esc[live] < 0)]

    return [EntryTrace(i, float(tu[i]), float(tw[i]), int(K[i]), int(esc[i]),
                       bool(K[i] >= 0), float(entry_u[i]), float(entry_w[i]))
            for i in range(samples)]


def check_forward_invariance(poly: MarkedPolygon, part: Partition,
                             dom: AttractorDomain, traces: list[EntryTrace],
                             steps: int = 1000) -> int:
    """Iterate the entered states further; count membership violations."""
    entered = [t for t in traces if t.entered]
    if not entered:
        return 0
    tu = np.array([t.entry_u for t in entered])
    tw = np.array([t.entry_w for t in entered])
    cuts = np.array(part.lifted[:part.n])
    ga = np.array([g.a for g in poly.generators])
    gb = np.array([g.b for g in poly.generators])
    us, usw, ws, wsw = dom.membership_arrays()
    tol = tolerances.active().structural
    cu, cw = np.exp(1j * tu), np.exp(1j * tw)
    exits = 0
    for _ in range(steps):
        cells = np.searchsorted(cuts, np.angle(cw) % TAU, side="right") - 1
        np.clip(cells, 0, part.n - 1, out=cells)
        a, b = ga[cells], gb[cells]
        cw = (a * cw + b) / (np.conj(b) * cw + np.conj(a))
        cu = (a * cu + b) / (np.conj(b) * cu + np.conj(a))
        cw /= np.abs(cw)
        cu /= np.abs(cu)
        pu, pw = np.angle(cu) % TAU, np.angle(cw) % TAU
        du = (pu[:, None] - us[None, :]) % TAU
        dw = (pw[:, None] - ws[None, :]) % TAU
        ok = (((du <= usw[None, :] + tol) | (du >= TAU - tol))
              & ((dw <= wsw[None, :] + tol) | (dw >= TAU - tol))).any(axis=1)
        exits += int((~ok).sum())
    return exits


def traces_to_csv(traces: list[EntryTrace], seed: int) -> str:
    lines = ["sample,seed,u0,w0,K,escape_step,entered"]
    for t in traces:
        lines.append(f"{t.sample},{seed},{t.u0!r},{t.w0!r},{t.K},"
                     f"{t.escape_step},{int(t.entered)}")
    return "\n".join(lines) + "\n"

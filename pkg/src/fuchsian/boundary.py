"""Circle partitions, the piecewise boundary map, orbits, cycles, and the
finite Markov property check.

The circle is cut at one point per vertex: the vertex itself when ideal, a
chosen point of the adjacent open arc when the vertex is interior.  Cell
``i`` is the half-open counter-clockwise arc [A_i, A_{i+1}) and the map acts
there by the gluing of side ``i``; a point sitting exactly on a cut uses the
cell that starts there.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

from . import tolerances
from .errors import CustomPointOutOfRange, NotElliptic
from .mobius import TAU, BoundaryPoint, angular_distance
from .polygon import MarkedPolygon

MODES = ("left", "right", "midpoint")


@dataclass(frozen=True)
class Partition:
    """Cut points A_0..A_{N-1}, one per vertex, ordered counter-clockwise.

    ``thetas`` holds the raw angles; ``lifted`` is their monotone lift with
    a closing entry at lifted[0] + 2pi, used for cell lookup (a cut that
    coincides with the base vertex lifts to 2pi instead of wrapping).
    ``in_guarantee_range`` reports whether every elliptic cut lies in its
    closed [P, Q] arc, the hypothesis under which global attraction holds.
    """

    poly: MarkedPolygon
    points: tuple[BoundaryPoint, ...]
    mode: str
    thetas: tuple[float, ...] = field(init=False)
    lifted: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        thetas = tuple(p.theta for p in self.points)
        # monotone lift starting at A_0 = V_0 (angle 0): each cut sits
        # counter-clockwise at or after the previous one; a final cut that
        # coincides with V_0 lifts to 2 pi rather than wrapping to 0
        lifted = [thetas[0]]
        for t in thetas[1:]:
            cur = t
            while cur < lifted[-1] - 1e-9:
                cur += TAU
            lifted.append(max(cur, lifted[-1]))
        lifted.append(lifted[0] + TAU)
        if lifted[-2] > lifted[-1]:
            raise ValueError("partition points wind more than once")
        object.__setattr__(self, "thetas", thetas)
        object.__setattr__(self, "lifted", tuple(lifted))

    @property
    def n(self) -> int:
        return len(self.points)

    def cell_of(self, theta: float) -> int:
        """Index i with theta in [A_i, A_{i+1}), counter-clockwise.

        Coincident cut points produce empty cells, which the right-bisect
        convention skips automatically.
        """
        t = (theta - self.lifted[0]) % TAU + self.lifted[0]
        i = bisect.bisect_right(self.lifted, t, 0, self.n) - 1
        return max(i, 0)

    def cell_arc(self, i: int) -> tuple[float, float]:
        """(start, sweep) of cell i; zero sweep for collapsed cells."""
        return self.thetas[i], self.lifted[i + 1] - self.lifted[i]

    def in_guarantee_range(self) -> bool:
        tol = tolerances.active().structural
        for k in self.poly.elliptic_indices():
            aux = self.poly.aux[k]
            sweep = (aux.Q.theta - aux.P.theta) % TAU
            d = (self.points[k].theta - aux.P.theta) % TAU
            if not (d <= sweep + tol or d >= TAU - tol):
                return False
        return True

    def elliptic_offsets(self) -> dict[int, float]:
        """Angle of each elliptic cut relative to its block base."""
        out = {}
        for k in self.poly.elliptic_indices():
            base = self.poly.block_of_vertex(k).base_angle
            out[k] = (self.points[k].theta - base) % TAU
        return out


def make_partition(poly: MarkedPolygon, mode: str,
                   custom: dict[int, float] | list[float] | None = None) -> Partition:
    """Build the cut set for one of the named modes or custom angles.

    ``custom`` supplies one angle per elliptic vertex, either as a list in
    vertex order or a dict keyed by vertex index; each must lie strictly
    between the neighbouring ideal vertices.
    """
    points: list[BoundaryPoint] = []
    elliptic = poly.elliptic_indices()
    if mode == "custom":
        if custom is None:
            raise CustomPointOutOfRange(-1, "custom mode requires angles")
        if not isinstance(custom, dict):
            if len(custom) != len(elliptic):
                raise CustomPointOutOfRange(
                    -1, f"need {len(elliptic)} angles, got {len(custom)}")
            custom = dict(zip(elliptic, custom))
        missing = [k for k in elliptic if k not in custom]
        if missing:
            raise CustomPointOutOfRange(
                missing[0], f"no angle given for elliptic vertex {missing[0]}")
    elif mode not in MODES:
        raise ValueError(f"unknown partition mode {mode!r}")

    n = poly.n_sides
    for i, v in enumerate(poly.vertices):
        if v.is_ideal:
            points.append(v.point)
            continue
        aux = poly.aux[i]
        if mode == "left":
            points.append(aux.P)
        elif mode == "right":
            points.append(aux.Q)
        elif mode == "midpoint":
            points.append(aux.M)
        else:
            theta = custom[i] % TAU
            lo = poly.vertices[(i - 1) % n].point.theta
            hi_sweep = (poly.vertices[(i + 1) % n].point.theta - lo) % TAU or TAU
            d = (theta - lo) % TAU
            if not 1e-12 < d < hi_sweep - 1e-12:
                raise CustomPointOutOfRange(
                    i, f"angle {theta} outside open arc at vertex {i}")
            points.append(BoundaryPoint.from_angle(theta))
    return Partition(poly, tuple(points), mode)


def f_apply(poly: MarkedPolygon, part: Partition,
            x: BoundaryPoint) -> tuple[int, BoundaryPoint]:
    """One step of the boundary map: returns (cell index, image)."""
    i = part.cell_of(x.theta)
    return i, poly.generators[i].apply_boundary(x)


@dataclass(frozen=True)
class OrbitRecord:
    start: BoundaryPoint
    side: str                       # "upper" | "lower"
    points: tuple[BoundaryPoint, ...]
    periodic_from: int | None       # index into points of the revisited entry
    budget_exceeded: bool

    def distinct_count(self) -> int:
        return len(self.points)


def _snap(theta: float, anchors: list[float], tol: float) -> float | None:
    """Nearest anchor angle within tol (circularly), or None."""
    if not anchors:
        return None
    i = bisect.bisect_left(anchors, theta)
    best, err = None, tol
    for j in (i - 1, i, 0, len(anchors) - 1):
        if 0 <= j < len(anchors):
            d = angular_distance(theta, anchors[j])
            if d < err:
                best, err = anchors[j], d
    return best


def orbit(poly: MarkedPolygon, part: Partition, x: BoundaryPoint,
          side: str = "upper", max_steps: int = 10_000) -> OrbitRecord:
    """Forward orbit of ``x``, with the first step resolved by ``side`` when
    ``x`` is a cut point, stopping at the first angular revisit.

    Iterates are snapped onto the cut set and onto previously seen points,
    which keeps the finite orbits of ideal vertices exactly periodic instead
    of drifting near parabolic fixed points.
    """
    tols = tolerances.active()
    cuts = sorted(set(part.thetas))
    k = part.cell_of(x.theta)
    first_gen = poly.generators[k]
    if side == "lower" and angular_distance(x.theta, part.thetas[k]) < tols.structural:
        first_gen = poly.generators[(k - 1) % part.n]
    points: list[BoundaryPoint] = []
    index_of: dict[float, int] = {}
    seen_sorted: list[float] = []
    cur = first_gen.apply_boundary(x)
    budget = False
    periodic_from = None
    for _ in range(max_steps):
        t = cur.theta
        hit = _snap(t, cuts, tols.structural)
        if hit is not None:
            t = hit
        revisit = _snap(t, seen_sorted, tols.residual)
        if revisit is not None and revisit in index_of:
            periodic_from = index_of[revisit]
            break
        cur = BoundaryPoint.from_angle(t)
        points.append(cur)
        index_of.setdefault(t, len(points) - 1)
        bisect.insort(seen_sorted, t)
        _, cur = f_apply(poly, part, cur)
    else:
        budget = True
    return OrbitRecord(x, side, tuple(points), periodic_from, budget)


@dataclass(frozen=True)
class CycleData:
    """Descent data of an elliptic cut point.

    ``J`` counts rotation steps staying inside the open vertex arc, the
    end of the cycle is the (J+1)-st clockwise rotation image, and ``I`` is
    the matching step count of the counter-rotation orbit: m - 2 - J
    generically, m - 3 - J when the descent lands exactly on the preceding
    vertex (``degenerate``), in which case both orbits run into the finite
    ideal-vertex orbit instead of meeting at the cycle end.
    """

    vertex: int
    order: int
    J: int
    I: int
    end_of_cycle: BoundaryPoint
    degenerate: bool
    lower_points: tuple[BoundaryPoint, ...]   # c(A), ..., c^{J+1}(A)
    upper_points: tuple[BoundaryPoint, ...]   # c^{-1}(A), ..., c^{-(I+1)}(A)
    matching_residual: float


def cycle(poly: MarkedPolygon, part: Partition, k: int) -> CycleData:
    """Cycle data for the cut point at elliptic vertex ``k``."""
    tols = tolerances.active()
    v = poly.vertices[k % poly.n_sides]
    if v.is_ideal:
        raise NotElliptic(f"vertex {k} is ideal")
    m = v.order
    n = poly.n_sides
    a = part.points[k % n]
    c = poly.generators[(k - 1) % n]          # clockwise rotation about V_k
    c_inv = poly.generators[k % n]
    lo = poly.vertices[(k - 1) % n].point.theta
    sweep = (poly.vertices[(k + 1) % n].point.theta - lo) % TAU or TAU

    lower = [c.apply_boundary(a)]
    J = 0
    while True:
        d = (lower[-1].theta - lo) % TAU
        if not (1e-12 < d < sweep - 1e-12):
            break
        lower.append(c.apply_boundary(lower[-1]))
        J += 1
    end = lower[-1]
    degenerate = angular_distance(end.theta, lo) < tols.structural
    I = m - 2 - J if not degenerate else max(m - 3 - J, 0)

    upper = [c_inv.apply_boundary(a)]
    for _ in range(I):
        upper.append(c_inv.apply_boundary(upper[-1]))

    if degenerate and m - 3 - J >= 0:
        # upper orbit must land on the following vertex, lower on the
        # preceding one; the orbits merge later through the cusp orbit
        target = poly.vertices[(k + 1) % n].point.theta
        residual = max(angular_distance(upper[-1].theta, target),
                       angular_distance(end.theta, lo))
    elif degenerate:
        # only for an order-2 cut sitting exactly on the following vertex
        residual = angular_distance(end.theta, lo)
    else:
        residual = angular_distance(upper[-1].theta, end.theta)
    return CycleData(k % n, m, J, I, end, degenerate,
                     tuple(lower), tuple(upper), residual)


def verify_matching(poly: MarkedPolygon, part: Partition, k: int,
                    data: CycleData | None = None) -> float:
    """Residual of the matching identity, checked by honestly iterating the
    boundary map on both one-sided orbits of the cut point."""
    data = data or cycle(poly, part, k)
    a = part.points[data.vertex]
    n = poly.n_sides
    up = poly.generators[data.vertex].apply_boundary(a)
    low = poly.generators[(data.vertex - 1) % n].apply_boundary(a)
    for _ in range(data.I):
        _, up = f_apply(poly, part, up)
    for _ in range(data.J):
        _, low = f_apply(poly, part, low)
    if data.degenerate and data.order - 3 - data.J >= 0:
        hi = poly.vertices[(data.vertex + 1) % n].point.theta
        lo = poly.vertices[(data.vertex - 1) % n].point.theta
        return max(angular_distance(up.theta, hi),
                   angular_distance(low.theta, lo))
    return angular_distance(up.theta, low.theta)


# -- Markov property ----------------------------------------------------------


@dataclass
class MarkovReport:
    refinement: list[float]                  # sorted break angles
    transitions: list[list[int]]             # interval -> covered intervals
    orbit_sizes: dict[tuple[int, str], int]
    all_orbits_finite: bool
    endpoint_residual: float
    budget_exceeded: bool

    @property
    def passed(self) -> bool:
        return (self.all_orbits_finite and not self.budget_exceeded
                and self.endpoint_residual < tolerances.active().residual)

    def to_dict(self) -> dict:
        return {"refinement": self.refinement,
                "transitions": self.transitions,
                "orbit_sizes": {f"{k}:{s}": v for (k, s), v in self.orbit_sizes.items()},
                "all_orbits_finite": self.all_orbits_finite,
                "endpoint_residual": self.endpoint_residual,
                "passed": self.passed}


def markov_check(poly: MarkedPolygon, part: Partition,
                 max_steps: int = 10_000) -> MarkovReport:
    """Check that the cut-point orbits are finite and that the refinement
    they generate maps interval-onto-intervals under the boundary map."""
    tols = tolerances.active()
    orbit_sizes: dict[tuple[int, str], int] = {}
    budget = False
    pts: list[float] = list(part.thetas)
    for k in range(part.n):
        for side in ("upper", "lower"):
            rec = orbit(poly, part, part.points[k], side, max_steps)
            orbit_sizes[(k, side)] = rec.distinct_count()
            budget = budget or rec.budget_exceeded
            pts.extend(p.theta for p in rec.points)

    # dedupe circularly
    pts = sorted(t % TAU for t in pts)
    refined: list[float] = []
    for t in pts:
        if not refined or t - refined[-1] > tols.residual:
            refined.append(t)
    if refined and (TAU - refined[-1]) + refined[0] <= tols.residual:
        refined.pop()

    # interval-onto-intervals: endpoints must map to refinement points
    def locate(theta: float) -> tuple[int, float]:
        i = bisect.bisect_left(refined, theta)
        best, err = None, math.inf
        for j in (i - 1, i % len(refined), (i + 1) % len(refined)):
            d = angular_distance(theta, refined[j % len(refined)])
            if d < err:
                best, err = j % len(refined), d
        return best, err

    worst = 0.0
    transitions: list[list[int]] = []
    r = len(refined)
    for i in range(r):
        lo, hi = refined[i], refined[(i + 1) % r]
        cell = part.cell_of((lo + 0.5 * ((hi - lo) % TAU)) % TAU)
        g = poly.generators[cell]
        glo, ghi = g.apply_angle(lo), g.apply_angle(hi)
        ilo, elo = locate(glo)
        ihi, ehi = locate(ghi)
        worst = max(worst, elo, ehi)
        covered = []
        j = ilo
        while j != ihi:
            covered.append(j)
            j = (j + 1) % r
        if not covered:
            covered = [ilo]
        transitions.append(covered)

    return MarkovReport(refined, transitions, orbit_sizes,
                        not budget, worst, budget)

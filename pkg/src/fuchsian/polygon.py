"""Canonical marked polygon for a signature with at least one cusp.

The polygon is assembled from one building block per symbol of the signature
string: a four-sided quadruple glued in commutator fashion for each genus
handle, a two-sided wedge with an interior vertex for each elliptic order,
and a two-sided parabolic wedge for each cusp beyond the first.  Block
``j`` occupies the sector of angles [2pi (j-1)/l, 2pi j/l] and is the image
of the standard-position block under the rotation by 2pi (j-1)/l; all
side-pairing transformations are the standard ones conjugated by that
rotation.  Every glued side lies on the isometric circle of its pairing
transformation, which pins the construction uniquely.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

from . import tolerances
from .errors import InvalidSignature, NotElliptic
from .mobius import (TAU, BoundaryPoint, DiskPoint, Geodesic, MoebiusPSU,
                     angular_distance, geodesic_from_boundary_pair,
                     geodesic_through_interior, tangent_at,
                     geodesic_from_direction)

SQUARE = "square"
INFINITY = "inf"


@dataclass(frozen=True)
class Signature:
    """Orbifold data (genus; elliptic orders; cusp count), cusps >= 1."""

    genus: int
    orders: tuple[int, ...]
    cusps: int
    input_order: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise InvalidSignature("genus must be non-negative")
        if self.cusps < 1:
            raise InvalidSignature("at least one cusp is required (t >= 1)")
        if any(m < 2 for m in self.orders):
            raise InvalidSignature("elliptic orders must be >= 2")
        if list(self.orders) != sorted(self.orders):
            raise InvalidSignature("orders must be sorted ascending")
        if self.area_excess() <= 0:
            raise InvalidSignature(
                f"area condition violated: 2g-2+sum(1-1/m)+t = "
                f"{self.area_excess()} <= 0")

    @classmethod
    def of(cls, genus: int, orders, cusps: int) -> "Signature":
        given = tuple(int(m) for m in orders)
        return cls(genus, tuple(sorted(given)), cusps, given)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``"g;m1,...,mr;t"``; the middle field may be empty."""
        parts = text.replace(" ", "").split(";")
        if len(parts) != 3:
            raise InvalidSignature(f"expected 'g;m1,...,mr;t', got {text!r}")
        try:
            g = int(parts[0])
            orders = tuple(int(s) for s in parts[1].split(",") if s)
            t = int(parts[2])
        except ValueError as exc:
            raise InvalidSignature(f"cannot parse signature {text!r}: {exc}") from None
        return cls.of(g, orders, t)

    def area_excess(self) -> float:
        return (2 * self.genus - 2 + self.cusps
                + sum(1.0 - 1.0 / m for m in self.orders))

    def hyperbolic_area(self) -> float:
        return TAU * self.area_excess()

    @property
    def ell(self) -> int:
        """Number of building blocks g + r + t - 1."""
        return self.genus + len(self.orders) + self.cusps - 1

    @property
    def n_sides(self) -> int:
        return 4 * self.genus + 2 * len(self.orders) + 2 * (self.cusps - 1)

    def __str__(self) -> str:
        return f"{self.genus};{','.join(map(str, self.orders))};{self.cusps}"


@dataclass(frozen=True)
class SignatureString:
    """Block symbols: g squares, the sorted orders, then t-1 infinity marks."""

    symbols: tuple[object, ...]

    def __str__(self) -> str:
        marks = {SQUARE: "□", INFINITY: "∞"}
        return "".join(marks.get(s, str(s)) for s in self.symbols)


def signature_string(sig: Signature) -> SignatureString:
    symbols = ([SQUARE] * sig.genus + list(sig.orders)
               + [INFINITY] * (sig.cusps - 1))
    return SignatureString(tuple(symbols))


# -- standard-position generators --------------------------------------------


def elliptic_vertex(ell: int, m: int) -> complex:
    """Interior vertex of the standard elliptic wedge of order m."""
    return (math.cos((ell + m) * math.pi / (2 * ell * m))
            / math.cos((ell - m) * math.pi / (2 * ell * m))
            * cmath.exp(1j * math.pi / ell))


def elliptic_generator(ell: int, m: int) -> MoebiusPSU:
    """Clockwise rotation by 2pi/m about the standard wedge vertex, gluing
    the ray toward 1 onto the ray toward e^{2pi i/l}."""
    cm, cl = math.cos(math.pi / m), math.cos(math.pi / ell)
    e = cmath.exp(1j * math.pi / ell)
    return MoebiusPSU.from_coeffs(1 + cm * e, -(cm + cl) * e,
                                  (cm + cl) / e, -(1 + cm / e))


def parabolic_generator(ell: int) -> MoebiusPSU:
    """Parabolic gluing of the standard cusp wedge, fixing e^{pi i/l}."""
    e = cmath.exp(1j * math.pi / ell)
    return MoebiusPSU.from_coeffs(2 * e * e, -(e * e + e ** 3),
                                  e + 1, -2 * e)


def hyperbolic_generator_a(ell: int) -> MoebiusPSU:
    """First gluing of the standard quadruple: side V0 V1 onto V3 V2, where
    V_k = e^{k pi i/(2l)}."""
    c = math.cos(math.pi / (4 * ell))
    e = lambda k: cmath.exp(1j * k * math.pi / (4 * ell))
    return MoebiusPSU.from_coeffs(-e(5), c * e(6), -c, e(1))


def hyperbolic_generator_b(ell: int) -> MoebiusPSU:
    """Second gluing (side V3 V4 onto V2 V1), the rotation conjugate of the
    inverse of the first; this matrix identity is what makes both glued
    sides isometric circles."""
    rot = MoebiusPSU.rotation(math.pi / (2 * ell))
    return rot @ hyperbolic_generator_a(ell).inverse() @ rot.inverse()


# -- marked polygon -----------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    kind: str                       # "ideal" | "elliptic"
    point: object                   # BoundaryPoint | DiskPoint
    order: int | None = None

    @property
    def is_ideal(self) -> bool:
        return self.kind == "ideal"


@dataclass(frozen=True)
class AuxPoints:
    """Side extensions P (forward side), Q (backward side) and the arc
    midpoint M of [P, Q]; all equal to the vertex itself when it is ideal."""

    P: BoundaryPoint
    Q: BoundaryPoint
    M: BoundaryPoint


@dataclass(frozen=True)
class Block:
    index: int
    symbol: object
    base_angle: float
    side_start: int
    n_sides: int
    vertex_start: int


@dataclass(frozen=True)
class MarkedPolygon:
    signature: Signature
    string: SignatureString
    ell: int
    n_sides: int
    vertices: tuple[Vertex, ...]
    generators: tuple[MoebiusPSU, ...]   # generators[i] glues side (V_i, V_{i+1})
    pairing: tuple[int, ...]
    sides: tuple[Geodesic, ...]          # complete geodesic carrying side i
    aux: tuple[AuxPoints, ...]
    blocks: tuple[Block, ...]
    corner_angles: tuple[float, ...]     # 2 pi j / l for j = 0..l

    def vertex_angle(self, i: int) -> float:
        """Boundary angle of vertex i (projection for elliptic vertices)."""
        v = self.vertices[i % self.n_sides]
        if v.is_ideal:
            return v.point.theta
        blk = self.block_of_vertex(i % self.n_sides)
        return (blk.base_angle + math.pi / self.ell) % TAU

    def vertex_boundary(self, i: int) -> BoundaryPoint:
        return BoundaryPoint.from_angle(self.vertex_angle(i))

    def block_of_vertex(self, i: int) -> Block:
        for blk in reversed(self.blocks):
            if i >= blk.vertex_start:
                return blk
        return self.blocks[0]

    def block_of_side(self, i: int) -> Block:
        for blk in reversed(self.blocks):
            if i >= blk.side_start:
                return blk
        return self.blocks[0]

    def elliptic_indices(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if not v.is_ideal]

    def to_dict(self) -> dict:
        verts = []
        for i, v in enumerate(self.vertices):
            z = v.point.z
            entry = {"index": i, "kind": v.kind, "re": z.real, "im": z.imag}
            if v.is_ideal:
                entry["arg"] = v.point.theta
            else:
                entry["order"] = v.order
            verts.append(entry)
        gens = [{"index": i,
                 "a": {"re": g.a.real, "im": g.a.imag},
                 "b": {"re": g.b.real, "im": g.b.imag},
                 "pairs_with": self.pairing[i]}
                for i, g in enumerate(self.generators)]
        aux = [{"index": i, "P": x.P.theta, "Q": x.Q.theta, "M": x.M.theta}
               for i, x in enumerate(self.aux)]
        return {"signature": str(self.signature), "ell": self.ell,
                "N": self.n_sides, "string": str(self.string),
                "vertices": verts, "generators": gens, "aux": aux}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def build_canonical(sig: Signature) -> MarkedPolygon:
    """Construct the canonical polygon for a valid signature.

    Deterministic: the result is a pure function of the signature, with all
    shared corner angles taken from a single canonical array so adjacent
    blocks agree bitwise.
    """
    string = signature_string(sig)
    ell, n = sig.ell, sig.n_sides
    corners = tuple(TAU * j / ell for j in range(ell + 1))

    vertices: list[Vertex] = []
    generators: list[MoebiusPSU] = []
    pairing: list[int] = []
    blocks: list[Block] = []

    for j, sym in enumerate(string.symbols):
        base = corners[j]
        rot = MoebiusPSU.rotation(base)
        conj = (lambda g, r=rot: r @ g @ r.inverse())
        side0, vert0 = len(generators), len(vertices)
        if sym == SQUARE:
            a = hyperbolic_generator_a(ell)
            b = hyperbolic_generator_b(ell)
            generators += [conj(a), conj(b.inverse()), conj(a.inverse()), conj(b)]
            pairing += [side0 + 2, side0 + 3, side0, side0 + 1]
            vertices.append(Vertex("ideal", BoundaryPoint.from_angle(base)))
            for k in (1, 2, 3):
                vertices.append(Vertex("ideal", BoundaryPoint.from_angle(
                    base + k * math.pi / (2 * ell))))
            blocks.append(Block(j, sym, base, side0, 4, vert0))
        elif sym == INFINITY:
            c = parabolic_generator(ell)
            generators += [conj(c), conj(c.inverse())]
            pairing += [side0 + 1, side0]
            vertices.append(Vertex("ideal", BoundaryPoint.from_angle(base)))
            vertices.append(Vertex("ideal", BoundaryPoint.from_angle(
                base + math.pi / ell)))
            blocks.append(Block(j, sym, base, side0, 2, vert0))
        else:
            m = int(sym)
            c = elliptic_generator(ell, m)
            generators += [conj(c), conj(c.inverse())]
            pairing += [side0 + 1, side0]
            vertices.append(Vertex("ideal", BoundaryPoint.from_angle(base)))
            v1 = elliptic_vertex(ell, m) * cmath.exp(1j * base)
            vertices.append(Vertex("elliptic", DiskPoint(v1), m))
            blocks.append(Block(j, sym, base, side0, 2, vert0))

    sides = []
    for i in range(n):
        va, vb = vertices[i], vertices[(i + 1) % n]
        if va.is_ideal and vb.is_ideal:
            sides.append(geodesic_from_boundary_pair(va.point, vb.point))
        elif va.is_ideal:
            sides.append(geodesic_through_interior(va.point, vb.point))
        else:
            sides.append(geodesic_through_interior(vb.point, va.point))

    aux = []
    for i, v in enumerate(vertices):
        if v.is_ideal:
            aux.append(AuxPoints(v.point, v.point, v.point))
        else:
            # side i-1 runs (V_{i-1} ideal -> V_i); its far endpoint is Q_i.
            # side i runs (V_i -> V_{i+1} ideal), built from the ideal end,
            # so its far endpoint is P_i.
            q = sides[(i - 1) % n].endpoints[1]
            p = sides[i].endpoints[1]
            # order 2 collapses P and Q onto the neighbouring corners; snap
            # so partitions built from them compare exactly
            prev_pt = vertices[(i - 1) % n].point
            next_pt = vertices[(i + 1) % n].point
            if angular_distance(p.theta, prev_pt.theta) < 1e-11:
                p = prev_pt
            if angular_distance(q.theta, next_pt.theta) < 1e-11:
                q = next_pt
            sweep = (q.theta - p.theta) % TAU
            mid = BoundaryPoint.from_angle(p.theta + 0.5 * sweep)
            aux.append(AuxPoints(p, q, mid))

    return MarkedPolygon(sig, string, ell, n, tuple(vertices),
                         tuple(generators), tuple(pairing), tuple(sides),
                         tuple(aux), tuple(blocks), corners)


def aux_points(poly: MarkedPolygon, k: int, strict: bool = False) -> AuxPoints:
    """P_k, Q_k, M_k for vertex k (equal to the vertex when it is ideal)."""
    v = poly.vertices[k % poly.n_sides]
    if v.is_ideal and strict:
        raise NotElliptic(f"vertex {k} is ideal")
    return poly.aux[k % poly.n_sides]


def bisector_endpoint(poly: MarkedPolygon, k: int) -> BoundaryPoint:
    """Ideal endpoint of the bisector of the angle P_k V_k Q_k.

    Independent of the arc-midpoint construction of M_k; used to cross-check
    it.  The two side rays at V_k point away from P_k and Q_k, so the
    bisector of P V Q is the geodesic from V_k whose tangent halves the
    angle between the tangents toward P_k and Q_k.
    """
    v = poly.vertices[k % poly.n_sides]
    if v.is_ideal:
        raise NotElliptic(f"vertex {k} is ideal")
    x = poly.aux[k % poly.n_sides]
    n = poly.n_sides
    g_prev, g_next = poly.sides[(k - 1) % n], poly.sides[k % n]
    t_q = tangent_at(g_prev, v.point.z, x.Q)
    t_p = tangent_at(g_next, v.point.z, x.P)
    d = t_p + t_q
    if abs(d) < 1e-9:
        # opposite rays (order 2): both normals bisect; pick the one whose
        # endpoint lies on the arc [P, Q]
        for cand in (1j * t_p, -1j * t_p):
            e = geodesic_from_direction(v.point, cand)
            if (e.theta - x.P.theta) % TAU <= (x.Q.theta - x.P.theta) % TAU:
                return e
        raise ValueError("no bisector endpoint found on [P, Q]")
    return geodesic_from_direction(v.point, d / abs(d))


def cusp_orbit(poly: MarkedPolygon) -> list[BoundaryPoint]:
    """The ideal vertices lying in the orbit of V_0 = 1.

    Every ideal vertex except the t-1 wedge cusps of the parabolic blocks;
    there are 4g + r + t - 1 of them.
    """
    out = []
    for blk in poly.blocks:
        count = blk.n_sides
        for off in range(count):
            v = poly.vertices[blk.vertex_start + off]
            if not v.is_ideal:
                continue
            if blk.symbol == INFINITY and off == 1:
                continue  # cusp fixed by its own parabolic, separate orbit
            out.append(v.point)
    return out


# -- validation ---------------------------------------------------------------


@dataclass
class CheckResult:
    passed: bool
    residual: float
    detail: str = ""


@dataclass
class ValidationReport:
    signature: str
    checks: dict[str, CheckResult]
    area: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {"signature": self.signature, "passed": self.passed,
                "area": self.area,
                "checks": {k: {"passed": c.passed, "residual": c.residual,
                               "detail": c.detail}
                           for k, c in self.checks.items()}}


def _clockwise_angle(d_from: complex, d_to: complex) -> float:
    return (cmath.phase(d_from) - cmath.phase(d_to)) % TAU


def _measured_elliptic_angles(poly: MarkedPolygon) -> dict[int, float]:
    angles = {}
    n = poly.n_sides
    for k in poly.elliptic_indices():
        v = poly.vertices[k]
        d_prev = tangent_at(poly.sides[(k - 1) % n], v.point.z,
                            poly.vertices[(k - 1) % n].point)
        d_next = tangent_at(poly.sides[k], v.point.z,
                            poly.vertices[(k + 1) % n].point)
        angles[k] = _clockwise_angle(d_prev, d_next)
    return angles


def _unit_circles(poly: MarkedPolygon):
    """Free-combination units: per cyclic factor, its bounding circles.

    A quadruple block yields two units (the two hyperbolic gluings); every
    wedge block yields one.  Degenerate diameter sides (order 2 wedge with
    l = 2) are represented as half-plane cuts.
    """
    units = []
    for blk in poly.blocks:
        s = blk.side_start
        if blk.symbol == SQUARE:
            units.append((f"a{blk.index}", [poly.sides[s], poly.sides[s + 2]]))
            units.append((f"b{blk.index}", [poly.sides[s + 1], poly.sides[s + 3]]))
        else:
            geos = [poly.sides[s], poly.sides[s + 1]]
            units.append((f"g{blk.index}", geos))
    out = []
    for (name, geos), blk in zip(units, _unit_blocks(poly)):
        sector_mid = cmath.exp(1j * (blk.base_angle + math.pi / poly.ell))
        shapes = []
        for g in geos:
            if g.is_diameter:
                shapes.append(("line", _halfplane_normal(g, sector_mid)))
            else:
                shapes.append(("circle", g.circle))
        out.append((name, shapes))
    return out


def _unit_blocks(poly: MarkedPolygon) -> list[Block]:
    blocks = []
    for blk in poly.blocks:
        blocks.extend([blk, blk] if blk.symbol == SQUARE else [blk])
    return blocks


def _halfplane_normal(geo: Geodesic, sector_mid: complex) -> complex:
    """Inward normal of the excluded half-plane of a diameter side; the
    excluded side is the one containing the block's sector."""
    u, w = geo.endpoints
    nrm = 1j * (w.z - u.z)
    nrm /= abs(nrm)
    if (sector_mid * nrm.conjugate()).real < 0:
        nrm = -nrm
    return nrm


def _disjointness(poly: MarkedPolygon, tol: float) -> CheckResult:
    units = _unit_circles(poly)
    worst = 0.0
    detail = ""
    for i in range(len(units)):
        for j in range(i + 1, len(units)):
            for kind1, s1 in units[i][1]:
                for kind2, s2 in units[j][1]:
                    if kind1 == "circle" and kind2 == "circle":
                        c1, c2 = s1, s2
                        gap = abs(c1.center - c2.center) - (c1.radius + c2.radius)
                        pen = -gap
                        if abs(gap) <= tol:
                            d = c2.center - c1.center
                            touch = c1.center + c1.radius * d / abs(d)
                            pen = abs(abs(touch) - 1.0)
                    elif kind1 == "line" or kind2 == "line":
                        if kind1 == "line" and kind2 == "line":
                            return CheckResult(False, math.inf,
                                               "two diameter units cannot coexist")
                        nrm, circ = (s1, s2) if kind1 == "line" else (s2, s1)
                        depth = (circ.center * nrm.conjugate()).real + circ.radius
                        pen = depth
                        if abs(depth) <= tol:
                            touch = circ.center + circ.radius * nrm
                            pen = abs(abs(touch) - 1.0)
                    if pen > worst:
                        worst = pen
                        detail = f"units {units[i][0]} vs {units[j][0]}"
    return CheckResult(worst <= tol, worst, detail)


def block_glue_product(poly: MarkedPolygon, blk: Block) -> MoebiusPSU:
    """The transformation carrying the block's start corner to its end
    corner: the commutator b^-1 a^-1 b a for a quadruple (a applied first),
    the wedge gluing otherwise."""
    s = blk.side_start
    if blk.symbol == SQUARE:
        a, b_inv, a_inv, b = (poly.generators[s + i] for i in range(4))
        return b_inv @ a_inv @ b @ a
    return poly.generators[s]


def boundary_product(poly: MarkedPolygon) -> MoebiusPSU:
    """Product of all block gluings, first block applied first; fixes V_0."""
    total = MoebiusPSU.identity()
    for blk in poly.blocks:
        total = block_glue_product(poly, blk) @ total
    return total


def validate_polygon(poly: MarkedPolygon) -> ValidationReport:
    """Numerically verify the structural properties of the construction."""
    tols = tolerances.active()
    checks: dict[str, CheckResult] = {}
    n = poly.n_sides
    sig = poly.signature

    # (a) every non-diameter side lies on the isometric circle of its gluing
    worst, detail = 0.0, ""
    for i, (side, gen) in enumerate(zip(poly.sides, poly.generators)):
        if side.is_diameter:
            cls = gen.classify()
            ok = abs(gen.b) < 1e-12 and cls.kind == "elliptic"
            if not ok:
                worst, detail = math.inf, f"side {i}: bad diameter pairing"
            continue
        iso = gen.isometric_circle()
        res = (abs(iso.center - side.circle.center)
               + abs(iso.radius - side.circle.radius))
        res = max(res, abs(side.circle.orthogonality_residual()))
        if res > worst:
            worst, detail = res, f"side {i}"
    checks["isometric_circles"] = CheckResult(worst < tols.residual, worst, detail)

    # (b) interior angle 2pi/m at each elliptic vertex
    measured = _measured_elliptic_angles(poly)
    worst, detail = 0.0, ""
    for k, ang in measured.items():
        m = poly.vertices[k].order
        res = abs(ang - TAU / m)
        if res > worst:
            worst, detail = res, f"vertex {k} (order {m})"
    checks["elliptic_angles"] = CheckResult(worst < tols.residual, worst, detail)

    # (c) free combination: excluded caps pairwise disjoint inside the disk
    checks["free_combination"] = _disjointness(poly, tols.residual)

    # (d) the full gluing product fixes V_0 and is parabolic
    prod = boundary_product(poly)
    fix_res = abs(prod.apply(1.0 + 0j) - 1.0)
    tr_res = abs(abs(prod.trace) - 2.0)
    ok = (fix_res < 1e-7 and tr_res < tols.spectral
          and prod.classify().kind == "parabolic")
    checks["parabolic_product"] = CheckResult(
        ok, max(fix_res, tr_res), f"fix={fix_res:.2e} trace={tr_res:.2e}")

    # (e) Gauss-Bonnet: (N-2)pi - angle sum against the signature area
    area_measured = (n - 2) * math.pi - sum(measured.values())
    area_formula = sig.hyperbolic_area()
    res = abs(area_measured - area_formula)
    checks["area"] = CheckResult(res < tols.residual, res,
                                 f"area={area_formula!r}")

    # (f) ideal corner vertices equally distributed
    worst = 0.0
    for blk in poly.blocks:
        v = poly.vertices[blk.vertex_start]
        worst = max(worst, angular_distance(v.point.theta, blk.base_angle))
    g = sig.genus
    for k in range(g + 1):
        worst = max(worst, angular_distance(
            poly.vertex_angle(4 * k), TAU * k / poly.ell))
    for j in range(1, len(sig.orders) + sig.cusps):
        idx = 4 * g + 2 * j
        worst = max(worst, angular_distance(
            poly.vertex_angle(idx % n), TAU * ((g + j) % poly.ell) / poly.ell))
    checks["equal_distribution"] = CheckResult(worst < tols.residual, worst)

    return ValidationReport(str(sig), checks, area=area_formula)

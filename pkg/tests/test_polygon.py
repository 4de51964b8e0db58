"""Canonical polygon construction and validation."""

import json
import math

import pytest

from conftest import SIGNATURES, polygon

from fuchsian import (InvalidSignature, NotElliptic, Signature, aux_points,
                      build_canonical, cusp_orbit, signature_string,
                      validate_polygon)
from fuchsian.mobius import TAU, angular_distance
from fuchsian.polygon import (INFINITY, SQUARE, bisector_endpoint,
                              boundary_product)

MODULAR = "0;2,3;1"


class TestSignature:
    def test_parse_round_trip(self):
        for text in SIGNATURES:
            assert str(Signature.parse(text)) == text

    def test_empty_order_list(self):
        sig = Signature.parse("1;;1")
        assert sig.orders == () and sig.ell == 1

    def test_orders_sorted_with_permutation_recorded(self):
        sig = Signature.of(0, [7, 2, 3], 2)
        assert sig.orders == (2, 3, 7)
        assert sig.input_order == (7, 2, 3)

    def test_area_condition_rejected(self):
        with pytest.raises(InvalidSignature, match="area"):
            Signature.parse("0;2;1")

    def test_no_cusp_rejected(self):
        with pytest.raises(InvalidSignature, match="cusp"):
            Signature.parse("1;2;0")

    def test_bad_order_rejected(self):
        with pytest.raises(InvalidSignature):
            Signature.parse("0;1,3;1")

    def test_string_symbols(self):
        assert signature_string(Signature.parse(MODULAR)).symbols == (2, 3)
        assert signature_string(Signature.parse("2;2,5,8;2")).symbols == (
            SQUARE, SQUARE, 2, 5, 8, INFINITY)
        assert signature_string(Signature.parse("1;;1")).symbols == (SQUARE,)
        assert str(signature_string(Signature.parse("2;2,5,8;2"))) == \
            "□□258∞"


class TestConstruction:
    def test_modular_layout(self):
        poly = polygon(MODULAR)
        assert poly.ell == 2 and poly.n_sides == 4
        assert abs(poly.vertices[0].point.z - 1.0) < 1e-15
        # order-2 vertex collapses to the origin: cos(pi/2) sec(0) = 0
        v1 = poly.vertices[1]
        assert not v1.is_ideal and v1.order == 2
        assert abs(v1.point.z) < 1e-15
        assert abs(poly.vertices[2].point.z - (-1.0)) < 1e-14
        assert poly.sides[0].is_diameter and poly.sides[1].is_diameter

    def test_block_counts(self):
        assert polygon("1;2,3,7;2").ell == 5
        poly = polygon("2;2,5,8;2")
        assert poly.ell == 6 and poly.n_sides == 16

    def test_vertex_and_side_indices_align(self):
        for text in SIGNATURES:
            poly = polygon(text)
            assert len(poly.vertices) == len(poly.generators) == poly.n_sides
            for blk in poly.blocks:
                assert blk.side_start == blk.vertex_start

    def test_determinism(self):
        a = build_canonical(Signature.parse("1;2,3,7;2"))
        b = build_canonical(Signature.parse("1;2,3,7;2"))
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_side_pairing_is_involution_with_inverse_gluings(self):
        for text in SIGNATURES:
            poly = polygon(text)
            for i, j in enumerate(poly.pairing):
                assert poly.pairing[j] == i and i != j
                assert poly.generators[j].sign_distance(
                    poly.generators[i].inverse()) < 1e-12

    def test_side_pairing_endpoint_maps(self):
        # gluing of side i sends (V_i, V_{i+1}) onto the paired side with
        # reversed orientation
        for text in SIGNATURES:
            poly = polygon(text)
            n = poly.n_sides
            for i, g in enumerate(poly.generators):
                j = poly.pairing[i]
                img_start = g.apply(poly.vertices[i].point.z)
                img_end = g.apply(poly.vertices[(i + 1) % n].point.z)
                assert abs(img_start - poly.vertices[(j + 1) % n].point.z) < 1e-9
                assert abs(img_end - poly.vertices[j].point.z) < 1e-9

    def test_elliptic_generator_order_and_fixed_point(self):
        for text in SIGNATURES:
            poly = polygon(text)
            for k in poly.elliptic_indices():
                m = poly.vertices[k].order
                g = poly.generators[k - 1]
                assert g.power(m).is_identity(1e-9)
                cls = g.classify()
                assert cls.kind == "elliptic"
                assert abs(cls.rotation_angle - TAU / m) < 1e-9
                fixed = poly.vertices[k].point.z
                assert abs(g.apply(fixed) - fixed) < 1e-10

    def test_quadruple_radii_equal(self):
        for text in ("1;;1", "1;2,3,7;2", "2;2,5,8;2"):
            poly = polygon(text)
            for blk in poly.blocks:
                if blk.symbol != SQUARE:
                    continue
                radii = [poly.sides[blk.side_start + k].circle.radius
                         for k in range(4)]
                assert max(radii) - min(radii) < 1e-9

    def test_second_gluing_rotation_identity(self):
        # b = R_{pi/(2l)} a^{-1} R_{pi/(2l)}^{-1} as matrices up to sign
        from fuchsian.mobius import MoebiusPSU
        from fuchsian.polygon import (hyperbolic_generator_a,
                                      hyperbolic_generator_b)
        for ell in (1, 2, 5, 6):
            rot = MoebiusPSU.rotation(math.pi / (2 * ell))
            lhs = hyperbolic_generator_b(ell)
            rhs = rot @ hyperbolic_generator_a(ell).inverse() @ rot.inverse()
            assert lhs.sign_distance(rhs) < 1e-10


class TestAuxPoints:
    def test_modular_exact_values(self):
        poly = polygon(MODULAR)
        aux = aux_points(poly, 1)
        assert abs(aux.P.z - 1.0) < 1e-14
        assert abs(aux.Q.z - (-1.0)) < 1e-14
        assert abs(aux.M.z - 1j) < 1e-14

    def test_ideal_vertices_return_themselves(self):
        poly = polygon(MODULAR)
        aux = aux_points(poly, 0)
        assert aux.P is aux.Q is aux.M is poly.vertices[0].point
        with pytest.raises(NotElliptic):
            aux_points(poly, 0, strict=True)

    def test_midpoint_is_projected_vertex(self):
        # mirror symmetry of each block about its bisecting ray
        for text in SIGNATURES:
            poly = polygon(text)
            for k in poly.elliptic_indices():
                blk = poly.block_of_vertex(k)
                expect = (blk.base_angle + math.pi / poly.ell) % TAU
                assert angular_distance(poly.aux[k].M.theta, expect) < 1e-9

    def test_midpoint_matches_angle_bisector(self):
        for text in ("0;2,3;1", "0;3,3,4;2", "2;2,5,8;2"):
            poly = polygon(text)
            for k in poly.elliptic_indices():
                b = bisector_endpoint(poly, k)
                assert angular_distance(b.theta, poly.aux[k].M.theta) < 1e-9

    def test_ordering_start_P_mid_Q_end(self):
        # within each elliptic block the five marked points are in
        # counter-clockwise order
        for text in SIGNATURES:
            poly = polygon(text)
            for k in poly.elliptic_indices():
                blk = poly.block_of_vertex(k)
                aux = poly.aux[k]
                rel = [(aux.P.theta - blk.base_angle) % TAU,
                       (poly.vertex_angle(k) - blk.base_angle) % TAU,
                       (aux.Q.theta - blk.base_angle) % TAU]
                sector = TAU / poly.ell
                assert 0 <= rel[0] <= rel[1] <= rel[2] <= sector + 1e-12


class TestValidation:
    def test_all_signatures_pass(self, any_polygon):
        rep = validate_polygon(any_polygon)
        assert rep.passed, rep.to_dict()

    def test_modular_area_is_pi_over_three(self):
        rep = validate_polygon(polygon(MODULAR))
        assert abs(rep.area - math.pi / 3) < 1e-12

    def test_area_formula_value(self):
        rep = validate_polygon(polygon("1;2,3,7;2"))
        assert abs(rep.area - TAU * 169 / 42) < 1e-12

    def test_product_is_parabolic_for_all(self, any_polygon):
        prod = boundary_product(any_polygon)
        assert abs(abs(prod.trace) - 2.0) < 1e-8
        assert abs(prod.apply(1.0 + 0j) - 1.0) < 1e-7


class TestCuspOrbit:
    @pytest.mark.parametrize("text,count", [
        (MODULAR, 2), ("1;;1", 4), ("0;2,2;2", 3), ("1;2,3,7;2", 8),
        ("2;2,5,8;2", 12), ("0;3,3,4;2", 4)])
    def test_counts(self, text, count):
        poly = polygon(text)
        sig = poly.signature
        expect = 4 * sig.genus + len(sig.orders) + sig.cusps - 1
        assert expect == count
        assert len(cusp_orbit(poly)) == count

    def test_modular_points(self):
        pts = cusp_orbit(polygon(MODULAR))
        angles = sorted(p.theta for p in pts)
        assert angles[0] < 1e-15 and abs(angles[1] - math.pi) < 1e-14


class TestSerialization:
    def test_json_schema(self):
        d = polygon("2;2,5,8;2").to_dict()
        assert d["ell"] == 6 and d["N"] == 16
        assert len(d["vertices"]) == 16 and len(d["generators"]) == 16
        assert {"index", "kind", "re", "im"} <= set(d["vertices"][0])
        assert {"index", "a", "b", "pairs_with"} <= set(d["generators"][0])
        assert {"index", "P", "Q", "M"} == set(d["aux"][0])
        json.loads(polygon("2;2,5,8;2").to_json())

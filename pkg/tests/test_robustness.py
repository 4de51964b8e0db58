"""End-to-end pipeline on signatures outside the main regression set:
adjacent quadruples, several cusp blocks, long elliptic strings, high
orders, and large genus (big-entry gluing products)."""

import pytest

from fuchsian import (Signature, build_canonical, build_attractor,
                      check_forward_invariance, make_partition, markov_check,
                      simulate_entry, validate_polygon, verify_bijectivity)

EXTRA = ["0;2,2,2;1", "3;;2", "1;2,2,3,3,11;3", "0;7;2", "2;;3",
         "0;2,3,7;1", "5;2;4"]


@pytest.mark.parametrize("text", EXTRA)
def test_full_pipeline(text):
    poly = build_canonical(Signature.parse(text))
    assert validate_polygon(poly).passed
    for mode in ("left", "right", "midpoint"):
        part = make_partition(poly, mode)
        assert markov_check(poly, part).passed, (text, mode)
        dom = build_attractor(poly, part)
        assert verify_bijectivity(poly, part, dom).passed, (text, mode)
        traces = simulate_entry(poly, part, dom, samples=150, seed=7)
        assert all(t.entered for t in traces), (text, mode)
        assert check_forward_invariance(poly, part, dom, traces,
                                        steps=150) == 0, (text, mode)

import pytest

from fuchsian import Signature, build_canonical, make_partition

# the six-signature regression set used throughout
SIGNATURES = ["0;2,3;1", "1;;1", "0;2,2;2", "1;2,3,7;2", "2;2,5,8;2",
              "0;3,3,4;2"]
MODES = ["left", "right", "midpoint"]

_cache = {}


def polygon(sig_text):
    if sig_text not in _cache:
        _cache[sig_text] = build_canonical(Signature.parse(sig_text))
    return _cache[sig_text]


def partition(sig_text, mode):
    key = (sig_text, mode)
    if key not in _cache:
        _cache[key] = make_partition(polygon(sig_text), mode)
    return _cache[key]


@pytest.fixture(params=SIGNATURES)
def any_polygon(request):
    return polygon(request.param)

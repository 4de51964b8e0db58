"""Central numeric tolerances.

The geometry itself is exact; every tolerance below is an artifact decision,
kept in one record so the whole numerical contract is auditable.  Functions
take an optional ``tol`` override and fall back to the active config.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-10   # point coincidence, membership, matrix shape
    spectral: float = 1e-8      # |trace| classification margin
    residual: float = 1e-9      # matching/Markov/area/tiling residual budget
    overlap: float = 1e-12      # interior disjointness of rectangle unions
    wrap: float = 1e-12         # angle canonicalization guard at 0 ~ 2pi


DEFAULT = Tolerances()

_PROFILES = {
    "default": DEFAULT,
    "strict": Tolerances(structural=1e-12, spectral=1e-10, residual=1e-11,
                         overlap=1e-13, wrap=1e-13),
    "loose": Tolerances(structural=1e-8, spectral=1e-6, residual=1e-7,
                        overlap=1e-10, wrap=1e-10),
}

_active = DEFAULT


def active() -> Tolerances:
    return _active


def set_profile(name: str, **overrides: float) -> Tolerances:
    """Select a named profile, optionally overriding individual fields."""
    global _active
    try:
        base = _PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown tolerance profile {name!r}; "
                       f"choose from {sorted(_PROFILES)}") from None
    _active = replace(base, **overrides) if overrides else base
    return _active

"""Global numerical tolerances."""

from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    geom: float = 1e-10  # geometric identities (lengths, tangency)
    unit: float = 1e-12  # unit-vector normalisation
    root: float = 1e-12  # bisection width on wall angles
    quad: float = 1e-12  # absolute quadrature tolerance
    boundary: float = 1e-12  # relative tolerance for parameter-boundary equalities

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be positive")


_current = Tolerances()


def get_tolerances() -> Tolerances:
    return _current


def set_tolerances(**kwargs) -> Tolerances:
    """Replace fields of the global tolerance set; returns the new set."""
    global _current
    _current = dataclasses.replace(_current, **kwargs)
    return _current


@contextlib.contextmanager
def tolerances(**kwargs):
    global _current
    saved = _current
    try:
        yield set_tolerances(**kwargs)
    finally:
        _current = saved

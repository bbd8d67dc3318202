"""Kepler billiards with a focused conic wall: foci-caustic, elliptic curve, periodicity."""

__version__ = "0.1.0"

"""Angular-frequency unit helpers.

Everything inside the package is an angular frequency in rad/s. Published
circuit-QED numbers are almost always quoted as "2 pi x MHz", so the
converters below keep that convention explicit and out of the physics code.
"""

import math

TWO_PI_MHZ = 2.0 * math.pi * 1.0e6
TWO_PI_GHZ = 2.0 * math.pi * 1.0e9


def two_pi_mhz(value: float) -> float:
    """Convert a frequency quoted in 2pi MHz to rad/s."""
    return value * TWO_PI_MHZ


def two_pi_ghz(value: float) -> float:
    """Convert a frequency quoted in 2pi GHz to rad/s."""
    return value * TWO_PI_GHZ


def to_two_pi_mhz(omega: float) -> float:
    """Express an angular frequency (rad/s) in 2pi MHz."""
    return omega / TWO_PI_MHZ

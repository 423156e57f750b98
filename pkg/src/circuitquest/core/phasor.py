"""RMS phasor value type.

All magnitudes in this package are RMS, so average power is Re(V * conj(I))
with no 1/2 factor. Angles are radians, normalised to (-pi, pi].
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


def wrap_angle(angle: float) -> float:
    """Normalise an angle in radians to the interval (-pi, pi]."""
    r = math.remainder(angle, math.tau)
    if r <= -math.pi:
        r += math.tau
    return r


@dataclass(frozen=True)
class Phasor:
    """Polar complex value: RMS magnitude plus angle in (-pi, pi]."""

    magnitude: float
    angle: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0.0:
            object.__setattr__(self, "magnitude", -self.magnitude)
            object.__setattr__(self, "angle", self.angle + math.pi)
        object.__setattr__(self, "angle", wrap_angle(self.angle))
        if self.magnitude == 0.0:
            object.__setattr__(self, "angle", 0.0)

    @classmethod
    def from_complex(cls, z: complex) -> "Phasor":
        return cls(abs(z), cmath.phase(z))

    @property
    def complex(self) -> complex:
        return cmath.rect(self.magnitude, self.angle)

    @property
    def degrees(self) -> float:
        return math.degrees(self.angle)

    def __str__(self) -> str:
        return f"{self.magnitude:.6g} @ {self.degrees:.4g} deg"

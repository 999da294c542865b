"""Model configuration and the concrete smooth profiles built from it.

Every cutoff or interpolation profile in the package is realized from one
clamped quintic smoothstep, so each is C^2 with explicitly known first and
second derivatives.  The symbolic identity layer never sees these numbers;
they only feed the numeric positivity grids and the transport integrator.
"""

from __future__ import annotations

from dataclasses import dataclass


def smoothstep(x: float) -> float:
    """Clamped quintic step: 0 below 0, 1 above 1, 6x^5-15x^4+10x^3 between."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0)


def smoothstep_d(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return 30.0 * x * x * (x - 1.0) * (x - 1.0)


def smoothstep_d2(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return 60.0 * x * (x - 1.0) * (2.0 * x - 1.0)


@dataclass(frozen=True)
class ModelConfig:
    """Geometry parameters shared by the model forms and the transport ODE.

    Attributes:
        n: half-dimension parameter; the ambient model has dimension 2n+2.
        collar_width: radius below which the radial reparametrization is the
            identity; also the base scale for every other cutoff.
        ramp_lo: the interpolation profile vanishes for squared radius below
            this value.
        ramp_hi: ... and equals 1 above this value.
        disk1_radius: outer radius of the first disk factor.
        disk2_radius: outer radius of the second disk factor.
    """

    n: int = 2
    collar_width: float = 0.05
    ramp_lo: float = 0.1
    ramp_hi: float = 0.2
    disk1_radius: float = 0.5
    disk2_radius: float = 10.0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not (0.0 < self.collar_width < self.ramp_lo < self.ramp_hi < 1.0):
            raise ValueError(
                "need 0 < collar_width < ramp_lo < ramp_hi < 1, got "
                f"{self.collar_width}, {self.ramp_lo}, {self.ramp_hi}"
            )
        if not (self.collar_width < self.disk1_radius < 1.0):
            raise ValueError(
                f"disk1_radius must lie in (collar_width, 1), got {self.disk1_radius}"
            )
        if self.disk2_radius <= 0.0:
            raise ValueError(f"disk2_radius must be positive, got {self.disk2_radius}")

    # -- interpolation profile u and its derivatives, as functions of the
    #    squared total radius

    def ramp(self, sq: float) -> float:
        """0 below ramp_lo, 1 above ramp_hi, monotone C^2 in between."""
        return smoothstep((sq - self.ramp_lo) / (self.ramp_hi - self.ramp_lo))

    def ramp_d(self, sq: float) -> float:
        w = self.ramp_hi - self.ramp_lo
        return smoothstep_d((sq - self.ramp_lo) / w) / w

    def ramp_d2(self, sq: float) -> float:
        w = self.ramp_hi - self.ramp_lo
        return smoothstep_d2((sq - self.ramp_lo) / w) / (w * w)

    # -- radial reparametrization mu: identity near 0, constant 1 before
    #    disk1_radius, nondecreasing throughout

    @property
    def mu_flat_radius(self) -> float:
        """Radius from which mu is identically 1."""
        return self.disk1_radius - self.collar_width / 2.0

    def mu(self, radius: float) -> float:
        lo, hi = self.collar_width, self.mu_flat_radius
        if radius <= lo:
            return radius
        if radius >= hi:
            return 1.0
        s = smoothstep((radius - lo) / (hi - lo))
        return radius + (1.0 - radius) * s

    def mu_d(self, radius: float) -> float:
        lo, hi = self.collar_width, self.mu_flat_radius
        if radius <= lo:
            return 1.0
        if radius >= hi:
            return 0.0
        w = hi - lo
        x = (radius - lo) / w
        # (1 - S) >= 0 and (1 - radius) S'/w >= 0 since radius < 1, so mu' >= 0
        return (1.0 - smoothstep(x)) + (1.0 - radius) * smoothstep_d(x) / w

    # -- monodromy cutoff sigma, a function of the fibration value t

    @property
    def cutoff_lo(self) -> float:
        return 0.6 * self.disk2_radius ** 2

    @property
    def cutoff_hi(self) -> float:
        return 0.9 * self.disk2_radius ** 2

    def cutoff(self, t: float) -> float:
        return smoothstep((t - self.cutoff_lo) / (self.cutoff_hi - self.cutoff_lo))

    def cutoff_d(self, t: float) -> float:
        w = self.cutoff_hi - self.cutoff_lo
        return smoothstep_d((t - self.cutoff_lo) / w) / w

    # -- numeric bindings for the symbolic layer

    def bindings(self, r1: float, r2: float) -> dict[str, float]:
        """Float values for the atoms appearing in the model coefficients."""
        sq = r1 * r1 + r2 * r2
        return {
            "r1": r1,
            "r2": r2,
            "f": self.ramp(sq),
            "up": self.ramp_d(sq),
            "upp": self.ramp_d2(sq),
            "mu": self.mu(r1),
            "mup": self.mu_d(r1),
        }


DEFAULT_CONFIG = ModelConfig()

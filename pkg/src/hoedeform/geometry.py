"""Vector algebra, polar coordinates and local surface frames.

Frames attached to a rotationally symmetric graph z = h(s) follow the
radial-curve construction: ``t`` is the unit tangent of the radial section
curve through the point, ``n`` the unit graph normal with negative z
component, and ``b = t x n``. The triple is orthonormal and satisfies
``t .(b x n) = -1``; because every consumer pairs :func:`frame_decompose`
with :func:`frame_recompose`, the orientation choice cancels downstream.

At the surface vertex (s = 0) the radial direction is taken as the limit
along the azimuth, ``t -> (cos phi, sin phi, 0)``, which exists for
differentiable rotationally symmetric profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DegenerateFrame

if TYPE_CHECKING:  # only for annotations; surfaces imports this module
    from .surfaces import SurfaceProfile

TWO_PI = 2.0 * math.pi

# Default absolute tolerance for unit-length / orthogonality validation.
DEFAULT_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Vec3:
    """3-vector with finite components (mm for positions, rad/um for wavevectors)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError(f"Vec3 components must be finite, got ({self.x}, {self.y}, {self.z})")

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def __mul__(self, a: float) -> "Vec3":
        return Vec3(self.x * a, self.y * a, self.z * a)

    __rmul__ = __mul__

    def __truediv__(self, a: float) -> "Vec3":
        return Vec3(self.x / a, self.y / a, self.z / a)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n < 1e-300:
            raise ValueError("cannot normalize a zero vector")
        return self / n

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True, slots=True)
class Vec2:
    """2-vector in the reference plane or on a detector plane (mm)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 components must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True, slots=True)
class PolarPoint:
    """Plane point in polar coordinates: radius s >= 0 (mm), azimuth phi in [0, 2*pi)."""

    s: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and math.isfinite(self.phi)):
            raise ValueError("PolarPoint components must be finite")
        if self.s < 0.0:
            raise ValueError(f"radial distance must be >= 0, got {self.s}")
        wrapped = self.phi % TWO_PI
        if wrapped != self.phi:
            object.__setattr__(self, "phi", wrapped)

    @classmethod
    def from_xy(cls, x: float, y: float) -> "PolarPoint":
        return cls(math.hypot(x, y), math.atan2(y, x))

    def xy(self) -> tuple[float, float]:
        return (self.s * math.cos(self.phi), self.s * math.sin(self.phi))


@dataclass(frozen=True, slots=True)
class Frame:
    """Orthonormal local basis {t, b, n} at a surface point.

    Validated to be orthonormal within ``DEFAULT_TOL``. Frames produced by
    :func:`build_frame` additionally satisfy ``b = t x n`` exactly as
    constructed; the closure operations accept any orthonormal triple.
    """

    t: Vec3
    b: Vec3
    n: Vec3

    def __post_init__(self):
        self.validate(DEFAULT_TOL)

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        for name, v in (("t", self.t), ("b", self.b), ("n", self.n)):
            if abs(v.norm() - 1.0) > tol:
                raise ValueError(f"frame vector {name} is not unit length: |{name}| = {v.norm()!r}")
        for pair, d in (("t.b", self.t.dot(self.b)), ("t.n", self.t.dot(self.n)), ("b.n", self.b.dot(self.n))):
            if abs(d) > tol:
                raise ValueError(f"frame vectors not orthogonal: {pair} = {d!r}")


@dataclass(frozen=True, slots=True)
class FrameCoords:
    """Coordinates (g1, g2, g3) of a vector in a local frame (rad/um)."""

    g1: float
    g2: float
    g3: float

    def __post_init__(self):
        if not (math.isfinite(self.g1) and math.isfinite(self.g2) and math.isfinite(self.g3)):
            raise ValueError("frame coordinates must be finite")

    def magnitude(self) -> float:
        return math.sqrt(self.g1 * self.g1 + self.g2 * self.g2 + self.g3 * self.g3)


def build_frame(profile: "SurfaceProfile", p: PolarPoint) -> Frame:
    """Local frame of ``profile`` at the plane parameter point ``p``.

    With m = dh/ds at p.s and nu = sqrt(1 + m^2):

        t = (cos phi, sin phi, m) / nu
        n = (m cos phi, m sin phi, -1) / nu
        b = t x n              (analytically (-sin phi, cos phi, 0))

    Raises DomainError if p.s is outside the profile domain and
    DegenerateFrame if the slope is not finite there.
    """
    profile.require_radius(p.s)
    m = profile.radial_slope(p.s)
    if not math.isfinite(m):
        raise DegenerateFrame(f"surface slope is not finite at s = {p.s}")
    c, s = math.cos(p.phi), math.sin(p.phi)
    nu = math.sqrt(1.0 + m * m)
    t = Vec3(c / nu, s / nu, m / nu)
    n = Vec3(m * c / nu, m * s / nu, -1.0 / nu)
    return Frame(t=t, b=t.cross(n), n=n)


def frame_decompose(v: Vec3, f: Frame) -> FrameCoords:
    """Coordinates of ``v`` in frame ``f``: (v.t, v.b, v.n)."""
    return FrameCoords(v.dot(f.t), v.dot(f.b), v.dot(f.n))


def frame_recompose(c: FrameCoords, f: Frame) -> Vec3:
    """World-space vector g1*t + g2*b + g3*n."""
    return f.t * c.g1 + f.b * c.g2 + f.n * c.g3

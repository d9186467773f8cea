"""Points of the poly-disc D^(n-1) in polar form, measures and sampling."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DiscTuple:
    """A point (z_1, ..., z_{n-1}) with z_j = r_j exp(i theta_j)."""

    n: int
    radii: tuple
    angles: tuple

    @property
    def z(self):
        r = np.asarray(self.radii, dtype=float)
        th = np.asarray(self.angles, dtype=float)
        return r * np.exp(1j * th)

    @property
    def a(self):
        """Euclidean norm of (z_1, ..., z_{n-1})."""
        return math.sqrt(self.a2)

    @property
    def a2(self):
        return math.fsum(r * r for r in self.radii)

    @property
    def theta(self):
        """Sum of the angles (not reduced mod 2 pi)."""
        return math.fsum(self.angles)

    def rotated(self, delta):
        """Same radii, every angle shifted by ``delta``."""
        return make_disc_tuple(self.n, [(r, t + delta) for r, t in zip(self.radii, self.angles)])

    def to_dict(self):
        return {"n": self.n, "radii": list(self.radii), "angles": list(self.angles)}


def make_disc_tuple(n, polar):
    """Validate ``(r, theta)`` pairs into a :class:`DiscTuple`.

    Angles are reduced into [0, 2 pi); radii must satisfy 0 <= r < 1.
    """
    n = int(n)
    if n < 2:
        raise ValidationError(f"matrix dimension n must be >= 2, got {n}")
    polar = list(polar)
    if len(polar) != n - 1:
        raise ValidationError(f"expected {n - 1} (r, theta) pairs for n={n}, got {len(polar)}")
    radii, angles = [], []
    for r, th in polar:
        r, th = float(r), float(th)
        if not (0.0 <= r < 1.0) or math.isnan(r):
            raise DomainError(f"radius {r!r} outside [0, 1)")
        if not math.isfinite(th):
            raise ValidationError(f"angle {th!r} is not finite")
        th = math.fmod(th, TWO_PI)
        if th < 0.0:
            th += TWO_PI
        if th >= TWO_PI:
            th = 0.0
        radii.append(r)
        angles.append(th)
    return DiscTuple(n, tuple(radii), tuple(angles))


def from_complex(zs):
    """Build a tuple directly from complex coordinates."""
    zs = [complex(z) for z in zs]
    return make_disc_tuple(len(zs) + 1, [(abs(z), math.atan2(z.imag, z.real)) for z in zs])


def b_seq(t):
    """Partial sums b_j = r_1^2 + ... + r_{j+1}^2 for j = 1 .. n-3."""
    r2 = [r * r for r in t.radii]
    return tuple(math.fsum(r2[: j + 1]) for j in range(1, t.n - 2))


def measure_density_general(t):
    """Radial Jacobian r_1 r_2 ... r_{n-1} of the product measure."""
    return math.prod(t.radii)


def measure_density_su11(r):
    """Radial density r / (pi (1 + r^2)^2) used by the unit-disc example."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= 1):
        raise DomainError("su11 density requires 0 <= r < 1")
    out = r / (math.pi * (1.0 + r * r) ** 2)
    return float(out) if out.ndim == 0 else out


def measure_density_invariant(r):
    """The SU(1,1)-invariant density r / (pi (1 - r^2)^2), reported for comparison only."""
    r = np.asarray(r, dtype=float)
    out = r / (math.pi * (1.0 - r * r) ** 2)
    return float(out) if out.ndim == 0 else out


def sample_uniform(n, count, seed):
    """``count`` tuples with i.i.d. uniform radii in [0,1) and angles in [0, 2 pi)."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    rng = np.random.default_rng(seed)
    radii = rng.random((count, n - 1))
    angles = rng.random((count, n - 1)) * TWO_PI
    return [make_disc_tuple(n, zip(r, th)) for r, th in zip(radii, angles)]

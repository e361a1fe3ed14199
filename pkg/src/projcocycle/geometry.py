"""Möbius automorphisms of the unit disk acting on the boundary circle.

A map is stored in normal form ``z -> e^{i kappa} (z - sigma) / (1 - conj(sigma) z)``
and acts on angles through ``z = e^{i theta}``.  Composition goes through the
SU(1,1) matrix ``[[a, b], [conj(b), conj(a)]]`` with ``a = e^{i kappa/2}/sqrt(1-r^2)``
and ``b = -sigma a``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

TWO_PI = 2.0 * math.pi

#: ``|sigma|`` must stay below this; past it double precision loses the map.
SIGMA_LIMIT = 1.0 - 1e-12


class NumericalError(ArithmeticError):
    """A numerical routine failed to reach its stated accuracy."""


class Jet2(NamedTuple):
    """2-jet ``(f(theta), Df(theta), D^2 f(theta))`` of a circle map."""

    value: float
    d1: float
    d2: float


def canon(x: float) -> float:
    """Reduce an angle to ``[0, 2pi)``."""
    y = x % TWO_PI
    if y >= TWO_PI:  # -1e-20 % 2pi rounds up to 2pi
        y = 0.0
    return y


def circ_dist(x: float, y: float) -> float:
    """Circular distance between two angles, in ``[0, pi]``."""
    return abs(math.remainder(x - y, TWO_PI))


@dataclass(frozen=True)
class MobiusMap:
    kappa: float = 0.0
    sigma: complex = 0j

    def __post_init__(self):
        kappa = float(self.kappa)
        sigma = complex(self.sigma)
        if not (math.isfinite(kappa) and cmath.isfinite(sigma)):
            raise ValueError(f"non-finite Möbius parameters ({kappa}, {sigma})")
        if abs(sigma) >= SIGMA_LIMIT:
            raise ValueError(f"|sigma| = {abs(sigma)!r} is not < 1")
        object.__setattr__(self, "kappa", canon(kappa))
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def rotation(cls, alpha: float) -> "MobiusMap":
        return cls(alpha, 0j)

    @property
    def r(self) -> float:
        return abs(self.sigma)

    @property
    def is_rotation(self) -> bool:
        return self.sigma == 0

    def __call__(self, theta: float) -> float:
        return mobius_apply(self, theta)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return mobius_compose(self, other)

    def inverse(self) -> "MobiusMap":
        return mobius_invert(self)


IDENTITY = MobiusMap()


@dataclass(frozen=True)
class Su11Matrix:
    """``z -> (a z + b) / (conj(b) z + conj(a))`` with ``|a|^2 - |b|^2 = 1``."""

    a: complex
    b: complex

    @property
    def det(self) -> float:
        return abs(self.a) ** 2 - abs(self.b) ** 2

    def __matmul__(self, other: "Su11Matrix") -> "Su11Matrix":
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return Su11Matrix(a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())

    def inverse(self) -> "Su11Matrix":
        return Su11Matrix(self.a.conjugate(), -self.b)

    def normalized(self) -> "Su11Matrix":
        """Rescale to unit determinant and fix the projective sign."""
        det = self.det
        if not det > 0:
            raise NumericalError(f"SU(1,1) determinant {det!r} is not positive")
        s = 1.0 / math.sqrt(det)
        a, b = self.a * s, self.b * s
        if a.real < 0 or (a.real == 0 and a.imag < 0):
            a, b = -a, -b
        return Su11Matrix(a, b)

    def apply(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.b.conjugate() * z + self.a.conjugate())


def lift_offset(sigma: complex, theta: float) -> float:
    """``theta -> arg((e^{i theta} - sigma)/(1 - conj(sigma) e^{i theta})) - theta``.

    Written as ``-2 arg(1 - conj(sigma) e^{i theta})``; the argument stays in
    ``(-pi/2, pi/2)`` because the real part is positive, so the result is a
    continuous function of ``theta``.
    """
    if sigma == 0:
        return 0.0
    w = 1.0 - sigma.conjugate() * cmath.exp(1j * theta)
    return -2.0 * math.atan2(w.imag, w.real)


def mobius_apply(m: MobiusMap, theta: float) -> float:
    return canon(theta + m.kappa + lift_offset(m.sigma, theta))


def mobius_jet(m: MobiusMap, theta: float) -> Jet2:
    """Value, first and second derivative of ``m`` at ``theta``."""
    sigma = m.sigma
    e = cmath.exp(1j * theta)
    q = abs(1.0 - sigma.conjugate() * e) ** 2
    gap = 1.0 - abs(sigma) ** 2
    d1 = gap / q
    d2 = gap * 2.0 * (sigma * e.conjugate()).imag / (q * q)
    return Jet2(mobius_apply(m, theta), d1, d2)


def to_su11(m: MobiusMap) -> Su11Matrix:
    s = 1.0 / math.sqrt(1.0 - abs(m.sigma) ** 2)
    h = cmath.exp(0.5j * m.kappa)
    return Su11Matrix(h * s, -h * m.sigma * s).normalized()


def from_su11(mat: Su11Matrix) -> MobiusMap:
    a, b = mat.a, mat.b
    return MobiusMap(2.0 * cmath.phase(a), -b / a)


def mobius_compose(f: MobiusMap, g: MobiusMap) -> MobiusMap:
    """The map ``f o g``."""
    if g.sigma == 0 and f.sigma == 0:
        return MobiusMap(f.kappa + g.kappa)
    return from_su11((to_su11(f) @ to_su11(g)).normalized())


def mobius_invert(m: MobiusMap) -> MobiusMap:
    # (z - s)/(1 - s̄z) inverts to (w + s)/(1 + s̄w); pull e^{-iκ} through it
    return MobiusMap(-m.kappa, -m.sigma * cmath.exp(1j * m.kappa))


def disk_distance_to_origin(sigma: complex) -> float:
    """Hyperbolic distance ``log((1+r)/(1-r))`` from 0 to ``sigma``."""
    r = abs(sigma)
    if not r < 1.0:
        raise ValueError(f"|sigma| = {r!r} is outside the open unit disk")
    return math.log1p(r) - math.log1p(-r)


def distance_from_gap(r: float, gap: float) -> float:
    """``log((1+r)/(1-r))`` given ``gap = 1 - r^2`` computed independently.

    Stays accurate when ``r`` has rounded to 1.
    """
    return 2.0 * math.log1p(r) - math.log(gap)


def mobius_distance(m1: MobiusMap, m2: MobiusMap) -> float:
    """Max of the circular kappa gap and the sigma gap; used for tolerances."""
    return max(circ_dist(m1.kappa, m2.kappa), abs(m1.sigma - m2.sigma))

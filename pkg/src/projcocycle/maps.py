"""Analytic circle diffeomorphisms as immutable expression trees.

Every node evaluates a *raw lift* ``F: R -> R`` with ``F(x + 2pi) = F(x) + 2pi``
and its exact 2-jet.  Public ``lift`` shifts the raw lift by a multiple of
``2pi`` so that ``lift(0)`` lies in ``[0, 2pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

from projcocycle.geometry import (
    TWO_PI,
    Jet2,
    MobiusMap,
    NumericalError,
    canon,
    lift_offset,
    mobius_invert,
    mobius_jet,
)

__all__ = [
    "Arnold",
    "CircleMap",
    "Compose",
    "Conjugate",
    "Inverse",
    "Jet2",
    "Mobius",
    "Power",
    "Rotation",
    "identity",
    "inverse_eval",
    "iterate_jet",
    "jet",
    "rotation_number",
]

BISECTION_STEPS = 200


class CircleMap:
    """Base class for orientation-preserving analytic circle diffeomorphisms."""

    def _lift(self, x: float) -> float:
        raise NotImplementedError

    def _jet(self, x: float) -> tuple[float, float, float]:
        raise NotImplementedError

    @cached_property
    def _shift(self) -> float:
        return TWO_PI * math.floor(self._lift(0.0) / TWO_PI)

    def lift(self, x: float) -> float:
        return self._lift(x) - self._shift

    def lift_jet(self, x: float) -> tuple[float, float, float]:
        v, d1, d2 = self._jet(x)
        return v - self._shift, d1, d2

    def __call__(self, theta: float) -> float:
        return canon(self._lift(theta))

    def jet(self, theta: float) -> Jet2:
        v, d1, d2 = self._jet(theta)
        return Jet2(canon(v), d1, d2)

    def to_spec(self) -> str:
        raise TypeError(f"{type(self).__name__} has no map-spec representation")

    def __str__(self) -> str:
        try:
            return self.to_spec()
        except TypeError:
            return repr(self)


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True, eq=True)
class Rotation(CircleMap):
    alpha: float

    def _lift(self, x):
        return x + self.alpha

    def _jet(self, x):
        return x + self.alpha, 1.0, 0.0

    def to_spec(self):
        return f"rot:{_fmt(self.alpha)}"


def identity() -> Rotation:
    return Rotation(0.0)


@dataclass(frozen=True, eq=True)
class Mobius(CircleMap):
    m: MobiusMap

    def _lift(self, x):
        return x + self.m.kappa + lift_offset(self.m.sigma, x)

    def _jet(self, x):
        _, d1, d2 = mobius_jet(self.m, x)
        return self._lift(x), d1, d2

    def to_spec(self):
        s = self.m.sigma
        sign = "-" if math.copysign(1.0, s.imag) < 0 else "+"
        return f"mobius:kappa={_fmt(self.m.kappa)},sigma={_fmt(s.real)}{sign}{_fmt(abs(s.imag))}i"


@dataclass(frozen=True, eq=True)
class Arnold(CircleMap):
    """``theta -> theta + a + b sin(theta)``."""

    a: float
    b: float

    def __post_init__(self):
        if not abs(self.b) < 1.0:
            raise ValueError("|b| must be < 1")

    def _lift(self, x):
        return x + self.a + self.b * math.sin(x)

    def _jet(self, x):
        s, c = math.sin(x), math.cos(x)
        return x + self.a + self.b * s, 1.0 + self.b * c, -self.b * s

    def to_spec(self):
        return f"arnold:a={_fmt(self.a)},b={_fmt(self.b)}"


def _chain(outer, inner):
    """Jet of ``F o G`` from the jet of ``F`` at ``G(x)`` and the jet of ``G`` at ``x``."""
    _, g1, g2 = inner
    v, f1, f2 = outer
    return v, f1 * g1, f2 * g1 * g1 + f1 * g2


@dataclass(frozen=True, eq=True)
class Compose(CircleMap):
    """``f o g``."""

    f: CircleMap
    g: CircleMap

    def _lift(self, x):
        return self.f._lift(self.g._lift(x))

    def _jet(self, x):
        jg = self.g._jet(x)
        return _chain(self.f._jet(jg[0]), jg)

    def to_spec(self):
        return f"comp({self.f.to_spec()},{self.g.to_spec()})"


def solve_lift(F, y: float, c0: float) -> float:
    """Solve ``F(x) = y`` for a monotone lift ``F`` with ``F(0) = c0`` by bisection."""
    # F(x) - x stays within 2pi of F(0) - 0 for a homeomorphism lift
    lo = y - c0 - TWO_PI
    hi = y - c0 + TWO_PI
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * max(1.0, abs(mid)) or mid <= lo or mid >= hi:
            break
        if F(mid) < y:
            lo = mid
        else:
            hi = mid
    else:
        raise NumericalError(f"bisection did not converge after {BISECTION_STEPS} steps")
    flo, fhi = F(lo), F(hi)
    x = lo if abs(flo - y) <= abs(fhi - y) else hi
    if not (flo <= y <= fhi) or abs(F(x) - y) > 1e-9:
        raise NumericalError(f"lift is not monotone near {y!r}; cannot invert")
    return x


def inverse_expr(f: CircleMap) -> CircleMap | None:
    """A closed-form expression for ``f^{-1}``, or None when only bisection works."""
    if isinstance(f, Rotation):
        return Rotation(-f.alpha)
    if isinstance(f, Mobius):
        return Mobius(mobius_invert(f.m))
    if isinstance(f, Inverse):
        return f.f
    if isinstance(f, Compose):
        return Compose(Inverse(f.g), Inverse(f.f))
    if isinstance(f, Power):
        return Power(f.f, -f.n)
    if isinstance(f, Conjugate):
        return Conjugate(f.phi, Inverse(f.f))
    return None


@dataclass(frozen=True, eq=True)
class Inverse(CircleMap):
    f: CircleMap

    @cached_property
    def _closed(self):
        return inverse_expr(self.f)

    @cached_property
    def _c0(self):
        return self.f._lift(0.0)

    def _lift(self, x):
        if self._closed is not None:
            return self._closed._lift(x)
        return solve_lift(self.f._lift, x, self._c0)

    def _jet(self, x):
        if self._closed is not None:
            return self._closed._jet(x)
        x0 = solve_lift(self.f._lift, x, self._c0)
        _, d1, d2 = self.f._jet(x0)
        return x0, 1.0 / d1, -d2 / d1**3

    def to_spec(self):
        return f"inv({self.f.to_spec()})"


@dataclass(frozen=True, eq=True)
class Power(CircleMap):
    f: CircleMap
    n: int

    def __post_init__(self):
        if int(self.n) != self.n:
            raise ValueError(f"power must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @cached_property
    def _step(self) -> CircleMap:
        return self.f if self.n >= 0 else Inverse(self.f)

    def _lift(self, x):
        step = self._step._lift
        for _ in range(abs(self.n)):
            x = step(x)
        return x

    def _jet(self, x):
        step = self._step._jet
        v, d1, d2 = x, 1.0, 0.0
        for _ in range(abs(self.n)):
            v, s1, s2 = step(v)
            d1, d2 = s1 * d1, s2 * d1 * d1 + s1 * d2
        return v, d1, d2

    def to_spec(self):
        return f"pow({self.f.to_spec()},{self.n})"


@dataclass(frozen=True, eq=True)
class Conjugate(CircleMap):
    """``phi o f o phi^{-1}``."""

    phi: CircleMap
    f: CircleMap

    @cached_property
    def _expanded(self) -> CircleMap:
        return Compose(self.phi, Compose(self.f, Inverse(self.phi)))

    def _lift(self, x):
        return self._expanded._lift(x)

    def _jet(self, x):
        return self._expanded._jet(x)

    def to_spec(self):
        return f"conj({self.phi.to_spec()},{self.f.to_spec()})"


def jet(f: CircleMap, theta: float) -> Jet2:
    """Exact 2-jet of ``f`` at ``theta``."""
    return f.jet(theta)


def inverse_eval(f: CircleMap, target: float) -> float:
    """The angle ``x`` with ``f(x) = target``, by bisection on the lift of ``f``."""
    c0 = f._lift(0.0)
    y = canon(target)
    return canon(solve_lift(f._lift, y, c0))


def rotation_number(f: CircleMap, n_iters: int = 1000, tol: float | None = None) -> float:
    """Birkhoff estimate of the rotation number, in radians in ``[0, 2pi)``.

    The estimate is within ``2pi / n_iters`` of the true value; passing ``tol``
    raises ``n_iters`` until that bound is below ``tol``.
    """
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    if isinstance(f, Rotation):
        return canon(f.alpha)
    if tol is not None:
        n_iters = max(n_iters, math.ceil(TWO_PI / tol))
    x = 0.0
    F = f._lift
    for _ in range(n_iters):
        x = F(x)
    return canon(x / n_iters)


def iterate_jet(f: CircleMap, theta: float, n: int) -> list[Jet2]:
    """Jets of ``f, f^2, ..., f^n`` at ``theta``, one jet of ``f`` per step."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    v, d1, d2 = theta, 1.0, 0.0
    for _ in range(n):
        v, s1, s2 = f._jet(v)
        d1, d2 = s1 * d1, s2 * d1 * d1 + s1 * d2
        out.append(Jet2(canon(v), d1, d2))
    return out


def iterate_lifted_jets(f: CircleMap, x: float, n: int) -> list[tuple[float, float, float]]:
    """Like :func:`iterate_jet` but keeps the raw lifted orbit values."""
    out = []
    v, d1, d2 = x, 1.0, 0.0
    for _ in range(n):
        v, s1, s2 = f._jet(v)
        d1, d2 = s1 * d1, s2 * d1 * d1 + s1 * d2
        out.append((v, d1, d2))
    return out

"""The 3-point cocycle: the Möbius map through three points and their images.

All quantities are computed from lifted coordinates.  Writing ``tau`` in polar
form, ``tau = rho e^{i gamma}`` with ``rho`` a ratio of chord lengths and
``gamma = ((F3 - F1) - (x3 - x1)) / 2``, keeps the formulas accurate when the
three points are close together.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from projcocycle.geometry import (
    TWO_PI,
    MobiusMap,
    NumericalError,
    canon,
    circ_dist,
    lift_offset,
    mobius_apply,
)
from projcocycle.maps import CircleMap
from projcocycle.projective import newton_fit, projective_derivative

#: Triples whose points all lie within this distance collapse to the diagonal.
COLLAPSE_TOL = 1e-5
#: Two points closer than this are treated as one doubled point.
PAIR_TOL = 1e-5
#: Allowed defect of ``|e^{i kappa}|`` and of the interpolation conditions.
UNITARITY_TOL = 1e-9


@dataclass(frozen=True)
class Triple:
    """Three marked points of the circle.

    The coordinates are kept as given; :attr:`points` picks real representatives
    with ``x1`` in ``[-pi, pi]`` and ``x2, x3`` within ``pi`` of ``x1``.
    """

    t1: float
    t2: float
    t3: float

    @property
    def points(self) -> tuple[float, float, float]:
        x1 = math.remainder(self.t1, TWO_PI)
        x2 = x1 + math.remainder(self.t2 - x1, TWO_PI)
        x3 = x1 + math.remainder(self.t3 - x1, TWO_PI)
        return x1, x2, x3

    @property
    def gaps(self) -> tuple[float, float, float]:
        """Circular distances ``(|t1 t2|, |t2 t3|, |t1 t3|)``."""
        return (
            circ_dist(self.t1, self.t2),
            circ_dist(self.t2, self.t3),
            circ_dist(self.t1, self.t3),
        )

    @property
    def degenerate(self) -> bool:
        return min(self.gaps) < PAIR_TOL

    def canonical(self) -> tuple[float, float, float]:
        return canon(self.t1), canon(self.t2), canon(self.t3)

    def mapped(self, f: CircleMap) -> "Triple":
        """``(f(t1), f(t2), f(t3))`` as lifted coordinates."""
        x1, x2, x3 = self.points
        return Triple(f._lift(x1), f._lift(x2), f._lift(x3))


def _half_sin(d: float) -> float:
    return math.sin(0.5 * d)


@dataclass(frozen=True)
class PolarTau:
    rho: float
    rho_minus_one: float
    gamma: float
    spread: float  # x3 - x1
    image_spread: float  # F3 - F1


def _polar_from_lifts(xs, Fs) -> PolarTau:
    x1, x2, x3 = xs
    F1, F2, F3 = Fs
    s12, s23 = _half_sin(x2 - x1), _half_sin(x3 - x2)
    S12, S23 = _half_sin(F2 - F1), _half_sin(F3 - F2)
    den = S12 * s23
    rho = s12 * S23 / den
    if not rho > 0:
        raise NumericalError("image triple is not in the same cyclic order")
    rho_m1 = (s12 * S23 - S12 * s23) / den
    gamma = 0.5 * ((F3 - F1) - (x3 - x1))
    return PolarTau(rho, rho_m1, gamma, x3 - x1, F3 - F1)


def tau_polar(f: CircleMap, t: Triple) -> PolarTau:
    xs = t.points
    return _polar_from_lifts(xs, tuple(f._lift(x) for x in xs))


def tau(f: CircleMap, t: Triple) -> complex:
    """``(b - a)/(B - A) * (C - B)/(c - b)`` with ``a = e^{i t1}``, ``A = e^{i f(t1)}``, ..."""
    if t.degenerate:
        raise ValueError(f"degenerate triple {t.canonical()}")
    a, b, c = (cmath.exp(1j * x) for x in t.canonical())
    A, B, C = (cmath.exp(1j * f(x)) for x in t.canonical())
    return (b - a) / (B - A) * (C - B) / (c - b)


def _expi_minus_one(x: float) -> complex:
    """``e^{ix} - 1`` without cancellation."""
    return 2j * math.sin(0.5 * x) * cmath.exp(0.5j * x)


def _tau_shifted_minus_one(p: PolarTau, shift: float) -> complex:
    """``e^{i shift} tau - 1``, split so it stays accurate for small spreads."""
    a = shift + p.gamma
    return p.rho_minus_one * cmath.exp(1j * a) + _expi_minus_one(a)


def _coefficients(xs, Fs) -> tuple[complex, complex, PolarTau]:
    """``(e^{i kappa}, sigma)`` of the Möbius map sending ``xs`` to ``Fs``, unnormalized."""
    p = _polar_from_lifts(xs, Fs)
    g, Psi = p.gamma, p.image_spread
    u = _tau_shifted_minus_one(p, 0.0)
    v = _tau_shifted_minus_one(p, p.spread)
    # e^{i Psi} - tau
    w = _expi_minus_one(Psi - g) * cmath.exp(1j * g) - p.rho_minus_one * cmath.exp(1j * g)
    a = cmath.exp(1j * xs[0])
    A = cmath.exp(1j * Fs[0])
    unit = (A / a) * w / v
    sigma = (u / (a * v)).conjugate()
    return unit, sigma, p


def sigma_gap(xs, Fs) -> float:
    """``1 - |sigma|^2`` for the map sending ``xs`` to ``Fs``, free of cancellation near 1.

    With ``sigma = conj((tau - 1) / (a (e^{i psi} tau - 1)))`` the difference of
    squared moduli collapses to ``4 rho sin(psi/2) sin(Psi/2)``.
    """
    p = _polar_from_lifts(xs, Fs)
    v = _tau_shifted_minus_one(p, p.spread)
    return 4.0 * p.rho * math.sin(0.5 * p.spread) * math.sin(0.5 * p.image_spread) / abs(v) ** 2


def _two_point_fit(f: CircleMap, p: float, q: float) -> MobiusMap:
    """Möbius map matching value and derivative of ``f`` at ``p`` and the value at ``q``."""
    Fp, Dp, _ = f._jet(p)
    Fq = f._lift(q)

    def residual(x):
        kappa, wr, wi = x
        w = complex(wr, wi)
        ww = 1.0 + abs(w) ** 2
        sigma = w / math.sqrt(ww)
        ep = cmath.exp(1j * p)
        d1 = 1.0 / (ww * abs(1.0 - sigma.conjugate() * ep) ** 2)
        vp = p + kappa + lift_offset(sigma, p)
        vq = q + kappa + lift_offset(sigma, q)
        return np.array([
            math.remainder(vp - Fp, TWO_PI),
            d1 - Dp,
            math.remainder(vq - Fq, TWO_PI),
        ])

    seed = projective_derivative(f, canon(p))
    starts = []
    for s in [seed.sigma, 0j] + [cmath.rect(0.5, TWO_PI * k / 6) for k in range(6)]:
        w = s / math.sqrt(1.0 - abs(s) ** 2)
        starts.append([Fp - p - lift_offset(s, p), w.real, w.imag])
    x, _ = newton_fit(residual, starts)
    w = complex(x[1], x[2])
    return MobiusMap(x[0], w / math.sqrt(1.0 + abs(w) ** 2))


def _fallback(f: CircleMap, t: Triple) -> MobiusMap:
    x1, x2, x3 = t.points
    g12, g23, g13 = t.gaps
    if max(g12, g23, g13) < COLLAPSE_TOL:
        return projective_derivative(f, canon((x1 + x2 + x3) / 3.0))
    # exactly one pair is close; double it and keep the far point as is
    if g12 < PAIR_TOL:
        pair, far = (x1, x2), x3
    elif g23 < PAIR_TOL:
        pair, far = (x2, x3), x1
    else:
        pair, far = (x1, x3), x2
    p = pair[0] + 0.5 * math.remainder(pair[1] - pair[0], TWO_PI)
    return _two_point_fit(f, p, far)


def enlarged_cocycle(f: CircleMap, t: Triple) -> MobiusMap:
    """The Möbius map ``M_{f,t}`` sending each point of ``t`` to its image under ``f``."""
    if t.degenerate:
        return _fallback(f, t)
    xs = t.points
    Fs = tuple(f._lift(x) for x in xs)
    unit, sigma, _ = _coefficients(xs, Fs)
    defect = abs(abs(unit) - 1.0)
    if defect > UNITARITY_TOL:
        raise NumericalError(f"|e^(i kappa)| is off by {defect:.3g}")
    m = MobiusMap(cmath.phase(unit), sigma)
    for x, F in zip(xs, Fs):
        miss = circ_dist(mobius_apply(m, x), F)
        if miss > UNITARITY_TOL:
            raise NumericalError(f"enlarged cocycle misses an interpolation point by {miss:.3g}")
    return m


def sigma_norm_closed_form(f: CircleMap, t: Triple) -> float:
    """``|sigma|^2`` via ``(1 - 2 rho cos g + rho^2) / (1 - 2 rho cos(g + t3 - t1) + rho^2)``."""
    p = tau_polar(f, t)
    rho, g = p.rho, p.gamma
    return (1 - 2 * rho * math.cos(g) + rho**2) / (1 - 2 * rho * math.cos(g + p.spread) + rho**2)


@dataclass(frozen=True)
class DiagonalProbeRecord:
    eps: float
    gamma_over: float
    gamma_plus_over: float
    rho_defect_over: float
    sigma_eps: complex
    kappa_eps: float


def diagonal_limits(f: CircleMap, theta: float) -> tuple[float, float, float]:
    """Limits of the three probe ratios: ``((D-1)^2/2, (D+1)^2/2, -D2/D)``."""
    _, D, D2 = f.jet(theta)
    return (D - 1.0) ** 2 / 2.0, (D + 1.0) ** 2 / 2.0, -D2 / D


def diagonal_probe(
    f: CircleMap, theta: float, eps0: float, factor: float, steps: int
) -> list[DiagonalProbeRecord]:
    """Probe the collapse of ``(theta - eps, theta, theta + eps)`` onto the diagonal."""
    if not 0.0 < factor < 1.0:
        raise ValueError("factor must lie in (0, 1)")
    if not 0.0 < eps0 < math.pi / 2:
        raise ValueError("eps0 must lie in (0, pi/2)")
    records = []
    for k in range(steps):
        eps = eps0 * factor**k
        t = Triple(theta - eps, theta, theta + eps)
        p = tau_polar(f, t)
        # 1 - cos x = 2 sin^2(x/2)
        gamma_over = 2.0 * math.sin(0.5 * p.gamma) ** 2 / eps**2
        gamma_plus_over = 2.0 * math.sin(0.5 * (p.gamma + p.spread)) ** 2 / eps**2
        m = enlarged_cocycle(f, t)
        records.append(
            DiagonalProbeRecord(eps, gamma_over, gamma_plus_over, -p.rho_minus_one / eps, m.sigma, m.kappa)
        )
    return records

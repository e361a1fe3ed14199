"""Drift of the projective and enlarged cocycles, reductions, and boundedness bounds."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from projcocycle.geometry import (
    TWO_PI,
    MobiusMap,
    NumericalError,
    Su11Matrix,
    canon,
    disk_distance_to_origin,
    distance_from_gap,
    mobius_compose,
    mobius_invert,
)
from projcocycle.enlarged import Triple, _coefficients, _polar_from_lifts, sigma_gap
from projcocycle.maps import CircleMap
from projcocycle.projective import (
    cocycle_matrices,
    log_osculating_gap,
    scaled_jet_step,
    projective_derivative,
    su11_raw,
)

#: Agreement required between the jet formula for ``r_n`` and the composed cocycle.
CROSS_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class DriftRecord:
    """One iterate of a drift sequence.

    ``gap`` is ``1 - r_n^2`` from the same source as ``r_n``; ``cocycle_gap`` is
    ``1 - |sigma_n|^2`` read off the composed cocycle (``1/|a|^2`` of its SU(1,1)
    matrix), an independent route to the same number.
    """

    n: int
    r_n: float
    dist: float
    drift: float
    d_n: float | None = None
    delta_n: float | None = None
    gap: float | None = None
    cocycle_gap: float | None = None
    rho_n: float | None = None


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def drift_sequence(f: CircleMap, theta: float, n_max: int, check: bool = True) -> list[DriftRecord]:
    """Drift ``dist(0, sigma_n)/n`` of ``P_{f^n, theta}`` for ``n = 1..n_max``.

    ``r_n`` comes from the iterate jets ``(Df^n, D^2 f^n)``, carried as ``log Df^n``
    and a scaled second derivative so long orbits stay representable.  The
    cocycle product is carried alongside and must agree to ``CROSS_CHECK_TOL``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = []
    v, log_d, y = theta, 0.0, 0.0
    cocycle = cocycle_matrices(f, theta, n_max)
    for n in range(1, n_max + 1):
        v, s1, s2 = f._jet(v)
        log_d, y = scaled_jet_step(log_d, y, s1, s2)
        r, log_gap = log_osculating_gap(log_d, y)
        dist = 2.0 * math.log1p(r) - log_gap
        _, mat, log_scale = next(cocycle)
        if check:
            r_cocycle = abs(mat.b) / abs(mat.a)
            if not abs(r_cocycle - r) <= CROSS_CHECK_TOL:
                raise NumericalError(
                    f"r_{n} from jets ({r!r}) and from the cocycle ({r_cocycle!r}) disagree"
                )
        D = _exp(log_d)
        delta = y * D * D if log_d >= 0.0 else y * D
        cocycle_gap = _exp(-2.0 * (math.log(abs(mat.a)) + log_scale))
        out.append(DriftRecord(n, r, dist, dist / n, D, delta, _exp(log_gap), cocycle_gap))
    return out


def _final_drift(theta, f, n_max):
    return drift_sequence(f, theta, n_max)


def drift_grid(
    f: CircleMap, thetas, n_max: int, workers: int | None = None
) -> list[list[DriftRecord]]:
    """:func:`drift_sequence` over many base points, in the order given."""
    thetas = list(thetas)
    job = partial(_final_drift, f=f, n_max=n_max)
    if workers is None or workers <= 1 or len(thetas) < 2:
        return [job(t) for t in thetas]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, thetas, chunksize=max(1, len(thetas) // (4 * workers))))


def _orbit_polar(xs0, xs):
    """``rho`` and the two spreads for the triple ``xs0`` mapped to ``xs``."""
    return _polar_from_lifts(xs0, xs)


def expression_inverse_gap(xs0, xs) -> float:
    """``1/(1 - r^2)`` of the Möbius map sending ``xs0`` to ``xs``, from ``rho`` and spreads.

    ``((1-rho)^2 + 2 rho (1 - cos((psi + Psi)/2))) / (4 rho sin(psi/2) sin(Psi/2))``
    with ``psi = x3 - x1`` before and ``Psi`` after.
    """
    p = _orbit_polar(xs0, xs)
    rho, psi, Psi = p.rho, p.spread, p.image_spread
    num = p.rho_minus_one**2 + 4.0 * rho * math.sin(0.25 * (psi + Psi)) ** 2
    return num / (4.0 * rho * math.sin(0.5 * psi) * math.sin(0.5 * Psi))


def enlarged_drift_sequence(
    f: CircleMap, t: Triple, n_max: int, check: bool = True, rtol: float = CROSS_CHECK_TOL
) -> list[DriftRecord]:
    """Drift of ``M_{f^n, t}``, composed step by step along the orbit of the triple.

    Once the orbit triple itself becomes degenerate the step maps lose accuracy,
    so from then on ``M_{f^n, t}`` is built directly from ``t`` and ``f^n(t)``
    (equal by the cocycle relation).  Raises :class:`NumericalError` when the
    orbit collapses below double precision.
    """
    if t.degenerate:
        raise ValueError(f"degenerate triple {t.canonical()}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    xs0 = t.points
    xs = xs0
    acc = None
    out = []
    for n in range(1, n_max + 1):
        Fs = tuple(f._lift(x) for x in xs)
        if acc is not None and Triple(*xs).degenerate:
            acc = None  # stay on the direct route from here on
            composed = False
        else:
            composed = acc is not None or n == 1
        if min(abs(Fs[1] - Fs[0]), abs(Fs[2] - Fs[1]), TWO_PI - abs(Fs[2] - Fs[0])) < 1e-12:
            raise NumericalError(f"orbit of the triple collapsed below double precision at n={n}")
        if composed:
            unit, sigma, _ = _coefficients(xs, Fs)
            step = su11_raw(math.atan2(unit.imag, unit.real), sigma)
            acc = step if acc is None else step @ acc
            mat = acc
        else:
            unit, sigma, _ = _coefficients(xs0, Fs)
            # su11_raw would form 1 - |sigma|^2 by cancellation; use the stable gap
            s = 1.0 / math.sqrt(sigma_gap(xs0, Fs))
            h = cmath.exp(0.5j * math.atan2(unit.imag, unit.real))
            mat = Su11Matrix(h * s, -h * sigma * s)
        xs = Fs
        a2 = abs(mat.a) ** 2
        r = abs(mat.b) / abs(mat.a)
        gap = 1.0 / a2
        dist = distance_from_gap(r, gap)
        inv_gap = expression_inverse_gap(xs0, xs)
        if check and abs(inv_gap - a2) > rtol * a2:
            raise NumericalError(
                f"n={n}: composed cocycle gives 1/(1-r^2) = {a2!r}, closed form {inv_gap!r}"
            )
        rho = _orbit_polar(xs0, xs).rho
        out.append(DriftRecord(n, r, dist, dist / n, gap=gap, cocycle_gap=1.0 / inv_gap, rho_n=rho))
    return out


@dataclass(frozen=True)
class ReductionRecord:
    theta: float
    reduced: MobiusMap
    residual: float
    angle: float


def reduce_with_conjugacy(
    f: CircleMap, phi: CircleMap, grid_size: int, offset: float = 0.0
) -> list[ReductionRecord]:
    """``B(f(theta)) o P_{f,theta} o B(theta)^{-1}`` with ``B(theta) = P_{phi,theta}``.

    ``phi`` is meant to satisfy ``phi o f o phi^{-1} = rotation``; then every
    reduced map is that rotation.  The grid is ``offset + 2 pi j / grid_size``.
    """
    if grid_size < 1:
        raise ValueError("grid_size must be >= 1")
    out = []
    for j in range(grid_size):
        theta = canon(offset + TWO_PI * j / grid_size)
        B = projective_derivative(phi, theta)
        B_image = projective_derivative(phi, f(theta))
        reduced = mobius_compose(B_image, mobius_compose(projective_derivative(f, theta), mobius_invert(B)))
        out.append(ReductionRecord(theta, reduced, disk_distance_to_origin(reduced.sigma), reduced.kappa))
    return out


def boundedness_bounds(lam):
    """Bounds on ``Df`` and ``D^2 f`` implied by ``r <= lam``.

    Works for any real number type; pass a :class:`fractions.Fraction` for exact values.
    """
    if not 0 <= lam < 1:
        raise ValueError("lambda must lie in [0, 1)")
    return (1 + lam) / (1 - lam), 2 * (1 + lam) / (1 - lam) ** 2


def hyperbolic_drift_lower_bound(mu: float, n: int) -> float:
    """``mu - log(4)/n``: drift floor at a fixed point with derivative ``e^mu``."""
    return mu - math.log(4.0) / n


def exponential_rate(values) -> float:
    """Least-squares slope of ``log|v_n|`` against ``n`` over the second half of the range."""
    v = np.abs(np.asarray(values, dtype=float))
    n = np.arange(1, len(v) + 1)
    half = len(v) // 2
    n, v = n[half:], v[half:]
    keep = v > 0
    if keep.sum() < 2:
        return -math.inf
    return float(np.polyfit(n[keep], np.log(v[keep]), 1)[0])


def sup_final_drift(f: CircleMap, thetas, n: int, workers: int | None = None) -> float:
    return max(rec[-1].drift for rec in drift_grid(f, thetas, n, workers))

"""Projective derivative: the Möbius map osculating a circle map to second order."""

from __future__ import annotations

import cmath
import math

import numpy as np

from projcocycle.geometry import (
    Jet2,
    MobiusMap,
    NumericalError,
    Su11Matrix,
    canon,
    lift_offset,
    mobius_compose,
)
from projcocycle.maps import CircleMap

DEGENERATE_TOL = 1e-12


def _check_jet(j: Jet2):
    if not j.d1 > 0:
        raise ValueError(f"jet derivative must be positive, got {j.d1!r}")


def osculating_terms(d1: float, d2: float) -> tuple[float, float]:
    """``(D^2(D-1)^2 + Delta^2, D^2(D+1)^2 + Delta^2)`` for ``D = d1, Delta = d2``."""
    dd = d1 * d1
    return dd * (d1 - 1.0) ** 2 + d2 * d2, dd * (d1 + 1.0) ** 2 + d2 * d2


def osculating_radius(d1: float, d2: float) -> float:
    """``|sigma|`` of the osculating Möbius map of a jet with derivatives ``d1, d2``."""
    if d1 >= 1.0:
        # divide through by D^4 so large iterates do not overflow
        inv, t = 1.0 / d1, d2 / (d1 * d1)
        return math.sqrt(((1.0 - inv) ** 2 + t * t) / ((1.0 + inv) ** 2 + t * t))
    minus, plus = osculating_terms(d1, d2)
    return math.sqrt(minus / plus)


def osculating_gap(d1: float, d2: float) -> float:
    """``1 - r^2 = 4 D^3 / (D^2 (D+1)^2 + Delta^2)`` without forming ``1 - r*r``."""
    if d1 >= 1.0:
        t = d2 / d1
        return 4.0 / (d1 + 2.0 + 1.0 / d1 + t * t / d1)
    _, plus = osculating_terms(d1, d2)
    return 4.0 * d1**3 / plus


def log_osculating_gap(log_d1: float, y: float) -> tuple[float, float]:
    """``(r, log(1 - r^2))`` from ``log D`` and a scaled second derivative.

    ``y`` is ``Delta / D`` when ``D < 1`` and ``Delta / D^2`` when ``D >= 1``; each
    stays bounded in its regime.  With ``u = Delta / D`` the gap reads
    ``4D / ((D+1)^2 + u^2)``, so neither ``D^3`` nor ``Delta^2`` is formed.
    """
    if log_d1 >= 0.0:
        t = math.exp(-log_d1)  # 1/D, and y = u t
        r = math.hypot(1.0 - t, y) / math.hypot(1.0 + t, y)
        return r, math.log(4.0) - log_d1 - 2.0 * math.log(math.hypot(1.0 + t, y))
    d = math.exp(log_d1)
    r = math.hypot(d - 1.0, y) / math.hypot(d + 1.0, y)
    return r, math.log(4.0) + log_d1 - 2.0 * math.log(math.hypot(1.0 + d, y))


def scaled_jet_step(log_d1: float, y: float, s1: float, s2: float) -> tuple[float, float]:
    """Advance ``(log D, y)`` of :func:`log_osculating_gap` by one step with jet ``(s1, s2)``.

    The chain rule ``D' = s1 D``, ``Delta' = s2 D^2 + s1 Delta`` becomes
    ``u' = u + (s2/s1) D`` for ``u = Delta/D`` and ``w' = s2/s1^2 + w/s1`` for
    ``w = Delta/D^2``.
    """
    new_log = log_d1 + math.log(s1)
    if log_d1 < 0.0:
        u = y + s2 / s1 * math.exp(log_d1)
        return new_log, (u * math.exp(-new_log) if new_log >= 0.0 else u)
    w = s2 / (s1 * s1) + y / s1
    return new_log, (w * math.exp(new_log) if new_log < 0.0 else w)


def r_squared_roots(d1: float, d2: float) -> tuple[float, float]:
    """Both roots in ``r^2`` of the quartic obtained from ``sin^2 + cos^2 = 1``.

    Returns ``(admissible, discarded)``; the discarded root is 1.
    """
    minus, plus = osculating_terms(d1, d2)
    mid = d1 * d1 * (d1 * d1 + 1.0) + d2 * d2
    # plus * x^2 - 2 mid * x + minus = 0
    q = mid + math.sqrt(max(mid * mid - plus * minus, 0.0))
    return minus / q, q / plus


def jet_to_mobius(j: Jet2, theta: float) -> MobiusMap:
    """The unique Möbius map whose 2-jet at ``theta`` is ``j``."""
    _check_jet(j)
    D, delta = j.d1, j.d2
    if abs(D - 1.0) < DEGENERATE_TOL and abs(delta) < DEGENERATE_TOL:
        return MobiusMap(j.value - theta, 0j)
    r = osculating_radius(D, delta)
    # sin(beta), cos(beta) share the positive denominator sqrt(minus * plus)
    beta = math.atan2(-2.0 * D * delta, D * D * (D * D - 1.0) + delta * delta)
    sigma = cmath.rect(r, theta - beta)
    return MobiusMap(j.value - theta - lift_offset(sigma, theta), sigma)


def projective_derivative(f: CircleMap, theta: float) -> MobiusMap:
    return jet_to_mobius(f.jet(theta), theta)


def _residual(p, j: Jet2, theta: float) -> np.ndarray:
    kappa, u, v = p
    w = complex(u, v)
    ww = 1.0 + abs(w) ** 2
    sigma = w / math.sqrt(ww)
    e = cmath.exp(1j * theta)
    q = abs(1.0 - sigma.conjugate() * e) ** 2
    d1 = 1.0 / (ww * q)
    d2 = 2.0 * (sigma * e.conjugate()).imag / (ww * q * q)
    value = theta + kappa + lift_offset(sigma, theta)
    return np.array([math.remainder(value - j.value, 2.0 * math.pi), d1 - j.d1, d2 - j.d2])


def _starts(j: Jet2, theta: float):
    sigmas = [0j] + [cmath.rect(0.5, 2.0 * math.pi * k / 7) for k in range(7)]
    for s in sigmas:
        w = s / math.sqrt(1.0 - abs(s) ** 2)
        yield np.array([j.value - theta - lift_offset(s, theta), w.real, w.imag])


def newton_fit(residual, starts, tol: float = 1e-10, max_iter: int = 200, h: float = 1e-7):
    """Damped Newton with a central-difference Jacobian; best root over all starts."""
    best, best_res = None, math.inf
    for p in starts:
        p = np.asarray(p, dtype=float)
        res = residual(p)
        norm = np.max(np.abs(res))
        for _ in range(max_iter):
            if norm < 1e-15:
                break
            J = np.empty((len(res), len(p)))
            for k in range(len(p)):
                step = h * max(1.0, abs(p[k]))
                e = np.zeros_like(p)
                e[k] = step
                J[:, k] = (residual(p + e) - residual(p - e)) / (2 * step)
            try:
                dp = np.linalg.solve(J, -res)
            except np.linalg.LinAlgError:
                break
            t = 1.0
            while t > 1e-6:
                trial = p + t * dp
                trial_res = residual(trial)
                trial_norm = np.max(np.abs(trial_res))
                if trial_norm < norm:
                    break
                t *= 0.5
            else:
                break
            p, res, norm = trial, trial_res, trial_norm
        if norm < best_res:
            best, best_res = p, norm
        if best_res < tol * 1e-3:
            break
    if best is None or best_res >= tol:
        raise NumericalError(f"Newton fit did not converge (residual {best_res:.3g})")
    return best, best_res


def oracle_fit_mobius(j: Jet2, theta: float) -> MobiusMap:
    """Solve the three osculation conditions numerically.

    Unknowns are ``kappa`` and ``w = sigma / sqrt(1 - |sigma|^2)``, which maps the
    open disk onto the plane so Newton steps cannot leave it.
    """
    _check_jet(j)
    p, _ = newton_fit(lambda p: _residual(p, j, theta), _starts(j, theta))
    w = complex(p[1], p[2])
    return MobiusMap(p[0], w / math.sqrt(1.0 + abs(w) ** 2))


def cocycle_iterates(f: CircleMap, theta: float, n: int) -> list[MobiusMap]:
    """``[P_{f,theta}, P_{f^2,theta}, ..., P_{f^n,theta}]`` via the cocycle relation."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    x = theta
    acc = None
    for _ in range(n):
        step = projective_derivative(f, x)
        acc = step if acc is None else mobius_compose(step, acc)
        out.append(acc)
        x = f(x)
    return out


def su11_raw(kappa: float, sigma: complex) -> Su11Matrix:
    """Unit-determinant matrix of a Möbius map, without the sign convention."""
    s = 1.0 / math.sqrt(1.0 - abs(sigma) ** 2)
    h = cmath.exp(0.5j * kappa)
    return Su11Matrix(h * s, -h * sigma * s)


def cocycle_matrices(f: CircleMap, theta: float, n: int):
    """Yield ``(orbit point, matrix, log_scale)`` for ``P_{f^k,theta}``, ``k = 1..n``.

    The matrix of ``P_{f^k,theta}`` is ``e^{log_scale}`` times the one yielded.
    Products are never renormalized to unit determinant, so ``1 - r_k^2 =
    1/|a|^2`` stays accurate when ``r_k`` is within rounding of 1; the scale only
    keeps the entries representable.
    """
    x = theta
    acc = None
    log_scale = 0.0
    for _ in range(n):
        v, d1, d2 = f._jet(x)
        m = jet_to_mobius(Jet2(canon(v), d1, d2), canon(x))
        step = su11_raw(m.kappa, m.sigma)
        acc = step if acc is None else step @ acc
        size = abs(acc.a)
        if size > 1e100:
            acc = Su11Matrix(acc.a / size, acc.b / size)
            log_scale += math.log(size)
        x = v
        yield x, acc, log_scale

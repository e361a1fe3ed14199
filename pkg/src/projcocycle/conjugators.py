"""Conjugating maps built by averaging lifts over the cyclic group generated by f."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from projcocycle.geometry import TWO_PI, circ_dist
from projcocycle.maps import CircleMap, Inverse


def _forward(f: CircleMap):
    return f.lift_jet


def _backward(f: CircleMap):
    # exact inverse of the normalized lift of f
    inv = Inverse(f)
    shift = f._shift
    return lambda y: inv._jet(y + shift)


def _orbit_jets(step, x: float, n: int):
    v, d1, d2 = x, 1.0, 0.0
    for _ in range(n):
        v, s1, s2 = step(v)
        d1, d2 = s1 * d1, s2 * d1 * d1 + s1 * d2
        yield v, d1, d2


def translation_number(f: CircleMap, n_iters: int) -> float:
    """Translation number of the normalized lift of ``f``, in radians per step."""
    x = 0.0
    for _ in range(n_iters):
        x = f.lift(x)
    return x / n_iters


@dataclass(frozen=True, eq=False)
class AveragingConjugator(CircleMap):
    """``x -> (1/(2n+1)) sum_{|k| <= n} (F^k(x) + c_k)`` over the symmetric ball.

    ``F`` is the normalized lift of ``f`` and the constants ``c_k`` are multiples
    of ``2pi`` that put ``F^k(0) + c_k`` in ``[k t - pi, k t + pi)`` where ``t`` is
    the translation number of ``F``.
    """

    f: CircleMap
    n: int
    offsets: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        t = translation_number(self.f, max(2000, 100 * self.n))
        offsets = {0: 0.0}
        for sign, step in ((1, _forward(self.f)), (-1, _backward(self.f))):
            for k, (v, _, _) in enumerate(_orbit_jets(step, 0.0, self.n), start=1):
                target = sign * k * t
                offsets[sign * k] = -TWO_PI * math.floor((v - target + math.pi) / TWO_PI)
        object.__setattr__(self, "offsets", offsets)

    def _terms(self, x):
        yield x, 1.0, 0.0
        for sign, step in ((1, _forward(self.f)), (-1, _backward(self.f))):
            for k, (v, d1, d2) in enumerate(_orbit_jets(step, x, self.n), start=1):
                yield v + self.offsets[sign * k], d1, d2

    def _jet(self, x):
        sv = s1 = s2 = 0.0
        for v, d1, d2 in self._terms(x):
            sv += v
            s1 += d1
            s2 += d2
        m = 2 * self.n + 1
        return sv / m, s1 / m, s2 / m

    def _lift(self, x):
        return self._jet(x)[0]


def averaging_conjugator(f: CircleMap, n: int) -> AveragingConjugator:
    return AveragingConjugator(f, n)


@dataclass(frozen=True, eq=False)
class FiniteOrderConjugator(CircleMap):
    """Conjugacy of a map of exact order ``k`` to the rotation by ``rho``.

    ``x -> (1/k) sum_{j<k} (F^j(x) - j rho)`` where ``F^k(x) = x + k rho``.  The
    ``- j rho`` centering makes the conjugator of a rotation the identity.
    """

    f: CircleMap
    k: int
    rho: float = field(init=False)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        grid = [TWO_PI * i / 64 for i in range(64)]
        for x in grid:
            y = x
            for _ in range(self.k):
                y = self.f(y)
            if circ_dist(y, x) > 1e-9:
                raise ValueError(f"map does not have order {self.k} (f^k({x!r}) = {y!r})")
        y = 0.0
        for _ in range(self.k):
            y = self.f.lift(y)
        turns = round(y / TWO_PI)
        object.__setattr__(self, "rho", TWO_PI * turns / self.k)

    def _jet(self, x):
        sv, s1, s2 = x, 1.0, 0.0
        for j, (v, d1, d2) in enumerate(_orbit_jets(self.f.lift_jet, x, self.k - 1), start=1):
            sv += v - j * self.rho
            s1 += d1
            s2 += d2
        return sv / self.k, s1 / self.k, s2 / self.k

    def _lift(self, x):
        return self._jet(x)[0]


def finite_order_conjugator(f: CircleMap, k: int) -> FiniteOrderConjugator:
    return FiniteOrderConjugator(f, k)

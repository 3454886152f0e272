"""Complex arithmetic on the Riemann sphere, circle reflections, and small
polynomial solvers shared by the dynamics modules.

The point at infinity is a first-class value: circle reflection swaps the
center with infinity exactly, and the critical orbit of every map in the
circle-and-cardioid family passes through it (0 -> inf -> a).  It is therefore
a dedicated sentinel, never a large float.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union


class _Infinity:
    """Singleton for the point at infinity; equal only to itself."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

#: A point of the plane (as ``complex``) or the point at infinity.
ComplexPoint = Union[complex, _Infinity]


def is_infinity(p: ComplexPoint) -> bool:
    if p is INFINITY:
        return True
    if isinstance(p, _Infinity):
        return True
    # A non-finite float crept in through arithmetic: treat as infinity.
    if isinstance(p, complex) and not (math.isfinite(p.real) and math.isfinite(p.imag)):
        return True
    return False


def as_complex(p: ComplexPoint) -> complex:
    if is_infinity(p):
        raise ValueError("point at infinity where a finite point is required")
    return complex(p)


#: Beyond this modulus a float behaves as the point at infinity (|z|^2 would
#: overflow); the chordal error made by the identification is ~1/HUGE.
HUGE = 1e150


def chordal(p: ComplexPoint, q: ComplexPoint) -> float:
    """Chordal (spherical) distance; infinity participates with distance
    2/sqrt(1+|z|^2) to finite z."""
    pinf = is_infinity(p) or abs(complex(p)) > HUGE
    qinf = is_infinity(q) or abs(complex(q)) > HUGE
    if pinf and qinf:
        return 0.0
    if pinf or qinf:
        z = q if pinf else p
        return 2.0 / math.hypot(1.0, abs(complex(z)))
    p, q = complex(p), complex(q)
    return 2.0 * (abs(p - q) / math.hypot(1.0, abs(p))) / math.hypot(1.0, abs(q))


@dataclass(frozen=True)
class Circle:
    """A Euclidean circle with finite center and positive radius."""

    center: complex
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise ValueError("circle center must be finite")
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise ValueError("circle radius must be positive and finite")


def reflect_in_circle(circle: Circle, z: ComplexPoint) -> ComplexPoint:
    """Inversion z -> c + r^2 / conj(z - c).

    Fixes the circle pointwise, swaps center and infinity, and is an
    involution.
    """
    c = circle.center
    if is_infinity(z):
        return c
    z = complex(z)
    d = z - c
    if d == 0:
        return INFINITY
    return c + (circle.radius * circle.radius) / d.conjugate()


# ---------------------------------------------------------------------------
# Root solvers (degree <= 3), deterministic ordering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    """Roots of a polynomial, repeated according to multiplicity and ordered
    lexicographically by (re, im) after rounding at 1e-12."""

    roots: tuple

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def count_near(self, z: complex, tol: float = 1e-6) -> int:
        return sum(1 for r in self.roots if abs(r - z) <= tol)


def _ordered(roots) -> RootSet:
    key = lambda z: (round(z.real, 12), round(z.imag, 12))
    return RootSet(tuple(sorted((complex(r) for r in roots), key=key)))


def solve_quadratic(b: complex, c: complex) -> RootSet:
    """Both roots of z^2 + b z + c, double roots repeated."""
    b, c = complex(b), complex(c)
    if b == 0 and c == 0:
        return _ordered((0j, 0j))
    s = cmath.sqrt(b * b - 4 * c)
    # Pick the sign that avoids cancellation in -b -/+ s.
    if (b.conjugate() * s).real > 0:
        s = -s
    r1 = (-b - s) / 2
    r2 = c / r1 if r1 != 0 else (-b + s) / 2
    return _ordered((r1, r2))


def solve_cubic_monic(a2: complex, a1: complex, a0: complex) -> RootSet:
    """All three roots of w^3 + a2 w^2 + a1 w + a0.

    Cardano in depressed form followed by one Newton polish per root; the
    polish is skipped where the derivative is tiny (multiple roots), where
    Cardano is already as good as the conditioning allows.
    """
    a2, a1, a0 = complex(a2), complex(a1), complex(a0)
    p = a1 - a2 * a2 / 3
    q = 2 * a2 ** 3 / 27 - a2 * a1 / 3 + a0
    s = cmath.sqrt(q * q / 4 + p ** 3 / 27)
    cand1, cand2 = -q / 2 + s, -q / 2 - s
    big = cand1 if abs(cand1) >= abs(cand2) else cand2
    if big == 0:
        # p = q = 0: triple root of the depressed cubic.
        t_roots = [0j, 0j, 0j]
    else:
        u = cmath.exp(cmath.log(big) / 3)
        v = -p / (3 * u)
        w1 = cmath.exp(2j * cmath.pi / 3)
        w2 = w1.conjugate()
        t_roots = [u + v, u * w1 + v * w2, u * w2 + v * w1]
    scale = 1.0 + max(abs(a2), abs(a1), abs(a0))
    roots = []
    for t in t_roots:
        w = t - a2 / 3
        for _ in range(2):
            f = ((w + a2) * w + a1) * w + a0
            fp = (3 * w + 2 * a2) * w + a1
            if abs(fp) <= 1e-8 * scale:
                break
            w = w - f / fp
        roots.append(w)
    return _ordered(roots)

"""Ideal triangle group, its boundary Markov coding, and the circle conjugacy
to the anti-doubling map.

The group is generated by reflections in three pairwise tangent circles of
radius sqrt(3) centered at 1 + sqrt(3) i, -2, and 1 - sqrt(3) i; all three are
orthogonal to the unit circle, so the reflections are disk automorphisms, and
the tangency points are the cube roots of unity.  The piecewise reflection rho
acts on the disk minus the central ideal triangle and extends to an
orientation-reversing double cover of the circle with the three-arc Markov
partition whose transition matrix has zero diagonal.

The anti-doubling map theta -> -2 theta on R/Z carries the same partition
I1 = [0,1/3], I2 = [1/3,2/3], I3 = [2/3,1] with the same transition matrix;
matching itineraries defines the circle homeomorphism E conjugating rho to
anti-doubling.  E is computed here as a finite-depth nested interval with an
explicit width, never as a bare float.  The classical Minkowski question-mark
function, a close relative built on the Farey/dyadic trees, is evaluated
exactly in rational arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .core import Circle, reflect_in_circle
from .errors import AmbiguousEndpointError, DomainError, InadmissibleWordError

SQRT3 = math.sqrt(3.0)

#: Generating circles; reflection in circle k fixes the side of the ideal
#: triangle carried by the unit-circle arc of angles I_k.
C1 = Circle(complex(1.0, SQRT3), SQRT3)
C2 = Circle(complex(-2.0, 0.0), SQRT3)
C3 = Circle(complex(1.0, -SQRT3), SQRT3)
CIRCLES = (C1, C2, C3)

#: Ideal vertices (pairwise tangency points): cusp k is shared by the two
#: arcs adjacent to angle k/3.
CUSPS = (1 + 0j, cmath.exp(2j * cmath.pi / 3), cmath.exp(4j * cmath.pi / 3))

ONE_THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)


@dataclass(frozen=True)
class ItineraryWord:
    """A finite admissible word over {1,2,3}: no two consecutive symbols are
    equal (the transition matrix has zero diagonal)."""

    symbols: Tuple[int, ...]

    def __post_init__(self):
        for s in self.symbols:
            if s not in (1, 2, 3):
                raise InadmissibleWordError(f"symbol {s} not in {{1,2,3}}")
        for u, v in zip(self.symbols, self.symbols[1:]):
            if u == v:
                raise InadmissibleWordError(
                    f"consecutive repeat {u}{v} in {self.symbols}")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]


def count_admissible_words(n: int) -> int:
    """Number of admissible words of length n; equals 3 * 2^(n-1) for n >= 1
    (each symbol after the first has two continuations)."""
    if n <= 0:
        return 1 if n == 0 else 0
    count = 0
    stack = [(s,) for s in (1, 2, 3)]
    while stack:
        w = stack.pop()
        if len(w) == n:
            count += 1
            continue
        for s in (1, 2, 3):
            if s != w[-1]:
                stack.append(w + (s,))
    return count


def rational_angle(num: int, den: int) -> Fraction:
    """Reduced angle in [0, 1)."""
    return Fraction(num, den) % 1


# ---------------------------------------------------------------------------
# The reflection map rho and tiles
# ---------------------------------------------------------------------------

def region_index(z: complex) -> int:
    """Index k of the lune D_k (or boundary arc) containing z, or 0 inside the
    fundamental triangle.

    A point of the closed disk lies in D_k exactly when it lies inside circle
    C_k; the central triangle is outside all three.
    """
    z = complex(z)
    if abs(z) > 1 + 1e-9:
        raise DomainError(f"{z} is outside the closed unit disk")
    for k, c in enumerate(CIRCLES, start=1):
        if abs(z - c.center) <= c.radius:
            return k
    return 0


def rho(z: complex) -> complex:
    """The piecewise reflection: rho_k on the component containing rho_k(Pi).

    Defined on the closed disk minus the open fundamental triangle; the unit
    circle maps to itself as an orientation-reversing double cover.
    """
    k = region_index(z)
    if k == 0:
        raise DomainError(f"{z} lies in the fundamental triangle interior")
    return reflect_in_circle(CIRCLES[k - 1], complex(z))


def _arc_points(circle: Circle, p: complex, q: complex, n: int):
    """n+1 points of the minor arc of `circle` from p to q."""
    a0 = cmath.phase(p - circle.center)
    a1 = cmath.phase(q - circle.center)
    d = (a1 - a0) % (2 * math.pi)
    if d > math.pi:
        d -= 2 * math.pi
    return [circle.center + circle.radius * cmath.exp(1j * (a0 + d * t / n))
            for t in range(n + 1)]


def fundamental_triangle_boundary(resolution: int = 32):
    """Closed polyline through the three sides of the ideal triangle."""
    pts = []
    pts += _arc_points(C1, CUSPS[0], CUSPS[1], resolution)[:-1]
    pts += _arc_points(C2, CUSPS[1], CUSPS[2], resolution)[:-1]
    pts += _arc_points(C3, CUSPS[2], CUSPS[0], resolution)[:-1]
    return pts


def tile(word: ItineraryWord, resolution: int = 32):
    """Polygonal approximation of the tile rho_{i1} o ... o rho_{ik}(Pi)."""
    if not isinstance(word, ItineraryWord):
        word = ItineraryWord(tuple(word))
    pts = fundamental_triangle_boundary(resolution)
    for s in reversed(tuple(word)):
        circ = CIRCLES[s - 1]
        pts = [reflect_in_circle(circ, p) for p in pts]
    return pts


# ---------------------------------------------------------------------------
# Anti-doubling itineraries (exact rational arithmetic)
# ---------------------------------------------------------------------------

def _interval_symbol(theta: Fraction, side: Optional[int]) -> int:
    """Markov symbol of an exact angle; partition endpoints need a side
    (+1 = counterclockwise limit, -1 = clockwise)."""
    if theta == 0:
        if side is None:
            raise AmbiguousEndpointError("angle 0 is a partition endpoint")
        return 1 if side > 0 else 3
    if theta == ONE_THIRD:
        if side is None:
            raise AmbiguousEndpointError("angle 1/3 is a partition endpoint")
        return 2 if side > 0 else 1
    if theta == TWO_THIRDS:
        if side is None:
            raise AmbiguousEndpointError("angle 2/3 is a partition endpoint")
        return 3 if side > 0 else 2
    if theta < ONE_THIRD:
        return 1
    if theta < TWO_THIRDS:
        return 2
    return 3


@dataclass(frozen=True)
class AngleItinerary:
    """Eventually periodic symbol stream of an angle under theta -> -2 theta."""

    preperiod: ItineraryWord
    period: ItineraryWord

    def prefix(self, n: int) -> Tuple[int, ...]:
        syms = list(self.preperiod.symbols)
        cyc = self.period.symbols
        while len(syms) < n:
            syms.extend(cyc)
        return tuple(syms[:n])


def itinerary_of_angle(theta: Fraction, side: Optional[int] = 1) -> AngleItinerary:
    """Exact itinerary of a rational angle under anti-doubling.

    Partition-endpoint hits are resolved by the side flag, which flips at each
    step because the map reverses orientation; pass side=None to get the
    AMBIGUOUS_ENDPOINT error instead.
    """
    theta = Fraction(theta) % 1
    endpoints = (Fraction(0), ONE_THIRD, TWO_THIRDS)
    seen = {}
    symbols = []
    th, sd = theta, side
    while True:
        # the side flag only disambiguates at partition endpoints, so it is
        # dropped from the key elsewhere (odd periods would otherwise double)
        key = (th, sd if th in endpoints else 0)
        if key in seen:
            break
        seen[key] = len(symbols)
        symbols.append(_interval_symbol(th, sd))
        th = (-2 * th) % 1
        sd = None if sd is None else -sd
    start = seen[key]
    return AngleItinerary(
        preperiod=ItineraryWord(tuple(symbols[:start])),
        period=ItineraryWord(tuple(symbols[start:])),
    )


def _pullback_interval(sym: int, lo: Fraction, hi: Fraction):
    """Inverse branch of theta -> -2 theta landing in I_sym, applied to an
    interval contained in the admissible image of I_sym."""
    bounds = {1: (Fraction(0), ONE_THIRD),
              2: (ONE_THIRD, TWO_THIRDS),
              3: (TWO_THIRDS, Fraction(1))}[sym]
    out = []
    for t in (lo, hi):
        p = (-t / 2) % 1
        cands = (p, (p + Fraction(1, 2)) % 1)
        picked = [c for c in cands if bounds[0] <= c <= bounds[1]]
        if not picked:
            # endpoint of the full circle: t = 0 pulls back to 0 or 1/2 and to 1
            picked = [c for c in cands + (Fraction(1),)
                      if bounds[0] <= c <= bounds[1]]
        out.append(picked[0])
    lo2, hi2 = min(out), max(out)
    return lo2, hi2


def _nested_interval(symbols: Sequence[int]):
    """Angles whose anti-doubling itinerary starts with `symbols`."""
    bounds = {1: (Fraction(0), ONE_THIRD),
              2: (ONE_THIRD, TWO_THIRDS),
              3: (TWO_THIRDS, Fraction(1))}
    lo, hi = bounds[symbols[-1]]
    for s in reversed(symbols[:-1]):
        lo, hi = _pullback_interval(s, lo, hi)
    return lo, hi


# ---------------------------------------------------------------------------
# The conjugacy E and its inverse
# ---------------------------------------------------------------------------

def _circle_symbol(z: complex, side: int) -> int:
    """Arc index of a unit-circle point; cusp hits resolved by side."""
    t = cmath.phase(z) / (2 * math.pi) % 1.0
    for k, cusp_t in ((1, 0.0), (2, 1 / 3), (3, 2 / 3)):
        if min(abs(t - cusp_t), 1 - abs(t - cusp_t)) < 1e-13:
            up = {1: 1, 2: 2, 3: 3}[k]
            down = {1: 3, 2: 1, 3: 2}[k]
            return up if side > 0 else down
    if t < 1 / 3:
        return 1
    if t < 2 / 3:
        return 2
    return 3


def circle_itinerary(zeta: complex, depth: int, side: int = 1):
    """First `depth` rho-symbols of a unit-circle point."""
    z = complex(zeta)
    z /= abs(z)
    syms = []
    sd = side
    for _ in range(depth):
        k = _circle_symbol(z, sd)
        syms.append(k)
        z = reflect_in_circle(CIRCLES[k - 1], z)
        z /= abs(z)
        sd = -sd
    return tuple(syms)


def _cusp_class(zeta: complex, tol: float = 1e-13) -> Optional[int]:
    for k, c in enumerate(CUSPS):
        if abs(complex(zeta) / abs(complex(zeta)) - c) <= tol:
            return k
    return None


def conjugacy_E(zeta: complex, depth: int, side: int = 1):
    """E(zeta) as (midpoint, width) of the nested anti-doubling interval whose
    symbols match the rho-itinerary of zeta to `depth`.

    The cusp fibers collapse (both one-sided itineraries code the same point),
    so the three cusps map to 0, 1/3, 2/3 exactly with zero width.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    k = _cusp_class(zeta)
    if k is not None:
        return Fraction(k, 3), Fraction(0)
    syms = circle_itinerary(zeta, depth, side)
    lo, hi = _nested_interval(syms)
    return (lo + hi) / 2, hi - lo


def conjugacy_E_inverse(theta: Fraction, depth: int, side: int = 1):
    """E^{-1}(theta) as (circle point, arc width): nested rho-pullback arcs
    matched to the exact anti-doubling itinerary of theta."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    theta = Fraction(theta) % 1
    if 3 * theta % 1 == 0:
        return CUSPS[int(3 * theta)], 0.0
    syms = itinerary_of_angle(theta, side).prefix(depth)
    arc_ends = {1: (CUSPS[0], CUSPS[1]), 2: (CUSPS[1], CUSPS[2]),
                3: (CUSPS[2], CUSPS[0])}
    e1, e2 = arc_ends[syms[-1]]
    for s in reversed(syms[:-1]):
        circ = CIRCLES[s - 1]
        e1 = reflect_in_circle(circ, e1)
        e2 = reflect_in_circle(circ, e2)
    t1 = cmath.phase(e1) / (2 * math.pi) % 1.0
    t2 = cmath.phase(e2) / (2 * math.pi) % 1.0
    d = (t2 - t1) % 1.0
    if d > 0.5:
        t1, t2 = t2, t1
        d = 1.0 - d
    mid = (t1 + d / 2) % 1.0
    return cmath.exp(2j * math.pi * mid), d


# ---------------------------------------------------------------------------
# Minkowski question-mark function
# ---------------------------------------------------------------------------

def question_mark(p: int, q: int) -> Fraction:
    """?(p/q) by Stern-Brocot descent with the mediant recursion
    ?((p+r)/(q+s)) = (?(p/q) + ?(r/s)) / 2; exact, with a dyadic result."""
    x = Fraction(p, q)
    if not 0 <= x <= 1:
        raise DomainError(f"question_mark requires 0 <= p/q <= 1, got {x}")
    lo, hi = Fraction(0), Fraction(1)
    vlo, vhi = Fraction(0), Fraction(1)
    if x == lo:
        return vlo
    if x == hi:
        return vhi
    while True:
        med = Fraction(lo.numerator + hi.numerator,
                       lo.denominator + hi.denominator)
        vmed = (vlo + vhi) / 2
        if x == med:
            return vmed
        if x < med:
            hi, vhi = med, vmed
        else:
            lo, vlo = med, vmed


def farey_fractions(max_den: int):
    """All reduced fractions in [0, 1] with denominator <= max_den, sorted."""
    out = {Fraction(0), Fraction(1)}
    for q in range(1, max_den + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                out.add(Fraction(p, q))
    return sorted(out)

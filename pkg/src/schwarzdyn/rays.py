"""Dynamical rays of the circle-and-cardioid maps, and group rays in the disk.

A group ray at an eventually periodic angle is the polyline through the
reflection-group orbit {0, rho_{i1}(0), rho_{i1} rho_{i2}(0), ...} of the
disk center; it lands at the circle point coded by the word.  Its image under
the inverse of the tiling-set uniformization is the dynamical ray of F_a,
realized here by pulling a droplet base point back along the inverse branches
of F_a selected by the symbols: 2 takes the circle-reflection preimage, 1/3
take the cardioid preimage in the upper/lower half plane of the inversion
parameter.

The pullback consumes the word from the tail so that consecutive points
satisfy F_a(points[k+1]) = points[k]; samples at whole period blocks converge
to the landing point, geometrically at repelling landings and polynomially at
the parabolic singular points.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import cardioid
from .cardioid import riemann_map
from .cnc import CncMap
from .core import ComplexPoint, chordal, is_infinity
from .errors import BifurcatedRayError, NotPreperiodicError
from .symbolic import CIRCLES, ItineraryWord, itinerary_of_angle

LAND_TOL = 1e-10
DEFAULT_DEPTH = 60


@dataclass(frozen=True)
class RayApprox:
    angle: Fraction
    points: List[complex]
    landing: Optional[complex]
    converged: bool


def droplet_base_point(m: CncMap) -> complex:
    """A point of the fundamental-tile interior on the far side from the
    tangency point.

    Scans the radius of the circumdisk pointing away from alpha_a and takes
    the midpoint of the run that is inside the open disk but outside the
    closed cardioid; the ray's prime end does not depend on this choice.
    """
    d = (m.a - m.alpha) / abs(m.a - m.alpha)
    fracs = [k / 100.0 for k in range(99, 0, -1)]
    run = []
    for s in fracs:
        w = m.a + s * m.r * d
        if not cardioid.contains(w, tol_boundary=1e-6):
            run.append(w)
        elif run:
            break
    if not run:
        raise BifurcatedRayError(f"no droplet interior found for a = {m.a}")
    return run[len(run) // 2]


def _pull_symbol(m: CncMap, z: ComplexPoint, sym: int) -> complex:
    """The inverse branch of F_a selected by one itinerary symbol."""
    if sym == 2:
        if is_infinity(z):
            return complex(m.a)
        z = complex(z)
        if z == m.a:
            raise BifurcatedRayError("circle-branch preimage of the center is infinity")
        return m.a + m.r * m.r / (z - m.a).conjugate()
    if is_infinity(z):
        # both cardioid preimages collide at the critical point 0
        raise BifurcatedRayError("cardioid branch collides with the critical value")
    z = complex(z)
    s = cmath.sqrt(1 - 4 * z)
    mu_plus, mu_minus = 1 + s, 1 - s  # conjugate-symmetric: Im sums to zero
    mu = None
    for cand in (mu_plus, mu_minus):
        if sym == 1 and cand.imag > 0:
            mu = cand
        if sym == 3 and cand.imag < 0:
            mu = cand
    if mu is None:
        # real roots: the two branches meet the real slice; take the root
        # giving a point of the closed cardioid, preferring the outer one
        cands = sorted((mu_plus, mu_minus), key=abs, reverse=True)
        mu = cands[0]
    if abs(mu) < 1 - 1e-9:
        raise BifurcatedRayError(
            f"required inverse branch (symbol {sym}) does not meet the cardioid at {z}")
    if abs(mu) < 1e-12:
        raise BifurcatedRayError("inverse branch collides with the critical point")
    return riemann_map(1 / mu.conjugate())


def trace_ray(m: CncMap, theta: Fraction, depth: int = DEFAULT_DEPTH,
              side: int = 1, land_tol: float = LAND_TOL) -> RayApprox:
    """Trace the dynamical ray of F_a at a rational angle by inverse-branch
    pullback of a droplet base point.

    `depth` counts repetitions of the periodic block of the itinerary.
    Convergence is declared when the chordal increments across one period
    block fall below land_tol; at the parabolic landing points (the 0-, 1/3-
    and 2/3-rays) the approach is polynomial and larger depths tighten the
    estimate.
    """
    if not isinstance(theta, Fraction):
        try:
            theta = Fraction(theta)
        except (ValueError, TypeError):
            raise NotPreperiodicError(
                f"ray angle {theta!r} is not an exact rational")
    itin = itinerary_of_angle(theta % 1, side)
    word = list(itin.preperiod.symbols) + list(itin.period.symbols) * depth
    block = max(1, len(itin.period))
    z: ComplexPoint = droplet_base_point(m)
    points = [complex(z)]
    # consume the word from the tail: period blocks first, preperiod last,
    # so that every point is the F_a-image of its successor
    for sym in reversed(word):
        z = _pull_symbol(m, z, sym)
        points.append(complex(z))
    # convergence is judged on whole-period samples of the periodic part
    # (single-step increments hop around the landing cycle, not to zero)
    end = depth * block
    incr = []
    j = end
    while j - block >= 0 and len(incr) < 2:
        incr.append(chordal(points[j], points[j - block]))
        j -= block
    converged = bool(incr) and max(incr) <= land_tol
    landing = points[-1] if converged else None
    if not converged and depth >= 2:
        # parabolic landings (the singular points) are approached like 1/depth;
        # polish the periodic fixed point by a secant iteration on the period
        # block and push it through the preperiod branches
        refined = _refine_periodic_landing(
            m, itin.period.symbols, points[end], points[end - block])
        if refined is not None:
            for sym in reversed(itin.preperiod.symbols):
                refined = _pull_symbol(m, refined, sym)
            landing = refined
    return RayApprox(angle=theta % 1, points=points, landing=landing,
                     converged=converged)


def ray_endpoint(m: CncMap, theta: Fraction, depth: int = DEFAULT_DEPTH,
                 side: int = 1) -> complex:
    """Best landing estimate: the refined landing when available, otherwise
    the final pullback point."""
    ray = trace_ray(m, theta, depth, side)
    return ray.landing if ray.landing is not None else ray.points[-1]


def _refine_periodic_landing(m: CncMap, period_syms, x1: complex, x0: complex,
                             iters: int = 80, residual_tol: float = 1e-9):
    """Secant solve of B(x) = x where B is the period block of inverse
    branches (doubled when of odd length, so B is holomorphic).

    Seeded with the last two block samples of the ray, which lie in the
    landing point's attracting basin for the inverse dynamics.  Returns None
    when the iteration leaves the seed neighborhood or fails to shrink the
    fixed-point residual.
    """
    syms = tuple(period_syms)
    if len(syms) % 2 == 1:
        syms = syms + syms

    def block(x: complex) -> complex:
        for s in reversed(syms):
            x = _pull_symbol(m, x, s)
        return complex(x)

    seed = x1
    # parabolic tails crawl, so secant steps legitimately exceed the seed
    # spacing by orders of magnitude; only guard against leaving the basin
    cap = 0.5
    try:
        g0 = block(x0) - x0
        g1 = block(x1) - x1
        for _ in range(iters):
            if abs(g1) < 1e-15 or g1 == g0:
                break
            x2 = x1 - g1 * (x1 - x0) / (g1 - g0)
            if abs(x2 - seed) > cap:
                return None
            x0, g0 = x1, g1
            x1 = x2
            g1 = block(x1) - x1
    except (BifurcatedRayError, ZeroDivisionError, OverflowError):
        return None
    if abs(g1) > residual_tol or abs(x1 - seed) > cap:
        return None
    return x1


# ---------------------------------------------------------------------------
# Group rays in the disk
# ---------------------------------------------------------------------------

def g_ray(word: ItineraryWord, depth: int = 1,
          preperiod: ItineraryWord = ItineraryWord(())) -> List[complex]:
    """Polyline of the group ray: orbit points of 0 under the prefix
    compositions of preperiod + word^depth.

    The empty word gives the single point 0; the words of the fixed cusps
    (alternating pairs) converge to the cube roots of unity.
    """
    syms = list(preperiod.symbols) + list(word.symbols) * depth
    if syms:
        ItineraryWord(tuple(syms))  # validates admissibility incl. junctions
    pts = [0j]
    # maintain the composed reflection as a Moebius matrix acting on z or
    # conj(z) depending on parity, so each new orbit point costs O(1);
    # the base point 0 is conjugation-invariant, so only the matrix matters
    mat = (1 + 0j, 0j, 0j, 1 + 0j)
    parity = 0
    for s in syms:
        c, r = CIRCLES[s - 1].center, CIRCLES[s - 1].radius
        # reflection as matrix on conj(z): (c zbar + r^2 - |c|^2) / (zbar - cbar)
        b = (c, r * r - abs(c) ** 2, 1 + 0j, -c.conjugate())
        if parity:
            b = tuple(x.conjugate() for x in b)
        a11, a12, a21, a22 = mat
        b11, b12, b21, b22 = b
        mat = (a11 * b11 + a12 * b21, a11 * b12 + a12 * b22,
               a21 * b11 + a22 * b21, a21 * b12 + a22 * b22)
        scale = max(abs(x) for x in mat)
        mat = tuple(x / scale for x in mat)
        parity ^= 1
        pts.append(mat[1] / mat[3])
    return pts

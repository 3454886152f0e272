"""The cardioid (principal period-1 component boundary shape) as a quadrature
domain.

The Riemann map is the degree-2 polynomial phi(lam) = lam/2 - lam^2/4 on the
unit disk.  Its Schwarz reflection sigma is the anti-holomorphic extension of
boundary reflection, semi-conjugate to lam -> 1/conj(lam):

    sigma(phi(lam)) = phi(1/conj(lam)) = (2 conj(lam) - 1) / (4 conj(lam)^2).

sigma fixes the boundary pointwise, has a double pole at the center 0 with
critical value infinity, and restricts to a 2-to-1 branched cover over the
exterior.  Handy exact values: sigma(0) = inf, sigma(3/16) = 0,
sigma(5/36) = -3/4.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import cmath

from .core import INFINITY, ComplexPoint, is_infinity
from .errors import DomainError

#: Half-width of the |lam| band classified as boundary.
BOUNDARY_TOL = 1e-9

CUSP = 0.25 + 0j  # phi(1), the boundary cusp


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class CardioidInversion:
    """Branch-resolved inversion of phi at a point w.

    ``inner_root`` is the root lam of phi(lam) = w with the smaller modulus
    (the two roots sum to 2, so the choice is unambiguous away from the cusp,
    where they collide at 1).
    """

    inner_root: complex
    outer_root: complex
    location: Location


def riemann_map(lam: complex) -> complex:
    lam = complex(lam)
    return lam / 2 - lam * lam / 4


def riemann_map_derivative(lam: complex) -> complex:
    return (1 - complex(lam)) / 2


def invert_riemann_map(w: complex, tol_boundary: float = BOUNDARY_TOL) -> CardioidInversion:
    """Solve lam^2 - 2 lam + 4w = 0 and classify w against the closed cardioid.

    The principal square root has nonnegative real part, so 1 - sqrt(1 - 4w)
    is always the root of smaller modulus.
    """
    w = complex(w)
    s = cmath.sqrt(1 - 4 * w)
    inner, outer = 1 - s, 1 + s
    m = abs(inner)
    if m < 1 - tol_boundary:
        loc = Location.INTERIOR
    elif m <= 1 + tol_boundary:
        loc = Location.BOUNDARY
    else:
        loc = Location.EXTERIOR
    return CardioidInversion(inner, outer, loc)


def contains(w: complex, tol_boundary: float = BOUNDARY_TOL) -> bool:
    """Membership in the closed cardioid."""
    return invert_riemann_map(w, tol_boundary).location is not Location.EXTERIOR


def schwarz_sigma(w: complex, tol_boundary: float = BOUNDARY_TOL) -> ComplexPoint:
    """Schwarz reflection of the cardioid; defined on the closed cardioid.

    The boundary is fixed pointwise, sigma(0) = infinity, and the cusp 1/4
    (double root lam = 1) maps to itself.
    """
    inv = invert_riemann_map(w, tol_boundary)
    if inv.location is Location.EXTERIOR:
        raise DomainError(f"schwarz_sigma: {w} lies outside the closed cardioid")
    lam = inv.inner_root
    if lam == 0:
        return INFINITY
    lb = lam.conjugate()
    return (2 * lb - 1) / (4 * lb * lb)


def sigma_preimages(z: ComplexPoint, tol_boundary: float = BOUNDARY_TOL) -> list:
    """All w in the closed cardioid with sigma(w) = z (0, 1, or 2 points).

    The candidates are phi(1/conj(mu)) over the roots mu of phi(mu) = z; the
    ones with |mu| >= 1 give points of the closed cardioid.  The only pole of
    sigma is 0, so z = infinity returns [0].
    """
    if is_infinity(z):
        return [0j]
    z = complex(z)
    s = cmath.sqrt(1 - 4 * z)
    pre = []
    for mu in (1 - s, 1 + s):
        if abs(mu) >= 1 - tol_boundary and mu != 0:
            w = riemann_map(1 / mu.conjugate())
            if not any(abs(w - p) <= 1e-12 for p in pre):
                pre.append(w)
    return pre


def sigma_dbar_magnitude(w: complex, tol_boundary: float = BOUNDARY_TOL) -> float:
    """|dbar sigma| at an interior point w != 0.

    Differentiating sigma(phi(lam)) = phi(1/conj(lam)) gives
    |dbar sigma| = |phi'(1/conj lam)| / (|lam|^2 |phi'(lam)|), which collapses
    to 1/|lam|^3.  It tends to 1 on the boundary mirror and blows up at the
    pole 0.
    """
    inv = invert_riemann_map(w, tol_boundary)
    if inv.location is not Location.INTERIOR:
        raise DomainError(f"sigma_dbar_magnitude: {w} is not strictly interior")
    m = abs(inv.inner_root)
    if m <= 1e-12:
        raise DomainError("sigma_dbar_magnitude: derivative has a pole at w = 0")
    return m ** -3

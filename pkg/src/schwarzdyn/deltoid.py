"""Schwarz reflection of the deltoid droplet.

The rational map phi(w) = w + 1/(2 w^2) is univalent outside the closed unit
disk; its image Omega is an unbounded quadrature domain and the complement T
(the deltoid droplet) has three 3/2-cusps at 3/2, 3/2 w, 3/2 w^2 for
w = exp(2 pi i / 3).  The Schwarz reflection is

    sigma(phi(w)) = phi(1 / conj(w)),   |w| > 1,

with a double pole at infinity and no other critical point.  On the real axis
sigma(x + 1/(2x^2)) = 1/x + x^2/2, strictly increasing for x > 1, which pins
(3/2, inf) inside the basin of infinity.  The dynamical plane splits into the
tiling set (orbits that reach the droplet), the basin of infinity, and their
common boundary; the classifier below reports exactly that trichotomy with an
honest UNDETERMINED for orbits that exhaust the budget near the limit set.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import solve_cubic_monic
from .errors import DomainError

OMEGA = cmath.exp(2j * cmath.pi / 3)

#: The three boundary cusps phi(1), phi(omega), phi(omega^2).
CUSPS = (1.5 + 0j, 1.5 * OMEGA, 1.5 * OMEGA.conjugate())

CUSP_TOL = 1e-9
MODULUS_TOL = 1e-9
DEFAULT_ESCAPE_RADIUS = 4.0


class Region(enum.Enum):
    DROPLET = "droplet"
    EXTERIOR = "exterior"
    CUSP = "cusp"


@dataclass(frozen=True)
class DeltoidLocation:
    tag: Region
    outer_root: Optional[complex] = None


class VerdictTag(enum.Enum):
    TILING = "tiling"
    BASIN_INFINITY = "basin_infinity"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class DeltoidVerdict:
    tag: VerdictTag
    rank: Optional[int] = None            # first droplet entry (TILING)
    first_exit_iter: Optional[int] = None  # first |z| > escape_radius (BASIN)


def deltoid_map(w: complex) -> complex:
    """phi(w) = w + 1/(2 w^2); equivariant under multiplication by omega."""
    w = complex(w)
    if w == 0:
        raise DomainError("deltoid_map: pole at w = 0")
    return w + 1 / (2 * w * w)


def locate_deltoid(z: complex, tol: float = MODULUS_TOL) -> DeltoidLocation:
    """Classify z against the droplet by inverting phi.

    phi maps the disk exterior univalently onto Omega, so z is exterior iff
    the cubic w^3 - z w^2 + 1/2 = 0 has exactly one root of modulus > 1.  The
    cusps are images of the critical points on the unit circle, where the
    cubic has a double root; they get their own tag because root separation
    degrades like the square root of the distance to the cusp.
    """
    z = complex(z)
    if min(abs(z - c) for c in CUSPS) <= CUSP_TOL:
        return DeltoidLocation(Region.CUSP)
    roots = solve_cubic_monic(-z, 0j, 0.5 + 0j)
    outside = [w for w in roots if abs(w) > 1 + tol]
    if len(outside) == 1:
        return DeltoidLocation(Region.EXTERIOR, outside[0])
    return DeltoidLocation(Region.DROPLET)


def schwarz_deltoid(z: complex) -> complex:
    """Schwarz reflection of Omega; fixes the deltoid boundary pointwise."""
    loc = locate_deltoid(z)
    if loc.tag is not Region.EXTERIOR:
        raise DomainError(f"schwarz_deltoid: {z} is not in the exterior quadrature domain")
    u = 1 / loc.outer_root.conjugate()
    return u + 1 / (2 * u * u)


def classify_deltoid_orbit(z: complex, max_iter: int,
                           escape_radius: float = DEFAULT_ESCAPE_RADIUS) -> DeltoidVerdict:
    """Iterate sigma until the orbit enters the droplet, escapes, or the
    budget runs out.

    For |z| >= 4 the map behaves like conj(z)^2 / 2, so the escape test is
    monotone from there on.  A cusp hit is parabolic (sigma is undefined at
    the cusp itself) and is reported UNDETERMINED, never silently coerced.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if escape_radius < 4.0:
        raise ValueError("escape_radius must be >= 4")
    w = complex(z)
    for k in range(max_iter + 1):
        if abs(w) > escape_radius:
            return DeltoidVerdict(VerdictTag.BASIN_INFINITY, first_exit_iter=k)
        loc = locate_deltoid(w)
        if loc.tag is Region.DROPLET:
            return DeltoidVerdict(VerdictTag.TILING, rank=k)
        if loc.tag is Region.CUSP:
            return DeltoidVerdict(VerdictTag.UNDETERMINED)
        if k == max_iter:
            break
        u = 1 / loc.outer_root.conjugate()
        w = u + 1 / (2 * u * u)
    return DeltoidVerdict(VerdictTag.UNDETERMINED)


# ---------------------------------------------------------------------------
# Vectorized raster kernel
# ---------------------------------------------------------------------------

_W1 = np.exp(2j * np.pi / 3)
_W2 = np.conj(_W1)

# verdict codes used by the raster kernels
UNDET, TILING, BASIN = 0, 1, 2


def _cubic_roots_grid(z):
    """Roots of w^3 - z w^2 + 1/2 = 0 for an array of z (Cardano + polish).

    Returns an array of shape z.shape + (3,).
    """
    a2 = -z
    p = -(a2 * a2) / 3.0
    q = 2.0 * a2 ** 3 / 27.0 + 0.5
    s = np.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    c1 = -q / 2.0 + s
    c2 = -q / 2.0 - s
    big = np.where(np.abs(c1) >= np.abs(c2), c1, c2)
    # big = 0 only at p = q = 0, which z = cusp does not reach exactly; guard anyway
    safe = np.where(big == 0, 1.0, big)
    u = np.exp(np.log(safe) / 3.0)
    u = np.where(big == 0, 0.0, u)
    v = np.where(u == 0, 0.0, -p / (3.0 * np.where(u == 0, 1.0, u)))
    t = np.stack([u + v, u * _W1 + v * _W2, u * _W2 + v * _W1], axis=-1)
    w = t - a2[..., None] / 3.0
    zc = z[..., None]
    for _ in range(2):
        f = (w - zc) * w * w + 0.5
        fp = (3.0 * w - 2.0 * zc) * w
        small = np.abs(fp) <= 1e-8 * (1.0 + np.abs(zc))
        w = np.where(small, w, w - f / np.where(small, 1.0, fp))
    return w


def classify_deltoid_grid(z0, max_iter: int,
                          escape_radius: float = DEFAULT_ESCAPE_RADIUS):
    """Vectorized orbit classifier for rasters.

    Returns (verdict, count): verdict holds the UNDET/TILING/BASIN codes and
    count the entry rank (TILING) or first exit iterate (BASIN), -1 where
    undetermined.  Agrees with classify_deltoid_orbit pointwise away from the
    cusp tolerance band.
    """
    z = np.ascontiguousarray(z0, dtype=np.complex128).ravel().copy()
    n = z.size
    verdict = np.zeros(n, dtype=np.uint8)
    count = np.full(n, -1, dtype=np.int32)
    idx = np.arange(n)
    cusps = np.array(CUSPS)
    for k in range(max_iter + 1):
        if idx.size == 0:
            break
        escaped = np.abs(z) > escape_radius
        if escaped.any():
            verdict[idx[escaped]] = BASIN
            count[idx[escaped]] = k
            keep = ~escaped
            z, idx = z[keep], idx[keep]
            if idx.size == 0:
                break
        near_cusp = np.min(np.abs(z[:, None] - cusps[None, :]), axis=1) <= CUSP_TOL
        roots = _cubic_roots_grid(z)
        outside = np.abs(roots) > 1.0 + MODULUS_TOL
        n_out = outside.sum(axis=1)
        exterior = (n_out == 1) & ~near_cusp
        droplet = ~exterior & ~near_cusp
        if droplet.any():
            verdict[idx[droplet]] = TILING
            count[idx[droplet]] = k
        if k == max_iter:
            break
        # cusp hits stall (sigma undefined); keep them until the budget ends
        keep = exterior | near_cusp
        z, idx, roots, outside = z[keep], idx[keep], roots[keep], outside[keep]
        has_out = outside.any(axis=1)
        pick = np.argmax(np.where(outside, np.abs(roots), -1.0), axis=1)
        w_out = roots[np.arange(roots.shape[0]), pick]
        w_out = np.where(has_out, w_out, 1.0)  # dummy for cusp lanes
        u = 1.0 / np.conj(w_out)
        step = u + 1.0 / (2.0 * u * u)
        z = np.where(has_out, step, z)  # cusp lanes keep their value
    return verdict.reshape(np.shape(z0)), count.reshape(np.shape(z0))

"""The circle-and-cardioid family of piecewise Schwarz reflections.

For a center a off the slit (-inf, -1/12), the circumcircle of the cardioid
centered at a touches the boundary at exactly one point alpha_a; the map F_a
applies the cardioid reflection sigma on the closed cardioid and the circle
reflection sigma_a on the closed disk exterior.  The droplet (closed disk
minus open cardioid, with the two singular boundary points alpha_a and 1/4
removed) is the fundamental tile: orbits that reach its interior have escaped.

F_a is unicritical: the only critical point is 0, with critical orbit
0 -> inf -> a -> ...  The non-escaping set is connected exactly when the
critical orbit never escapes, which yields the connectedness-locus test; on
the real line the locus is exactly [-1/12, 1/4].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import cardioid
from .cardioid import Location, invert_riemann_map, riemann_map
from .core import INFINITY, ComplexPoint, chordal, is_infinity
from .errors import InDropletError, NearSingularError, SlitError, TangencyAmbiguousError
from .symbolic import ItineraryWord

SLIT_IM_TOL = 1e-9
SING_TOL = 1e-10
CYCLE_TOL = 1e-9
CIRCLE_REL_TOL = 1e-12
N_SAMPLES = 2048

SLIT_EDGE = -1.0 / 12.0


# ---------------------------------------------------------------------------
# Circumcircle solver
# ---------------------------------------------------------------------------

def _boundary(theta):
    """Cardioid boundary point(s) phi(e^{i theta}); works on arrays."""
    e = np.exp(1j * np.asarray(theta))
    return e / 2 - e * e / 4


def _g_derivatives(theta, a):
    """(g, g', g'') for g(theta) = |z(theta) - a|^2."""
    e = np.exp(1j * np.asarray(theta))
    e2 = e * e
    z = e / 2 - e2 / 4
    z1 = 1j * e / 2 - 1j * e2 / 2
    z2 = -e / 2 + e2
    d = z - a
    g = np.abs(d) ** 2
    g1 = 2 * (np.conj(d) * z1).real
    g2 = 2 * (np.conj(d) * z2).real + 2 * np.abs(z1) ** 2
    return g, g1, g2


def _refine_newton(theta0, a, half_width):
    """Clipped Newton on g' from sampled argmax bracket(s); returns
    (theta, flat) where flat flags lanes whose |g''| fell below 1e-6."""
    theta = np.asarray(theta0, dtype=float).copy()
    lo, hi = theta - half_width, theta + half_width
    flat = np.zeros(theta.shape, dtype=bool)
    for _ in range(10):
        _, g1, g2 = _g_derivatives(theta, a)
        flat = np.abs(g2) < 1e-6
        step = np.where(flat, 0.0, g1 / np.where(flat, 1.0, g2))
        theta = np.clip(theta - step, lo, hi)
    return theta, flat


def _refine_golden(theta0, a, half_width, iters=72):
    """Golden-section maximization of g on the sampled bracket(s); used near
    the order-four contact at a = -1/12, where Newton has no curvature."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    lo = np.asarray(theta0, dtype=float) - half_width
    hi = np.asarray(theta0, dtype=float) + half_width
    for _ in range(iters):
        c = hi - invphi * (hi - lo)
        d = lo + invphi * (hi - lo)
        fc = _g_derivatives(c, a)[0]
        fd = _g_derivatives(d, a)[0]
        left = fc > fd
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
    return (lo + hi) / 2


def _refine(theta0, a, half_width):
    theta, flat = _refine_newton(theta0, a, half_width)
    if np.any(flat):
        golden = _refine_golden(theta0, a, half_width)
        theta = np.where(flat, golden, theta)
    return theta


def is_on_slit(a: complex) -> bool:
    a = complex(a)
    return abs(a.imag) <= SLIT_IM_TOL and a.real < SLIT_EDGE - 1e-12


@dataclass(frozen=True)
class CncMap:
    """One family member: center a, circumradius r_a, tangency point alpha_a."""

    a: complex
    r: float
    alpha: complex
    tangency_angle: float


def build_cnc(a: complex, n_samples: int = N_SAMPLES) -> CncMap:
    """Solve the circumcircle of the cardioid centered at a.

    Dense sampling locates every local maximum of |z(theta) - a|; each is
    refined by clipped Newton on the derivative (golden-section where the
    curvature vanishes, which happens exactly at a = -1/12).  A second global
    maximum beyond tolerance only occurs on the excluded slit.
    """
    a = complex(a)
    if is_on_slit(a):
        raise SlitError(f"parameter {a} lies on the excluded ray (-inf, -1/12)")
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    g = np.abs(_boundary(theta) - a) ** 2
    left = np.roll(g, 1)
    right = np.roll(g, -1)
    cand = np.nonzero((g > left) & (g >= right))[0]
    if cand.size == 0:  # flat sampling (cannot happen off degenerate input)
        cand = np.array([int(np.argmax(g))])
    half = np.pi / n_samples * 2
    refined = _refine(theta[cand], a, half)
    radii = np.abs(_boundary(refined) - a)
    order = np.argsort(-radii)
    refined, radii = refined[order], radii[order]
    # collapse candidates that converged to the same maximizer
    keep_theta = [refined[0]]
    keep_r = [radii[0]]
    for t, r in zip(refined[1:], radii[1:]):
        sep = np.abs(np.angle(np.exp(1j * (t - np.asarray(keep_theta)))))
        if np.all(sep > 1e-3):
            keep_theta.append(t)
            keep_r.append(r)
    if len(keep_r) > 1 and keep_r[0] - keep_r[1] <= 1e-10:
        raise TangencyAmbiguousError(
            f"two circumcircle tangencies tie for parameter {a}")
    t_star = float(keep_theta[0])
    alpha = complex(_boundary(t_star))
    return CncMap(a=a, r=float(keep_r[0]), alpha=alpha, tangency_angle=t_star)


def circumcircle_arrays(a_values, n_samples: int = N_SAMPLES, chunk: int = 4096):
    """Vectorized (r_a, alpha_a, theta_a) for an array of centers.

    Raster plumbing for parameter-plane scans; lanes on the slit must be
    filtered by the caller.  Same sampling + refinement as build_cnc, without
    the ambiguity bookkeeping.
    """
    a = np.ascontiguousarray(a_values, dtype=np.complex128).ravel()
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    bz = _boundary(theta)
    t0 = np.empty(a.size, dtype=float)
    for start in range(0, a.size, chunk):
        sl = slice(start, min(start + chunk, a.size))
        d2 = np.abs(bz[None, :] - a[sl, None]) ** 2
        t0[sl] = theta[np.argmax(d2, axis=1)]
    half = np.pi / n_samples * 2
    t_star = _refine(t0, a, half)
    alpha = _boundary(t_star)
    r = np.abs(alpha - a)
    shape = np.shape(a_values)
    return r.reshape(shape), alpha.reshape(shape), t_star.reshape(shape)


# ---------------------------------------------------------------------------
# The piecewise map
# ---------------------------------------------------------------------------

def _step(m: CncMap, w: ComplexPoint, prev_symbol: int = 0):
    """One application of F_a plus the itinerary symbol of the step.

    Symbols: 2 for the circle branch; 1/3 for the cardioid branch according to
    the sign of Im(inner root), matching the uniformization that sends the
    upper/lower cardioid boundary halves to the first/third triangle sides.
    Real inner roots alternate 1,3 (first tie to 1), the counterclockwise-side
    limit coding, so recorded words stay admissible.
    """
    if is_infinity(w):
        return m.a, 2
    w = complex(w)
    inv = invert_riemann_map(w)
    if inv.location is not Location.EXTERIOR:
        lam = inv.inner_root
        if lam.imag > 0:
            sym = 1
        elif lam.imag < 0:
            sym = 3
        else:
            sym = 3 if prev_symbol == 1 else 1
        if sym == prev_symbol:
            # consecutive cardioid steps flip the half-plane exactly; a repeat
            # is pure roundoff at the real slice, resolved to the ccw side
            sym = 4 - sym
        if lam == 0:
            return INFINITY, sym
        lb = lam.conjugate()
        return (2 * lb - 1) / (4 * lb * lb), sym
    if abs(w - m.a) >= m.r * (1 - CIRCLE_REL_TOL):
        return m.a + m.r * m.r / (w - m.a).conjugate(), 2
    raise InDropletError(f"{w} lies in the fundamental-tile interior")


def apply_F(m: CncMap, w: ComplexPoint) -> ComplexPoint:
    """F_a: cardioid reflection on the closed cardioid, circle reflection on
    the closed disk exterior; raises IN_DROPLET in the open droplet."""
    return _step(m, w)[0]


def _near_singular(m: CncMap, w: complex, tol: float = SING_TOL) -> bool:
    return abs(w - 0.25) <= tol or abs(w - m.alpha) <= tol


# ---------------------------------------------------------------------------
# Orbit classification
# ---------------------------------------------------------------------------

class VerdictTag(enum.Enum):
    ESCAPED = "escaped"
    NON_ESCAPING = "non_escaping"
    UNDETERMINED = "undetermined"


class CycleKind(enum.Enum):
    SUPERATTRACTING = "superattracting"
    ATTRACTING = "attracting"
    INDIFFERENT = "indifferent"
    REPELLING = "repelling"
    SINGULAR_FIXED = "singular_fixed"


@dataclass(frozen=True)
class CycleInfo:
    period: int
    representative: ComplexPoint
    multiplier_magnitude: float
    kind: CycleKind


@dataclass(frozen=True)
class OrbitVerdict:
    tag: VerdictTag
    rank: Optional[int] = None
    word: Optional[ItineraryWord] = None
    cycle: Optional[CycleInfo] = None


def _transient(max_iter: int) -> int:
    # Brent starts after a settling transient, but never so late that short
    # budgets (e.g. the CLI's --max-iter 16 on an exact 3-cycle) lose their
    # detection window.
    return min(max(64, max_iter // 4), max_iter // 2)


def _classify_multiplier(mag: float) -> CycleKind:
    if mag <= 1e-8:
        return CycleKind.SUPERATTRACTING
    if mag < 1 - 1e-6:
        return CycleKind.ATTRACTING
    if mag <= 1 + 1e-6:
        return CycleKind.INDIFFERENT
    return CycleKind.REPELLING


def _cycle_info(m: CncMap, w: ComplexPoint, detected: int,
                cycle_tol: float) -> Optional[CycleInfo]:
    """Shrink a Brent hit to the smallest closing period and characterize it.

    Returns None if the candidate fails to close (a shadowing transient that
    will keep evolving), letting the caller resume iteration.
    """
    pts = [w]
    try:
        for _ in range(detected):
            w = _step(m, w)[0]
            pts.append(w)
    except InDropletError:
        return None
    period = None
    for d in range(1, detected + 1):
        if detected % d == 0 and chordal(pts[d], pts[0]) <= cycle_tol:
            period = d
            break
    if period is None:
        return None
    rep = pts[0]
    if is_infinity(rep):
        rep = m.a
    orbit = pts[:period]
    if any(is_infinity(p) or abs(complex(p)) <= SING_TOL for p in orbit):
        return CycleInfo(period, rep, 0.0, CycleKind.SUPERATTRACTING)
    try:
        mag = multiplier_of_cycle(m, rep, period, cycle_tol=cycle_tol)
    except NearSingularError:
        return CycleInfo(period, rep, float("nan"), CycleKind.INDIFFERENT)
    return CycleInfo(period, rep, mag, _classify_multiplier(mag))


def classify_orbit(m: CncMap, z: ComplexPoint, max_iter: int,
                   cycle_tol: float = CYCLE_TOL) -> OrbitVerdict:
    """Iterate F_a from z recording the itinerary.

    ESCAPED(rank k) means the k-th iterate is the first in the droplet
    interior (the singular points 1/4 and alpha_a are not escape: orbits
    landing within SING_TOL of them are fixed there and reported
    NON_ESCAPING/SINGULAR_FIXED).  Cycles are found by Brent's algorithm in
    the spherical metric, so the super-attracting orbits through infinity are
    detected exactly.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    w: ComplexPoint = z
    word: list = []
    transient = _transient(max_iter)
    tort: Optional[ComplexPoint] = None
    power, lam_count = 1, 0
    for k in range(max_iter + 1):
        if not is_infinity(w):
            wc = complex(w)
            if _near_singular(m, wc):
                cyc = CycleInfo(1, wc, 1.0, CycleKind.SINGULAR_FIXED)
                return OrbitVerdict(VerdictTag.NON_ESCAPING, cycle=cyc)
            inv = invert_riemann_map(wc)
            if inv.location is Location.EXTERIOR and abs(wc - m.a) < m.r * (1 - CIRCLE_REL_TOL):
                return OrbitVerdict(VerdictTag.ESCAPED, rank=k,
                                    word=ItineraryWord(tuple(word)))
        if k == max_iter:
            break
        w, sym = _step(m, w, word[-1] if word else 0)
        word.append(sym)
        if k + 1 > transient:
            if tort is None:
                tort = w
            else:
                lam_count += 1
                if chordal(w, tort) <= cycle_tol:
                    cyc = _cycle_info(m, w, lam_count, cycle_tol)
                    if cyc is not None:
                        return OrbitVerdict(VerdictTag.NON_ESCAPING, cycle=cyc)
                    tort, lam_count = w, 0  # false alarm: restart the segment
                elif lam_count == power:
                    tort, power, lam_count = w, power * 2, 0
    return OrbitVerdict(VerdictTag.UNDETERMINED)


def multiplier_of_cycle(m: CncMap, representative: ComplexPoint, period: int,
                        cycle_tol: float = CYCLE_TOL) -> float:
    """|dbar F_a^period| along a cycle, as the product of per-step derivative
    magnitudes: 1/|lam|^3 on the cardioid branch, (r/|w-a|)^2 on the circle
    branch.  Cycles through the critical point 0 or its value infinity are
    super-attracting with multiplier exactly 0.
    """
    pts = [representative]
    w = representative
    for _ in range(period):
        w = _step(m, w)[0]
        pts.append(w)
    if chordal(pts[-1], pts[0]) > cycle_tol:
        raise ValueError(
            f"point {representative} does not close up after {period} steps")
    orbit = pts[:period]
    if any(is_infinity(p) or abs(complex(p)) <= SING_TOL for p in orbit):
        return 0.0
    mag = 1.0
    for p in orbit:
        pc = complex(p)
        if _near_singular(m, pc, 1e-6):
            raise NearSingularError(
                f"cycle point {pc} is within 1e-6 of a singular point")
        inv = invert_riemann_map(pc)
        if inv.location is not Location.EXTERIOR:
            mag *= abs(inv.inner_root) ** -3
        else:
            mag *= (m.r / abs(pc - m.a)) ** 2
    return mag


# ---------------------------------------------------------------------------
# Critical orbit: depth and connectedness locus
# ---------------------------------------------------------------------------

class ConnTag(enum.Enum):
    IN = "in"
    OUT = "out"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ConnVerdict:
    tag: ConnTag
    depth: Optional[int] = None


def depth(m: CncMap, max_iter: int = 1000) -> Optional[int]:
    """Smallest n >= 1 with F_a^n(inf) in the fundamental tile, or None if the
    critical value does not escape within the budget."""
    v = classify_orbit(m, INFINITY, max_iter)
    return v.rank if v.tag is VerdictTag.ESCAPED else None


def in_connectedness_locus(m: CncMap, max_iter: int = 1000) -> ConnVerdict:
    """Tri-state connectedness test from the critical orbit 0 -> inf -> a."""
    v = classify_orbit(m, INFINITY, max_iter)
    if v.tag is VerdictTag.ESCAPED:
        return ConnVerdict(ConnTag.OUT, depth=v.rank)
    if v.tag is VerdictTag.NON_ESCAPING:
        return ConnVerdict(ConnTag.IN)
    return ConnVerdict(ConnTag.UNDETERMINED)


def preimages_F(m: CncMap, z: ComplexPoint) -> list:
    """All w with F_a(w) = z: the circle-reflection preimage when z is in the
    closed disk, plus up to two cardioid preimages; 3 points for generic z in
    the droplet, matching the covering degree."""
    if is_infinity(z):
        return [0j]
    z = complex(z)
    pres = list(cardioid.sigma_preimages(z))
    if abs(z - m.a) <= m.r * (1 + CIRCLE_REL_TOL):
        if z == m.a:
            pres.append(INFINITY)
        else:
            pres.append(m.a + m.r * m.r / (z - m.a).conjugate())
    finite = sorted((p for p in pres if not is_infinity(p)),
                    key=lambda u: (round(u.real, 12), round(u.imag, 12)))
    inf_part = [p for p in pres if is_infinity(p)]
    return finite + inf_part


# ---------------------------------------------------------------------------
# Vectorized kernels (rasters and parameter scans)
# ---------------------------------------------------------------------------

ORBIT_UNDET, ORBIT_ESCAPED, ORBIT_NONESC = 0, 1, 2
PARAM_UNDET, PARAM_OUT, PARAM_IN, PARAM_SLIT = 0, 1, 2, 3

_HUGE = 1e150


def _chordal_np(u, v):
    fu = np.isfinite(u.real) & np.isfinite(u.imag) & (np.abs(u) <= _HUGE)
    fv = np.isfinite(v.real) & np.isfinite(v.imag) & (np.abs(v) <= _HUGE)
    au = np.where(fu, np.abs(u), 0.0)
    av = np.where(fv, np.abs(v), 0.0)
    du = np.hypot(1.0, au)
    dv = np.hypot(1.0, av)
    with np.errstate(invalid="ignore"):
        diff = np.where(fu & fv, np.abs(np.where(fu, u, 0) - np.where(fv, v, 0)), 0.0)
    both = 2.0 * (diff / du) / dv
    one = np.where(fu, 2.0 / du, 2.0 / dv)
    out = np.where(fu & fv, both, np.where(fu ^ fv, one, 0.0))
    return out


def orbit_grid(a, r, alpha, z0, max_iter: int, cycle_tol: float = CYCLE_TOL):
    """Vectorized classify_orbit over an array of start points (and optionally
    per-lane parameters, for parameter-plane scans).

    Returns (verdict, rank): ORBIT_* codes and the escape rank (-1 where not
    escaped).  Branch order, tolerances, transient, and the Brent schedule
    mirror the scalar classifier.
    """
    z = np.ascontiguousarray(z0, dtype=np.complex128).ravel().copy()
    n = z.size
    a_l = np.broadcast_to(np.asarray(a, dtype=np.complex128), (n,)).copy() if np.ndim(a) else np.full(n, complex(a))
    r_l = np.broadcast_to(np.asarray(r, dtype=float), (n,)).copy() if np.ndim(r) else np.full(n, float(r))
    al_l = np.broadcast_to(np.asarray(alpha, dtype=np.complex128), (n,)).copy() if np.ndim(alpha) else np.full(n, complex(alpha))
    a_l = a_l.ravel()
    r_l = r_l.ravel()
    al_l = al_l.ravel()

    verdict = np.zeros(n, dtype=np.uint8)
    rank = np.full(n, -1, dtype=np.int32)
    idx = np.arange(n)
    tort = None
    transient = _transient(max_iter)
    power, lam_count = 1, 0

    for k in range(max_iter + 1):
        if idx.size == 0:
            break
        with np.errstate(all="ignore"):
            fin = np.isfinite(z.real) & np.isfinite(z.imag)
            lam = 1 - np.sqrt(1 - 4 * np.where(fin, z, 0))
            alam = np.abs(lam)
            in_card = fin & (alam <= 1 + cardioid.BOUNDARY_TOL)
            near_sing = fin & ((np.abs(z - 0.25) <= SING_TOL)
                               | (np.abs(z - al_l) <= SING_TOL))
            dist_c = np.abs(np.where(fin, z, 0) - a_l)
            in_ext = fin & ~in_card & (dist_c >= r_l * (1 - CIRCLE_REL_TOL))
            droplet = fin & ~in_card & ~in_ext & ~near_sing
        retire_sing = near_sing
        retire_drop = droplet & ~near_sing
        if retire_sing.any():
            verdict[idx[retire_sing]] = ORBIT_NONESC
        if retire_drop.any():
            verdict[idx[retire_drop]] = ORBIT_ESCAPED
            rank[idx[retire_drop]] = k
        retire = retire_sing | retire_drop
        if retire.any():
            keep = ~retire
            z, idx, a_l, r_l, al_l = z[keep], idx[keep], a_l[keep], r_l[keep], al_l[keep]
            in_card, in_ext, fin = in_card[keep], in_ext[keep], fin[keep]
            lam = lam[keep]
            if tort is not None:
                tort = tort[keep]
            if idx.size == 0:
                break
        if k == max_iter:
            break
        with np.errstate(all="ignore"):
            lb = np.conj(lam)
            sig = (2 * lb - 1) / (4 * lb * lb)
            circ = a_l + r_l * r_l / np.conj(z - a_l)
        z = np.where(in_card, sig, np.where(fin, circ, a_l))
        if k + 1 > transient:
            if tort is None:
                tort = z.copy()
            else:
                lam_count += 1
                hit = _chordal_np(z, tort) <= cycle_tol
                if hit.any():
                    verdict[idx[hit]] = ORBIT_NONESC
                    keep = ~hit
                    z, idx, tort = z[keep], idx[keep], tort[keep]
                    a_l, r_l, al_l = a_l[keep], r_l[keep], al_l[keep]
                    if idx.size == 0:
                        break
                if lam_count == power:
                    tort, power, lam_count = z.copy(), power * 2, 0
    shape = np.shape(z0)
    return verdict.reshape(shape), rank.reshape(shape)


def scan_parameters(a_values, max_iter: int, cycle_tol: float = CYCLE_TOL):
    """Connectedness-locus verdicts for an array of centers.

    Returns (codes, depths) with the PARAM_* codes; slit lanes are flagged,
    never fatal.  Depth is the escape rank of the critical value, -1 where
    not escaped.
    """
    a = np.ascontiguousarray(a_values, dtype=np.complex128).ravel()
    codes = np.zeros(a.size, dtype=np.uint8)
    depths = np.full(a.size, -1, dtype=np.int32)
    slit = (np.abs(a.imag) <= SLIT_IM_TOL) & (a.real < SLIT_EDGE - 1e-12)
    codes[slit] = PARAM_SLIT
    ok = ~slit
    if ok.any():
        r, alpha, _ = circumcircle_arrays(a[ok])
        z0 = np.full(int(ok.sum()), complex(np.inf, 0.0), dtype=np.complex128)
        verdict, rank = orbit_grid(a[ok], r, alpha, z0, max_iter, cycle_tol)
        sub = np.zeros(verdict.size, dtype=np.uint8)
        sub[verdict == ORBIT_ESCAPED] = PARAM_OUT
        sub[verdict == ORBIT_NONESC] = PARAM_IN
        codes[ok] = sub
        d = np.full(verdict.size, -1, dtype=np.int32)
        esc = verdict == ORBIT_ESCAPED
        d[esc] = rank[esc]
        depths[ok] = d
    shape = np.shape(a_values)
    return codes.reshape(shape), depths.reshape(shape)

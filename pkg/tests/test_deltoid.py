import cmath
import math
import random

import numpy as np
import pytest

from schwarzdyn.core import solve_cubic_monic
from schwarzdyn.deltoid import (
    BASIN,
    CUSPS,
    OMEGA,
    Region,
    TILING,
    UNDET,
    VerdictTag,
    _cubic_roots_grid,
    classify_deltoid_grid,
    classify_deltoid_orbit,
    deltoid_map,
    locate_deltoid,
    schwarz_deltoid,
)
from schwarzdyn.errors import DomainError
from schwarzdyn.symbolic import count_admissible_words


class TestDeltoidMap:
    def test_cusp_value(self):
        assert deltoid_map(1) == pytest.approx(1.5)

    def test_at_two(self):
        assert deltoid_map(2) == pytest.approx(17 / 8)

    def test_rotational_equivariance(self):
        assert deltoid_map(OMEGA) == pytest.approx(1.5 * OMEGA)
        rng = random.Random(4)
        for _ in range(200):
            w = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if abs(w) < 1e-3:
                continue
            assert deltoid_map(OMEGA * w) == pytest.approx(OMEGA * deltoid_map(w))

    def test_pole(self):
        with pytest.raises(DomainError):
            deltoid_map(0)


class TestLocate:
    def test_exterior_with_outer_root(self):
        loc = locate_deltoid(17 / 8)
        assert loc.tag is Region.EXTERIOR
        assert loc.outer_root == pytest.approx(2.0)
        assert deltoid_map(loc.outer_root) == pytest.approx(17 / 8, abs=1e-10)

    def test_center_in_droplet(self):
        assert locate_deltoid(0).tag is Region.DROPLET

    def test_cusps(self):
        for c in CUSPS:
            assert locate_deltoid(c).tag is Region.CUSP


class TestSchwarz:
    def test_real_identity_at_two(self):
        # sigma(x + 1/(2x^2)) = 1/x + x^2/2
        assert schwarz_deltoid(17 / 8) == pytest.approx(2.5, abs=1e-12)

    def test_real_identity_at_three(self):
        x = 3.0
        assert schwarz_deltoid(x + 1 / (2 * x * x)) == pytest.approx(
            1 / x + x * x / 2, abs=1e-12)

    def test_boundary_nearly_fixed(self):
        # |sigma(z) - z| <= |phi'| * 2 * dist(w, unit circle) ~ 4 * offset
        rng = random.Random(12)
        for _ in range(200):
            w = (1 + 2e-9) * cmath.exp(2j * math.pi * rng.random())
            z = deltoid_map(w)
            assert abs(schwarz_deltoid(z) - z) <= 1e-8

    def test_droplet_rejected(self):
        with pytest.raises(DomainError):
            schwarz_deltoid(0)
        with pytest.raises(DomainError):
            schwarz_deltoid(1.5)

    def test_rotational_equivariance(self):
        rng = random.Random(6)
        for _ in range(200):
            w = rng.uniform(1.05, 3.0) * cmath.exp(2j * math.pi * rng.random())
            z = deltoid_map(w)
            assert schwarz_deltoid(OMEGA * z) == pytest.approx(
                OMEGA * schwarz_deltoid(z), abs=1e-10)

    def test_derivative_law_against_fd(self):
        # |dbar sigma(phi(w))| = |w| on the exterior
        rng = random.Random(15)
        h = 1e-6
        for _ in range(200):
            w = rng.uniform(1.01, 3.0) * cmath.exp(2j * math.pi * rng.random())
            z = deltoid_map(w)
            fd = abs(schwarz_deltoid(z + h) - schwarz_deltoid(z - h)) / (2 * h)
            assert fd == pytest.approx(abs(w), rel=1e-5)


class TestClassifier:
    def test_real_ray_in_basin(self):
        assert classify_deltoid_orbit(1.6, 200).tag is VerdictTag.BASIN_INFINITY

    def test_droplet_rank_zero(self):
        v = classify_deltoid_orbit(0, 200)
        assert v.tag is VerdictTag.TILING
        assert v.rank == 0

    def test_escaping_real_orbit(self):
        assert classify_deltoid_orbit(17 / 8, 200).tag is VerdictTag.BASIN_INFINITY

    def test_monotone_real_escape(self):
        # orbits of real x > 3/2 increase strictly until the escape radius
        for x in (1.51, 1.7, 2.0, 3.0):
            z = complex(x)
            prev = z.real
            for _ in range(50):
                if abs(z) > 4.0:
                    break
                z = complex(schwarz_deltoid(z))
                assert z.imag == pytest.approx(0.0, abs=1e-12)
                assert z.real > prev
                prev = z.real

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            classify_deltoid_orbit(0, 0)
        with pytest.raises(ValueError):
            classify_deltoid_orbit(0, 10, escape_radius=2.0)

    def test_tile_count_matches_symbolic_words(self):
        # ranks n >= 1 carry 3 * 2^(n-1) tiles, the admissible word count
        for n in range(1, 13):
            assert count_admissible_words(n) == 3 * 2 ** (n - 1)


class TestGridKernel:
    def test_cubic_roots_match_core_solver(self):
        rng = random.Random(31)
        zs = np.array([complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                       for _ in range(300)])
        roots = _cubic_roots_grid(zs)
        for z, triple in zip(zs, roots):
            expected = solve_cubic_monic(-z, 0, 0.5)
            got = sorted(triple, key=lambda u: (round(u.real, 9), round(u.imag, 9)))
            for g, e in zip(got, expected):
                assert abs(g - e) < 1e-7

    def test_matches_scalar_classifier(self):
        rng = random.Random(32)
        pts = np.array([complex(rng.uniform(-2.4, 2.4), rng.uniform(-2.4, 2.4))
                        for _ in range(400)])
        code, count = classify_deltoid_grid(pts, 120)
        tags = {UNDET: VerdictTag.UNDETERMINED, TILING: VerdictTag.TILING,
                BASIN: VerdictTag.BASIN_INFINITY}
        for z, c, n in zip(pts, code, count):
            v = classify_deltoid_orbit(z, 120)
            assert v.tag is tags[int(c)]
            if v.tag is VerdictTag.TILING:
                assert v.rank == int(n)
            if v.tag is VerdictTag.BASIN_INFINITY:
                assert v.first_exit_iter == int(n)

import cmath
import math
import random

import numpy as np
import pytest

from schwarzdyn import cardioid
from schwarzdyn.cnc import (
    ConnTag,
    CycleKind,
    ORBIT_ESCAPED,
    ORBIT_NONESC,
    ORBIT_UNDET,
    PARAM_IN,
    PARAM_OUT,
    PARAM_SLIT,
    PARAM_UNDET,
    VerdictTag,
    apply_F,
    build_cnc,
    circumcircle_arrays,
    classify_orbit,
    depth,
    in_connectedness_locus,
    multiplier_of_cycle,
    orbit_grid,
    preimages_F,
    scan_parameters,
)
from schwarzdyn.core import INFINITY, is_infinity
from schwarzdyn.errors import InDropletError, NearSingularError, SlitError

PARABOLIC_A = (16 * math.sqrt(3) - 3) / 132


def boundary_oracle(a, n=10 ** 6):
    """Dense-sampling circumcircle oracle with a parabolic vertex fit."""
    th = 2 * np.pi * np.arange(n) / n
    z = np.exp(1j * th) / 2 - np.exp(2j * th) / 4
    d2 = np.abs(z - a) ** 2
    j = int(np.argmax(d2))
    gm, g0, gp = d2[(j - 1) % n], d2[j], d2[(j + 1) % n]
    t = th[j] + 0.5 * (2 * np.pi / n) * (gm - gp) / (gm - 2 * g0 + gp)
    w = cmath.exp(1j * t) / 2 - cmath.exp(2j * t) / 4
    return abs(w - a), w


class TestBuild:
    def test_real_zero(self):
        m = build_cnc(0)
        assert m.r == pytest.approx(0.75, abs=1e-9)
        assert m.alpha == pytest.approx(-0.75, abs=1e-9)

    def test_real_quarter(self):
        m = build_cnc(0.25)
        assert m.r == pytest.approx(1.0, abs=1e-9)
        assert m.alpha == pytest.approx(-0.75, abs=1e-9)

    def test_slit_edge_allowed(self):
        m = build_cnc(-1 / 12)
        assert m.r == pytest.approx(-1 / 12 + 0.75, abs=1e-8)
        assert m.alpha == pytest.approx(-0.75, abs=1e-6)

    def test_slit_rejected(self):
        with pytest.raises(SlitError):
            build_cnc(-0.5)
        with pytest.raises(SlitError):
            build_cnc(complex(-0.2, 1e-12))

    def test_complex_parameter_against_oracle(self):
        m = build_cnc(0.25j)
        r_o, al_o = boundary_oracle(0.25j)
        assert m.r == pytest.approx(r_o, abs=1e-8)
        assert abs(m.alpha - al_o) <= 1e-8

    def test_circumscription(self):
        rng = random.Random(40)
        for _ in range(20):
            a = complex(rng.uniform(-0.05, 0.4), rng.uniform(-0.4, 0.4))
            m = build_cnc(a)
            th = 2 * np.pi * np.arange(4096) / 4096
            bz = np.exp(1j * th) / 2 - np.exp(2j * th) / 4
            assert np.max(np.abs(bz - a)) <= m.r + 1e-9

    def test_vectorized_matches_scalar(self):
        rng = random.Random(41)
        aa = np.array([complex(rng.uniform(-0.08, 0.4), rng.uniform(-0.4, 0.4))
                       for _ in range(50)])
        r, alpha, _ = circumcircle_arrays(aa)
        for a, rv, av in zip(aa, r, alpha):
            m = build_cnc(a)
            assert rv == pytest.approx(m.r, abs=1e-10)
            assert abs(av - m.alpha) <= 1e-8


class TestApply:
    def test_superattracting_two_cycle(self):
        m = build_cnc(0)
        assert is_infinity(apply_F(m, 0j))
        assert apply_F(m, INFINITY) == 0

    def test_airplane_three_cycle(self):
        m = build_cnc(3 / 16)
        w = apply_F(m, 0j)
        assert is_infinity(w)
        w = apply_F(m, w)
        assert w == pytest.approx(3 / 16)
        w = apply_F(m, w)
        assert abs(w) <= 1e-12

    def test_misiurewicz_orbit_to_tangency(self):
        m = build_cnc(5 / 36)
        w = apply_F(m, apply_F(m, 0j))
        assert w == pytest.approx(5 / 36)
        w = apply_F(m, w)
        assert w == pytest.approx(-0.75, abs=1e-10)
        assert apply_F(m, w) == pytest.approx(w, abs=1e-10)

    def test_droplet_rejected(self):
        m = build_cnc(1.0)
        with pytest.raises(InDropletError):
            apply_F(m, complex(1.0))  # center of the disk, outside the cardioid

    def test_circle_branch_involution(self):
        m = build_cnc(complex(0.1, 0.05))
        rng = random.Random(50)
        for _ in range(300):
            w = m.a + m.r * rng.uniform(1.01, 4.0) * cmath.exp(
                2j * math.pi * rng.random())
            back = apply_F(m, apply_F(m, w))
            assert abs(back - w) <= 1e-12 * (1 + abs(w))

    def test_critical_orbit_prefix(self):
        for a in (0, 3 / 16, 0.25, complex(0.1, 0.2), 1.0):
            m = build_cnc(a)
            assert is_infinity(apply_F(m, 0j))
            assert apply_F(m, INFINITY) == pytest.approx(complex(a))


class TestClassify:
    def test_escape_rank_two(self):
        m = build_cnc(1.0)
        v = classify_orbit(m, 0j, 100)
        assert v.tag is VerdictTag.ESCAPED
        assert v.rank == 2
        assert len(v.word) == 2

    def test_basilica_cycle(self):
        v = classify_orbit(build_cnc(0), 0j, 512)
        assert v.tag is VerdictTag.NON_ESCAPING
        assert v.cycle.period == 2
        assert v.cycle.kind is CycleKind.SUPERATTRACTING
        assert v.cycle.multiplier_magnitude == 0.0

    def test_airplane_cycle(self):
        v = classify_orbit(build_cnc(3 / 16), 0j, 512)
        assert v.tag is VerdictTag.NON_ESCAPING
        assert v.cycle.period == 3
        assert v.cycle.kind is CycleKind.SUPERATTRACTING

    def test_chebyshev_singular_fixed(self):
        v = classify_orbit(build_cnc(0.25), 0j, 512)
        assert v.tag is VerdictTag.NON_ESCAPING
        assert v.cycle.kind is CycleKind.SINGULAR_FIXED
        assert v.cycle.representative == pytest.approx(0.25, abs=1e-9)

    def test_misiurewicz_singular_fixed(self):
        v = classify_orbit(build_cnc(5 / 36), 0j, 512)
        assert v.tag is VerdictTag.NON_ESCAPING
        assert v.cycle.kind is CycleKind.SINGULAR_FIXED
        assert v.cycle.representative == pytest.approx(-0.75, abs=1e-8)

    def test_short_budget_still_detects_exact_cycle(self):
        # the CLI contract: a 3-cycle is found with max_iter = 16
        v = classify_orbit(build_cnc(3 / 16), 0j, 16)
        assert v.tag is VerdictTag.NON_ESCAPING
        assert v.cycle.period == 3

    def test_escape_rank_stable_under_budget(self):
        m = build_cnc(complex(0.3, 0.1))
        rng = random.Random(60)
        for _ in range(50):
            z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            v1 = classify_orbit(m, z, 40)
            if v1.tag is not VerdictTag.ESCAPED:
                continue
            for budget in (v1.rank + 1, 80, 400):
                v2 = classify_orbit(m, z, budget)
                assert v2.tag is VerdictTag.ESCAPED
                assert v2.rank == v1.rank

    def test_real_interval_invariance(self):
        # for a in [-1/12, 1/4] the orbit of any real z <= 1/4 stays in
        # [-inf, 1/4]
        rng = random.Random(61)
        for a in (-1 / 12, 0.0, 0.1, 0.25):
            m = build_cnc(a)
            for _ in range(30):
                w = complex(rng.uniform(-3.0, 0.25))
                for _ in range(60):
                    w = apply_F(m, w)
                    if is_infinity(w):
                        continue
                    assert abs(w.imag) <= 1e-9
                    assert w.real <= 0.25 + 1e-9

    def test_word_is_admissible_itinerary(self):
        m = build_cnc(complex(0.3, 0.1))
        rng = random.Random(62)
        for _ in range(100):
            z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            v = classify_orbit(m, z, 100)
            if v.tag is VerdictTag.ESCAPED:
                assert len(v.word) == v.rank  # construction validates symbols


class TestCriticalOrbit:
    def test_depth_one(self):
        assert depth(build_cnc(1.0)) == 1

    def test_depth_absent_in_locus(self):
        assert depth(build_cnc(0)) is None

    def test_depth_matches_brute_force(self):
        # direct iteration oracle: step infinity forward, test the droplet
        # membership with the raw region predicates
        for a in (complex(0.24, 0.1), complex(0.3, -0.05), 1.0, 0.26):
            m = build_cnc(a)
            w = complex(m.a)
            brute = None
            for k in range(1, 200):
                in_card = cardioid.contains(w)
                in_disk = abs(w - m.a) < m.r * (1 - 1e-12)
                if in_disk and not in_card:
                    brute = k
                    break
                w = complex(apply_F(m, w))
            assert depth(m, 200) == brute

    def test_connectedness_examples(self):
        assert in_connectedness_locus(build_cnc(0), 2000).tag is ConnTag.IN
        assert in_connectedness_locus(build_cnc(-1 / 12), 2000).tag is ConnTag.IN
        v = in_connectedness_locus(build_cnc(0.3), 2000)
        assert v.tag is ConnTag.OUT
        assert v.depth == 1


class TestPreimages:
    def test_pole(self):
        m = build_cnc(0)
        assert preimages_F(m, INFINITY) == [0j]

    def test_generic_droplet_point_has_three(self):
        rng = random.Random(70)
        m = build_cnc(complex(0.1, 0.05))
        found = 0
        while found < 100:
            z = m.a + m.r * rng.uniform(0, 0.99) * cmath.exp(
                2j * math.pi * rng.random())
            if cardioid.contains(z):
                continue
            pres = preimages_F(m, z)
            assert len(pres) == 3
            for p in pres:
                img = apply_F(m, p)
                assert not is_infinity(img)
                assert abs(img - z) <= 1e-8
            found += 1

    def test_contains_cardioid_example(self):
        pres = preimages_F(build_cnc(3 / 16), 0j)
        assert any(not is_infinity(p) and abs(p - 3 / 16) < 1e-10 for p in pres)

    def test_roundtrip(self):
        m = build_cnc(complex(0.2, -0.1))
        rng = random.Random(71)
        checked = 0
        while checked < 200:
            w = complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2))
            if abs(w) < 1e-3:
                continue
            try:
                img = apply_F(m, w)
            except InDropletError:
                continue
            if is_infinity(img):
                continue
            pres = preimages_F(m, img)
            assert any(not is_infinity(p) and abs(p - w) < 1e-8 for p in pres)
            checked += 1


class TestMultiplier:
    def test_superattracting_cycles(self):
        assert multiplier_of_cycle(build_cnc(0), 0j, 2) == 0.0
        assert multiplier_of_cycle(build_cnc(3 / 16), 0j, 3) == 0.0

    def test_parabolic_cycle_near_unit_multiplier(self):
        m = build_cnc(PARABOLIC_A)
        v = classify_orbit(m, 0j, 200000)
        assert v.tag is VerdictTag.NON_ESCAPING
        assert v.cycle.period == 3
        assert abs(v.cycle.multiplier_magnitude - 1.0) <= 1e-3

    def test_cross_validated_by_finite_differences(self):
        # any detected finite cycle: product of step derivatives vs FD of F^p
        m = build_cnc(PARABOLIC_A)
        v = classify_orbit(m, 0j, 200000)
        rep, p = complex(v.cycle.representative), v.cycle.period
        got = multiplier_of_cycle(m, rep, p)
        h = 1e-7

        def iterate(z):
            for _ in range(p):
                z = apply_F(m, z)
            return complex(z)

        fd = abs(iterate(rep + h) - iterate(rep - h)) / (2 * h)
        assert got == pytest.approx(fd, rel=1e-4)

    def test_near_singular_guard(self):
        m = build_cnc(0.25)
        with pytest.raises(NearSingularError):
            multiplier_of_cycle(m, complex(0.25 - 1e-8), 1)

    def test_not_a_cycle_rejected(self):
        with pytest.raises(ValueError):
            multiplier_of_cycle(build_cnc(0), complex(0.11, 0.02), 2)


class TestVectorKernels:
    def test_orbit_grid_matches_scalar(self):
        rng = random.Random(80)
        m = build_cnc(0.25)
        pts = np.array([complex(rng.uniform(-2, 1), rng.uniform(-1.5, 1.5))
                        for _ in range(300)])
        code, rank = orbit_grid(m.a, m.r, m.alpha, pts, 300)
        tags = {ORBIT_UNDET: VerdictTag.UNDETERMINED,
                ORBIT_ESCAPED: VerdictTag.ESCAPED,
                ORBIT_NONESC: VerdictTag.NON_ESCAPING}
        for z, c, k in zip(pts, code, rank):
            v = classify_orbit(m, z, 300)
            assert v.tag is tags[int(c)]
            if v.tag is VerdictTag.ESCAPED:
                assert v.rank == int(k)

    def test_scan_matches_scalar_locus(self):
        rng = random.Random(81)
        aa = np.array([complex(rng.uniform(-0.1, 0.35), rng.uniform(-0.25, 0.25))
                       for _ in range(20)])
        codes, depths = scan_parameters(aa, 2000)
        tags = {PARAM_UNDET: ConnTag.UNDETERMINED, PARAM_OUT: ConnTag.OUT,
                PARAM_IN: ConnTag.IN}
        for a, c, d in zip(aa, codes, depths):
            v = in_connectedness_locus(build_cnc(a), 2000)
            assert v.tag is tags[int(c)]
            if v.tag is ConnTag.OUT:
                assert v.depth == int(d)

    def test_scan_flags_slit(self):
        codes, _ = scan_parameters(np.array([-0.5 + 0j, 0.0 + 0j]), 100)
        assert codes[0] == PARAM_SLIT
        assert codes[1] != PARAM_SLIT

    def test_orbit_grid_handles_infinity_start(self):
        m = build_cnc(1.0)
        z0 = np.array([complex(np.inf, 0.0)])
        code, rank = orbit_grid(m.a, m.r, m.alpha, z0, 50)
        assert code[0] == ORBIT_ESCAPED
        assert rank[0] == 1

"""Spectral distance solver: catalog values, certificates, and properties."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ncgp
from ncgp.algebra import FiniteAlgebra, product_state, pure_states, random_state
from ncgp.distance import (
    DistanceSolver,
    distance_matrix,
    distance_result_to_json,
    quarter_disk_sup,
    spectral_distance,
)
from ncgp.experiments import random_triple
from ncgp.linalg import op_norm
from ncgp.sdp import ratio_ascent
from ncgp.triples import SpectralTriple, amplified_two_point, product, two_point

C2 = FiniteAlgebra((1, 1))
PLUS, MINUS = pure_states(C2)

# Exact distance between phi+ x phi+ and phi- x phi+ on the lam=2, mu=1
# product: the maximizer is a1 = -a3 = t with a2 = a4 = 0, which reduces the
# constraint to the 2x2 matrix [[1, 1/lam], [0, -1]]; the optimum value is the
# reciprocal of its norm, equal to (sqrt(17) - 1)/4 at lam = 2.
OFFDIAG_LAM2 = (math.sqrt(17.0) - 1.0) / 4.0


def grid_ratio_oracle(lam, mu=1.0, refine_steps=60):
    """Dense grid + coordinate refinement for sup (a1 - a3)/||B_a||."""
    def bnorm(a):
        a1, a2, a3, a4 = a
        b = np.array([
            [2 * a1, 0, mu / lam * (a1 - a3), 0],
            [0, 2 * a2, 0, mu / lam * (a2 - a4)],
            [0, 0, 2 * a3, 0],
            [0, 0, 0, 2 * a4]]) / mu
        return op_norm(b)

    def ratio(a):
        n = bnorm(a)
        return (a[0] - a[2]) / n if n > 1e-14 else 0.0

    grid = np.linspace(-1.0, 1.0, 81)
    best, best_a = -np.inf, None
    for a1 in grid:
        for a3 in grid:
            v = ratio((a1, 0.0, a3, 0.0))
            if v > best:
                best, best_a = v, np.array([a1, 0.0, a3, 0.0])
    step = 0.05
    a = best_a
    for _ in range(refine_steps):
        improved = False
        for i in range(4):
            for sgn in (1.0, -1.0):
                cand = a.copy()
                cand[i] += sgn * step
                if ratio(cand) > ratio(a):
                    a, improved = cand, True
        if not improved:
            step /= 2.0
            if step < 1e-9:
                break
    return ratio(a)


def product_states_pm(pt, first, second):
    return product_state(first, second, pt.algebra)


class TestCatalogDistances:
    def test_two_point(self):
        for lam in (0.5, 1.5):
            t = two_point(lam)
            r = spectral_distance(t, PLUS, MINUS, 1e-8)
            assert r.status == "finite"
            assert r.lower == pytest.approx(lam, abs=1e-7)
            assert r.upper == pytest.approx(lam, abs=1e-7)

    def test_amplified_two_point(self):
        t = amplified_two_point(0.75)
        r = spectral_distance(t, PLUS, MINUS, 1e-8)
        assert r.lower == pytest.approx(0.75, abs=1e-7)

    def test_product_distance_is_mu(self):
        pt = product(two_point(3.0), amplified_two_point(0.5))
        phi = product_states_pm(pt, PLUS, PLUS)
        phi2 = product_states_pm(pt, MINUS, MINUS)
        r = spectral_distance(pt, phi, phi2, 1e-7)
        assert r.lower == pytest.approx(0.5, abs=1e-6)

    def test_offdiagonal_product_value(self):
        pt = product(two_point(2.0), amplified_two_point(1.0))
        phi = product_states_pm(pt, PLUS, PLUS)
        phi2 = product_states_pm(pt, MINUS, PLUS)
        r = spectral_distance(pt, phi, phi2, 1e-7)
        assert r.lower == pytest.approx(OFFDIAG_LAM2, abs=1e-6)
        assert r.upper == pytest.approx(OFFDIAG_LAM2, abs=1e-6)
        # the independent grid oracle lands on the same value
        assert grid_ratio_oracle(2.0) == pytest.approx(OFFDIAG_LAM2, abs=1e-6)
        # strictly below both the closed-form bound and lam itself
        assert r.upper <= 2 * 2.0 / 3.0 + 1e-6
        assert r.upper < 2.0

    def test_pullback_modules_infinite(self):
        for mod in (ncgp.module_f_plus(), ncgp.module_f_minus()):
            r = spectral_distance(mod.as_spectral_triple(), PLUS, MINUS)
            assert r.is_infinite and r.status == "infinite"
            assert math.isinf(r.upper)
            # the witness commutes with F and separates the states
            t = mod.as_spectral_triple()
            assert op_norm(t.commutator_with_dirac(r.optimizer)) < 1e-9
            assert (PLUS(r.optimizer) - MINUS(r.optimizer)).real == pytest.approx(r.lower)

    def test_zero_dirac_infinite(self):
        rep = ncgp.Representation.defining(C2)
        t = SpectralTriple(rep, np.zeros((2, 2)))
        r = spectral_distance(t, PLUS, MINUS)
        assert r.status == "infinite"


class TestResultInvariants:
    def test_certificate_feasibility(self):
        pt = product(two_point(1.0), amplified_two_point(1.0))
        phi = product_states_pm(pt, PLUS, PLUS)
        phi2 = product_states_pm(pt, MINUS, MINUS)
        r = spectral_distance(pt, phi, phi2, 1e-7)
        assert r.lower <= r.upper
        assert op_norm(pt.commutator_with_dirac(r.optimizer)) <= 1.0 + 1e-9
        achieved = (phi(r.optimizer) - phi2(r.optimizer)).real
        assert achieved == pytest.approx(r.lower, abs=1e-10)

    def test_same_state_zero_with_zero_optimizer(self):
        t = two_point(1.0)
        r = spectral_distance(t, PLUS, PLUS)
        assert r.lower == 0.0 and r.upper == 0.0 and r.status == "finite"
        assert all(np.array_equal(b, np.zeros_like(b)) for b in r.optimizer.blocks)

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        t = random_triple(rng, (2,), even=True)
        phi, phi2 = random_state(t.algebra, rng), random_state(t.algebra, rng)
        r1 = spectral_distance(t, phi, phi2, 1e-7)
        r2 = spectral_distance(t, phi2, phi, 1e-7)
        assert r1.lower == pytest.approx(r2.lower, abs=1e-6)

    def test_scale_covariance(self):
        rng = np.random.default_rng(1)
        for t in (two_point(1.3), amplified_two_point(0.8), random_triple(rng, (2,))):
            phi, phi2 = random_state(t.algebra, rng), random_state(t.algebra, rng)
            base = spectral_distance(t, phi, phi2, 1e-7)
            for s in (0.5, 4.0):
                scaled = spectral_distance(t.scaled(s), phi, phi2, 1e-7)
                assert scaled.lower == pytest.approx(base.lower / s, rel=1e-5)

    def test_state_triple_mismatch(self):
        t = two_point(1.0)
        other = pure_states(FiniteAlgebra((1, 1, 1)))[0]
        with pytest.raises(ValueError):
            spectral_distance(t, other, other)


class TestDistanceMatrix:
    def test_two_point_matrix(self):
        lam = 2.5
        m = distance_matrix(two_point(lam), [PLUS, MINUS], 1e-7)
        assert m[0, 0] == 0.0 and m[1, 1] == 0.0
        assert m[0, 1] == m[1, 0] == pytest.approx(lam, abs=1e-6)

    def test_repeated_state(self):
        m = distance_matrix(two_point(1.0), [PLUS, PLUS], 1e-7)
        assert np.array_equal(m, np.zeros((2, 2)))

    def test_lattice_matrix_triangle_and_w1_consistency(self):
        t = ncgp.lattice_line(5, 1.0)
        deltas = pure_states(t.algebra)
        tol = 1e-6
        m = distance_matrix(t, deltas, tol)
        assert np.allclose(m, m.T, atol=1e-12)
        n = 5
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert m[i, j] <= m[i, k] + m[k, j] + 2 * tol
        # the matrix is a metric, so W1 between Dirac measures on the induced
        # space must reproduce it exactly
        space = ncgp.FiniteMetricSpace(tuple(str(i) for i in range(n)),
                                       np.arange(n, dtype=float)[:, None], m)
        for i in range(n):
            for j in range(i + 1, n):
                res = ncgp.w1(space, ncgp.Measure.dirac(space, i),
                              ncgp.Measure.dirac(space, j))
                assert res.value == pytest.approx(m[i, j], abs=1e-9)

    def test_needs_two_states(self):
        with pytest.raises(ValueError):
            distance_matrix(two_point(1.0), [PLUS])


class TestTheoremOne:
    def test_sandwich_on_random_unital_products(self):
        rng = np.random.default_rng(2)
        tol = 1e-4
        for _ in range(20):
            t1 = random_triple(rng, (1, 1), even=True)
            t2 = random_triple(rng, (2,), even=bool(rng.integers(0, 2)))
            pt = product(t1, t2)
            phi1, phi1p = random_state(t1.algebra, rng), random_state(t1.algebra, rng)
            phi2, phi2p = random_state(t2.algebra, rng), random_state(t2.algebra, rng)
            r1 = spectral_distance(t1, phi1, phi1p, tol)
            r2 = spectral_distance(t2, phi2, phi2p, tol)
            r = spectral_distance(pt, product_state(phi1, phi2, pt.algebra),
                                  product_state(phi1p, phi2p, pt.algebra), tol)
            assert r.lower <= r1.upper + r2.upper + 3 * tol
            assert r.upper >= math.hypot(r1.lower, r2.lower) - 3 * tol
            assert r.lower <= math.sqrt(2) * math.hypot(r1.upper, r2.upper) + 3 * tol

    def test_upper_bounds_hold_without_unitality(self):
        # the triangle and sqrt(2) upper bounds need no unitality assumption
        rng = np.random.default_rng(7)
        tol = 1e-4
        for _ in range(10):
            t1 = random_triple(rng, (1, 1), unital=True, even=True)
            t2 = random_triple(rng, (1, 1), unital=False, even=bool(rng.integers(0, 2)))
            pt = product(t1, t2)
            phi1, phi1p = random_state(t1.algebra, rng), random_state(t1.algebra, rng)
            phi2, phi2p = random_state(t2.algebra, rng), random_state(t2.algebra, rng)
            r1 = spectral_distance(t1, phi1, phi1p, tol)
            r2 = spectral_distance(t2, phi2, phi2p, tol)
            r = spectral_distance(pt, product_state(phi1, phi2, pt.algebra),
                                  product_state(phi1p, phi2p, pt.algebra), tol)
            assert r.lower <= r1.upper + r2.upper + 3 * tol
            assert r.lower <= math.sqrt(2) * math.hypot(r1.upper, r2.upper) + 3 * tol

    def test_lower_bound_fails_for_nonunital_catalog_product(self):
        # d = mu on the two_point x amplified product sits strictly below
        # sqrt(lam^2 + mu^2): the lower Pythagoras bound needs unitality
        lam = mu = 1.0
        pt = product(two_point(lam), amplified_two_point(mu))
        phi = product_states_pm(pt, PLUS, PLUS)
        phi2 = product_states_pm(pt, MINUS, MINUS)
        r = spectral_distance(pt, phi, phi2, 1e-7)
        assert r.upper < math.hypot(lam, mu) - 0.4   # 1 << sqrt(2)

    def test_corollary_equal_second_states(self):
        rng = np.random.default_rng(3)
        tol = 1e-5
        for _ in range(10):
            t1 = random_triple(rng, (1, 1), even=True)
            t2 = random_triple(rng, (1, 1), even=True)
            pt = product(t1, t2)
            phi1, phi1p = random_state(t1.algebra, rng), random_state(t1.algebra, rng)
            phi2 = random_state(t2.algebra, rng)
            r1 = spectral_distance(t1, phi1, phi1p, tol)
            r = spectral_distance(pt, product_state(phi1, phi2, pt.algebra),
                                  product_state(phi1p, phi2, pt.algebra), tol)
            assert r.lower == pytest.approx(r1.lower, abs=3 * tol)


class TestAscentOracle:
    def test_ascent_agrees_with_solver_on_catalog(self):
        # the heuristic ascent is an independent lower-bound oracle
        pt = product(two_point(2.0), amplified_two_point(1.0))
        solver = DistanceSolver(pt)
        phi = product_states_pm(pt, PLUS, PLUS)
        phi2 = product_states_pm(pt, MINUS, PLUS)
        c = np.array([(phi(b) - phi2(b)).real for b in solver.basis])
        c_red = solver.range_basis.T @ c
        val, y = ratio_ascent(c_red, solver.L_reduced)
        r = solver.distance(phi, phi2, 1e-7)
        assert val <= r.upper + 1e-9
        assert val == pytest.approx(r.lower, abs=1e-4)


class TestQuarterDiskSup:
    def test_matches_hypot_on_grid(self):
        for x in (0.0, 0.3, 1.0, 7.0):
            for y in (0.0, 0.2, 2.5):
                assert quarter_disk_sup(x, y) == pytest.approx(math.hypot(x, y), abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1e6),
           st.floats(min_value=0.0, max_value=1e6))
    def test_matches_hypot(self, x, y):
        assert abs(quarter_disk_sup(x, y) - math.hypot(x, y)) <= 1e-12 * max(1.0, math.hypot(x, y))

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            quarter_disk_sup(-1.0, 2.0)


def test_distance_result_json():
    t = two_point(2.0)
    r = spectral_distance(t, PLUS, MINUS, 1e-7)
    obj = json.loads(json.dumps(distance_result_to_json(r)))
    assert obj["status"] == "finite"
    assert obj["lower"] == pytest.approx(2.0, abs=1e-6)
    rinf = spectral_distance(ncgp.module_f_plus().as_spectral_triple(), PLUS, MINUS)
    assert distance_result_to_json(rinf)["upper"] == "inf"

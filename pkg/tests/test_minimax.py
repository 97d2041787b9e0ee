import unittest
from unittest import mock

import numpy as np
from numpy.testing import assert_allclose

from application import states
from application.measurement import bloch_representation, mutual_information_field
from application.minimax import (
    brute_force_maximize,
    brute_force_minimax,
    fibonacci_sphere,
    maximize_on_sphere,
    minimax_on_spheres,
    normalize_angles,
)
from domain.errors import OptimizerDidNotConverge, OutOfRange
from domain.models import OptimizerConfig, spherical_to_cartesian


SMALL = OptimizerConfig(coarse_resolution=64)


def constant(value):
    def f(*angles):
        return np.full(np.broadcast(*angles).shape, value)

    return f


def height(theta, phi):
    return np.cos(theta) + 0.0 * phi


def accord_objective(rho):
    bloch = bloch_representation(rho)

    def f(a_theta, a_phi, b_theta, b_phi):
        return mutual_information_field(
            bloch, spherical_to_cartesian(a_theta, a_phi), spherical_to_cartesian(b_theta, b_phi)
        )

    return f


class SphereGridTests(unittest.TestCase):
    def test_fibonacci_points_are_unit_and_deterministic(self):
        grid = fibonacci_sphere(100)
        self.assertEqual(grid.resolution, 100)
        assert_allclose(np.linalg.norm(grid.vectors(), axis=-1), 1.0, atol=1e-14)
        assert_allclose(fibonacci_sphere(100).theta, grid.theta)
        # z is evenly spaced, so the lattice covers both hemispheres equally
        self.assertAlmostEqual(float(np.mean(grid.vectors()[:, 2])), 0.0, places=12)

    def test_invalid_resolution(self):
        with self.assertRaises(OutOfRange):
            fibonacci_sphere(0)

    def test_normalize_angles(self):
        theta, phi = normalize_angles(np.array([-0.3, 4.0]), np.array([0.0, 0.5]))
        v = spherical_to_cartesian(theta, phi)
        expected = spherical_to_cartesian(np.array([-0.3, 4.0]), np.array([0.0, 0.5]))
        assert_allclose(v, expected, atol=1e-14)
        self.assertTrue(np.all((theta >= 0) & (theta <= np.pi)))
        self.assertTrue(np.all((phi >= 0) & (phi < 2 * np.pi)))


class MaximizeOnSphereTests(unittest.TestCase):
    def test_constant_returns_first_grid_point(self):
        best = maximize_on_sphere(constant(0.3), SMALL)
        grid = fibonacci_sphere(SMALL.coarse_resolution)
        self.assertEqual(best.value, 0.3)
        self.assertEqual(best.theta, float(grid.theta[0]))

    def test_height_reaches_north_pole(self):
        best = maximize_on_sphere(height, SMALL)
        self.assertAlmostEqual(best.value, 1.0, delta=1e-6)
        self.assertGreater(best.diagnostics.refine_iterations, 0)

    def test_refinement_never_loses_the_seed(self):
        rho = states.random_state(3, "haar", 1)[0]
        f = accord_objective(rho)

        def inner(theta, phi):
            return f(np.asarray(0.4), np.asarray(1.0), theta, phi)

        grid = fibonacci_sphere(SMALL.coarse_resolution)
        best = maximize_on_sphere(inner, SMALL)
        self.assertGreaterEqual(best.value, float(np.max(inner(grid.theta, grid.phi))))

    def test_iteration_budget(self):
        config = OptimizerConfig(coarse_resolution=16, max_refine_iterations=1)
        with self.assertRaises(OptimizerDidNotConverge) as ctx:
            maximize_on_sphere(height, config)
        self.assertEqual(ctx.exception.iterations, 1)

    def test_move_budget(self):
        # from the equator the north pole is seven moves away at the initial step
        config = OptimizerConfig(coarse_resolution=1, max_refine_iterations=2)
        with mock.patch("application.minimax.MOVES_PER_REFINEMENT", 1):
            with self.assertRaises(OptimizerDidNotConverge) as ctx:
                maximize_on_sphere(height, config)
        self.assertEqual(ctx.exception.iterations, 0)
        self.assertIn("2 moves", str(ctx.exception))
        self.assertAlmostEqual(ctx.exception.final_step, config.refine_initial_step)

    def test_moves_do_not_use_up_step_reductions(self):
        # at least eight moves plus eighteen step reductions
        config = OptimizerConfig(coarse_resolution=1, max_refine_iterations=20)
        best = maximize_on_sphere(height, config)
        self.assertAlmostEqual(best.value, 1.0, delta=1e-6)
        self.assertGreater(best.diagnostics.refine_iterations, config.max_refine_iterations)

    def test_config_validation(self):
        with self.assertRaises(OutOfRange):
            OptimizerConfig(step_tolerance=0.5)
        with self.assertRaises(OutOfRange):
            OptimizerConfig(refine_shrink=1.0)


class MinimaxTests(unittest.TestCase):
    def test_outer_independent_objective_equals_inner_maximum(self):
        def f(a_theta, a_phi, b_theta, b_phi):
            return np.cos(b_theta) + 0.0 * (a_theta + a_phi + b_phi)

        saddle = minimax_on_spheres(f, SMALL)
        self.assertAlmostEqual(saddle.value, 1.0, delta=1e-6)

    def test_classical_state_has_zero_saddle(self):
        rho = states.classical_state([[0.4, 0.1], [0.1, 0.4]])
        saddle = minimax_on_spheres(accord_objective(rho), SMALL)
        self.assertLess(saddle.value, 1e-6)
        # the minimizing measurement is unbiased with respect to σz
        self.assertAlmostEqual(abs(saddle.alice.direction[2]), 0.0, delta=1e-2)

    def test_saddle_value_is_achieved(self):
        rho = states.werner(0.4)
        f = accord_objective(rho)
        saddle = minimax_on_spheres(f, SMALL)
        achieved = f(
            np.asarray(saddle.alice.theta),
            np.asarray(saddle.alice.phi),
            np.asarray(saddle.bob.theta),
            np.asarray(saddle.bob.phi),
        )
        self.assertAlmostEqual(float(achieved), saddle.value, delta=SMALL.value_tolerance)

    def test_saddle_is_locally_consistent(self):
        f = accord_objective(states.random_state(12, "bures", 1)[0])
        saddle = minimax_on_spheres(f, SMALL)
        a_theta, a_phi = np.asarray(saddle.alice.theta), np.asarray(saddle.alice.phi)

        inner = maximize_on_sphere(lambda t, p: f(a_theta, a_phi, t, p), SMALL)

        self.assertAlmostEqual(inner.value, saddle.value, delta=SMALL.value_tolerance)
        h = inner.diagnostics.final_step
        for d_theta, d_phi in ((h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)):
            moved = float(f(a_theta, a_phi, np.asarray(inner.theta + d_theta), np.asarray(inner.phi + d_phi)))
            self.assertLessEqual(moved - inner.value, SMALL.value_tolerance)

    def test_deterministic(self):
        f = accord_objective(states.random_state(9, "bures", 1)[0])
        first = minimax_on_spheres(f, SMALL)
        second = minimax_on_spheres(f, SMALL)
        self.assertEqual(first, second)

    def test_matches_oracle_on_werner_state(self):
        f = accord_objective(states.werner(0.4))
        fast = minimax_on_spheres(f, OptimizerConfig())
        oracle = brute_force_minimax(f, 200, refine=True)
        self.assertAlmostEqual(fast.value, oracle.value, delta=2e-4)


    def test_matches_oracle_on_random_states(self):
        for rho in states.random_state(41, "haar", 3):
            f = accord_objective(rho)
            fast = minimax_on_spheres(f, OptimizerConfig())
            oracle = brute_force_minimax(f, 200, refine=True)
            self.assertAlmostEqual(fast.value, oracle.value, delta=2e-4)


class BruteForceTests(unittest.TestCase):
    def test_constant(self):
        self.assertEqual(brute_force_minimax(constant(0.25), 16).value, 0.25)
        self.assertEqual(brute_force_maximize(constant(0.25), 16).value, 0.25)

    def test_minimum_resolution(self):
        with self.assertRaises(OutOfRange):
            brute_force_minimax(constant(0.0), 8)

    def test_singlet_converges_with_resolution(self):
        f = accord_objective(states.bell_projector("psi-"))
        coarse = brute_force_minimax(f, 32).value
        fine = brute_force_minimax(f, 128).value
        refined = brute_force_minimax(f, 32, refine=True).value
        self.assertLessEqual(coarse, 1.0 + 1e-12)
        self.assertGreater(fine, 0.9)
        self.assertAlmostEqual(refined, 1.0, delta=1e-6)

    def test_refined_maximum(self):
        best = brute_force_maximize(height, 32, refine=True)
        self.assertAlmostEqual(best.value, 1.0, delta=1e-8)


if __name__ == "__main__":
    unittest.main()

import unittest

import numpy as np

from application import measures, states
from application.measurement import schmidt_entanglement, sigma_x_strategy_information
from domain.errors import InconsistentMeasure
from domain.linalg import apply_local_unitaries
from domain.models import BellDiagonalCoords, DensityMatrix, OptimizerConfig


SMALL = OptimizerConfig(coarse_resolution=64)


class EntanglementTests(unittest.TestCase):
    def test_werner_concurrence_closed_form(self):
        for e in np.linspace(0, 1, 41):
            expected = max(0.0, 1 - 1.5 * e)
            self.assertAlmostEqual(measures.concurrence(states.werner(e)), expected, delta=1e-9)

    def test_eof_vanishes_at_werner_threshold(self):
        self.assertAlmostEqual(measures.eof(states.werner(0.0)), 1.0, places=9)
        self.assertLess(measures.eof(states.werner(2 / 3)), 1e-6)
        self.assertGreater(measures.eof(states.werner(0.6)), 0.0)

    def test_decomposition_and_hermitian_routes_agree(self):
        for rho in states.random_state(21, "bures", 5):
            lam = measures.wootters_spectrum(rho)
            hermitian = max(lam[0] - lam[1:].sum(), 0.0)
            self.assertAlmostEqual(measures.concurrence(rho), hermitian, delta=1e-6)

    def test_separability_geometry(self):
        for coords in states.random_tetrahedron_points(17, 300):
            excess = coords.l1_norm() - 1
            if abs(excess) < 1e-6:
                continue
            c = measures.concurrence(states.bell_diagonal(coords))
            if excess < 0:
                self.assertEqual(c, 0.0)
            else:
                self.assertGreater(c, 0.0)

    def test_ppt(self):
        self.assertFalse(measures.is_ppt(states.werner(0.0)))
        self.assertTrue(measures.is_ppt(states.werner(1.0)))
        self.assertTrue(measures.is_ppt(states.werner(0.7)))

    def test_clamp_measure(self):
        self.assertEqual(measures.clamp_measure(-1e-10, "x"), 0.0)
        with self.assertRaises(InconsistentMeasure):
            measures.clamp_measure(-1e-6, "x")


class CorrelationMeasureTests(unittest.TestCase):
    def test_maximally_mixed_state_has_no_correlations(self):
        report = measures.evaluate(states.MAXIMALLY_MIXED, SMALL)
        for value in (report.concurrence, report.eof, report.discord, report.ea, report.quantum_mutual_information):
            self.assertAlmostEqual(value, 0.0, places=9)

    def test_singlet(self):
        report = measures.evaluate(states.werner(0.0), SMALL)
        self.assertAlmostEqual(report.concurrence, 1.0, places=9)
        self.assertAlmostEqual(report.eof, 1.0, places=9)
        self.assertAlmostEqual(report.discord, 1.0, places=5)
        self.assertAlmostEqual(report.ea, 1.0, places=5)
        self.assertAlmostEqual(report.quantum_mutual_information, 2.0, places=9)

    def test_singlet_oracle(self):
        value, _, _ = measures.entropic_accord(states.werner(0.0), oracle=True)
        self.assertAlmostEqual(value, 1.0, places=5)
        d, _ = measures.discord(states.werner(0.0), oracle=True)
        self.assertAlmostEqual(d, 1.0, places=5)

    def test_classical_state_is_uncorrelated_quantumly(self):
        report = measures.evaluate(states.classical_state([[0.4, 0.1], [0.1, 0.4]]), SMALL)
        self.assertEqual(report.concurrence, 0.0)
        self.assertLess(report.discord, 1e-6)
        self.assertLess(report.ea, 1e-6)

    def test_zero_ea_form(self):
        sigma_x = np.array([[0, 1], [1, 0]])
        rho = states.zero_ea_state(states.qubit_state([0, 0, 0]), sigma_x / 4)

        value, alice, _ = measures.entropic_accord(rho, SMALL)

        self.assertLess(value, 1e-6)
        # ¼(𝟙⊗𝟙 + ½ σx⊗σx): any Alice axis orthogonal to x decouples Bob
        self.assertLess(abs(alice.direction[0]), 1e-2)
        self.assertLess(measures.discord(rho, SMALL)[0], 1e-6)

    def test_pure_state_discord_equals_entanglement(self):
        for theta in (np.pi / 12, np.pi / 8, np.pi / 5):
            rho = states.pure_schmidt(theta)
            d, _ = measures.discord(rho, SMALL)
            self.assertAlmostEqual(d, measures.eof(rho), delta=1e-6)

    def test_discord_matches_oracle(self):
        rho = states.werner(0.5)

        fast, _ = measures.discord(rho, SMALL)
        oracle, _ = measures.discord(rho, oracle=True)

        self.assertAlmostEqual(fast, oracle, delta=1e-5)

    def test_ea_finite_where_eof_vanishes(self):
        rho = states.werner(2 / 3)
        self.assertLess(measures.eof(rho), 1e-6)
        value, _, _ = measures.entropic_accord(rho, SMALL)
        self.assertGreater(value, 1e-3)

    def test_pure_state_upper_bounds(self):
        for theta in (np.pi / 16, np.pi / 8, 3 * np.pi / 16):
            value, _, _ = measures.entropic_accord(states.pure_schmidt(theta), SMALL)
            self.assertLessEqual(value, float(sigma_x_strategy_information(theta)) + 1e-5)
            self.assertLessEqual(value, float(schmidt_entanglement(theta)) + 1e-5)

    def test_discord_of_bell_diagonal_octahedron_state_is_positive(self):
        rho = states.bell_diagonal(BellDiagonalCoords(-0.5, -0.3, -0.2))
        self.assertEqual(measures.concurrence(rho), 0.0)
        d, _ = measures.discord(rho, SMALL)
        self.assertGreater(d, 1e-3)

    def test_local_unitary_invariance(self):
        rho = states.random_state(5, "haar", 1)[0]
        rng = np.random.Generator(np.random.PCG64(8))
        rotated = DensityMatrix(
            apply_local_unitaries(rho.matrix, states.random_local_unitary(rng), states.random_local_unitary(rng))
        )
        before = measures.evaluate(rho)
        after = measures.evaluate(rotated)
        for name in ("concurrence", "eof", "discord", "ea", "quantum_mutual_information"):
            self.assertAlmostEqual(getattr(before, name), getattr(after, name), delta=1e-5)

    def test_ea_below_discord_for_noisy_pure_states(self):
        for theta in (np.pi / 16, np.pi / 8, 3 * np.pi / 16, np.pi / 4):
            for e in (0.0, 0.3, 0.6, 0.9):
                with self.subTest(theta=theta, e=e):
                    rho = states.with_white_noise(states.pure_schmidt(theta), e)
                    ea, _, _ = measures.entropic_accord(rho)
                    d, _ = measures.discord(rho)
                    self.assertLessEqual(ea, d + 1e-5)

    def test_diagnostics_are_reported(self):
        report = measures.evaluate(states.werner(0.3), SMALL)
        self.assertEqual(set(report.diagnostics), {"discord", "ea"})
        self.assertGreater(report.diagnostics["ea"].coarse_evaluations, 64 * 64 - 1)


class DefaultConfigCorpusTests(unittest.TestCase):
    def test_random_corpus_converges(self):
        # seed 31 includes states whose inner searches need many moves
        for measure in ("haar", "bures"):
            for index, rho in enumerate(states.random_state(31, measure, 50)):
                with self.subTest(measure=measure, index=index):
                    ea, _, _ = measures.entropic_accord(rho)
                    d, _ = measures.discord(rho)
                    self.assertGreaterEqual(ea, 0.0)
                    self.assertGreaterEqual(d, 0.0)


if __name__ == "__main__":
    unittest.main()

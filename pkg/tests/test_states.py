import unittest

import numpy as np
from numpy.testing import assert_allclose

from application import states
from domain.errors import NotADistribution, NotAState, OutOfRange
from domain.models import BellDiagonalCoords, DensityMatrix


class BellTetrahedronTests(unittest.TestCase):
    def test_vertices_of_bell_states(self):
        expected = {
            "phi+": (1, -1, 1),
            "phi-": (-1, 1, 1),
            "psi+": (1, 1, -1),
            "psi-": (-1, -1, -1),
        }
        for name, vertex in expected.items():
            assert_allclose(states.BELL_VERTICES[name], vertex)
            coords = states.bell_coordinates(states.bell_projector(name))
            assert_allclose(coords.as_array(), vertex, atol=1e-12)

    def test_bell_diagonal_inverts_coordinates(self):
        coords = BellDiagonalCoords(0.3, -0.2, 0.1)
        assert_allclose(states.bell_coordinates(states.bell_diagonal(coords)).as_array(), coords.as_array(), atol=1e-12)

    def test_bell_diagonal_outside_tetrahedron(self):
        with self.assertRaises(NotAState):
            states.bell_diagonal(BellDiagonalCoords(1, 1, 1))
        self.assertFalse(states.in_tetrahedron(BellDiagonalCoords(1, 1, 1)))
        self.assertTrue(states.in_tetrahedron(BellDiagonalCoords(-1, -1, -1)))

    def test_coordinates_out_of_range(self):
        with self.assertRaises(OutOfRange):
            BellDiagonalCoords(1.5, 0, 0)

    def test_bell_weights_match_mixture(self):
        rho = states.bell_mixture(0.1, 0.2, 0.3, 0.4)
        assert_allclose(states.bell_weights(states.bell_coordinates(rho)), [0.1, 0.2, 0.3, 0.4], atol=1e-12)

    def test_bell_mixture_rejects_bad_weights(self):
        with self.assertRaises(NotADistribution):
            states.bell_mixture(0.5, 0.5, 0.5, -0.5)
        with self.assertRaises(NotADistribution):
            states.bell_mixture(0.5, 0.5, 0.5, 0.5)

    def test_edge_state_needs_distinct_vertices(self):
        with self.assertRaises(ValueError):
            states.edge_state("phi+", "phi+", 0.5)
        self.assertTrue(states.edge_state("phi+", "psi-", 1.0).allclose(states.bell_projector("phi+")))

    def test_edge_state_rejects_unknown_names(self):
        for a, b in (("bogus", "psi-"), ("phi+", "bogus")):
            with self.subTest(a=a, b=b):
                with self.assertRaises(ValueError) as ctx:
                    states.edge_state(a, b, 0.5)  # type: ignore[arg-type]
                self.assertIn("unknown Bell state 'bogus'", str(ctx.exception))

    def test_octahedron_membership(self):
        self.assertTrue(BellDiagonalCoords(0.5, -0.25, 0.25).in_octahedron())
        self.assertFalse(BellDiagonalCoords(0.5, -0.5, 0.5).in_octahedron())

    def test_vertex_to_face_endpoints(self):
        self.assertTrue(states.vertex_to_face_state((1, 0, 0), 0.0).allclose(states.bell_projector("psi-")))
        self.assertTrue(states.vertex_to_face_state((1, 0, 0), 1.0).allclose(states.bell_projector("phi+")))
        self.assertAlmostEqual(states.distance_from_singlet(BellDiagonalCoords(-1, -1, -1)), 0.0)


class StateFamilyTests(unittest.TestCase):
    def test_werner_endpoints(self):
        self.assertTrue(states.werner(0.0).allclose(states.bell_projector("psi-")))
        self.assertTrue(states.werner(1.0).allclose(states.MAXIMALLY_MIXED))

    def test_noise_out_of_range(self):
        with self.assertRaises(OutOfRange):
            states.werner(1.5)

    def test_pure_schmidt(self):
        self.assertTrue(states.pure_schmidt(np.pi / 4).allclose(states.bell_projector("phi+")))
        self.assertTrue(states.pure_schmidt(np.pi / 4 + np.pi).allclose(states.pure_schmidt(np.pi / 4)))
        self.assertAlmostEqual(states.pure_schmidt(0.3).purity(), 1.0, places=12)

    def test_rank_two_product_mixture_at_zero(self):
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = 1
        self.assertTrue(states.rank_two_product_mixture(0.0).allclose(DensityMatrix(expected)))

    def test_classical_state(self):
        rho = states.classical_state([[0.4, 0.1], [0.1, 0.4]])
        assert_allclose(np.diag(rho.matrix).real, [0.4, 0.1, 0.1, 0.4])
        with self.assertRaises(NotADistribution):
            states.classical_state([[0.5, 0.5], [0.5, 0.5]])

    def test_zero_ea_state(self):
        rho_b = states.qubit_state([0.0, 0.0, 0.2])
        rho = states.zero_ea_state(rho_b, 0.1 * np.eye(2))
        self.assertAlmostEqual(float(np.trace(rho.matrix).real), 1.0)
        with self.assertRaises(NotAState):
            states.zero_ea_state(rho_b, 5 * np.eye(2))


class RandomStateTests(unittest.TestCase):
    def test_reproducible_and_prefix_stable(self):
        first = states.random_state(7, "haar", 3)
        again = states.random_state(7, "haar", 2)
        for a, b in zip(first, again):
            self.assertTrue(a.allclose(b, atol=0.0))
        self.assertFalse(first[0].allclose(first[1]))

    def test_bures_states_are_valid_and_seed_dependent(self):
        a = states.random_state(1, "bures", 2)
        b = states.random_state(2, "bures", 2)
        self.assertFalse(a[0].allclose(b[0]))
        for rho in a:
            self.assertGreaterEqual(rho.eigenvalues()[-1], -1e-9)

    def test_single_draw_matches_corpus(self):
        corpus = states.random_state(11, "bures", 6)
        for index in (0, 3, 5):
            with self.subTest(index=index):
                self.assertTrue(states.random_state_at(11, "bures", index).allclose(corpus[index], atol=0.0))

    def test_single_draw_rejects_bad_arguments(self):
        with self.assertRaises(OutOfRange):
            states.random_state_at(11, "haar", -1)
        with self.assertRaises(OutOfRange):
            states.random_state_at(-1, "haar", 0)
        with self.assertRaises(ValueError):
            states.random_state_at(11, "lebesgue", 0)  # type: ignore[arg-type]

    def test_haar_mean_purity(self):
        purity = [np.trace(rho.matrix @ rho.matrix).real for rho in states.random_state(2024, "haar", 10_000)]

        self.assertAlmostEqual(float(np.mean(purity)), 8 / 17, delta=0.01)

    def test_unknown_measure(self):
        with self.assertRaises(ValueError):
            states.random_state(0, "lebesgue", 1)  # type: ignore[arg-type]

    def test_haar_unitary_is_unitary(self):
        u = states.haar_unitary(np.random.Generator(np.random.PCG64(3)))
        assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)

    def test_tetrahedron_points_are_inside(self):
        for coords in states.random_tetrahedron_points(5, 50):
            self.assertTrue(states.in_tetrahedron(coords))


if __name__ == "__main__":
    unittest.main()

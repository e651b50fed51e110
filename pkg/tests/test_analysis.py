import unittest

import numpy as np
from scipy.linalg import block_diag, svdvals

from src.analysis.conservativity import block_structure, conservativity_check
from src.analysis.connectedness import (
    closely_connected_subspace, completely_nonunitary_check, reduce_closely_connected)
from src.analysis.dissipativity import dissipativity_scan, pencil_norms, torus_angles
from src.errors import DomainError, PreconditionError
from src.pencil_core.matrices import eval_pencil, spectral_norm
from src.realization.examples import builtin_examples
from src.system_core.system import MultiLSDS
from src.transfer.evaluation import transfer_eval
from tests.helpers import (
    random_conservative_system, random_dissipative_system, random_matrix, random_point_in_polydisc,
    random_system, random_torus_point, rng_for)


def padded(sys: MultiLSDS, extra: list) -> MultiLSDS:
    """Appends a state block that B and C never reach; extra holds its N diagonal blocks."""
    size = extra[0].shape[0]
    return MultiLSDS.from_matrices(
        [block_diag(a, e) for a, e in zip(sys.a, extra)],
        [np.vstack([b, np.zeros((size, sys.dim_nm))]) for b in sys.b],
        [np.hstack([c, np.zeros((sys.dim_np, size))]) for c in sys.c],
        list(sys.d),
    )


def perturbed_alpha(eps: float) -> MultiLSDS:
    alpha, _ = builtin_examples()
    d = [np.array(alpha.d[0]), alpha.d[1] + eps]
    return MultiLSDS.from_matrices(list(alpha.a), list(alpha.b), list(alpha.c), d)


def padded_alpha_prime() -> MultiLSDS:
    _, alpha_prime = builtin_examples()
    return padded(alpha_prime, [np.eye(1), np.zeros((1, 1))])


class TestDissipativityScan(unittest.TestCase):

    def test_examples_have_unit_norm(self):
        for sys in builtin_examples():
            report = dissipativity_scan(sys)
            self.assertAlmostEqual(report.max_norm, 1.0, places=9)
            self.assertTrue(report.dissipative)

    def test_scalar_witness(self):
        sys = MultiLSDS.from_matrices([[[2.0]]], [[[0.0]]], [[[0.0]]], [[[0.0]]])
        report = dissipativity_scan(sys)
        self.assertAlmostEqual(report.max_norm, 2.0)
        self.assertFalse(report.dissipative)
        self.assertEqual(report.samples, 1)

    def test_witness_in_two_variables(self):
        zero = [[0.0]]
        sys = MultiLSDS.from_matrices([[[2.0]], zero], [zero, zero], [zero, zero], [zero, zero])
        report = dissipativity_scan(sys, samples=8)
        self.assertAlmostEqual(report.max_norm, 2.0)
        self.assertFalse(report.dissipative)

    def test_convex_combinations_stay_contractive(self):
        rng = rng_for(50)
        for n in (1, 2, 3):
            sys = random_dissipative_system(rng, n, 2, 1)
            report = dissipativity_scan(sys, samples=16)
            self.assertLessEqual(report.max_norm, 1 + 1e-9)
            self.assertTrue(report.dissipative)

    def test_no_samples(self):
        alpha, _ = builtin_examples()
        with self.assertRaises(DomainError):
            dissipativity_scan(alpha, samples=0)

    def test_switches_to_halton(self):
        sys = random_system(rng_for(51), 3, 2, 1, 1)
        report = dissipativity_scan(sys, samples=32, max_points=500, refine=False)
        self.assertEqual(report.sampling, "halton")
        self.assertEqual(report.samples, 500)

    def test_grid_angles(self):
        angles, scheme = torus_angles(3, 4, 1000)
        self.assertEqual(scheme, "grid")
        self.assertEqual(angles.shape, (16, 3))
        self.assertFalse(np.any(angles[:, 0]))

    def test_batched_norms(self):
        rng = rng_for(52)
        sys = random_system(rng, 2, 2, 1, 1)
        angles, _ = torus_angles(2, 10, 1000)
        norms = pencil_norms(sys.G, angles)
        for theta, value in zip(angles, norms):
            self.assertAlmostEqual(value, spectral_norm(eval_pencil(np.exp(1j * theta), sys.G)))

    def test_scan_beats_random_points(self):
        rng = rng_for(53)
        samples = 64
        for _ in range(5):
            sys = random_system(rng, 2, 2, 1, 1, 1.0)
            report = dissipativity_scan(sys, samples=samples)
            sampled = max(spectral_norm(eval_pencil(random_torus_point(rng, 2), sys.G)) for _ in range(100))
            # every torus point is within pi / samples of the grid in the free angle
            lipschitz = sum(spectral_norm(g) for g in sys.G) * np.pi / samples
            self.assertGreaterEqual(report.max_norm, sampled - lipschitz)
            self.assertTrue(np.allclose(np.abs(report.argmax), 1.0))
            self.assertAlmostEqual(spectral_norm(eval_pencil(report.argmax, sys.G)), report.max_norm)


class TestConservativity(unittest.TestCase):

    def test_examples_pass(self):
        for sys in builtin_examples():
            certificate = conservativity_check(sys)
            self.assertTrue(certificate.passed)
            self.assertLess(certificate.max_residual, 1e-12)

    def test_perturbed_feedthrough_fails(self):
        certificate = conservativity_check(perturbed_alpha(0.01))
        self.assertFalse(certificate.passed)
        self.assertAlmostEqual(certificate.residuals["input_cross"], 0.01)

    def test_random_conservative_systems(self):
        rng = rng_for(54)
        for _ in range(20):
            n = int(rng.integers(1, 4))
            sys = random_conservative_system(rng, n, int(rng.integers(1, 4)), int(rng.integers(1, 3)))
            self.assertTrue(conservativity_check(sys).passed)

    def test_unitary_on_torus(self):
        rng = rng_for(55)
        for _ in range(10):
            sys = random_conservative_system(rng, 3, 3, 2)
            self.assertTrue(conservativity_check(sys).passed)
            for _ in range(100):
                values = svdvals(eval_pencil(random_torus_point(rng, 3), sys.G))
                np.testing.assert_allclose(values, 1.0, atol=1e-9)

    def test_heuristic_residual_bound_on_torus(self):
        rng = rng_for(56)
        for eps in (1e-1, 1e-2, 1e-3):
            sys = perturbed_alpha(eps)
            certificate = conservativity_check(sys)
            r = certificate.max_residual
            self.assertGreaterEqual(r, 1e-6)
            deviation = max(abs(spectral_norm(eval_pencil(random_torus_point(rng, 2), sys.G)) - 1)
                            for _ in range(100))
            self.assertGreaterEqual(deviation, r / (4 * sys.n ** 2))


class TestBlockStructure(unittest.TestCase):

    def test_example_dimensions(self):
        alpha, alpha_prime = builtin_examples()
        for sys, dims in ((alpha, [1, 1]), (alpha_prime, [2, 2])):
            structure = block_structure(sys)
            self.assertEqual(structure.dims_minus, dims)
            self.assertEqual(structure.dims_plus, dims)
            for name, value in structure.residuals.items():
                self.assertLess(value, 1e-9, name)

    def test_blocks_are_unitary(self):
        rng = rng_for(57)
        for _ in range(10):
            sys = random_conservative_system(rng, 2, 3, 1)
            structure = block_structure(sys)
            self.assertEqual(sum(structure.dims_minus), 4)
            self.assertEqual(sum(structure.dims_plus), 4)
            for block in structure.blocks:
                if block.size:
                    np.testing.assert_allclose(block.conj().T @ block, np.eye(block.shape[1]), atol=1e-9)

    def test_verdict(self):
        for sys in builtin_examples():
            structure = block_structure(sys)
            self.assertTrue(structure.passed)
            self.assertEqual(structure.tol, 1e-9)

    def test_lost_rank_fails_verdict(self):
        # all nonzero singular values of a partial isometry are 1, a cut above 1 drops every direction
        structure = block_structure(builtin_examples()[1], rank_tol=1.5)
        self.assertFalse(structure.passed)
        self.assertEqual(structure.residuals["minus_completeness"], 4.0)

    def test_requires_conservative_system(self):
        with self.assertRaises(PreconditionError):
            block_structure(perturbed_alpha(0.01))


class TestConnectedness(unittest.TestCase):

    def test_example_dimensions(self):
        alpha, alpha_prime = builtin_examples()
        self.assertEqual(closely_connected_subspace(alpha).dim, 1)
        self.assertEqual(closely_connected_subspace(alpha_prime).dim, 3)
        self.assertEqual(closely_connected_subspace(padded_alpha_prime()).dim, 3)

    def test_subspace_is_invariant(self):
        rng = rng_for(58)
        sys = padded(random_dissipative_system(rng, 2, 2, 1), [0.5 * np.eye(2), 0.3 * np.eye(2)])
        subspace = closely_connected_subspace(sys)
        self.assertLessEqual(subspace.dim, 2)
        for a in sys.a:
            self.assertLess(subspace.invariance_residual(a), 1e-10)
            self.assertLess(subspace.invariance_residual(a.conj().T), 1e-10)
        for b in sys.b:
            self.assertLess(subspace.containment_residual(b), 1e-10)
        for c in sys.c:
            self.assertLess(subspace.containment_residual(c.conj().T), 1e-10)

    def test_reduction_keeps_transfer_function(self):
        rng = rng_for(59)
        systems = [padded_alpha_prime(),
                   padded(random_dissipative_system(rng, 2, 3, 2), [0.5 * np.eye(2), -0.4j * np.eye(2)])]
        for sys in systems:
            reduced, V = reduce_closely_connected(sys)
            self.assertLess(reduced.dim_x, sys.dim_x)
            self.assertEqual(V.shape, (sys.dim_x, reduced.dim_x))
            for _ in range(100):
                z = random_point_in_polydisc(rng, 2, 0.9)
                np.testing.assert_allclose(transfer_eval(reduced, z), transfer_eval(sys, z), atol=1e-10)

    def test_unreachable_state_reduces_to_nothing(self):
        rng = rng_for(60)
        sys = MultiLSDS.from_matrices(
            [random_matrix(rng, 3, 3, 0.3) for _ in range(2)],
            [np.zeros((3, 1))] * 2, [np.zeros((1, 3))] * 2, [random_matrix(rng, 1, 1) for _ in range(2)])
        reduced, V = reduce_closely_connected(sys)
        self.assertEqual(reduced.dim_x, 0)
        self.assertEqual(V.shape, (3, 0))
        z = (0.3, -0.2j)
        np.testing.assert_allclose(transfer_eval(reduced, z), transfer_eval(sys, z), atol=1e-12)

    def test_completely_nonunitary(self):
        alpha, alpha_prime = builtin_examples()
        self.assertTrue(completely_nonunitary_check(alpha))
        self.assertTrue(completely_nonunitary_check(alpha_prime))
        self.assertFalse(completely_nonunitary_check(padded_alpha_prime()))

    def test_completely_nonunitary_requires_conservative_system(self):
        with self.assertRaises(PreconditionError):
            completely_nonunitary_check(perturbed_alpha(0.01))


if __name__ == '__main__':
    unittest.main()

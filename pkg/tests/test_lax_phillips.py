import unittest

import numpy as np

from src.errors import DomainError
from src.lax_phillips.generators import (
    CONSERVATIVE, DISSIPATIVE, NON_DISSIPATIVE, adjointness_residual, apply_adjoint, apply_generator,
    commutation_residual, conjugacy_residual, gamma_map, metric_check)
from src.lax_phillips.one_param import associated_one_param, reproduction_residual
from src.lax_phillips.space import TruncatedLPVector, random_interior_vector, space_dims
from src.pencil_core.matrices import order
from src.realization.examples import builtin_examples
from src.system_core.signals import LatticeBox, LatticeSignal
from src.system_core.system import MultiLSDS
from tests.helpers import (
    random_conservative_system, random_dissipative_system, random_matrix, random_system, rng_for)


def spike(box, dims, part, at, value=1.0):
    """A vector with a single entry in one part."""
    signals = []
    for name, dim in zip(("u_plus", "y", "u_minus"), dims):
        entries = {tuple(at): np.full(dim, value, dtype=np.complex128)} if name == part else {}
        signals.append(LatticeSignal(box.n, dim, entries))
    return TruncatedLPVector(box, *signals)


def scalar_system(a, b, c, d):
    return MultiLSDS.from_matrices(*[[[[v]] for v in values] for values in (a, b, c, d)])


class TestSpace(unittest.TestCase):

    def test_half_space_constraint(self):
        box = LatticeBox.cube(2, -2, 2)
        with self.assertRaises(DomainError):
            spike(box, (1, 1, 1), "y", (1, 0))
        with self.assertRaises(DomainError):
            spike(box, (1, 1, 1), "u_plus", (1, 1))
        with self.assertRaises(DomainError):
            spike(box, (1, 1, 1), "u_minus", (-1, 0))

    def test_entries_outside_box(self):
        with self.assertRaises(DomainError):
            spike(LatticeBox.cube(2, -2, 2), (1, 1, 1), "u_minus", (3, 0))

    def test_gamma_is_an_isometric_involution(self):
        rng = rng_for(70)
        box = LatticeBox((-3, -2), (2, 4))
        h = random_interior_vector(rng, box, (2, 3, 1), margin=1)
        image = gamma_map(h)
        self.assertEqual(image.box, box.negated())
        self.assertEqual(image.dims, (1, 3, 2))
        self.assertAlmostEqual(image.norm(), h.norm(), places=12)
        back = gamma_map(image)
        self.assertEqual(back.box, box)
        self.assertEqual(back.combine(h, -1.0).norm(), 0.0)

    def test_document_round_trip(self):
        h = random_interior_vector(rng_for(71), LatticeBox.cube(2, -2, 2), (1, 2, 1), margin=1)
        again = TruncatedLPVector.from_dict(h.to_dict())
        self.assertAlmostEqual(again.combine(h, -1.0).norm(), 0.0)


class TestGenerators(unittest.TestCase):

    def setUp(self):
        self.alpha, self.alpha_prime = builtin_examples()
        self.box = LatticeBox.cube(2, -3, 3)

    def test_output_spike_shifts_toward_front(self):
        h = spike(self.box, (1, 1, 1), "u_plus", (-1, -1))
        image, _ = apply_generator(self.alpha, 1, h)
        np.testing.assert_array_equal(image.u_plus.get((-2, -1)), [1.0])
        self.assertAlmostEqual(image.norm(), 1.0)

    def test_state_impulse_on_example(self):
        h = spike(self.box, (1, 1, 1), "y", (0, 0))
        image, _ = apply_generator(self.alpha, 2, h)
        np.testing.assert_array_equal(image.u_plus.get((1, -1)), [1.0])
        self.assertAlmostEqual(image.norm(), 1.0)
        self.assertAlmostEqual(image.y.norm_sq(), 0.0)
        self.assertAlmostEqual(image.u_minus.norm_sq(), 0.0)

    def test_zero_vector(self):
        zero = TruncatedLPVector.zeros(self.box, space_dims(self.alpha_prime))
        for apply in (apply_generator, apply_adjoint):
            image, _ = apply(self.alpha_prime, 2, zero)
            self.assertEqual(image.norm(), 0.0)

    def test_generator_index_range(self):
        h = TruncatedLPVector.zeros(self.box, (1, 1, 1))
        for k in (0, 3):
            with self.assertRaises(DomainError):
                apply_generator(self.alpha, k, h)
            with self.assertRaises(DomainError):
                apply_adjoint(self.alpha, k, h)

    def test_adjoint_shifts_deep_inputs_back(self):
        box = LatticeBox.cube(2, -4, 4)
        image, _ = apply_adjoint(self.alpha, 1, spike(box, (1, 1, 1), "u_minus", (2, 1)))
        np.testing.assert_array_equal(image.u_minus.get((3, 1)), [1.0])
        self.assertAlmostEqual(image.norm(), 1.0)

    def test_adjointness(self):
        rng = rng_for(72)
        for n in (1, 2, 3):
            sys = random_system(rng, n, 2, 1, 2)
            box = LatticeBox.cube(n, -2, 2)
            for k in range(1, n + 1):
                h1 = random_interior_vector(rng, box, space_dims(sys), margin=1)
                h2 = random_interior_vector(rng, box, space_dims(sys), margin=1)
                left = apply_generator(sys, k, h1)[0].inner(h2)
                right = h1.inner(apply_adjoint(sys, k, h2)[0])
                self.assertLess(abs(left - right), 1e-10)
                self.assertLess(adjointness_residual(sys, k, trials=3, box=box), 1e-10)

    def test_boundary_reads_are_marked(self):
        h = random_interior_vector(rng_for(73), self.box, (1, 1, 1))
        image, mask = apply_generator(self.alpha, 1, h)
        self.assertIn(("u_minus", (3, 3)), mask)
        self.assertIn(("u_plus", (3, -3)), mask)
        self.assertIn(("y", (3, -3)), mask)
        self.assertNotIn(("u_minus", (0, 0)), mask)
        self.assertEqual(mask, image.contaminated)

    def test_wandering_subspace_moves_to_negative_fronts(self):
        rng = rng_for(74)
        sys = random_system(rng, 2, 2, 1, 1)
        entries = {t: random_matrix(rng, 1, 1).ravel() for t in self.box.front(0) if max(map(abs, t)) <= 1}
        h = TruncatedLPVector(self.box, LatticeSignal(2, 1, entries), LatticeSignal.zeros(2, 2),
                              LatticeSignal.zeros(2, 1))
        for k in (1, 2):
            image, _ = apply_generator(sys, k, h)
            for t, v in image.u_plus.entries.items():
                if np.any(v):
                    self.assertLessEqual(order(t), -1)
            self.assertAlmostEqual(image.y.norm_sq(), 0.0)
            self.assertAlmostEqual(image.u_minus.norm_sq(), 0.0)

    def test_examples_commute(self):
        for sys in (self.alpha, self.alpha_prime):
            self.assertLessEqual(commutation_residual(sys, 1, 2), 1e-12)

    def test_random_systems_commute(self):
        rng = rng_for(75)
        sys = random_system(rng, 3, 2, 2, 1)
        box = LatticeBox.cube(3, -3, 3)
        for k, j in ((1, 2), (1, 3), (2, 3)):
            self.assertLessEqual(commutation_residual(sys, k, j, trials=3, box=box), 1e-10)

    def test_single_generator_commutes_trivially(self):
        sys = scalar_system([0.3], [0.5], [0.5], [0.1])
        self.assertEqual(commutation_residual(sys, 1, 1), 0.0)

    def test_conjugate_square(self):
        rng = rng_for(76)
        for sys in (self.alpha_prime, random_system(rng, 2, 3, 2, 1)):
            for k in (1, 2):
                self.assertLess(conjugacy_residual(sys, k, trials=3), 1e-12)

    def test_conservative_generators_are_unitary(self):
        rng = rng_for(77)
        sys = random_conservative_system(rng, 2, 2, 1)
        for _ in range(3):
            h = random_interior_vector(rng, self.box, space_dims(sys))
            for k in (1, 2):
                image, _ = apply_generator(sys, k, h)
                back, _ = apply_adjoint(sys, k, image)
                self.assertLess(back.combine(h, -1.0).norm(), 1e-10)
                forth, _ = apply_generator(sys, k, apply_adjoint(sys, k, h)[0])
                self.assertLess(forth.combine(h, -1.0).norm(), 1e-10)


class TestMetricCheck(unittest.TestCase):

    def test_example_is_isometric(self):
        alpha, _ = builtin_examples()
        report = metric_check(alpha, trials=5)
        self.assertEqual(report.classification, CONSERVATIVE)
        self.assertTrue(report.isometric)
        self.assertTrue(report.consistent)
        for value in report.group_residuals.values():
            self.assertLess(value, 1e-12)

    def test_expansive_state_operator(self):
        sys = scalar_system([2.0], [0.0], [0.0], [0.0])
        box = LatticeBox.cube(1, -3, 3)
        image, _ = apply_generator(sys, 1, spike(box, (1, 1, 1), "y", (0,)))
        self.assertAlmostEqual(image.norm(), 2.0)
        report = metric_check(sys, trials=20)
        self.assertGreater(report.max_ratio, 1.0)
        self.assertFalse(report.contractive)
        self.assertEqual(report.classification, NON_DISSIPATIVE)

    def test_feedthrough_only_system(self):
        zero = [0.0, 0.0]
        sys = scalar_system(zero, zero, zero, [0.5, 0.3])
        report = metric_check(sys, trials=5)
        self.assertEqual(report.classification, DISSIPATIVE)
        self.assertLessEqual(report.max_ratio, 1.0 + 1e-12)
        self.assertTrue(report.consistent)

    def test_random_dissipative_system(self):
        sys = random_dissipative_system(rng_for(78), 2, 2, 1)
        report = metric_check(sys, trials=5)
        self.assertTrue(report.contractive)
        self.assertTrue(report.consistent)


class TestOneParam(unittest.TestCase):

    def test_single_parameter_system_is_unchanged(self):
        sys = random_system(rng_for(79), 1, 3, 2, 1)
        view = associated_one_param(sys, 1, LatticeBox.cube(1, -2, 2))
        self.assertEqual(view.front, [(0,)])
        self.assertEqual(view.pattern, {})
        np.testing.assert_array_equal(view.A, sys.a[0])
        np.testing.assert_array_equal(view.D, sys.d[0])

    def test_example_matrices_on_five_point_front(self):
        alpha, _ = builtin_examples()
        view = associated_one_param(alpha, 1, LatticeBox.cube(2, -2, 2))
        self.assertEqual(view.front, [(-2, 2), (-1, 1), (0, 0), (1, -1), (2, -2)])
        shift_21 = np.diag(np.ones(4), 1)
        np.testing.assert_array_equal(view.state_shift(2), shift_21)
        np.testing.assert_array_equal(view.C, np.eye(5))
        np.testing.assert_array_equal(view.D, np.zeros((5, 5)))
        np.testing.assert_array_equal(view.A, np.zeros((5, 5)))
        np.testing.assert_array_equal(view.B, shift_21)
        np.testing.assert_array_equal(view.lossy(), [False, False, False, False, True])
        self.assertEqual(int(view.clean_after(3).sum()), 2)

    def test_rejects_bad_direction(self):
        alpha, _ = builtin_examples()
        with self.assertRaises(DomainError):
            associated_one_param(alpha, 3, LatticeBox.cube(2, -2, 2))

    def test_reproduces_multiparametric_dynamics(self):
        rng = rng_for(80)
        steps = 3
        box = LatticeBox.cube(2, -3, 3)
        for sys in (random_system(rng, 2, 2, 1, 1), builtin_examples()[1]):
            init = LatticeSignal(2, sys.dim_x, {t: random_matrix(rng, sys.dim_x, 1).ravel() for t in box.front(0)})
            region = LatticeBox((-3, -3), (6, 6))
            entries = {t: random_matrix(rng, sys.dim_nm, 1).ravel()
                       for t in region.points() if 0 <= order(t) < steps}
            input = LatticeSignal(2, sys.dim_nm, entries)
            for k in (1, 2):
                view = associated_one_param(sys, k, box)
                self.assertEqual(int(view.clean_after(steps).sum()), 4)
                self.assertLessEqual(reproduction_residual(sys, k, init, input, box, steps), 1e-10)


if __name__ == '__main__':
    unittest.main()

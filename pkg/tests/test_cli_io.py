import contextlib
import io
import json
import os
import tempfile
import unittest
from unittest import mock

import numpy as np
import pandas as pd

from src.cli_io.formats import load_system, save_system, system_from_dict, system_to_dict
from src.cli_io.reports import SCHEMA_VERSION, RunReport, plain
from src.errors import InputError, ShapeError
from src.main import main
from src.realization.examples import builtin_examples
from src.system_core.signals import pairs_to_complex
from src.system_core.system import MultiLSDS
from tests.helpers import random_system, rng_for

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ALPHA = os.path.join(ROOT, "data", "systems", "alpha.json")
ALPHA_PRIME = os.path.join(ROOT, "data", "systems", "alpha_prime.json")
IMPULSE = os.path.join(ROOT, "data", "signals", "impulse.json")
Z1Z2 = os.path.join(ROOT, "data", "agler", "z1z2.json")
Z1SQ_Z2 = os.path.join(ROOT, "data", "agler", "z1sq_z2.json")


def run(*argv):
    buffer = io.StringIO()
    with contextlib.redirect_stdout(buffer):
        code = main(list(argv))
    return code, json.loads(buffer.getvalue())


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write(self, name, document):
        path = self.path(name)
        with open(path, 'w') as file:
            if isinstance(document, str):
                file.write(document)
            else:
                json.dump(document, file)
        return path


class TestFormats(CliTestCase):

    def test_bundled_systems_match_examples(self):
        for path, expected in zip((ALPHA, ALPHA_PRIME), builtin_examples()):
            sys = load_system(path)
            for left, right in zip(sys.G, expected.G):
                np.testing.assert_allclose(left, right, atol=1e-16)

    def test_system_round_trip(self):
        sys = random_system(rng_for(90), 3, 2, 1, 2)
        path = self.path("sys.json")
        save_system(sys, path)
        restored = load_system(path)
        self.assertEqual((restored.dim_x, restored.dim_nm, restored.dim_np), (2, 1, 2))
        for left, right in zip(restored.G, sys.G):
            np.testing.assert_array_equal(left, right)

    def test_empty_state_space(self):
        sys = MultiLSDS.from_matrices([np.zeros((0, 0))] * 2, [np.zeros((0, 1))] * 2,
                                      [np.zeros((1, 0))] * 2, [[[0.5]], [[0.5j]]], dim_x=0)
        restored = system_from_dict(json.loads(json.dumps(system_to_dict(sys))))
        self.assertEqual(restored.dim_x, 0)
        np.testing.assert_array_equal(restored.d[1], [[0.5j]])

    def test_schema_violations(self):
        document = system_to_dict(builtin_examples()[0])
        del document["D"]
        with self.assertRaises(InputError):
            system_from_dict(document)
        document = system_to_dict(builtin_examples()[0])
        document["A"][0] = [[[1.0, 0.0], [0.0, 0.0]]]
        with self.assertRaises(InputError):
            system_from_dict(document)

    def test_member_count(self):
        document = system_to_dict(builtin_examples()[0])
        document["B"] = document["B"][:1]
        with self.assertRaises(InputError):
            system_from_dict(document)

    def test_non_finite_entries(self):
        document = system_to_dict(builtin_examples()[0])
        document["A"][0] = [[[float("inf"), 0.0]]]
        with self.assertRaises(ShapeError):
            system_from_dict(document)

    def test_report_uses_versioned_schema(self):
        report = json.loads(RunReport(command="check").to_json())
        self.assertEqual(report["schema"], SCHEMA_VERSION)
        self.assertEqual(plain({"z": np.array([1 + 2j]), "ok": np.bool_(True)}), {"z": [[1.0, 2.0]], "ok": True})


class TestCheckCommand(CliTestCase):

    def test_alpha(self):
        code, report = run("check", ALPHA)
        self.assertEqual(code, 0)
        self.assertEqual(report["schema"], SCHEMA_VERSION)
        self.assertTrue(report["results"]["conservative"])
        self.assertTrue(report["results"]["dissipative"])
        self.assertEqual(report["results"]["cc_dim"], 1)
        self.assertTrue(report["results"]["completely_nonunitary"])
        self.assertTrue(report["inputs"][ALPHA].startswith("sha256:"))

    def test_alpha_prime(self):
        code, report = run("check", ALPHA_PRIME, "--samples", "8")
        self.assertEqual(code, 0)
        self.assertTrue(report["results"]["conservative"])
        self.assertEqual(report["results"]["cc_dim"], 3)
        self.assertEqual(report["results"]["torus_scan"]["samples"], 8)

    def test_failed_check_is_a_result(self):
        document = system_to_dict(builtin_examples()[0])
        document["D"][1] = [[[0.5, 0.0]]]
        code, report = run("check", self.write("loud.json", document))
        self.assertEqual(code, 0)
        self.assertFalse(report["results"]["conservative"])
        self.assertFalse(report["results"]["dissipative"])

    def test_malformed_json(self):
        code, report = run("check", self.write("broken.json", "{not json"))
        self.assertEqual(code, 2)
        self.assertEqual(report["results"]["error"], "InputError")

    def test_missing_file(self):
        code, _ = run("check", self.path("absent.json"))
        self.assertEqual(code, 2)

    def test_config_file(self):
        config = self.write("config.json", {"samples": 4, "torus_max_points": 100})
        code, report = run("check", ALPHA, "--config", config)
        self.assertEqual(code, 0)
        self.assertEqual(report["results"]["torus_scan"]["samples"], 4)

    def test_failed_block_decomposition_exits_3(self):
        config = self.write("config.json", {"rank_tol": 1.5})
        code, report = run("check", ALPHA_PRIME, "--no-refine", "--config", config)
        self.assertEqual(code, 3)
        self.assertEqual(report["status"], "failed")
        self.assertEqual(report["results"]["error"], "VerificationError")
        self.assertEqual(report["results"]["residuals"]["minus_completeness"], 4.0)

    def test_block_verdict_reported(self):
        _, report = run("check", ALPHA, "--no-refine")
        self.assertTrue(report["results"]["block_structure_passed"])

    def test_reference_comparison(self):
        _, first = run("check", ALPHA, "--no-refine")
        reference = self.write("reference.json", first)
        _, second = run("check", ALPHA, "--no-refine", "--reference", reference)
        self.assertEqual(second["results"]["comparison"]["number_of_keys_differing"], 0)
        self.assertEqual(second["warnings"], [])


class TestSimulateCommand(CliTestCase):

    def test_impulse_ledger(self):
        csv = self.path("ledger.csv")
        code, report = run("simulate", ALPHA, "--input", IMPULSE, "--energy", "--nmax", "3", "--csv", csv)
        self.assertEqual(code, 0)
        ledger = report["results"]["ledger"]
        self.assertEqual([row["E_minus"] for row in ledger], [1.0, 0.0, 0.0])
        self.assertEqual([row["E_plus"] for row in ledger], [0.0, 1.0, 0.0])
        self.assertTrue(report["results"]["conservative_consistent"])
        frame = pd.read_csv(csv)
        self.assertEqual(list(frame.columns[:7]), ["n", "E_minus", "E_plus", "E_x", "lhs", "rhs", "difference"])
        np.testing.assert_allclose(frame["lhs"], frame["rhs"], atol=1e-12)

    def test_zero_input(self):
        code, report = run("simulate", ALPHA, "--energy")
        self.assertEqual(code, 0)
        for row in report["results"]["ledger"]:
            self.assertEqual((row["E_minus"], row["E_plus"], row["E_x"]), (0.0, 0.0, 0.0))

    def test_small_box_contaminates(self):
        code, report = run("simulate", ALPHA, "--input", IMPULSE, "--energy", "--nmax", "3", "--box", "0", "1")
        self.assertEqual(code, 0)
        self.assertEqual([row["contaminated"] for row in report["results"]["ledger"]], [False, True, True])

    def test_conjugate_ledger(self):
        code, report = run("simulate", ALPHA_PRIME, "--input", IMPULSE, "--energy", "--conjugate", "--nmax", "4")
        self.assertEqual(code, 0)
        self.assertTrue(report["results"]["conservative_consistent"])

    def test_dimension_mismatch(self):
        signal = self.write("wide.json", {"n": 2, "dim": 2, "entries": [{"t": [0, 0], "v": [[1, 0], [0, 0]]}]})
        code, _ = run("simulate", ALPHA, "--input", signal)
        self.assertEqual(code, 2)


class TestTransferCommand(CliTestCase):

    def test_alpha_prime_grid(self):
        code, report = run("transfer", ALPHA_PRIME, "--grid", "10", "--seed", "3")
        self.assertEqual(code, 0)
        evaluations = report["results"]["evaluations"]
        self.assertEqual(len(evaluations), 10)
        for entry in evaluations:
            z = pairs_to_complex(entry["z"])
            np.testing.assert_allclose(pairs_to_complex(entry["value"]), [[z[0] * z[1]]], atol=1e-12)

    def test_coefficients(self):
        code, report = run("transfer", ALPHA, "--grid", "1", "--coeffs", "3")
        self.assertEqual(code, 0)
        terms = report["results"]["coefficients"]["terms"]
        self.assertEqual([term["t"] for term in terms], [[1, 1]])

    def test_singular_point(self):
        scalar = {"n": 1, "dims": {"x": 1, "nm": 1, "np": 1},
                  "A": [[[[1.0, 0.0]]]], "B": [[[[1.0, 0.0]]]], "C": [[[[1.0, 0.0]]]], "D": [[[[0.0, 0.0]]]]}
        points = {"points": [[[1.0, 0.0]], [[0.5, 0.0]]]}
        code, report = run("transfer", self.write("scalar.json", scalar), "--points", self.write("p.json", points))
        self.assertEqual(code, 0)
        singular, regular = report["results"]["evaluations"]
        self.assertIn("error", singular)
        np.testing.assert_allclose(pairs_to_complex(regular["value"]), [[0.5]])
        self.assertEqual(len(report["warnings"]), 1)

    def test_point_arity(self):
        points = {"points": [[[0.1, 0.0]]]}
        code, _ = run("transfer", ALPHA, "--points", self.write("p.json", points))
        self.assertEqual(code, 2)


class TestRealizeCommand(CliTestCase):

    def test_canonical(self):
        out = self.path("realized.json")
        code, report = run("realize", Z1Z2, "--out", out)
        self.assertEqual(code, 0)
        self.assertEqual(report["results"]["state_dim"], 1)
        self.assertLess(report["results"]["diagnostics"]["residuals"]["transfer"], 1e-7)
        self.assertLess(report["results"]["agler_residual"], 1e-12)
        _, check = run("check", out)
        self.assertTrue(check["results"]["conservative"])

    def test_padding_flag(self):
        code, report = run("realize", Z1SQ_Z2, "--extra-dims", "1")
        self.assertEqual(code, 0)
        self.assertEqual(report["results"]["state_dim"], 3)
        self.assertEqual(report["results"]["system"]["dims"]["x"], 3)

    def test_deterministic_output(self):
        first, second = self.path("a.json"), self.path("b.json")
        run("realize", Z1SQ_Z2, "--seed", "7", "--out", first)
        run("realize", Z1SQ_Z2, "--seed", "7", "--out", second)
        with open(first, 'rb') as a, open(second, 'rb') as b:
            self.assertEqual(a.read(), b.read())

    def test_report_is_reproducible(self):
        _, first = run("realize", Z1SQ_Z2, "--seed", "7")
        _, second = run("realize", Z1SQ_Z2, "--seed", "7")
        self.assertEqual(first, second)
        self.assertEqual(first["timing"], {})

    def test_timing_flag(self):
        _, report = run("realize", Z1Z2, "--timing")
        self.assertEqual(set(report["timing"]), {"load", "realize"})

    def test_corrupted_functions(self):
        with open(Z1Z2, 'r') as file:
            document = json.load(file)
        document["fks"][1]["terms"][0]["m"] = [[[2.0, 0.0]]]
        code, report = run("realize", self.write("bad.json", document))
        self.assertEqual(code, 3)
        self.assertEqual(report["status"], "failed")


class TestExitMapping(CliTestCase):

    def test_unexpected_exception_has_json_body(self):
        def broken(args, settings):
            raise np.linalg.LinAlgError("SVD did not converge")

        with mock.patch.dict("src.cli_io.commands.COMMANDS", {"check": broken}):
            code, report = run("check", ALPHA)
        self.assertEqual(code, 2)
        self.assertEqual(report["status"], "error")
        self.assertEqual(report["results"]["error"], "LinAlgError")

    def test_bad_flag_value(self):
        with contextlib.redirect_stderr(io.StringIO()):
            code, report = run("check", ALPHA, "--samples", "many")
        self.assertEqual(code, 2)
        self.assertEqual(report["results"]["error"], "InputError")


class TestLaxPhillipsCommand(CliTestCase):

    def test_commute(self):
        code, report = run("laxphillips", ALPHA, "--op", "commute")
        self.assertEqual(code, 0)
        self.assertLessEqual(report["results"]["max_residual"], 1e-12)

    def test_metric(self):
        code, report = run("laxphillips", ALPHA, "--op", "metric")
        self.assertEqual(code, 0)
        np.testing.assert_allclose(report["results"]["ratios"], 1.0, atol=1e-10)
        self.assertEqual(report["results"]["classification"], "conservative")

    def test_adjoint_and_generator(self):
        _, adjoint = run("laxphillips", ALPHA_PRIME, "--op", "adjoint", "--k", "2")
        self.assertLess(adjoint["results"]["adjointness"], 1e-10)
        self.assertLess(adjoint["results"]["conjugacy"], 1e-10)
        _, generator = run("laxphillips", ALPHA_PRIME, "--op", "generator")
        self.assertAlmostEqual(generator["results"]["ratio"], 1.0, places=10)

    def test_bad_direction(self):
        code, report = run("laxphillips", ALPHA, "--op", "generator", "--k", "5")
        self.assertEqual(code, 2)
        self.assertEqual(report["results"]["error"], "DomainError")


if __name__ == '__main__':
    unittest.main()

import json
import os
import tempfile
import unittest
from unittest import mock

from radial_shoot import catalog, search, settings
from radial_shoot.cli import RunConfig
from radial_shoot.commands import EXIT_HYPOTHESIS, EXIT_NOT_FOUND, EXIT_NUMERIC, EXIT_OK, ShootCommand
from radial_shoot.exceptions import CommandDoesNotExist, ImproperlyConfigured, NotFoundAtResolution
from radial_shoot.nonlinearity import Case
from radial_shoot.routers import DefaultRouter


class ShootCommandTests(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.config = RunConfig(
            N=3,
            nonlinearity={"model": "m1"},
            integrator={"r_max": 50.0},
            search={"grid_points": 32, "k": 2},
            output={"directory": self.tmp.name},
        )
        self.command = ShootCommand(config=self.config, options={"k": 3})

    def read(self, name):
        with open(os.path.join(self.tmp.name, name), encoding="utf-8") as fh:
            return json.load(fh)

    def test_get_config(self):
        self.assertIs(self.command.get_config(), self.config)

    def test_missing_config(self):
        with self.assertRaises(ImproperlyConfigured):
            ShootCommand().get_config()

    def test_get_model(self):
        self.assertEqual(self.command.get_model().to_dict(), catalog.model_m1().to_dict())

    def test_explicit_model_wins(self):
        model = catalog.model_m2()
        command = ShootCommand(config=self.config, model=model)
        self.assertIs(command.get_model(), model)

    def test_get_problem(self):
        problem = self.command.get_problem(1.5)
        self.assertEqual(problem.alpha, 1.5)
        self.assertEqual(problem.r_max, 50.0)
        self.assertEqual(problem.N, 3)

    def test_command_line_option_wins(self):
        self.assertEqual(self.command.get_option("k"), 3)
        self.assertEqual(self.command.get_option("grid_points"), 32)
        self.assertEqual(self.command.get_option("workers", 1), 1)

    def test_required_option(self):
        with self.assertRaises(ImproperlyConfigured):
            self.command.get_required_option("alpha")

    def test_search_kwargs(self):
        kwargs = self.command.get_search_kwargs()
        self.assertEqual(kwargs["grid_points"], 32)
        self.assertEqual(kwargs["max_points"], settings.SCAN_POINTS_CAP)
        self.assertIsNone(kwargs["bisect_tol"])

    def test_output_path(self):
        path = self.command.get_output_path("landmarks")
        self.assertEqual(path, os.path.abspath(os.path.join(self.tmp.name, "landmarks.json")))
        with self.assertRaises(ImproperlyConfigured):
            self.command.get_output_path("unknown")

    def test_custom_paths(self):
        command = ShootCommand(config=self.config, custom_paths={"landmarks": "special.json"})
        self.assertTrue(command.get_output_path("landmarks").endswith("special.json"))

    def test_check_command(self):
        self.assertEqual(self.command.dispatch("check"), EXIT_OK)
        report = self.read("hypotheses.json")
        self.assertEqual(report["provenance"]["command"], "check")
        self.assertEqual(report["hypotheses"]["case"], "A1")
        self.assertIn("landmarks", report)

    def test_check_command_failing_hypotheses(self):
        config = RunConfig(N=3, nonlinearity={"model": "cubic"}, output={"directory": self.tmp.name})
        self.assertEqual(ShootCommand(config=config).dispatch("check"), EXIT_HYPOTHESIS)
        report = self.read("hypotheses.json")
        self.assertEqual(report["hypotheses"]["case"], "Neither")
        self.assertNotIn("landmarks", report)

    def test_landmarks_command(self):
        self.assertEqual(self.command.dispatch("landmarks"), EXIT_OK)
        landmarks = self.read("landmarks.json")["landmarks"]
        self.assertAlmostEqual(landmarks["gamma_star"], 2.0)

    def test_shoot_requires_alpha(self):
        self.assertEqual(self.command.dispatch("shoot"), EXIT_NUMERIC)

    def test_shoot_command(self):
        command = ShootCommand(config=self.config, options={"alpha": 1.9})
        self.assertEqual(command.dispatch("shoot"), EXIT_OK)
        body = self.read("classification.json")
        self.assertEqual(body["alpha"], 1.9)
        self.assertIn("label", body["classification"])
        self.assertLessEqual(body["residuals"]["energy"], 1e-6)
        events = self.read("events.json")
        zeros = [e for e in events["events"] if e["kind"] == "SimpleZero"]
        self.assertEqual(len(zeros), events["sign_changes"])
        self.assertTrue(os.path.exists(os.path.join(self.tmp.name, "trajectory.json")))

    def test_shoot_outside_domain(self):
        command = ShootCommand(config=self.config, options={"alpha": 2.5})
        self.assertEqual(command.dispatch("shoot"), EXIT_NUMERIC)

    def test_pairs_command_not_found(self):
        config = RunConfig(N=3, nonlinearity={"model": "m2"}, output={"directory": self.tmp.name})
        with mock.patch.object(search, "find_pairs", side_effect=NotFoundAtResolution("none", grid_points=512)):
            code = ShootCommand(config=config, options={"k": 0}).dispatch("pairs")
        self.assertEqual(code, EXIT_NOT_FOUND)
        body = self.read("pairs.json")
        self.assertFalse(body["found"])
        self.assertEqual(body["reason"], "none")

    def test_theorems_command_m2(self):
        config = RunConfig(N=3, nonlinearity={"model": "m2"}, search={"k": 1}, output={"directory": self.tmp.name})
        self.assertEqual(ShootCommand(config=config).dispatch("theorems"), EXIT_OK)
        body = self.read("theorems.json")
        nonexistence = [r for r in body["reports"] if r["theorem"] == "NonexistenceA1"]
        self.assertEqual(len(nonexistence), 1)
        self.assertTrue(nonexistence[0]["holds"])
        self.assertIn("C_k", body["skipped"])

    def test_allowed_commands(self):
        command = ShootCommand(config=self.config)
        command.allowed_commands = ["Check", "check", "scan"]
        self.assertEqual(command._allowed_commands(), {"check", "scan"})

    def test_invalid_allowed_commands(self):
        command = ShootCommand(config=self.config)
        command.allowed_commands = ["check", "plot"]
        with self.assertRaises(TypeError):
            command._allowed_commands()

    def test_command_not_allowed(self):
        command = ShootCommand(config=self.config)
        command.allowed_commands = ["check"]
        with self.assertRaises(CommandDoesNotExist):
            command.get_command_method("scan")
        with self.assertRaises(CommandDoesNotExist):
            command.get_command_method("plot")

    def test_dispatch_without_config(self):
        self.assertEqual(ShootCommand().dispatch("check"), EXIT_NUMERIC)

    def test_hypotheses_are_cached(self):
        first = self.command.get_hypotheses()
        self.assertIs(self.command.get_hypotheses(), first)
        self.assertIs(first.case, Case.A1)


class RouterTests(unittest.TestCase):

    def setUp(self):
        self.router = DefaultRouter()

    def test_default_basename(self):
        self.assertEqual(self.router.get_default_basename(ShootCommand), "shoot")

    def test_register(self):
        self.router.register("", ShootCommand)
        self.assertEqual(self.router.registery, [("", ShootCommand, "shoot")])

    def test_prefix_gets_dash(self):
        self.router.register("alt", ShootCommand, "alt")
        self.assertEqual(self.router.registery[0][0], "alt-")

    def test_duplicate_prefix(self):
        self.router.register("", ShootCommand, "one")
        with self.assertRaises(ImproperlyConfigured):
            self.router.register("", ShootCommand, "two")

    def test_duplicate_basename(self):
        self.router.register("", ShootCommand, "one")
        with self.assertRaises(ImproperlyConfigured):
            self.router.register("other", ShootCommand, "one")

    def test_parser_needs_registration(self):
        with self.assertRaises(AssertionError):
            self.router.get_parser()

    def test_parser(self):
        self.router.register("", ShootCommand, "shoot")
        args = self.router.parser.parse_args(["scan", "--model", "m1", "--grid", "16", "--alpha-hi", "1.9"])
        self.assertEqual(args.command, "scan")
        self.assertIs(args.command_class, ShootCommand)
        self.assertEqual(args.grid_points, 16)
        self.assertEqual(args.alpha_hi, 1.9)
        self.assertIsNone(args.svg)

    def test_prefixed_subcommands(self):
        self.router.register("", ShootCommand, "shoot")
        self.router.register("alt", ShootCommand, "alt")
        args = self.router.parser.parse_args(["alt-pairs", "--model", "m1", "--k", "2"])
        self.assertEqual(args.command, "pairs")
        self.assertEqual(args.basename, "alt")
        self.assertEqual(args.k, 2)


if __name__ == "__main__":
    unittest.main()

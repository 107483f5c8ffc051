"""
End-to-end searches on the catalog models. They integrate thousands of
trajectories, so they only run with RADIAL_SHOOT_SLOW=1.
"""
import json
import os
import tempfile
import unittest

import numpy as np

from radial_shoot import catalog, search, settings, theorems
from radial_shoot.classifier import Label
from radial_shoot.cli import RunConfig
from radial_shoot.commands import EXIT_NOT_FOUND, ShootCommand
from radial_shoot.exceptions import NotFound
from radial_shoot.integrator import ProblemConfig, energy_residual, integrate, pohozaev_E, pohozaev_residual
from radial_shoot.nonlinearity import compute_landmarks

SLOW = os.environ.get("RADIAL_SHOOT_SLOW") == "1"


@unittest.skipUnless(SLOW, "set RADIAL_SHOOT_SLOW=1 to run the end-to-end searches")
class RandomTrajectoryTests(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(20240601)

    def trajectories(self, model, count):
        landmarks = compute_landmarks(model, 3)
        lo, hi = landmarks.beta_star, landmarks.gamma_star
        for alpha in self.rng.uniform(lo, hi, size=count):
            yield integrate(model, ProblemConfig(N=3, alpha=float(alpha)), landmarks)

    def test_identities_hold_on_m1(self):
        model = catalog.model_m1()
        for traj in self.trajectories(model, 100):
            with self.subTest(alpha=traj.config.alpha):
                slack = 10 * traj.config.rel_tol
                I = np.array([0.5 * v * v + model.F_unchecked(u) for _, u, v in traj.samples])
                allowed = I[:-1] + slack * np.maximum(1.0, np.abs(I[:-1]))
                self.assertTrue(np.all(I[1:] <= allowed))
                self.assertLessEqual(energy_residual(traj, 0.0, traj.r_end), 1e-6 * max(1.0, abs(traj.I0)))
                E = pohozaev_E(traj, traj.r_end)
                self.assertLessEqual(pohozaev_residual(traj, 0.0, traj.r_end), 1e-6 * max(1.0, abs(E)))

    def test_m2_trajectories_do_not_oscillate(self):
        # OscillationFault would propagate out of integrate.
        for traj in self.trajectories(catalog.model_m2(), 25):
            self.assertLessEqual(len(traj.zeros()), traj.config.k_cap)


@unittest.skipUnless(SLOW, "set RADIAL_SHOOT_SLOW=1 to run the end-to-end searches")
class BoundedModelTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.model = catalog.model_m1()
        cls.landmarks = compute_landmarks(cls.model, 3)
        cls.kwargs = {"grid_points": 512, "workers": 4}
        cls.pairs = {}
        cls.k0 = search.find_k0(cls.model, cls.landmarks, 3, 5, pairs=cls.pairs, **cls.kwargs)

    def pair(self, k):
        if k not in self.pairs:
            self.pairs[k] = search.find_pairs(self.model, self.landmarks, 3, k, **self.kwargs)
        return self.pairs[k]

    def test_pairs_from_k0(self):
        self.assertLessEqual(self.k0, 5)
        for k in range(self.k0, self.k0 + 4):
            with self.subTest(k=k):
                result = self.pair(k)
                self.assertTrue(result.distinct)
                self.assertLess(result.sharp.shot.order, result.star.shot.order)
                for bracket in (result.sharp, result.star):
                    self.assertEqual(bracket.sign_changes, k)
                    self.assertTrue(bracket.is_bound_state)
                    self.assertLessEqual(abs(bracket.certificate["u"]), 1e-5)
                    self.assertLessEqual(abs(bracket.certificate["uprime"]), 1e-5)
                    self.assertLessEqual(abs(bracket.certificate["I"]), 1e-8)

    def test_labels_around_brackets(self):
        # outside a G_j bracket on the side that crossed the j-th zero: Q_(j+1); inside: Q_j
        for k in range(self.k0, self.k0 + 4):
            result = self.pair(k)
            for name, bracket in (("sharp", result.sharp), ("star", result.star)):
                left, right = search.near_probes(bracket)
                outside, inside = (left, right) if name == "sharp" else (right, left)
                j = bracket.sign_changes + 1
                with self.subTest(k=k, bracket=name):
                    outer = search.probe(self.model, self.landmarks, 3, outside)
                    inner = search.probe(self.model, self.landmarks, 3, inside)
                    self.assertEqual({c.signature for c in outer}, {(Label.Q, j + 1)})
                    self.assertEqual({c.signature for c in inner}, {(Label.Q, j)})

    def test_Q_labels_are_open(self):
        problem = ProblemConfig(N=3, alpha=0.0)
        report = search.scan(self.model, self.landmarks, 3, self.landmarks.beta_star, 1.99, 64, workers=4)
        checked = 0
        for shot, label in zip(report.grid, report.labels):
            if label.label is not Label.Q or label.margin <= 10 * settings.EPS_MARGIN:
                continue
            checked += 1
            for alpha in (shot.alpha - settings.EPS_MARGIN, shot.alpha + settings.EPS_MARGIN):
                with self.subTest(alpha=alpha):
                    nearby = search.classify_alpha(self.model, self.landmarks, problem, alpha)
                    self.assertEqual(nearby.signature, label.signature)
        self.assertGreater(checked, 0)

    def test_sign_change_thresholds(self):
        problem = ProblemConfig(N=3, alpha=0.0)
        estimates = {}
        for k in (1, 2):
            estimate = search.estimate_alpha_k(self.model, self.landmarks, 3, k, grid_points=128, workers=4)
            estimates[k] = estimate
            shot = search.Shot.below(2.0, estimate.gap)
            with self.subTest(k=k):
                self.assertTrue(self.landmarks.beta_star < estimate.alpha <= 2.0)
                label = search.classify_alpha(self.model, self.landmarks, problem, shot)
                self.assertGreaterEqual(len(label.n_history), k)
        self.assertGreaterEqual(estimates[1].gap, estimates[2].gap)


@unittest.skipUnless(SLOW, "set RADIAL_SHOOT_SLOW=1 to run the end-to-end searches")
class NonexistenceModelTests(unittest.TestCase):

    def setUp(self):
        self.model = catalog.model_m2()
        self.landmarks = compute_landmarks(self.model, 3)

    def test_no_pairs_where_nonexistence_holds(self):
        for k in (0, 1):
            with self.subTest(k=k):
                self.assertTrue(theorems.nonexistence_condition(self.model, self.landmarks, 3, k).holds)
                with self.assertRaises(NotFound):
                    search.find_pairs(self.model, self.landmarks, 3, k, max_points=2 ** 16, workers=4)

    def test_pairs_command_reports_nothing_found(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = RunConfig(
                N=3,
                nonlinearity={"model": "m2"},
                search={"workers": 4, "max_points": 2 ** 16},
                output={"directory": tmp},
            )
            self.assertEqual(ShootCommand(config=config, options={"k": 0}).dispatch("pairs"), EXIT_NOT_FOUND)
            with open(os.path.join(tmp, "pairs.json"), encoding="utf-8") as fh:
                body = json.load(fh)
        self.assertFalse(body["found"])
        self.assertEqual(body["k"], 0)


if __name__ == "__main__":
    unittest.main()

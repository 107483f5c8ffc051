import math
import unittest
from dataclasses import replace
from unittest import mock

import numpy as np

from radial_shoot import catalog, search, settings, theorems
from radial_shoot.classifier import Classification, Label
from radial_shoot.exceptions import InvalidRange, NoSignSplit, NotFound, NotFoundAtResolution
from radial_shoot.integrator import ProblemConfig
from radial_shoot.nonlinearity import compute_landmarks
from tests.test_theorems import a2_landmarks


def labelled(label, k):
    return Classification(label, k)


class GridTests(unittest.TestCase):

    def alphas(self, grid):
        return [shot.alpha for shot in grid]

    def test_grid_is_sorted_and_inside_range(self):
        alphas = self.alphas(search.scan_grid(1.0, 2.0, 64))
        self.assertEqual(alphas, sorted(alphas))
        self.assertTrue(all(1.0 < a < 2.0 for a in alphas))
        self.assertEqual(len(set(alphas)), len(alphas))

    def test_grid_reaches_float_resolution_below_upper_end(self):
        grid = search.scan_grid(1.0, 2.0, 64)
        self.assertGreater(2.0 - grid[-1].alpha, 0.0)
        self.assertLessEqual(2.0 - grid[-1].alpha, settings.ALPHA_FLOOR_ULPS * np.spacing(2.0))

    def test_gap_grid_reaches_gap_floor(self):
        grid = search.scan_grid(1.6934, 2.0, 64, top=2.0)
        gaps = [shot.gap for shot in grid]
        self.assertEqual(gaps, sorted(gaps, reverse=True))
        self.assertTrue(all(0.0 < g < 2.0 - 1.6934 for g in gaps))
        self.assertEqual(len(set(gaps)), len(gaps))
        self.assertAlmostEqual(gaps[-1] / settings.GAP_FLOOR, 1.0, places=6)
        self.assertGreaterEqual(sum(g < 1e-100 for g in gaps), 10)

    def test_gap_grid_needs_top_at_upper_end(self):
        grid = search.scan_grid(1.0, 1.5, 16, top=2.0)
        self.assertTrue(all(shot.gap is None for shot in grid))

    def test_uniform_grid(self):
        grid = search.scan_grid(0.0, 4.0, 3, densify=False)
        self.assertEqual(self.alphas(grid), [1.0, 2.0, 3.0])

    def test_single_point(self):
        self.assertEqual(self.alphas(search.scan_grid(1.0, 3.0, 1)), [2.0])
        self.assertEqual(search.scan_grid(1.0, 3.0, 1, top=3.0)[0].gap, 1.0)

    def test_empty_range(self):
        with self.assertRaises(InvalidRange):
            search.scan_grid(2.0, 2.0, 10)
        with self.assertRaises(InvalidRange):
            search.scan_grid(1.0, 2.0, 0)


class ShotTests(unittest.TestCase):

    def test_below_keeps_exact_gap(self):
        shot = search.Shot.below(2.0, 1e-40)
        self.assertEqual(shot.alpha, 2.0)
        self.assertEqual(shot.gap, 1e-40)
        self.assertEqual(shot.to_dict(), {"alpha": 2.0, "gap": 1e-40})
        config = shot.config(ProblemConfig(N=3, alpha=0.0))
        self.assertEqual(config.gap, 1e-40)

    def test_order_follows_alpha(self):
        shots = [search.Shot.below(2.0, g) for g in (1e-3, 1e-200, 1e-20)]
        ordered = sorted(shots, key=lambda shot: shot.order)
        self.assertEqual([shot.gap for shot in ordered], [1e-3, 1e-20, 1e-200])

    def test_geometric_midpoint_far_apart(self):
        mid = search.midpoint(search.Shot.below(2.0, 1e-100), search.Shot.below(2.0, 1e-200))
        self.assertTrue(math.isclose(mid.gap, 1e-150, rel_tol=1e-12))

    def test_arithmetic_midpoint_close_together(self):
        mid = search.midpoint(search.Shot.below(2.0, 2e-10), search.Shot.below(2.0, 1e-10))
        self.assertTrue(math.isclose(mid.gap, 1.5e-10, rel_tol=1e-14))
        self.assertEqual(search.midpoint(search.Shot(1.0), search.Shot(2.0)).alpha, 1.5)

    def test_separation_is_relative_for_gaps(self):
        a, b = search.Shot.below(2.0, 2e-100), search.Shot.below(2.0, 1e-100)
        self.assertAlmostEqual(search.separation(a, b, 0.3), 0.15, places=12)
        self.assertEqual(search.separation(search.Shot(1.0), search.Shot(1.25), 0.3), 0.25)


class RefineScanTests(unittest.TestCase):

    def setUp(self):
        self.grid = [1.0, 2.0, 3.0, 4.0, 5.0]
        self.labels = [
            labelled(Label.S, 1),
            labelled(Label.S, 1),
            labelled(Label.Q, 2),
            labelled(Label.S, 3),
            labelled(Label.S, 5),
        ]
        self.report = search.ScanReport(self.grid, self.labels, search.runs_of(self.grid, self.labels))

    def test_open_intervals_bracket_the_target_count(self):
        self.assertEqual(search._open_intervals(self.report, 1), [2, 3])
        self.assertEqual(search._open_intervals(self.report, 3), [4])

    def test_only_new_shots_are_classified(self):
        with mock.patch.object(search, "classify_alpha", return_value=labelled(Label.Q, 2)) as classify_alpha:
            refined = search.refine_scan(None, None, ProblemConfig(N=3, alpha=0.0), self.report, 1, workers=1)
        self.assertEqual(classify_alpha.call_count, 2)
        self.assertEqual(refined.alphas, [1.0, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0])
        self.assertEqual([c.name for c in refined.labels][2:5], ["Q2", "Q2", "Q2"])

    def test_budget_stops_refinement(self):
        with mock.patch.object(search, "classify_alpha") as classify_alpha:
            refined = search.refine_scan(None, None, ProblemConfig(N=3, alpha=0.0), self.report, 1, budget=6)
        self.assertIsNone(refined)
        classify_alpha.assert_not_called()

    def test_edges(self):
        lower, upper = search._edges(self.report, 1)
        self.assertEqual(lower, [(1, 2)])
        self.assertEqual(upper, [(2, 3)])


class RunTests(unittest.TestCase):

    def test_runs_split_on_signature(self):
        grid = [1.0, 2.0, 3.0, 4.0, 5.0]
        labels = [
            labelled(Label.S, 1),
            labelled(Label.S, 1),
            labelled(Label.Q, 2),
            labelled(Label.S, 2),
            labelled(Label.S, 2),
        ]
        runs = search.runs_of(grid, labels)
        self.assertEqual([run.signature for run in runs], [(Label.S, 1), (Label.Q, 2), (Label.S, 2)])
        self.assertEqual((runs[0].start, runs[0].stop), (0, 1))
        self.assertEqual((runs[2].alpha_lo, runs[2].alpha_hi), (4.0, 5.0))

    def test_single_run(self):
        runs = search.runs_of([1.0, 2.0], [labelled(Label.G, 3), labelled(Label.G, 3)])
        self.assertEqual(len(runs), 1)
        self.assertEqual(runs[0].to_dict()["label"], "G")


class BracketTests(unittest.TestCase):

    def setUp(self):
        self.bracket = search.GBracket(
            shot_left=search.Shot(1.0),
            shot_right=search.Shot(1.0 + 1e-9),
            left=labelled(Label.S, 1),
            right=labelled(Label.Q, 2),
            shot=search.Shot(1.0 + 5e-10),
            sign_changes=0,
            certificate={"r": 7.0, "u": 1e-7, "uprime": -1e-7, "I": 1e-10},
        )

    def gap_bracket(self, gap_left, gap_right):
        return search.GBracket(
            shot_left=search.Shot.below(2.0, gap_left),
            shot_right=search.Shot.below(2.0, gap_right),
            left=labelled(Label.S, 1),
            right=labelled(Label.Q, 2),
            shot=search.midpoint(search.Shot.below(2.0, gap_left), search.Shot.below(2.0, gap_right)),
            sign_changes=1,
            certificate={"r": 30.0, "u": 0.0, "uprime": 0.0, "I": 0.0},
        )

    def test_bound_state(self):
        self.assertTrue(self.bracket.is_bound_state)
        self.bracket.certificate["I"] = 1e-3
        self.assertFalse(self.bracket.is_bound_state)

    def test_to_dict(self):
        data = self.bracket.to_dict()
        self.assertEqual(data["left"], "S1")
        self.assertEqual(data["right"], "Q2")
        self.assertEqual(list(data["certificate"]), ["I", "r", "u", "uprime"])
        self.assertNotIn("gap", data)

    def test_gap_bracket_to_dict(self):
        data = self.gap_bracket(3e-80, 2e-80).to_dict()
        self.assertEqual(data["bracket"], [2.0, 2.0])
        self.assertEqual(data["gap_bracket"], [3e-80, 2e-80])
        self.assertTrue(math.isclose(data["gap"], 2.5e-80, rel_tol=1e-14))

    def test_near_probes(self):
        left, right = search.near_probes(self.bracket, count=4)
        self.assertEqual(len(left), 4)
        self.assertEqual(len(right), 4)
        self.assertTrue(all(s.alpha < self.bracket.alpha_left for s in left))
        self.assertTrue(all(s.alpha > self.bracket.alpha_right for s in right))
        reach = 10 * self.bracket.width + 1e-15
        self.assertLessEqual(self.bracket.alpha_left - left[-1].alpha, reach)
        self.assertLessEqual(right[-1].alpha - self.bracket.alpha_right, reach)

    def test_near_probes_in_gaps(self):
        bracket = self.gap_bracket(3e-80, 2e-80)
        left, right = search.near_probes(bracket, count=5)
        self.assertTrue(all(s.gap > 3e-80 for s in left))
        self.assertTrue(all(0.0 < s.gap < 2e-80 for s in right))
        self.assertLessEqual(left[-1].gap - 3e-80, 10 * bracket.width * (1 + 1e-12))
        self.assertEqual([s.gap for s in right], sorted((s.gap for s in right), reverse=True))

    def test_near_probes_default_count(self):
        left, _ = search.near_probes(self.bracket)
        self.assertEqual(len(left), settings.NEAR_PROBES)


class SearchM1Tests(unittest.TestCase):

    def setUp(self):
        self.model = catalog.model_m1()
        self.landmarks = compute_landmarks(self.model, 3)

    def test_alpha_ceiling_is_gamma_star(self):
        self.assertEqual(search.alpha_ceiling(self.model, self.landmarks), 2.0)

    def test_default_bisect_tol(self):
        expected = settings.BISECT_TOL_FACTOR * (2.0 - self.landmarks.beta_star)
        self.assertAlmostEqual(search.default_bisect_tol(self.landmarks), expected, places=20)

    def test_problem_dimension_must_match(self):
        with self.assertRaises(InvalidRange):
            search.problem_for(3, ProblemConfig(N=2, alpha=0.0))

    def test_small_scan(self):
        report = search.scan(self.model, self.landmarks, 3, self.landmarks.beta_star, 2.0, 8, workers=1)
        self.assertEqual(len(report.grid), 8)
        self.assertEqual(len(report.labels), 8)
        covered = sum(run.stop - run.start + 1 for run in report.intervals)
        self.assertEqual(covered, 8)
        self.assertEqual(len(report.to_dict()["labels"]), 8)
        self.assertEqual(len(report.gaps), 8)
        self.assertEqual(report.to_dict()["gaps"], report.gaps)
        self.assertLessEqual(min(report.gaps), settings.GAP_FLOOR * (1 + 1e-9))

    def test_probe(self):
        labels = search.probe(self.model, self.landmarks, 3, [1.8, 1.9])
        self.assertEqual(len(labels), 2)
        self.assertTrue(all(isinstance(c, Classification) for c in labels))

    def test_refine_rejects_degenerate_bracket(self):
        with self.assertRaises(InvalidRange):
            search.refine_boundary(self.model, self.landmarks, 3, 1.9, 1.8)
        with self.assertRaises(InvalidRange):
            search.refine_boundary(
                self.model, self.landmarks, 3, search.Shot.below(2.0, 1e-20), search.Shot.below(2.0, 1e-10),
            )

    def test_shot_just_below_gamma_star_is_classified(self):
        problem = ProblemConfig(N=3, alpha=0.0)
        label = search.classify_alpha(self.model, self.landmarks, problem, 2.0 - 1e-9)
        self.assertIsNot(label.label, Label.UNDETERMINED, label.reason)
        self.assertGreaterEqual(len(label.n_history), 2)

    def test_deep_gap_is_classified(self):
        problem = ProblemConfig(N=3, alpha=0.0)
        deep = search.classify_alpha(self.model, self.landmarks, problem, search.Shot.below(2.0, 1e-40))
        self.assertIsNot(deep.label, Label.UNDETERMINED, deep.reason)
        self.assertGreaterEqual(deep.k, 2)

    def test_negative_k(self):
        with self.assertRaises(InvalidRange):
            search.find_pairs(self.model, self.landmarks, 3, -1)

    def test_alpha_0_is_beta_star(self):
        estimate = search.estimate_alpha_k(self.model, self.landmarks, 3, 0)
        self.assertEqual(estimate.alpha, self.landmarks.beta_star)
        self.assertEqual(estimate.to_dict()["k"], 0)

def certified(model, landmarks, N, left, right, bisect_tol=None, problem=None):
    """Stand-in for refine_boundary: a bound state at the midpoint of the edge."""
    left, right = search.as_shot(left), search.as_shot(right)
    return search.GBracket(
        left, right, labelled(Label.Q, 2), labelled(Label.Q, 1), search.midpoint(left, right), 0,
        {"r": 20.0, "u": 0.0, "uprime": 0.0, "I": 0.0},
    )


class PairSearchTests(unittest.TestCase):

    def setUp(self):
        self.model = catalog.model_m1()
        self.landmarks = compute_landmarks(self.model, 3)
        grid = [1.70, 1.75, 1.80, 1.85]
        labels = [labelled(Label.Q, 2), labelled(Label.Q, 1), labelled(Label.Q, 1), labelled(Label.Q, 2)]
        self.report = search.ScanReport(grid, labels, search.runs_of(grid, labels))

    def test_existing_report_is_reused(self):
        with mock.patch.object(search, "refine_boundary", side_effect=certified), \
                mock.patch.object(search, "scan") as scan:
            result = search.find_pairs(
                self.model, self.landmarks, 3, 0, alpha_hi=2.0, bisect_tol=1e-9, report=self.report,
            )
        scan.assert_not_called()
        self.assertTrue(result.distinct)
        self.assertAlmostEqual(result.alpha_sharp, 1.725, places=12)
        self.assertAlmostEqual(result.alpha_star, 1.825, places=12)
        self.assertEqual(result.grid_points, 4)

    def test_edges_are_bisected_once(self):
        rejected = mock.Mock(side_effect=NoSignSplit("same label"))
        with mock.patch.object(search, "refine_boundary", rejected), \
                mock.patch.object(search, "refine_scan", return_value=None):
            with self.assertRaises(NotFoundAtResolution) as caught:
                search.find_pairs(self.model, self.landmarks, 3, 0, alpha_hi=2.0, report=self.report)
        self.assertEqual(rejected.call_count, 2)
        self.assertEqual(caught.exception.grid_points, 4)

    def test_k0_shares_one_scan(self):
        def pairs(model, landmarks, N, k, **kwargs):
            self.assertIs(kwargs["report"], self.report)
            if k == 0:
                raise NotFound("none")
            return k

        found = {}
        with mock.patch.object(search, "scan", return_value=self.report) as scan, \
                mock.patch.object(search, "find_pairs", side_effect=pairs):
            k0 = search.find_k0(self.model, self.landmarks, 3, 2, pairs=found, grid_points=8)
        self.assertEqual(k0, 1)
        self.assertEqual(found, {1: 1, 2: 2})
        scan.assert_called_once()


class EstimateTests(unittest.TestCase):

    def test_unbounded_case_with_radius_constant(self):
        model, landmarks = catalog.model_a2_toy(), a2_landmarks()
        with mock.patch.object(theorems, "compute_Ck", return_value=0.0):
            estimate = search.estimate_alpha_k(model, landmarks, 3, 1, grid_points=4)
        self.assertGreater(estimate.alpha, 2 * landmarks.beta_bar)
        self.assertEqual(estimate.certificate["C_k"], 0.0)
        self.assertGreater(estimate.certificate["r_bar"], 0.0)
        self.assertIsNone(estimate.gap)

    def test_unbounded_case_without_landmark(self):
        landmarks = replace(a2_landmarks(), s0=None)
        with self.assertRaises(NotFound):
            search.estimate_alpha_k(catalog.model_a2_toy(), landmarks, 3, 1, grid_points=4)


if __name__ == "__main__":
    unittest.main()

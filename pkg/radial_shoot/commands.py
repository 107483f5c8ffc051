import logging
import math

from radial_shoot import plotting, search, theorems
from radial_shoot.classifier import classify
from radial_shoot.exceptions import (
    CommandDoesNotExist,
    ImproperlyConfigured,
    LandmarkNotFound,
    MissingLandmark,
    NotFound,
    RadialShootError,
)
from radial_shoot.integrator import (
    closest_approach,
    count_sign_changes,
    energy_residual,
    integrate,
    pohozaev_residual,
)
from radial_shoot.mixins import ConfigMixin, ModelMixin, OutputMixin, SearchMixin
from radial_shoot.nonlinearity import Case
from radial_shoot.utils import TRAJECTORY_HEADER, trajectory_rows

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_NUMERIC = 2
EXIT_NOT_FOUND = 3


def _shot_label(shot):
    if shot.gap is None:
        return f"{shot.alpha:.12g}"
    return f"{shot.top:g} - {shot.gap:.6g}"


class ShootCommand(ConfigMixin, ModelMixin, SearchMixin, OutputMixin):
    """
    ShootCommand class that provides the six subcommands of the solver on top
    of a run configuration. Each subcommand writes its reports into the output
    directory and returns an exit code.

    Attributes:
        command_name (str): Name of the subcommand being run, used in the provenance header.
        allowed_commands (list): Subcommands this class exposes.
    """
    command_name = None

    allowed_commands = ["check", "landmarks", "shoot", "scan", "pairs", "theorems"]

    def __init__(self, config=None, options=None, **kwargs):
        self.config = config
        self.options = dict(options or {})
        for key, value in kwargs.items():
            setattr(self, key, value)

    def check_command(self):
        """
        Check the hypotheses on f and, when they hold, compute the landmarks.

        Returns:
            int: 0 when every hypothesis holds, 1 otherwise.
        """
        report = self.get_hypotheses()
        body = {"model": self.get_model().to_dict(), "N": self.get_N(), "hypotheses": report.to_dict()}
        if report.case is Case.NEITHER:
            self.write_report("hypotheses", body)
            for name, verdict in sorted(report.failures.items()):
                logger.warning("Hypothesis %s fails: %s (witness %r)", name, verdict.reason, verdict.witness)
            return EXIT_HYPOTHESIS
        body["landmarks"] = self.get_landmarks().to_dict()
        self.write_report("hypotheses", body)
        return EXIT_OK

    def landmarks_command(self):
        if self.get_hypotheses().case is Case.NEITHER:
            return EXIT_HYPOTHESIS
        self.write_report("landmarks", {"landmarks": self.get_landmarks().to_dict()})
        return EXIT_OK

    def shoot_command(self):
        """
        Integrate and classify one initial value.

        Writes the trajectory table, its events and its classification. The
        classification falls back to Undetermined when the hypotheses fail, so
        the oracle models without landmarks can still be shot.
        """
        alpha = float(self.get_required_option("alpha"))
        model = self.get_model()
        landmarks = None
        if self.get_hypotheses().case is not Case.NEITHER:
            landmarks = self.get_landmarks()
        traj = integrate(model, self.get_problem(alpha), landmarks)

        if self.get_output_format() == "csv":
            self.write_table("trajectory", TRAJECTORY_HEADER, trajectory_rows(traj))
        else:
            self.write_report("trajectory_json", {
                "columns": list(TRAJECTORY_HEADER),
                "rows": [list(row) for row in trajectory_rows(traj)],
            })
        self.write_report("events", {
            "alpha": alpha,
            "events": [event.to_dict() for event in traj.events],
            "termination": traj.termination.to_dict(),
            "sign_changes": count_sign_changes(traj),
        })

        body = {"alpha": alpha, "termination": traj.termination.to_dict()}
        if landmarks is not None:
            body["classification"] = classify(traj, landmarks).to_dict()
        r, u, v, distance = closest_approach(traj)
        body["closest_approach"] = {"r": r, "u": u, "uprime": v, "distance": distance}
        body["residuals"] = {
            "energy": energy_residual(traj, 0.0, traj.r_end),
            "pohozaev": pohozaev_residual(traj, 0.0, traj.r_end),
        }
        self.write_report("classification", body)

        if self.wants_svg():
            plotting.plot_curves(self.get_output_path("curve_svg"), [traj])
        return EXIT_OK

    def scan_command(self):
        """Label a grid of initial values between beta_star and the search ceiling."""
        model, landmarks, N = self.get_model(), self.get_landmarks(), self.get_N()
        alpha_lo = self.get_option("alpha_lo", landmarks.beta_star)
        alpha_hi = self.get_option("alpha_hi")
        if alpha_hi is None:
            alpha_hi = search.alpha_ceiling(model, landmarks)
        kwargs = self.get_search_kwargs()
        report = search.scan(
            model, landmarks, N, alpha_lo, alpha_hi, kwargs["grid_points"],
            problem=kwargs["problem"], workers=kwargs["workers"],
        )
        self.write_report("scan", {"alpha_lo": alpha_lo, "alpha_hi": alpha_hi, "scan": report.to_dict()})
        if self.wants_svg():
            plotting.plot_scan(self.get_output_path("scan_svg"), report)
        return EXIT_OK

    def pairs_command(self):
        """
        Find the two bound states for --k, or find k0 first when only --k-max is given.

        Returns:
            int: 0 with a pair found, 3 when the search finds nothing.
        """
        model, landmarks, N = self.get_model(), self.get_landmarks(), self.get_N()
        kwargs = self.get_search_kwargs()
        k = self.get_option("k")
        body, found = {}, {}
        try:
            if k is None:
                k_max = self.get_required_option("k_max")
                k = search.find_k0(model, landmarks, N, k_max, pairs=found, **kwargs)
                body["k0"] = k
            result = found.get(k) or search.find_pairs(model, landmarks, N, k, **kwargs)
        except NotFound as exc:
            body.update({"k": k, "found": False, "reason": str(exc)})
            self.write_report("pairs", body)
            logger.warning("%s", exc)
            return EXIT_NOT_FOUND

        body.update({"k": k, "found": True, "pair": result.to_dict()})
        probes = {}
        for name, bracket in (("sharp", result.sharp), ("star", result.star)):
            left, right = search.near_probes(bracket)
            probes[name] = {
                "left": [c.name for c in search.probe(model, landmarks, N, left, kwargs["problem"])],
                "right": [c.name for c in search.probe(model, landmarks, N, right, kwargs["problem"])],
                "shots": {"left": [s.to_dict() for s in left], "right": [s.to_dict() for s in right]},
            }
        body["probes"] = probes
        self.write_report("pairs", body)

        if self.wants_svg():
            plotting.plot_curves(
                self.get_output_path("pairs_svg"),
                [result.sharp.trajectory, result.star.trajectory],
                labels=[f"alpha# = {_shot_label(result.sharp.shot)}", f"alpha* = {_shot_label(result.star.shot)}"],
                title=f"bound states with {k} sign changes",
            )
        return EXIT_OK

    def theorems_command(self):
        """Evaluate every constant and inequality that applies to the model."""
        model, landmarks, N = self.get_model(), self.get_landmarks(), self.get_N()
        k = self.get_option("k", 0)
        reports, skipped = [], {}

        alpha_k = None
        if landmarks.case is Case.A2:
            try:
                alpha_k = search.estimate_alpha_k(model, landmarks, N, k, self.get_problem()).alpha
            except NotFound as exc:
                skipped["nonexistence"] = str(exc)
        if "nonexistence" not in skipped:
            try:
                reports.append(theorems.nonexistence_condition(model, landmarks, N, k, alpha_k))
            except MissingLandmark as exc:
                skipped["nonexistence"] = str(exc)

        try:
            reports.append(theorems.k0_condition(model, landmarks, N))
        except (MissingLandmark, LandmarkNotFound) as exc:
            skipped["k0_condition"] = str(exc)

        constants = {}
        try:
            constants["C_k"] = theorems.compute_Ck(model, landmarks, N, k)
        except RadialShootError as exc:
            skipped["C_k"] = str(exc)
        if landmarks.case is Case.A2:
            try:
                constants["Q_bar"] = theorems.Q_bar(model, landmarks, N)
            except MissingLandmark as exc:
                skipped["Q_bar"] = str(exc)

        alpha = self.get_option("alpha")
        if alpha is not None:
            traj = integrate(model, self.get_problem(alpha), landmarks,
                             levels={"beta_bar": landmarks.beta_bar, "beta_1": landmarks.beta_1})
            for check in (theorems.q1_sufficient_condition, theorems.crossing_time_bound):
                try:
                    reports.append(check(traj, model, landmarks))
                except RadialShootError as exc:
                    skipped[check.__name__] = str(exc)

        self.write_report("theorems", {
            "k": k,
            "landmarks": landmarks.to_dict(),
            "constants": {name: value for name, value in sorted(constants.items()) if not math.isnan(value)},
            "reports": [report.to_dict() for report in reports],
            "skipped": dict(sorted(skipped.items())),
        })
        return EXIT_OK

    def _allowed_commands(self) -> set[str]:
        """
        Check allowed_commands by verifying these conditions:
        1] Standardize command names to lowercase.
        2] Remove repeated command names.
        3] Reject unknown command names.

        Returns:
            set of strings: the allowed command names
        """
        clear_commands = set()
        acceptable_commands = {"check", "landmarks", "shoot", "scan", "pairs", "theorems"}

        for command in self.allowed_commands:
            command = command.lower()
            if command not in acceptable_commands:
                raise TypeError(
                    "%s is not a valid command name, Please ensure there are no spelling errors. "
                    "Allowed command names are: check, landmarks, shoot, scan, pairs and theorems" % command
                )
            clear_commands.add(command)

        return clear_commands

    def get_command_method(self, name):
        """
        Determines the method that runs a subcommand.

        Args:
            name (str): The subcommand name.

        Returns:
            callable: The bound *_command method.

        Raises:
            CommandDoesNotExist: If the subcommand is unknown or not in allowed_commands.
        """
        command_router = {
            "check": self.check_command,
            "landmarks": self.landmarks_command,
            "shoot": self.shoot_command,
            "scan": self.scan_command,
            "pairs": self.pairs_command,
            "theorems": self.theorems_command,
        }
        name = name.lower()
        if name not in command_router or name not in self._allowed_commands():
            raise CommandDoesNotExist(
                "you can't use %s command, the %s command isn't in allowed_commands, "
                "please double check the allowed_commands list" % (name, name)
            )
        return command_router[name]

    def dispatch(self, name):
        """
        Run a subcommand and map failures onto exit codes.

        Returns:
            int: 0 success, 1 hypothesis violation, 2 numeric or parse failure, 3 search found nothing.
        """
        method = self.get_command_method(name)
        self.command_name = name
        try:
            return method()
        except NotFound as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            return EXIT_NOT_FOUND
        except LandmarkNotFound as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            return EXIT_HYPOTHESIS if self.get_hypotheses().case is Case.NEITHER else EXIT_NUMERIC
        except ImproperlyConfigured as exc:
            logger.error("%s", exc)
            return EXIT_NUMERIC
        except RadialShootError as exc:
            logger.error("%s: %s", type(exc).__name__, exc)
            return EXIT_NUMERIC

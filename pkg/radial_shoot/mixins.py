import logging

from radial_shoot import settings
from radial_shoot.exceptions import ImproperlyConfigured
from radial_shoot.integrator import ProblemConfig
from radial_shoot.nonlinearity import check_hypotheses, compute_landmarks
from radial_shoot.utils import generate_output_paths, provenance_header, write_csv, write_json

logger = logging.getLogger(__name__)


class ConfigMixin:
    """
    Mixin to hold the run configuration of a command.

    Attributes:
        config (RunConfig): The parsed run configuration.
    """
    config = None

    def get_config(self):
        """
        Retrieve the run configuration.

        Returns:
            RunConfig: The configuration the command was built with.

        Raises:
            ImproperlyConfigured: If no configuration was provided.
        """
        if self.config is not None:
            return self.config
        raise ImproperlyConfigured("No run configuration. Provide a config.")

    def get_N(self):
        return self.get_config().N

    def get_problem(self, alpha=0.0):
        """
        Build the integrator configuration for one initial value.

        Args:
            alpha (float): The initial value u(0).

        Returns:
            ProblemConfig: The tolerances of the [integrator] section on top of the defaults.
        """
        return ProblemConfig(N=self.get_N(), alpha=float(alpha), **self.get_config().integrator)


class ModelMixin:
    """
    Mixin to build the nonlinearity and its derived data once per command.

    Attributes:
        model (NonlinearityModel): Overrides the model described by the configuration.
    """
    model = None
    _hypotheses = None
    _landmarks = None

    def get_model(self):
        """
        Retrieve the nonlinearity model.

        Returns:
            NonlinearityModel: The explicit model attribute, or the one built from the configuration.
        """
        if self.model is None:
            self.model = self.get_config().build_model()
        return self.model

    def get_hypotheses(self):
        if self._hypotheses is None:
            self._hypotheses = check_hypotheses(self.get_model(), self.get_N())
        return self._hypotheses

    def get_landmarks(self):
        """
        Retrieve the landmarks of the model.

        Raises:
            LandmarkNotFound: If the hypotheses fail or a level crossing is missing.
        """
        if self._landmarks is None:
            self._landmarks = compute_landmarks(self.get_model(), self.get_N(), self.get_hypotheses())
        return self._landmarks


class SearchMixin:
    """
    Mixin to read the [search] section with command line overrides.

    Attributes:
        options (dict): Values given on the command line; they win over the configuration.
    """
    options = {}

    def get_option(self, name, default=None):
        """
        Look up a search option on the command line first, then in the configuration.

        Args:
            name (str): The option name (grid_points, k, k_max, ...).
            default: Returned when neither source sets the option.
        """
        value = self.options.get(name)
        if value is not None:
            return value
        return self.get_config().search.get(name, default)

    def get_required_option(self, name):
        """
        Raises:
            ImproperlyConfigured: If the option is set nowhere.
        """
        value = self.get_option(name)
        if value is None:
            raise ImproperlyConfigured(f"The {name} option is required for this command.")
        return value

    def get_search_kwargs(self):
        """Keyword arguments shared by find_pairs and find_k0."""
        return {
            "problem": self.get_problem(),
            "grid_points": self.get_option("grid_points", settings.SCAN_POINTS),
            "max_points": self.get_option("max_points", settings.SCAN_POINTS_CAP),
            "bisect_tol": self.get_option("bisect_tol"),
            "workers": self.get_option("workers", settings.WORKERS),
        }


class OutputMixin:
    """
    Mixin to handle where and how the reports are written.

    Attributes:
        output_dir (str): Directory to write to; overrides the [output] section.
        custom_paths (dict): Custom file names mapped to artifact names.
    """
    output_dir = ""
    custom_paths = {}

    def get_output_dir(self):
        """
        Retrieve the output directory.

        Raises:
            ImproperlyConfigured: If neither output_dir nor the [output] section names one.
        """
        directory = self.output_dir or self.get_config().output.get("directory")
        if directory:
            return directory
        raise ImproperlyConfigured("No output directory. Provide --out or [output] directory.")

    def get_output_format(self):
        return self.get_config().output.get("format", settings.OUTPUT_FORMAT)

    def wants_svg(self):
        return bool(self.get_config().output.get("svg", False))

    def get_output_path(self, name):
        """
        Resolve the path of one artifact.

        Raises:
            ImproperlyConfigured: If the artifact name is unknown.
        """
        paths = generate_output_paths(self.get_output_dir(), self.custom_paths)
        try:
            return paths[name]
        except KeyError:
            raise ImproperlyConfigured(f"Unknown artifact {name!r}.") from None

    def write_report(self, name, body):
        """Write a JSON report with the provenance header in front of the body."""
        payload = {"provenance": provenance_header(self.get_config().to_dict(), self.command_name)}
        payload.update(body)
        path = write_json(self.get_output_path(name), payload)
        logger.info("Wrote %s", path)
        return path

    def write_table(self, name, header, rows):
        path = write_csv(self.get_output_path(name), header, rows)
        logger.info("Wrote %s", path)
        return path

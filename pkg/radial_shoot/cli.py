"""
Command line entry point: reads the run configuration, applies the logging
settings and hands the parsed arguments to the registered command class.

A run configuration is an INI file:

    [problem]
    N = 3

    [nonlinearity]
    kind = hermite
    gamma_star_minus = -3
    gamma_star = 2
    points =
        -3.0  1.0  0.0
         0.0  0.0  0.0
         ...

    [integrator]
    rel_tol = 1e-9

    [search]
    grid_points = 512

    [output]
    directory = out
    format = json
    svg = no
"""
import configparser
import logging
import logging.config
import math
import sys
from dataclasses import dataclass, field

from radial_shoot import catalog, settings
from radial_shoot.commands import EXIT_NUMERIC, ShootCommand
from radial_shoot.exceptions import ConfigError, InvalidModel, RadialShootError
from radial_shoot.nonlinearity import ModelKind, NonlinearityModel, PowerTail
from radial_shoot.routers import DefaultRouter

logger = logging.getLogger(__name__)

router = DefaultRouter()
router.register("", ShootCommand, "shoot")

INTEGRATOR_KEYS = {
    "rel_tol": float,
    "abs_tol": float,
    "r_max": float,
    "eps_zero": float,
    "eps_double": float,
    "k_cap": int,
}

SEARCH_KEYS = {
    "grid_points": int,
    "max_points": int,
    "k": int,
    "k_max": int,
    "bisect_tol": float,
    "workers": int,
    "alpha": float,
    "alpha_lo": float,
    "alpha_hi": float,
}

NONLINEARITY_KEYS = {"model", "kind", "gamma_star_minus", "gamma_star", "points", "coefficients",
                     "tail_c", "tail_p", "s_tail"}
OUTPUT_KEYS = {"directory", "format", "svg"}
SECTIONS = {
    "problem": {"N"},
    "nonlinearity": NONLINEARITY_KEYS,
    "integrator": set(INTEGRATOR_KEYS),
    "search": set(SEARCH_KEYS),
    "output": OUTPUT_KEYS,
}


@dataclass
class RunConfig:
    """
    A validated run configuration.

    Attributes:
        N (int): space dimension.
        nonlinearity (dict): model description, either {"model": name} or the explicit fields.
        integrator (dict): ProblemConfig overrides.
        search (dict): search options.
        output (dict): directory, format and svg flag.
    """
    N: int
    nonlinearity: dict
    integrator: dict = field(default_factory=dict)
    search: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def build_model(self):
        """
        Raises:
            ConfigError: if the model cannot be built from the description.
        """
        description = self.nonlinearity
        if "model" in description:
            try:
                return catalog.get_model(description["model"])
            except KeyError as exc:
                raise ConfigError(str(exc.args[0])) from None
        try:
            tail = None
            if "tail_c" in description:
                tail = PowerTail(description["tail_c"], description["tail_p"], description["s_tail"])
            return NonlinearityModel(
                description["kind"],
                description.get("gamma_star_minus", -math.inf),
                description.get("gamma_star", math.inf),
                coefficients=description.get("coefficients", ()),
                points=description.get("points", ()),
                tail=tail,
            )
        except (InvalidModel, KeyError, ValueError) as exc:
            raise ConfigError(f"Invalid [nonlinearity] section: {exc}") from exc

    def to_dict(self):
        """Canonical form hashed into the provenance header."""
        nonlinearity = dict(sorted(self.nonlinearity.items()))
        if "points" in nonlinearity:
            nonlinearity["points"] = [list(row) for row in nonlinearity["points"]]
        if "coefficients" in nonlinearity:
            nonlinearity["coefficients"] = list(nonlinearity["coefficients"])
        return {
            "problem": {"N": self.N},
            "nonlinearity": nonlinearity,
            "integrator": dict(sorted(self.integrator.items())),
            "search": dict(sorted(self.search.items())),
            "output": dict(sorted(self.output.items())),
        }


def _number(section, key, text, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {text!r} is not a valid {kind.__name__}.") from None


def _points(text):
    rows = []
    for line_number, line in enumerate(text.strip().splitlines(), start=1):
        cells = line.split()
        if not cells:
            continue
        if len(cells) != 3:
            raise ConfigError(f"Control row {line_number} must hold three numbers 's F f', got {line.strip()!r}.")
        rows.append(tuple(_number("nonlinearity", "points", cell) for cell in cells))
    if not rows:
        raise ConfigError("[nonlinearity] points is empty.")
    return tuple(rows)


def parse_config(text):
    """
    Parse the INI text of a run configuration.

    Returns:
        RunConfig: the parsed configuration.

    Raises:
        ConfigError: for syntax errors, unknown sections or keys, and malformed values.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"Malformed configuration: {exc}") from exc

    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"Unknown section [{section}].")
        unknown = set(parser[section]) - SECTIONS[section]
        if unknown:
            raise ConfigError(f"Unknown keys in [{section}]: {', '.join(sorted(unknown))}.")

    if not parser.has_option("problem", "N"):
        raise ConfigError("[problem] N is required.")
    N = _number("problem", "N", parser["problem"]["N"], int)

    if not parser.has_section("nonlinearity"):
        raise ConfigError("A [nonlinearity] section is required.")
    raw = parser["nonlinearity"]
    nonlinearity = {}
    if "model" in raw:
        if len(raw) > 1:
            raise ConfigError("[nonlinearity] model cannot be combined with an explicit description.")
        nonlinearity["model"] = raw["model"].strip()
    else:
        if "kind" not in raw:
            raise ConfigError("[nonlinearity] needs either model or kind.")
        try:
            nonlinearity["kind"] = ModelKind(raw["kind"].strip()).value
        except ValueError:
            raise ConfigError(f"Unknown nonlinearity kind {raw['kind']!r}.") from None
        for key in ("gamma_star_minus", "gamma_star", "tail_c", "tail_p", "s_tail"):
            if key in raw:
                nonlinearity[key] = _number("nonlinearity", key, raw[key])
        if "points" in raw:
            nonlinearity["points"] = _points(raw["points"])
        if "coefficients" in raw:
            nonlinearity["coefficients"] = tuple(
                _number("nonlinearity", "coefficients", c) for c in raw["coefficients"].split()
            )
        tail_keys = {"tail_c", "tail_p", "s_tail"} & set(nonlinearity)
        if tail_keys and len(tail_keys) != 3:
            raise ConfigError("tail_c, tail_p and s_tail must be given together.")

    integrator = {}
    if parser.has_section("integrator"):
        for key, value in parser["integrator"].items():
            integrator[key] = _number("integrator", key, value, INTEGRATOR_KEYS[key])

    search = {}
    if parser.has_section("search"):
        for key, value in parser["search"].items():
            search[key] = _number("search", key, value, SEARCH_KEYS[key])

    output = {}
    if parser.has_section("output"):
        section = parser["output"]
        if "directory" in section:
            output["directory"] = section["directory"].strip()
        if "format" in section:
            output["format"] = section["format"].strip().lower()
            if output["format"] not in ("json", "csv"):
                raise ConfigError(f"[output] format must be json or csv, got {output['format']!r}.")
        if "svg" in section:
            try:
                output["svg"] = section.getboolean("svg")
            except ValueError:
                raise ConfigError(f"[output] svg = {section['svg']!r} is not a boolean.") from None

    return RunConfig(N=N, nonlinearity=nonlinearity, integrator=integrator, search=search, output=output)


def load_config(path):
    """
    Raises:
        ConfigError: if the file cannot be read or parsed.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"Cannot read {path}: {exc}") from exc


def config_from_args(args):
    """
    The run configuration named by --config or --model, with the global flags applied.

    Raises:
        ConfigError: if neither --config nor --model is given.
    """
    if args.config:
        config = load_config(args.config)
    elif args.model:
        config = RunConfig(N=args.N or 3, nonlinearity={"model": args.model})
    else:
        raise ConfigError("Provide --config PATH or --model NAME.")
    if args.N is not None:
        config.N = args.N
    if args.out:
        config.output["directory"] = args.out
    if args.format:
        config.output["format"] = args.format
    if args.svg:
        config.output["svg"] = True
    config.output.setdefault("directory", settings.OUTPUT_DIR)
    return config


def configure_logging(verbosity=0):
    logging.config.dictConfig(settings.LOGGING)
    if verbosity:
        level = logging.DEBUG if verbosity > 1 else logging.INFO
        logging.getLogger("radial_shoot").setLevel(level)


def command_options(args):
    """Search options given on the command line; unset flags are left out."""
    names = ("alpha", "k", "k_max", "grid_points", "max_points", "workers", "bisect_tol", "alpha_lo", "alpha_hi")
    return {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}


def execute_from_command_line(argv=None):
    """
    Parse argv, run the subcommand and return its exit code.

    Args:
        argv (list[str], optional): arguments without the program name; sys.argv[1:] by default.
    """
    argv = sys.argv[1:] if argv is None else argv
    parser = router.parser
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_NUMERIC if exc.code else 0
    configure_logging(args.verbose)

    try:
        config = config_from_args(args)
        command = args.command_class(config=config, options=command_options(args))
    except RadialShootError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_NUMERIC
    return command.dispatch(args.command)


def main():
    """Console script entry point."""
    sys.exit(execute_from_command_line())


if __name__ == "__main__":
    main()

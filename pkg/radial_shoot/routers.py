"""

This Module is designed to provide a flexible way to expose command classes of radial_shoot
as subcommands of a single command line parser.

Contribute Points:
- a command class can only be registered once per router
- subcommand names are built from the router prefix, so two command classes can share a parser

Usage example:
from radial_shoot.routers import DefaultRouter

router = DefaultRouter()
router.register("", ShootCommand, "shoot")

args = router.parser.parse_args(["check", "--config", "example/m1.ini"])
"""

import argparse

from radial_shoot import __version__
from radial_shoot.commands import ShootCommand
from radial_shoot.exceptions import ImproperlyConfigured


class BaseRouter:

    def __init__(self) -> None:
        self.registery = []

    def register(self, prefix: str, command_class: type[ShootCommand], basename: str | None = None):
        """
        Register a command class with a specified prefix and basename in the router.

        This method is the main method for the BaseRouter class and its subclasses.
        It checks for the uniqueness of the provided prefix and basename before
        registering the command class. If either the prefix or basename is already
        registered, an ImproperlyConfigured exception is raised.

        Parameters
        ----------
        prefix : str
            Text put in front of every subcommand name of the command class. If the
            prefix is not blank and does not end with a '-', a '-' will be appended.

        command_class : type[ShootCommand]
            The command class to register. Every name in its `allowed_commands`
            becomes a subcommand.

        basename : str | None
            An optional unique identifier for the command class. If None, the
            default basename will be generated using the `get_default_basename` method.

        Raises
        ------
        ImproperlyConfigured
            - If the provided `basename` is already registered.

            - If the provided `prefix` is already registered.
        """
        if prefix and prefix[-1] != "-":
            prefix += "-"

        if basename is None:
            basename = self.get_default_basename(command_class)

        redundency_status, error_type = self.is_already_registered(basename, prefix)
        if redundency_status and error_type == "basename":
            raise ImproperlyConfigured(
                f'Router with basename "{basename}" is already registered. '
                f'Please provide a unique basename to your command class "{command_class.__name__}"'
            )

        elif redundency_status and error_type == "prefix":
            raise ImproperlyConfigured(
                f'Router with prefix "{prefix}" is already registered. '
                f'Please provide a unique prefix to your command class "{command_class.__name__}"'
            )

        self.registery.append((prefix, command_class, basename))

    def is_already_registered(self, new_basename: str, new_prefix: str) -> tuple[bool, str]:
        """
        Check if the provided `basename` and `prefix` are already registered.

        Parameters
        ----------
        new_basename : str
            The basename that is being checked for uniqueness in the router's registry.

        new_prefix : str
            The prefix that is being checked for uniqueness in the router's registry.

        Returns
        -------
        tuple[bool, str]
        A tuple containing:
            - bool: True if either the basename or the prefix is taken.
            - str: "prefix" or "basename" for the attribute in conflict, or an empty
                    string if there are no conflicts.
        """
        for prefix, command_class, basename in self.registery:

            if prefix == new_prefix:
                return True, "prefix"

            elif basename == new_basename:
                return True, "basename"

        return False, ""

    def get_default_basename(self, command_class):
        """
        If `basename` is not specified, attempt to automatically determine
        it from the command class.

        note: this method is available only within inherited classes that implement it
        """
        raise NotImplementedError("get_default_basename must be overridden")

    def get_parser(self):
        """
        Return the argument parser for the registered command classes.

        note: this method is available only within inherited classes that implement it
        """
        raise NotImplementedError("get_parser must be overridden")


def _common_arguments():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="run configuration (INI)")
    common.add_argument("--model", metavar="NAME", help="catalog model used when no --config is given")
    common.add_argument("--N", dest="N", type=int, help="space dimension, overrides [problem] N")
    common.add_argument("--out", metavar="DIR", help="output directory, overrides [output] directory")
    common.add_argument("--format", choices=("json", "csv"), help="trajectory table format")
    common.add_argument("--svg", action="store_true", default=None, help="also write SVG figures")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    return common


class DefaultRouter(BaseRouter):

    def __init__(self) -> None:
        super().__init__()

    def get_default_basename(self, command_class):
        """
        If `basename` is not specified, use the lowercased class name without
        its `Command` suffix.
        """
        name = command_class.__name__
        assert name.endswith("Command"), "`basename` argument not specified, and could " \
            "not automatically determine the name from the class, as " \
            "it does not end with `Command`."
        return name[: -len("Command")].lower()

    def command_argument_map(self, command: str, prefix: str) -> tuple[str, str, list]:
        """
        Generate the subcommand name, its help text and its own arguments.

        Parameters
        ----------
        - command : str
            One of the names in `allowed_commands`.

        - prefix : str
            The router prefix of the command class, already ending with '-' when not blank.

        Returns
        -------
        tuple[str, str, list]
            (subcommand name, help text, [(flags, add_argument keyword arguments)]).
        """
        alpha = (("--alpha",), {"type": float, "help": "initial value u(0)"})
        k = (("--k",), {"type": int, "help": "number of sign changes"})
        grid = (("--grid",), {"dest": "grid_points", "type": int, "help": "scan grid size"})
        max_points = (("--max-points",), {"type": int, "help": "largest grid tried before giving up"})
        workers = (("--workers",), {"type": int, "help": "scan worker processes"})
        default_patterns = {
            "check": (f"{prefix}check", "check the hypotheses on f", []),
            "landmarks": (f"{prefix}landmarks", "write the landmarks of F", []),
            "shoot": (f"{prefix}shoot", "integrate and classify one initial value", [alpha]),
            "scan": (f"{prefix}scan", "label a grid of initial values", [
                grid, workers,
                (("--alpha-lo",), {"type": float, "help": "lower end of the scan"}),
                (("--alpha-hi",), {"type": float, "help": "upper end of the scan"}),
            ]),
            "pairs": (f"{prefix}pairs", "find two bound states with k sign changes", [
                k, grid, max_points, workers,
                (("--k-max",), {"type": int, "help": "find k0 up to this k when --k is absent"}),
                (("--bisect-tol",), {"type": float, "help": "bisection width"}),
            ]),
            "theorems": (f"{prefix}theorems", "evaluate the constants and inequalities", [
                k, (("--alpha",), {"type": float, "help": "also check one trajectory"}),
            ]),
        }

        return default_patterns[command]

    def get_parser(self) -> argparse.ArgumentParser:
        """
        Build an argument parser with one subcommand per allowed command of every
        registered command class.

        Returns
        -------
        argparse.ArgumentParser
            Parsing sets `command_class` and `command` on the namespace.
        """
        assert self.registery != [], "you can't use this method directly, " \
            "you have to use router.register(...) first then request the parser by using: router.parser"

        parser = argparse.ArgumentParser(
            prog="radial-shoot",
            description="Shooting-method solver for sign-changing radial bound states.",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        subparsers = parser.add_subparsers(dest="subcommand", metavar="COMMAND")
        subparsers.required = True
        common = _common_arguments()

        for prefix, command_class, basename in self.registery:
            for command in command_class.allowed_commands:
                name, help_text, arguments = self.command_argument_map(command.lower(), prefix)
                sub = subparsers.add_parser(name, help=help_text, parents=[common])
                for flags, kwargs in arguments:
                    sub.add_argument(*flags, **kwargs)
                sub.set_defaults(command_class=command_class, command=command.lower(), basename=basename)

        return parser

    @property
    def parser(self) -> argparse.ArgumentParser:
        return self.get_parser()

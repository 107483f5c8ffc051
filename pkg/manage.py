#!/usr/bin/env python
"""radial_shoot's command-line utility for development tasks."""
import sys
import unittest


def run_tests(argv):
    """Discover and run the test suite under tests/."""
    verbosity = 2 if "-v" in argv else 1
    suite = unittest.defaultTestLoader.discover("tests", top_level_dir=".")
    result = unittest.TextTestRunner(verbosity=verbosity).run(suite)
    return 0 if result.wasSuccessful() else 1


def main():
    """Run development tasks."""

    # 'test' runs the unittest suite, every other subcommand goes to the solver CLI
    if len(sys.argv) > 1 and sys.argv[1] == "test":
        sys.exit(run_tests(sys.argv[2:]))

    try:
        # Import the command line utility inside the try block to catch import errors
        from radial_shoot.cli import execute_from_command_line
    except ImportError as exc:
        # Raise an ImportError with a clear message if the numeric stack is missing
        raise ImportError(
            "Couldn't import radial_shoot. Are numpy, scipy and matplotlib installed "
            "and available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc

    # Execute the command-line utility with the given arguments
    sys.exit(execute_from_command_line(sys.argv[1:]))


# If this script is executed as the main program, run the main function
if __name__ == '__main__':
    main()

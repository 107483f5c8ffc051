"""
Serialization helpers shared by every command: deterministic JSON, trajectory
CSV, output paths and the provenance header embedded in each report.
"""
import csv
import hashlib
import json
import math
import os
from enum import Enum

import numpy as np

from radial_shoot import __version__, settings

TOOL_NAME = "radial-shoot"


def format_float(x, digits=None):
    """
    Fixed formatting for every float written to disk.

    Args:
        x (float): the value.
        digits (int, optional): significant digits, settings.FLOAT_DIGITS by default.

    Returns:
        str: the JSON token; non-finite values become the strings "inf", "-inf" and "nan".
    """
    digits = settings.FLOAT_DIGITS if digits is None else digits
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, f".{digits}g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _plain(obj):
    """Reduce dataclass reports, enums and numpy scalars to JSON primitives."""
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(v is None or isinstance(v, (int, float)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"Object of type {type(obj).__name__} is not serializable")


def dumps(obj, indent=2):
    """
    Deterministic JSON text.

    Keys keep the insertion order the report's to_dict chose; floats always
    use format_float, so identical inputs give byte-identical output.
    """
    return _emit(_plain(obj), indent, 0) + "\n"


def write_json(path, obj):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))
    return path


def write_csv(path, header, rows):
    """Rows of floats with format_float applied; non-finite values are written bare."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v).strip('"') if isinstance(v, float) else v for v in row])
    return path


def trajectory_rows(traj):
    """(r, u, u', I, E) at every accepted sample of a trajectory."""
    model, N = traj.model, traj.N
    for r, u, v in traj.samples:
        r, u, v = float(r), float(u), float(v)
        I = 0.5 * v * v + model.F_unchecked(u)
        E = 2 * r ** N * I + (N - 2) * r ** (N - 1) * v * u
        yield r, u, v, I, E


TRAJECTORY_HEADER = ("r", "u", "uprime", "I", "E")


def config_hash(config_dict):
    """sha256 of the canonical JSON form of a run configuration."""
    return hashlib.sha256(dumps(config_dict).encode("utf-8")).hexdigest()


def _pkg_versions():
    """Versions of the numeric stack (best effort)."""
    versions = {}
    try:
        versions["numpy"] = np.__version__
    except AttributeError:
        pass
    try:
        import scipy
        versions["scipy"] = scipy.__version__
    except ImportError:
        pass
    try:
        import matplotlib
        versions["matplotlib"] = matplotlib.__version__
    except ImportError:
        pass
    return versions


def provenance_header(config_dict, command):
    """
    Header embedded in every report.

    It carries no timestamp, so two runs of the same configuration write the
    same header.
    """
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": command,
        "config_hash": config_hash(config_dict),
        "packages": _pkg_versions(),
    }


def generate_output_paths(output_dir, custom_patterns=None):
    """
    File names written by each command.

    Args:
        output_dir (str): directory every file goes to.
        custom_patterns (dict): optional overrides of the default file names.

    Returns:
        dict: artifact name -> absolute path.

    Raises:
        ValueError: if output_dir is empty.
    """
    if not output_dir:
        raise ValueError("The output directory is empty, please provide a valid path")

    default_patterns = {
        "hypotheses": "hypotheses.json",             # hypothesis verdicts (check)
        "landmarks": "landmarks.json",               # special points of F
        "trajectory": "trajectory.csv",              # r, u, u', I, E columns (shoot)
        "trajectory_json": "trajectory.json",        # same columns as JSON rows (shoot)
        "events": "events.json",                     # zeros, extrema, level crossings (shoot)
        "classification": "classification.json",     # terminal label (shoot)
        "scan": "scan.json",                         # labels over the alpha grid
        "pairs": "pairs.json",                       # the two bound states per k
        "theorems": "theorems.json",                 # constants and inequalities
        "curve_svg": "trajectory.svg",               # u(r) of a single shot
        "pairs_svg": "pairs.svg",                    # u(r) of both bound states
        "scan_svg": "scan.svg",                      # label strip chart
    }

    if custom_patterns:
        default_patterns.update(custom_patterns)

    return {name: os.path.abspath(os.path.join(output_dir, pattern)) for name, pattern in default_patterns.items()}

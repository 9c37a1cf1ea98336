"""Plain-text coefficient files.

One or more decimal reals per line, separated by whitespace; a line whose
first non-blank character is ``#`` is a comment.  ``n`` is the number of
values.  The bundled example lists live in ``autoconv/data``.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

import numpy as np

from .stepfn import StepFunction

BUNDLED = (
    "g_delta0138_n119.txt",
    "step_n10.txt",
    "step_n20_c.txt",
    "step_n150_signed.txt",
    "step_n208.txt",
)


class CoefficientFileError(ValueError):
    def __init__(self, message, lineno=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
        self.lineno = lineno
        self.source = source


def parse_coefficients(text: str, source=None) -> np.ndarray:
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for token in stripped.split():
            try:
                values.append(float(token))
            except ValueError:
                raise CoefficientFileError(
                    f"not a number: {token!r}", lineno, source
                ) from None
    if not values:
        raise CoefficientFileError("no coefficients found", source=source)
    return np.array(values)


def format_coefficients(values, header=None, per_line=5) -> str:
    """Text form of ``values``; ``repr`` floats so a re-read is bit-identical."""
    lines = []
    if header:
        lines.extend("# " + h for h in str(header).splitlines())
    values = [float(v) for v in np.ravel(values)]
    for i in range(0, len(values), per_line):
        lines.append("  ".join(repr(v) for v in values[i : i + per_line]))
    return "\n".join(lines) + "\n"


def read_coefficients(path) -> np.ndarray:
    path = Path(path)
    return parse_coefficients(path.read_text(), source=str(path))


def write_coefficients(path, values, header=None) -> None:
    Path(path).write_text(format_coefficients(values, header))


def bundled_path(name: str):
    if name not in BUNDLED and name != "expectations.manifest":
        raise KeyError(f"no bundled asset named {name!r}")
    return resources.files("autoconv") / "data" / name


def bundled_text(name: str) -> str:
    return bundled_path(name).read_text()


def load_coefficients(name_or_path) -> np.ndarray:
    """Read a bundled asset by name, or any coefficient file by path."""
    if isinstance(name_or_path, (str, os.PathLike)) and str(name_or_path) in BUNDLED:
        return parse_coefficients(bundled_text(str(name_or_path)), source=str(name_or_path))
    return read_coefficients(name_or_path)


def load_step(name_or_path, signed=None) -> StepFunction:
    """Load a step function; ``signed`` defaults to whether any coefficient is negative."""
    a = load_coefficients(name_or_path)
    if signed is None:
        signed = bool(np.any(a < 0))
    return StepFunction(a, signed=signed)

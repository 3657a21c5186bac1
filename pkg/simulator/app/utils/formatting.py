"""
Fixed-width text formatting for CLI output

Everything printed to stdout goes through here so identical inputs give
byte-identical output.
"""
from typing import Iterable, List

import numpy as np

_NUMBER = "{:+.12e}"


def format_number(value: float) -> str:
    # +0.0 folds negative zero into zero
    return _NUMBER.format(float(value) + 0.0)


def format_matrix(name: str, matrix: np.ndarray) -> str:
    lines: List[str] = [f"{name} ="]
    for row in np.atleast_2d(matrix):
        lines.append("  [" + ", ".join(format_number(v) for v in row) + "]")
    return "\n".join(lines)


def format_vector(name: str, vector: Iterable[float]) -> str:
    return f"{name} = [" + ", ".join(format_number(v) for v in vector) + "]"


def format_scalar(name: str, value: float) -> str:
    return f"{name} = {format_number(value)}"


def format_complex(value: complex) -> str:
    return f"{format_number(value.real)}{format_number(value.imag)}j"

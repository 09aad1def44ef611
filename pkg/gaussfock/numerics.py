# numerics.py - Richardson tables and extrapolated central differences, shared by the
# characteristic-curve moments and the Yosida limits

from __future__ import annotations

from math import comb
from typing import Callable, Sequence

import numpy as np


# --- Richardson Extrapolation ---

def richardson_table(base_values: Sequence[complex], p: int, r: float = 2.0) -> list[complex]:
    """Diagonal of the Richardson tableau for errors in h^p, h^2p, ... with step ratio r."""
    if len(base_values) < 1:
        raise ValueError("richardson_table requires at least one base value.")
    row = [np.asarray(v, dtype=complex) for v in base_values]
    diagonal = [row[0]]
    for j in range(1, len(row)):
        factor = r ** (p * j)
        row = [(factor * row[k + 1] - row[k]) / (factor - 1.0) for k in range(len(row) - 1)]
        diagonal.append(row[0])
    return diagonal


def richardson_extrapolate(base_values: Sequence[complex], p: int, r: float = 2.0) -> tuple[complex, float]:
    """Extrapolated value and the size of the last tableau increment."""
    diagonal = richardson_table(base_values, p, r)
    if len(diagonal) == 1:
        return complex(diagonal[-1]), float("inf")
    return complex(diagonal[-1]), float(abs(diagonal[-1] - diagonal[-2]))


def central_difference(f: Callable[[float], complex], order: int, h: float) -> complex:
    """Symmetric n-th difference quotient at 0; error expands in even powers of h."""
    if order < 0:
        raise ValueError(f"Derivative order must be non-negative, got {order}.")
    if order == 0:
        return complex(f(0.0))
    total = 0j
    for k in range(order + 1):
        total += (-1) ** k * comb(order, k) * complex(f((order / 2.0 - k) * h))
    return total / h ** order


def derivative_at_zero(
        f: Callable[[float], complex],
        order: int,
        scale: float = 1.0,
        levels: int = 5,
        first_step: float = 0.2,
) -> tuple[complex, float]:
    """n-th derivative of f at 0 as (value, error).

    Steps start at first_step / max(1, scale) and halve levels - 1 times; Richardson runs in h^2.
    """
    if order == 0:
        return complex(f(0.0)), 0.0
    h0 = first_step / max(1.0, float(scale))
    estimates = [central_difference(f, order, h0 / 2 ** i) for i in range(levels)]
    return richardson_extrapolate(estimates, p=2, r=2.0)

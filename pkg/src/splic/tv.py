"""Quadratic total-variation roughness penalty and its two gradient variants.

The penalty sums half-squared forward differences along both axes.  Two
gradients are provided: `tv_gradient` is the true derivative of
`tv_value`; `tv_gradient_forward` is a one-sided variant that keeps only
the terms in which a pixel is the minuend (it drops backward-neighbour
contributions, so its entries do not sum to zero).  The solver selects
between them via `tv_mode` ("exact" / "paper").
"""

from __future__ import annotations

import numpy as np

from .linalg import as_matrix


def tv_value(x) -> float:
    """Sum of half-squared forward differences along rows and columns."""
    arr = as_matrix(x)
    dv = arr[:-1, :] - arr[1:, :]
    dh = arr[:, :-1] - arr[:, 1:]
    return float(0.5 * (np.sum(dv * dv) + np.sum(dh * dh)))


def tv_gradient(x) -> np.ndarray:
    """Exact gradient of tv_value; its entries sum to zero.

    Every forward difference d = a - b contributes +d to the gradient at
    a and -d at b, which is what makes the total shift-invariant.
    """
    arr = as_matrix(x)
    g = np.zeros_like(arr)
    dv = arr[:-1, :] - arr[1:, :]
    dh = arr[:, :-1] - arr[:, 1:]
    g[:-1, :] += dv
    g[1:, :] -= dv
    g[:, :-1] += dh
    g[:, 1:] -= dh
    return g


def tv_gradient_forward(x) -> np.ndarray:
    """One-sided gradient variant (selectable as tv_mode="paper").

    Interior pixels get 2x[i,j] - x[i+1,j] - x[i,j+1]; the last row and
    column keep only their surviving forward difference.  The corner pixel
    has no forward neighbour in either direction and is set to 0, the only
    choice that reads no out-of-range neighbour.
    """
    arr = as_matrix(x)
    g = np.zeros_like(arr)
    g[:-1, :-1] = 2.0 * arr[:-1, :-1] - arr[1:, :-1] - arr[:-1, 1:]
    g[-1, :-1] = arr[-1, :-1] - arr[-1, 1:]
    g[:-1, -1] = arr[:-1, -1] - arr[1:, -1]
    return g

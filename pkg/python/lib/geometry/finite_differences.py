"""
Central finite-difference stencils on vectorised functions.

A function ``func`` accepted here maps an array of chart points of shape
``(..., n)`` to values of shape ``(..., *S)``. Derivatives are returned with
the differentiation indices first, e.g. ``gradient`` has shape ``(n, *S)``
for a single point.
"""

import numpy as np

from ..errors import SpecValidationError

FIRST_DERIVATIVE = {
    2: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    4: (np.array([-2.0, -1.0, 1.0, 2.0]), np.array([1.0 / 12.0, -2.0 / 3.0, 2.0 / 3.0, -1.0 / 12.0])),
    6: (
        np.array([-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]),
        np.array([-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0]),
    ),
}

SECOND_DERIVATIVE = {
    2: (np.array([-1.0, 0.0, 1.0]), np.array([1.0, -2.0, 1.0])),
    4: (
        np.array([-2.0, -1.0, 0.0, 1.0, 2.0]),
        np.array([-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0]),
    ),
    6: (
        np.array([-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]),
        np.array([1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0]),
    ),
}


def check_order(order):
    """Reject stencil orders without a table entry."""
    if order not in FIRST_DERIVATIVE:
        raise SpecValidationError(f"Unsupported finite-difference order: {order} (expected one of 2, 4, 6)")
    return order


def stencil_reach(order):
    """
    Number of grid steps a central stencil of the given order extends from its center.

    Args:
        order: Accuracy order (2, 4 or 6)

    Returns:
        Integer reach, order // 2
    """
    return check_order(order) // 2


def gradient(func, x, h, order=4):
    """
    First partial derivatives of a vectorised function.

    Args:
        func: Callable mapping (..., n) chart points to (..., *S) values
        x: Point(s) of shape (..., n)
        h: Step size
        order: Accuracy order of the central stencil

    Returns:
        Array of shape (..., n, *S); entry [..., j, ...] is the derivative along axis j
    """
    offsets, weights = FIRST_DERIVATIVE[check_order(order)]
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    eye = np.eye(n)
    # points[..., j, m, :] = x + offsets[m] * h * e_j
    points = x[..., None, None, :] + h * offsets[None, :, None] * eye[:, None, :]
    values = np.asarray(func(points))
    value_shape = values.shape[x.ndim + 1 :]
    w = weights.reshape((len(weights),) + (1,) * len(value_shape))
    return np.sum(w * values, axis=x.ndim) / h


def hessian(func, x, h, order=4):
    """
    Second partial derivatives of a vectorised function, symmetrised.

    Diagonal entries use the second-derivative stencil; mixed entries use the
    tensor product of first-derivative stencils.

    Args:
        func: Callable mapping (..., n) chart points to (..., *S) values
        x: Single point of shape (n,)
        h: Step size
        order: Accuracy order

    Returns:
        Array of shape (n, n, *S)
    """
    check_order(order)
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    eye = np.eye(n)

    d2_offsets, d2_weights = SECOND_DERIVATIVE[order]
    diag_points = x[None, None, :] + h * d2_offsets[None, :, None] * eye[:, None, :]
    diag_values = np.asarray(func(diag_points))
    value_shape = diag_values.shape[2:]
    w2 = d2_weights.reshape((len(d2_weights),) + (1,) * len(value_shape))
    diagonal = np.sum(w2 * diag_values, axis=1) / h**2

    result = np.zeros((n, n) + value_shape, dtype=diag_values.dtype)
    for j in range(n):
        result[j, j] = diagonal[j]

    if n > 1:
        offsets, weights = FIRST_DERIVATIVE[order]
        w_mixed = np.outer(weights, weights)
        w_mixed = w_mixed.reshape(w_mixed.shape + (1,) * len(value_shape))
        for j in range(n):
            for k in range(j + 1, n):
                points = (
                    x[None, None, :]
                    + h * offsets[:, None, None] * eye[j][None, None, :]
                    + h * offsets[None, :, None] * eye[k][None, None, :]
                )
                values = np.asarray(func(points))
                mixed = np.sum(w_mixed * values, axis=(0, 1)) / h**2
                result[j, k] = mixed
                result[k, j] = mixed
    return result

"""Uniform-node quadrature over one period, with doubling-based error control.

For a periodic integrand the rectangle and trapezoid rules coincide and
converge spectrally when the integrand is smooth.  Every routine here doubles
the node count (reusing the previous nodes) until two successive results agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InputError

MAX_NODES = 2**22
DEFAULT_REL_TOL = 1e-10
DEFAULT_MIN_NODES = 1024


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value, last successive difference and the node count used."""

    value: float
    error_estimate: float
    nodes_used: int


@dataclass(frozen=True)
class FourierResult:
    """Normalized Fourier coefficients ``(1/P) int_0^P f(x) exp(-2 pi i d x / P) dx``, d = 0..max_lag."""

    coefficients: np.ndarray
    error_estimate: float
    nodes_used: int


def _check_args(period, min_nodes, rel_tol):
    if not (math.isfinite(period) and period > 0):
        raise InputError(f"period must be positive, got {period!r}")
    if int(min_nodes) < 1:
        raise InputError(f"min_nodes must be >= 1, got {min_nodes!r}")
    if not rel_tol > 0:
        raise InputError(f"rel_tol must be positive, got {rel_tol!r}")


def _sum(values):
    values = np.asarray(values)
    # numpy reduces contiguous axes pairwise, which keeps results reproducible
    return values.sum(axis=0)


def periodic_integral(integrand, period, min_nodes=DEFAULT_MIN_NODES, rel_tol=DEFAULT_REL_TOL,
                      max_nodes=MAX_NODES):
    """Integrate a vectorized periodic ``integrand`` over ``[0, period)``.

    The integrand receives an array of nodes and may return an array of shape
    ``(M,)`` or ``(M, ...)``; vector-valued results converge in the max norm.
    """
    period = float(period)
    _check_args(period, min_nodes, rel_tol)
    m = int(min_nodes)
    step = period / m
    total = _sum(integrand(np.arange(m) * step))
    value = total * step
    previous = value
    while 2 * m <= max_nodes:
        total = total + _sum(integrand((np.arange(m) + 0.5) * step))
        m *= 2
        step *= 0.5
        new = total * step
        err = float(np.max(np.abs(new - value)))
        scale = float(np.max(np.abs(new)))
        if err <= rel_tol * scale:
            return QuadratureResult(new, err, m)
        previous, value = value, new
    raise ConvergenceError(
        f"periodic quadrature did not reach rel_tol={rel_tol:g} within {max_nodes} nodes",
        last_values=(previous, value),
    )


def periodic_fourier_coefficients(func, period, max_lag, min_nodes=DEFAULT_MIN_NODES,
                                  rel_tol=DEFAULT_REL_TOL, max_nodes=MAX_NODES):
    """Fourier coefficients of a periodic function by the uniform rule (one FFT per level).

    Alongside the plain levels c(M) the loop tracks the Richardson values
    (4 c(2M) - c(M)) / 3, which remove the M^-2 error of a kink sitting on a
    dyadic node (band edges of compactly supported generators).  Whichever
    sequence first satisfies ``max_d |next - prev| <= rel_tol * max_d |c_d|``
    is returned; for smooth integrands both agree to rounding.
    """
    period = float(period)
    _check_args(period, min_nodes, rel_tol)
    max_lag = int(max_lag)
    if max_lag < 0:
        raise InputError(f"max_lag must be >= 0, got {max_lag}")
    m = 1 << max(int(min_nodes) - 1, 2 * max_lag + 1).bit_length()
    step = period / m
    values = np.asarray(func(np.arange(m) * step), dtype=float)
    coeffs = np.fft.fft(values)[: max_lag + 1] / m
    extrap = None
    while True:
        if 2 * m > max_nodes:
            raise ConvergenceError(
                f"Fourier coefficients did not reach rel_tol={rel_tol:g} within {max_nodes} nodes",
                last_values=coeffs,
            )
        odd = np.asarray(func((np.arange(m) + 0.5) * step), dtype=float)
        merged = np.empty(2 * m)
        merged[0::2] = values
        merged[1::2] = odd
        values = merged
        m *= 2
        step *= 0.5
        new = np.fft.fft(values)[: max_lag + 1] / m
        new_extrap = (4.0 * new - coeffs) / 3.0
        scale = float(np.max(np.abs(new)))
        err = float(np.max(np.abs(new - coeffs)))
        if err <= rel_tol * scale:
            return FourierResult(new, err, m)
        if extrap is not None:
            err_x = float(np.max(np.abs(new_extrap - extrap)))
            if err_x <= rel_tol * scale:
                return FourierResult(new_extrap, err_x, m)
        coeffs, extrap = new, new_extrap


def _tensor_rule(integrand, periods, counts):
    axes = [np.arange(n) * (p / n) for p, n in zip(periods, counts)]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([g.ravel() for g in mesh], axis=-1)
    vals = np.asarray(integrand(points), dtype=float)
    weight = math.prod(p / n for p, n in zip(periods, counts))
    return float(vals.sum()) * weight


def periodic_integral_nd(integrand, periods, min_nodes=64, rel_tol=DEFAULT_REL_TOL,
                         max_nodes=MAX_NODES):
    """Tensor-product uniform rule over a box of periods (dimension <= 3).

    ``integrand`` receives points of shape ``(N, d)``.  Each axis is doubled in
    turn until doubling it changes the result by at most ``rel_tol``;
    ``max_nodes`` caps the total node count.
    """
    periods = [float(p) for p in periods]
    d = len(periods)
    if not 1 <= d <= 3:
        raise InputError(f"periodic_integral_nd supports 1 to 3 dimensions, got {d}")
    for p in periods:
        _check_args(p, min_nodes, rel_tol)
    counts = [int(min_nodes)] * d
    value = _tensor_rule(integrand, periods, counts)
    previous = value
    converged = [False] * d
    errors = [math.inf] * d
    while not all(converged):
        for ax in range(d):
            if converged[ax]:
                continue
            trial = list(counts)
            trial[ax] *= 2
            if math.prod(trial) > max_nodes:
                raise ConvergenceError(
                    f"tensor quadrature did not reach rel_tol={rel_tol:g} within {max_nodes} nodes",
                    last_values=(previous, value),
                )
            new = _tensor_rule(integrand, periods, trial)
            errors[ax] = abs(new - value)
            converged[ax] = errors[ax] <= rel_tol * abs(new)
            counts, previous, value = trial, value, new
    return QuadratureResult(value, max(errors), math.prod(counts))

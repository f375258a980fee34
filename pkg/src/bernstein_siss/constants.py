"""Sharp Bernstein constants B = sup_w G_k(w) / G_0(w) over one frequency period.

For orthonormal shifts G_0 == 1 and B is the supremum of G_k itself.  Keeping
the quotient makes the same search valid for Riesz (non-orthonormal)
generators, for scaled lattices and for dilated generators, whose Gram
function is not identically one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, UnsupportedGeneratorError
from .generators import dilate
from .periodization import DEFAULT_TAIL_TOL, _axes_of, _check_order, _multi_index, as_lattice, periodize

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
MIN_GRID = 16
MAX_DOUBLINGS = 2
SPIKE_RTOL = 1e-6


@dataclass(frozen=True)
class BernsteinConstant:
    """Squared-norm constant in ||f^(k)||^2 <= value * ||f||^2.

    ``lower_estimate`` flags results for sampled generators, where only the
    grid supremum is available.
    """

    value: float
    argmax: object
    tail_bound: float
    grid_size: int
    refined: bool
    k: object = None
    h: float = 1.0
    lower_estimate: bool = False

    @property
    def sqrt_value(self):
        return math.sqrt(self.value)


def ratio_profile(gen, k, omega, lattice=None, tail_tol=DEFAULT_TAIL_TOL):
    """Return ``(ratio, upper_ratio, G_k, G_0)`` on an array of frequencies.

    The ratio G_k/G_0 is taken from the lower ends of both enclosures and
    ``upper_ratio`` from the opposite ends; where G_0 vanishes both are 0.
    """
    lat = as_lattice(lattice)
    gk, tk, _ = periodize(gen, k, omega, lat, tail_tol)
    if gen.is_orthonormal and lat.h == 1.0:
        g0 = np.ones_like(gk)
        t0 = np.zeros_like(gk)
    else:
        g0, t0, _ = periodize(gen, 0, omega, lat, tail_tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = np.where(g0 > 0, gk / (g0 + t0), 0.0)
        upper = np.where(g0 > 0, (gk + tk) / g0, 0.0)
    return lower, upper, gk, g0


def _golden_max(f, a, b, tol):
    """Golden-section search for a maximum on [a, b]; returns the best probe seen."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = max((fc, -c), (fd, -d))
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            best = max(best, (fc, -c))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            best = max(best, (fd, -d))
    return -best[1], best[0]


def bernstein_constant(gen, k, lattice=None, grid_size=4096, refine_tol=1e-10,
                       tail_tol=DEFAULT_TAIL_TOL):
    """Sup of G_k/G_0 by a grid scan plus golden-section refinement.

    The scan covers [0, 2 pi / h).  Refinement works on the two cells around
    the best grid point.  If refinement beats the grid maximum by more than
    1e-6 (relative), the grid is doubled, at most twice, to catch narrow peaks
    between nodes.
    """
    k = _check_order(k)
    if gen.dim != 1:
        raise UnsupportedGeneratorError("use bernstein_constant_nd for multidimensional generators")
    grid_size = int(grid_size)
    if grid_size < MIN_GRID:
        raise InputError(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    if not refine_tol > 0:
        raise InputError(f"refine_tol must be positive, got {refine_tol!r}")
    lat = as_lattice(lattice)
    period = lat.period

    def scalar_ratio(w):
        return float(ratio_profile(gen, k, np.array([w]), lat, tail_tol)[0][0])

    for attempt in range(MAX_DOUBLINGS + 1):
        step = period / grid_size
        grid = np.arange(grid_size) * step
        ratios = ratio_profile(gen, k, grid, lat, tail_tol)[0]
        i = int(np.argmax(ratios))  # first maximum: lowest-omega tie-break
        grid_max = float(ratios[i])
        w_ref, v_ref = _golden_max(scalar_ratio, grid[i] - step, grid[i] + step, refine_tol)
        refined = v_ref > grid_max
        if refined:
            argmax, value = w_ref % period, v_ref
        else:
            argmax, value = float(grid[i]), grid_max
        if not value > grid_max * (1.0 + SPIKE_RTOL) or attempt == MAX_DOUBLINGS:
            break
        grid_size *= 2

    lower, upper, _, _ = ratio_profile(gen, k, np.array([argmax]), lat, tail_tol)
    tail = max(0.0, float(upper[0] - lower[0]))
    return BernsteinConstant(
        value=float(value),
        argmax=float(argmax),
        tail_bound=tail,
        grid_size=grid_size,
        refined=bool(refined),
        k=k,
        h=lat.h,
        lower_estimate=gen.sampled,
    )


def bernstein_constant_scaled(gen, k, a, grid_size=4096, refine_tol=1e-10, tail_tol=DEFAULT_TAIL_TOL):
    """Constant for W = span{phi((x - g) / a) : g integer}.

    f_hat(w) = m_f(w) a phi_hat(a w), i.e. the integer-shift space of the
    dilated generator phi(x / a).
    """
    return bernstein_constant(dilate(gen, a), k, 1.0, grid_size, refine_tol, tail_tol)


def bernstein_constant_nd(gen, k, grid_size=4096, refine_tol=1e-10, tail_tol=DEFAULT_TAIL_TOL, lattice=None):
    """Tensor constant: the periodization factorizes, so the sup is the product of axis sups."""
    k = _multi_index(k, gen.dim)
    axes = _axes_of(gen, len(k))
    parts = [bernstein_constant(ax, ks, lattice, grid_size, refine_tol, tail_tol) for ax, ks in zip(axes, k)]
    value = math.prod(p.value for p in parts)
    upper = math.prod(p.value + p.tail_bound for p in parts)
    return BernsteinConstant(
        value=value,
        argmax=tuple(p.argmax for p in parts),
        tail_bound=upper - value,
        grid_size=max(p.grid_size for p in parts),
        refined=any(p.refined for p in parts),
        k=k,
        h=as_lattice(lattice).h,
        lower_estimate=any(p.lower_estimate for p in parts),
    )

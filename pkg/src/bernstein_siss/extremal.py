"""Fejer-kernel extremal sequences: the witnesses that the Bernstein constant is sharp.

f_n has symbol |m_n|^2 = Phi_n(h (w - w*)), a Fejer kernel centered at the
maximizer w* of G_k / G_0, so that

    ||f_n^(k)||^2 / ||f_n||^2 = int Phi_n G_k / int Phi_n G_0  ->  B.

The kernel is a trigonometric polynomial with Fourier coefficients
1 - |d| / (n + 1), so both integrals are finite sums over the Fourier moments
of G_k and G_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import bernstein_constant, bernstein_constant_nd
from .errors import InputError
from .periodization import (
    DEFAULT_TAIL_TOL,
    _axes_of,
    _check_order,
    _multi_index,
    as_lattice,
    fourier_moments,
    periodize,
)
from .quadrature import DEFAULT_MIN_NODES, DEFAULT_REL_TOL, periodic_integral, periodic_integral_nd

DOMINATION_RTOL = 1e-9


def fejer(n, omega):
    """Phi_n(w) = (1/(n+1)) (sin((n+1) w/2) / sin(w/2))^2, equal to n+1 on 2 pi Z."""
    n = _check_order(n)
    omega = np.asarray(omega, dtype=float)
    s = np.sin(0.5 * omega)
    num = np.sin(0.5 * (n + 1) * omega)
    small = np.abs(s) < 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(small, n + 1.0, (num / np.where(small, 1.0, s)) ** 2 / (n + 1))
    return float(val) if val.ndim == 0 else val


def fejer_weights(n):
    """Fourier coefficients 1 - |d|/(n+1) of Phi_n for d = 0..n."""
    return 1.0 - np.arange(n + 1) / (n + 1.0)


def _min_nodes(n):
    return max(DEFAULT_MIN_NODES, 16 * (n + 1))


def _kernel_integral(table, n, center):
    """(1/2pi) int_0^T Phi_n(h (w - center)) G(w) dw from the moments of G."""
    d = np.arange(1, n + 1)
    w = fejer_weights(n)[1:]
    phase = np.exp(1j * d * table.h * center)
    return float(np.real(table.moments[0]) + 2.0 * np.sum(w * np.real(phase * table.moments[1:n + 1])))


def extremal_ratio(gen, k, lattice=None, n=0, center=None, method="moments", rel_tol=DEFAULT_REL_TOL,
                   tables=None):
    """||f_n^(k)||^2 / ||f_n||^2 for the Fejer extremal function of order n.

    ``center`` defaults to the argmax of the Bernstein constant.  With
    ``method="direct"`` both integrals are computed by the periodic rule on
    the product integrand; ``tables`` lets callers reuse moment tables.
    """
    k = _check_order(k)
    n = _check_order(n)
    lat = as_lattice(lattice)
    if center is None:
        center = bernstein_constant(gen, k, lat).argmax
    center = float(center)
    if method == "moments":
        if tables is None:
            tables = (
                fourier_moments(gen, k, n, lat, _min_nodes(n), rel_tol),
                fourier_moments(gen, 0, n, lat, _min_nodes(n), rel_tol),
            )
        tk, t0 = tables
        if tk.max_lag < n or t0.max_lag < n:
            raise InputError(f"moment tables do not reach lag {n}")
        return _kernel_integral(tk, n, center) / _kernel_integral(t0, n, center)
    if method == "direct":
        def integrand(order):
            def f(w):
                return fejer(n, lat.h * (w - center)) * periodize(gen, order, w, lat, DEFAULT_TAIL_TOL)[0]
            return f

        num = periodic_integral(integrand(k), lat.period, _min_nodes(n), rel_tol).value
        den = periodic_integral(integrand(0), lat.period, _min_nodes(n), rel_tol).value
        return num / den
    raise InputError(f"unknown method {method!r}; expected 'moments' or 'direct'")


def extremal_ratio_nd(gen, k, n, center=None, method="factorized", rel_tol=DEFAULT_REL_TOL, lattice=None):
    """Tensor extremal ratio with the product kernel prod_s Phi_n(w_s - c_s).

    ``factorized`` multiplies per-axis ratios; ``direct`` integrates the full
    d-dimensional integrands with the tensor rule (practical for smooth
    generators and small n).
    """
    k = _multi_index(k, gen.dim)
    axes = _axes_of(gen, len(k))
    n = _check_order(n)
    lat = as_lattice(lattice)
    if center is None:
        center = bernstein_constant_nd(gen, k, lattice=lat).argmax
    center = np.broadcast_to(np.asarray(center, dtype=float), (len(axes),))
    if method == "factorized":
        return math.prod(
            extremal_ratio(ax, ks, lat, n, c, rel_tol=rel_tol) for ax, ks, c in zip(axes, k, center)
        )
    if method == "direct":
        def integrand(orders):
            def f(points):
                out = np.ones(points.shape[0])
                for s, ax in enumerate(axes):
                    w = points[:, s]
                    out *= fejer(n, lat.h * (w - center[s])) * periodize(ax, orders[s], w, lat)[0]
                return out
            return f

        periods = [lat.period] * len(axes)
        min_nodes = max(64, 16 * (n + 1))
        num = periodic_integral_nd(integrand(k), periods, min_nodes, rel_tol).value
        den = periodic_integral_nd(integrand((0,) * len(axes)), periods, min_nodes, rel_tol).value
        return num / den
    raise InputError(f"unknown method {method!r}; expected 'factorized' or 'direct'")


@dataclass(frozen=True)
class FejerTrace:
    orders: tuple
    ratios: tuple
    constant: float
    gaps: tuple
    center: object

    def rows(self):
        return list(zip(self.orders, self.ratios, self.gaps))


def _check_orders(orders):
    orders = [_check_order(n) for n in orders]
    if not orders:
        raise InputError("need at least one Fejer order")
    if any(b <= a for a, b in zip(orders, orders[1:])):
        raise InputError("Fejer orders must be strictly increasing")
    return orders


def _trace_1d(gen, k, lat, orders, rel_tol):
    const = bernstein_constant(gen, k, lat)
    top = orders[-1]
    tables = (
        fourier_moments(gen, k, top, lat, _min_nodes(top), rel_tol),
        fourier_moments(gen, 0, top, lat, _min_nodes(top), rel_tol),
    )
    ratios = [extremal_ratio(gen, k, lat, n, const.argmax, tables=tables) for n in orders]
    return const, ratios


def sharpness_trace(gen, k, lattice=None, orders=(8, 16, 32, 64, 128, 256, 512, 1024), rel_tol=DEFAULT_REL_TOL):
    """Extremal ratios for increasing Fejer orders, centered at the argmax.

    Tensor generators use the product kernel; the ratio then factorizes into
    per-axis ratios.
    """
    orders = _check_orders(orders)
    lat = as_lattice(lattice)
    if gen.dim == 1 and not isinstance(k, (tuple, list)):
        const, ratios = _trace_1d(gen, k, lat, orders, rel_tol)
        value, center = const.value, const.argmax
    else:
        ks = _multi_index(k, gen.dim)
        axes = _axes_of(gen, len(ks))
        ratios = np.ones(len(orders))
        value, center = 1.0, []
        for ax, ka in zip(axes, ks):
            const, r = _trace_1d(ax, ka, lat, orders, rel_tol)
            ratios = ratios * np.asarray(r)
            value *= const.value
            center.append(const.argmax)
        center = tuple(center)
    ratios = tuple(float(r) for r in ratios)
    return FejerTrace(tuple(orders), ratios, value, tuple(value - r for r in ratios), center)

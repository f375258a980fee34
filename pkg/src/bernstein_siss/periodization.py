"""Weighted periodizations G_k(w) = sum_l |w + l T|^(2k) |phi_hat(w + l T)|^2, T = 2 pi / h.

The sum is truncated to |l| <= L.  L is chosen from the generator's envelope
so that a certified bound on the omitted tail meets the requested tolerance.
When the generator has an exact power-law tail whose modulation is periodic
along the lattice, the tail is summed in closed form (Hurwitz zeta) instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc, zeta

from .errors import ConvergenceError, DivergentSeriesError, InputError, UnsupportedGeneratorError
from .generators import TWO_PI, _is_multiple
from .quadrature import DEFAULT_MIN_NODES, DEFAULT_REL_TOL, periodic_fourier_coefficients

DEFAULT_TAIL_TOL = 1e-12
MAX_TERMS = 10**7
_CHUNK = 1 << 22
_EXACT_TAIL_TERMS = 4
_PILOT_TERMS = 2


@dataclass(frozen=True)
class LatticeSpec:
    """Shift step h; the frequency period is 2 pi / h."""

    h: float = 1.0

    def __post_init__(self):
        try:
            h = float(self.h)
        except (TypeError, ValueError):
            raise InputError(f"lattice step must be a number, got {self.h!r}") from None
        if not (math.isfinite(h) and h > 0):
            raise InputError(f"lattice step must be positive, got {self.h!r}")
        object.__setattr__(self, "h", h)

    @property
    def period(self):
        return TWO_PI / self.h


def as_lattice(lattice):
    if lattice is None:
        return LatticeSpec()
    if isinstance(lattice, LatticeSpec):
        return lattice
    return LatticeSpec(lattice)


@dataclass(frozen=True)
class PeriodizationValue:
    """Truncated sum with a bound on the omitted part: true sum in [value, value + tail_bound]."""

    value: object
    tail_bound: object
    terms_used: int


def _check_order(k):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 0:
        raise InputError(f"derivative order must be a nonnegative integer, got {k!r}")
    return int(k)


def _centered(omega, period):
    return omega - period * np.floor(omega / period + 0.5)


def _partial_sum(gen, k, w0, period, n_terms):
    """sum_{|j| <= n_terms} |w0 + jT|^(2k) |phi_hat(w0 + jT)|^2 for a 1-D array w0."""
    out = np.zeros(w0.shape)
    js = np.arange(-n_terms, n_terms + 1, dtype=float)
    block = max(1, _CHUNK // max(1, w0.size))
    for start in range(0, js.size, block):
        x = w0[:, None] + period * js[None, start:start + block]
        terms = gen.evaluator(x)
        if k:
            terms = terms * np.abs(x) ** (2 * k)
        out += terms.sum(axis=1)
    return out


def _smallest_terms(bound, tol, what):
    """Smallest L >= 1 with bound(L) <= tol, for bound decreasing in L."""
    if bound(1) <= tol:
        return 1
    hi = 1
    while bound(hi) > tol:
        if hi >= MAX_TERMS:
            raise ConvergenceError(
                f"{what}: tail bound {bound(MAX_TERMS):.3g} exceeds tolerance {tol:.3g} "
                f"with the maximum of {MAX_TERMS} terms per side; loosen tail_tol"
            )
        hi = min(2 * hi, MAX_TERMS)
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi


def _polynomial_tail(env, k, period):
    q = 2.0 * env.p - 2.0 * k
    c2 = env.c**2
    scale = period ** (-q)

    def worst(n):
        return 2.0 * c2 * scale * zeta(q, n + 0.5 + 1.0 / period)

    def per_point(n, w0):
        return c2 * scale * (zeta(q, n + 1.0 + (1.0 + w0) / period) + zeta(q, n + 1.0 + (1.0 - w0) / period))

    return worst, per_point


def _super_exponential_tail(env, k, period):
    # integral comparison for c^2 x^(2k) exp(-2 p x), decreasing for x >= k / p
    n = 2 * k
    r = 2.0 * env.p
    c2 = env.c**2
    const = c2 * math.factorial(n) / r ** (n + 1) / period
    turn = k / env.p

    def integral(x):
        return const * gammaincc(n + 1, r * x)

    def worst(L):
        x = (L - 0.5) * period
        if x < turn:
            return math.inf
        return 2.0 * integral(x)

    def per_point(L, w0):
        return integral(w0 + L * period) + integral(L * period - w0)

    return worst, per_point


def _is_divergent(env, k):
    return env.support is None and env.mode == "polynomial" and 2.0 * env.p - 2.0 * k <= 1.0


def _series(gen, k, omega, period, tail_tol):
    """Vectorized G_k over a 1-D float array; returns (value, tail_bound, terms_used)."""
    if gen.kind == "orthonormalized" and _is_multiple(period, TWO_PI):
        # every lattice point shares w mod 2 pi, so G_k = G_k(inner) / G_0(inner)
        num, tn, n_terms = _series(gen.inner, k, omega, period, tail_tol)
        den, td, _ = _series(gen.inner, 0, omega, period, tail_tol)
        value = num / (den + td)
        return value, (num + tn) / den - value, n_terms

    env = gen.envelope
    w0 = _centered(omega, period)
    tm = gen.tail_model
    if tm is not None and _is_multiple(period, tm.period):
        q = 2.0 * tm.power - 2.0 * k
        if q <= 1.0:
            raise DivergentSeriesError(_divergence_message(gen, k, q))
        n_terms = _EXACT_TAIL_TERMS
        partial = _partial_sum(gen, k, w0, period, n_terms)
        hz = zeta(q, n_terms + 1.0 + w0 / period) + zeta(q, n_terms + 1.0 - w0 / period)
        tail = tm.modulation(w0) * period ** (-q) * hz
        return partial + tail, 16.0 * np.finfo(float).eps * np.abs(tail), n_terms

    if env.support is not None:
        # all omitted points satisfy |x| >= (L + 1/2) T
        n_terms = max(1, math.floor(env.support / period - 0.5) + 1)
        if (n_terms + 0.5) * period <= env.support:
            n_terms += 1
        return _partial_sum(gen, k, w0, period, n_terms), np.zeros_like(w0), n_terms

    if _is_divergent(env, k):
        raise DivergentSeriesError(_divergence_message(gen, k, 2.0 * env.p - 2.0 * k))
    if env.mode == "polynomial":
        worst, per_point = _polynomial_tail(env, k, period)
    else:
        worst, per_point = _super_exponential_tail(env, k, period)
    pilot = _partial_sum(gen, k, w0, period, _PILOT_TERMS)
    tol = tail_tol * max(1.0, float(np.max(pilot, initial=0.0)))
    n_terms = _smallest_terms(worst, tol, f"periodization of {gen.label or gen.kind} (k={k})")
    value = _partial_sum(gen, k, w0, period, n_terms)
    return value, per_point(n_terms, w0), n_terms


def _divergence_message(gen, k, q):
    return (
        f"sum_l |w+2 pi l|^{2 * k} |phi_hat(w+2 pi l)|^2 diverges for {gen.label or gen.kind} "
        f"with k={k}: the terms decay like |l|^(-{q:g}) and summability needs an exponent > 1 "
        f"(2p - 2k > 1)"
    )


def periodize(gen, k, omega, lattice=None, tail_tol=DEFAULT_TAIL_TOL):
    """Array version of :func:`bracket`: returns ``(values, tail_bounds, terms_used)``."""
    k = _check_order(k)
    if gen.dim != 1:
        raise UnsupportedGeneratorError("periodize takes a one-dimensional generator; use bracket_nd")
    if not tail_tol > 0:
        raise InputError(f"tail_tol must be positive, got {tail_tol!r}")
    period = as_lattice(lattice).period
    omega = np.asarray(omega, dtype=float)
    flat = omega.reshape(-1)
    value, tail, n_terms = _series(gen, k, flat, period, tail_tol)
    return value.reshape(omega.shape), np.broadcast_to(tail, flat.shape).reshape(omega.shape), n_terms


def bracket(gen, k, omega, lattice=None, tail_tol=DEFAULT_TAIL_TOL):
    """G_k(omega) with a certified tail bound.

    ``omega`` may be a scalar or an array; fields of the result follow its shape.
    """
    value, tail, n_terms = periodize(gen, k, omega, lattice, tail_tol)
    if np.ndim(omega) == 0:
        return PeriodizationValue(float(value), float(tail), n_terms)
    return PeriodizationValue(value, tail, n_terms)


def _axes_of(gen, d):
    if gen.is_tensor:
        return gen.axes
    if gen.dim == 1 and d == 1:
        return (gen,)
    raise UnsupportedGeneratorError(
        f"{gen.label or gen.kind}: multidimensional periodization is implemented for tensor generators only"
    )


def _multi_index(k, d=None):
    if isinstance(k, (int, np.integer)) and not isinstance(k, bool):
        k = (k,) * (d or 1)
    k = tuple(_check_order(ks) for ks in k)
    if d is not None and len(k) != d:
        raise InputError(f"multi-index has {len(k)} entries but the generator has dimension {d}")
    return k


def bracket_nd(gen, k, omega, lattice=None, tail_tol=DEFAULT_TAIL_TOL):
    """Tensor-generator periodization; the sum factorizes into per-axis sums.

    ``omega`` has shape ``(d,)`` or ``(..., d)``.  The tail bound is the exact
    first-order perturbation ``prod(v_s + t_s) - prod(v_s)``.
    """
    k = _multi_index(k, gen.dim)
    axes = _axes_of(gen, len(k))
    omega = np.asarray(omega, dtype=float)
    if omega.shape[-1:] != (len(axes),):
        raise InputError(f"expected points with {len(axes)} coordinates, got shape {omega.shape}")
    value = 1.0
    upper = 1.0
    n_terms = 0
    for s, ax in enumerate(axes):
        v, t, n = periodize(ax, k[s], omega[..., s], lattice, tail_tol)
        value = value * v
        upper = upper * (v + t)
        n_terms = max(n_terms, n)
    if omega.ndim == 1:
        return PeriodizationValue(float(value), float(upper - value), n_terms)
    return PeriodizationValue(value, upper - value, n_terms)


@dataclass(frozen=True)
class OrthonormalityReport:
    max_deviation: float
    passed: bool
    worst_omega: object


def check_orthonormal(gen, grid_size=1024, tol=1e-8, lattice=None):
    """Max of |G_0 - 1| on a uniform grid over one frequency period."""
    grid_size = int(grid_size)
    if grid_size < 2:
        raise InputError(f"grid_size must be >= 2, got {grid_size}")
    period = as_lattice(lattice).period
    grid = np.arange(grid_size) * (period / grid_size)
    axes = _axes_of(gen, gen.dim)
    g0 = np.ones(())
    for ax in axes:
        g0 = np.multiply.outer(g0, periodize(ax, 0, grid, lattice)[0])
    dev = np.abs(g0 - 1.0)
    idx = np.unravel_index(int(np.argmax(dev)), dev.shape)
    worst = tuple(float(grid[i]) for i in idx)
    max_dev = float(dev[idx])
    return OrthonormalityReport(max_dev, max_dev <= tol, worst[0] if len(worst) == 1 else worst)


@dataclass(frozen=True)
class MomentTable:
    """moments[d] = (1/2pi) int_0^T G_k(w) exp(-i d h w) dw for d = 0..max_lag."""

    moments: np.ndarray
    k: int
    h: float
    error_estimate: float
    nodes_used: int

    @property
    def max_lag(self):
        return self.moments.size - 1

    def full(self):
        """Moments for lags -max_lag..max_lag (G_k is real, so m[-d] = conj(m[d]))."""
        m = self.moments
        return np.concatenate([np.conj(m[:0:-1]), m])


def fourier_moments(gen, k, max_lag, lattice=None, min_nodes=DEFAULT_MIN_NODES,
                    rel_tol=DEFAULT_REL_TOL, tail_tol=DEFAULT_TAIL_TOL):
    """Fourier moments of G_k, the Gram data behind every norm and extremal ratio."""
    lat = as_lattice(lattice)
    k = _check_order(k)

    def g(omega):
        return periodize(gen, k, omega, lat, tail_tol)[0]

    res = periodic_fourier_coefficients(g, lat.period, max_lag, min_nodes, rel_tol)
    # (1/2pi) * T * (normalized coefficient) = coefficient / h
    return MomentTable(res.coefficients / lat.h, k, lat.h, res.error_estimate / lat.h, res.nodes_used)

"""Finite combinations f = sum_g c_g phi(x - h g) and their norms in the frequency domain.

With f_hat(w) = m_f(h w) phi_hat(w) and m_f(t) = sum_g c_g exp(-i g t)::

    ||f^(k)||^2 = (1/2pi) int_0^T |m_f(h w)|^2 G_k(w) dw,   T = 2 pi / h.

Expanding |m_f|^2 turns this into a finite sum of coefficient
autocorrelations against the Fourier moments of G_k, so one moment table
serves every function with the same generator, order and support.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .constants import bernstein_constant
from .errors import InputError
from .periodization import DEFAULT_TAIL_TOL, _check_order, as_lattice, fourier_moments, periodize
from .quadrature import DEFAULT_MIN_NODES, DEFAULT_REL_TOL, periodic_integral

PASS_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class FiniteSissFunction:
    """Coefficients c_g for g = offset, offset + 1, ... on a lattice of step h."""

    coeffs: np.ndarray
    offset: int
    h: float
    generator: object

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size == 0:
            raise InputError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise InputError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "h", as_lattice(self.h).h)

    @classmethod
    def from_mapping(cls, coeffs, generator, h=1.0):
        """Build from ``{gamma: c_gamma}``; missing indices inside the range are zero."""
        if not coeffs:
            raise InputError("need at least one coefficient")
        lo, hi = min(coeffs), max(coeffs)
        arr = np.zeros(hi - lo + 1, dtype=complex)
        for g, c in coeffs.items():
            arr[g - lo] = c
        return cls(arr, lo, h, generator)

    @property
    def width(self):
        return self.coeffs.size

    @property
    def indices(self):
        return np.arange(self.offset, self.offset + self.width)

    def is_zero(self):
        return not np.any(self.coeffs)

    def shifted(self, n):
        return FiniteSissFunction(self.coeffs, self.offset + int(n), self.h, self.generator)

    def scaled(self, alpha):
        return FiniteSissFunction(alpha * self.coeffs, self.offset, self.h, self.generator)


def symbol_eval(f, omega):
    """m_f(w) = sum_g c_g exp(-i g w); 2 pi periodic."""
    omega = np.asarray(omega, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(omega, f.indices))
    out = phases @ f.coeffs
    return complex(out) if out.ndim == 0 else out


def autocorrelation(coeffs):
    """r_d = sum_q c_(q+d) conj(c_q) for d = -(n-1)..(n-1)."""
    c = np.asarray(coeffs, dtype=complex)
    return np.correlate(c, c, mode="full")


def _moment_quadratic_form(coeffs, table):
    r = autocorrelation(coeffs)
    lag = coeffs.size - 1
    if table.max_lag < lag:
        raise InputError(f"moment table covers lags up to {table.max_lag}, need {lag}")
    m = table.full()[table.max_lag - lag: table.max_lag + lag + 1]
    return max(0.0, float(np.real(np.dot(r, m))))


def _min_nodes(width):
    return max(DEFAULT_MIN_NODES, 16 * width)


def moments_for(gen, k, width, h=1.0, rel_tol=DEFAULT_REL_TOL):
    """Moment table adequate for every function of the given support width."""
    return fourier_moments(gen, k, width - 1, h, min_nodes=_min_nodes(width), rel_tol=rel_tol)


def derivative_norm_sq(f, k, method="moments", moments=None, rel_tol=DEFAULT_REL_TOL):
    """||f^(k)||_2^2.

    ``method="moments"`` contracts the coefficient autocorrelation with the
    Fourier moments of G_k (a precomputed ``moments`` table may be passed);
    ``method="direct"`` integrates |m_f(h w)|^2 G_k(w) with the periodic rule.
    """
    k = _check_order(k)
    if method == "moments":
        table = moments if moments is not None else moments_for(f.generator, k, f.width, f.h, rel_tol)
        if table.k != k or table.h != f.h:
            raise InputError("moment table was built for a different order or lattice")
        return _moment_quadratic_form(f.coeffs, table)
    if method == "direct":
        lat = as_lattice(f.h)

        def integrand(w):
            m = symbol_eval(f, lat.h * w)
            return np.abs(m) ** 2 * periodize(f.generator, k, w, lat, DEFAULT_TAIL_TOL)[0]

        res = periodic_integral(integrand, lat.period, _min_nodes(f.width), rel_tol)
        return res.value / (2.0 * math.pi)
    raise InputError(f"unknown method {method!r}; expected 'moments' or 'direct'")


def norm_sq(f, method="auto", moments=None, rel_tol=DEFAULT_REL_TOL):
    """||f||_2^2; ``auto`` uses sum |c|^2 for orthonormal integer shifts."""
    if method == "auto":
        if f.generator.is_orthonormal and f.h == 1.0:
            return float(np.sum(np.abs(f.coeffs) ** 2))
        method = "moments"
    return derivative_norm_sq(f, 0, method, moments, rel_tol)


def ratio(f, k, method="moments", moments_k=None, moments_0=None):
    """||f^(k)||^2 / ||f||^2 for a nonzero f."""
    if f.is_zero():
        raise InputError("the ratio is undefined for the zero function")
    den = norm_sq(f, "auto" if moments_0 is None and method == "moments" else method, moments_0)
    if den <= 0.0:
        raise InputError("the function has zero norm")
    return derivative_norm_sq(f, k, method, moments_k) / den


def random_function(seed, support, lattice, generator):
    """Random coefficients on [-support, support].

    Real and imaginary parts are independent standard normals from numpy's
    PCG64 generator seeded with ``seed`` (an int or a SeedSequence).
    """
    support = int(support)
    if support < 0:
        raise InputError(f"support must be >= 0, got {support}")
    rng = np.random.default_rng(seed)
    n = 2 * support + 1
    coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return FiniteSissFunction(coeffs, -support, as_lattice(lattice).h, generator)


@dataclass(frozen=True)
class VerificationReport:
    trials: int
    constant: float
    max_ratio: float
    argmax_seed_index: int
    margin: float
    passed: bool


def verify_inequality(gen, k, lattice=None, trials=1000, support=8, seed=0, constant=None):
    """Check ||f^(k)||^2 <= B ||f||^2 on seeded random functions.

    Trial i uses the i-th child of ``SeedSequence(seed)``, so reports are
    reproducible.  Ties in the maximum go to the lowest trial index.
    """
    k = _check_order(k)
    trials = int(trials)
    if trials < 0:
        raise InputError(f"trials must be >= 0, got {trials}")
    lat = as_lattice(lattice)
    if constant is None:
        constant = bernstein_constant(gen, k, lat)
    bound = constant.value
    if trials == 0:
        return VerificationReport(0, bound, 0.0, -1, bound, True)
    width = 2 * int(support) + 1
    table_k = moments_for(gen, k, width, lat.h)
    table_0 = moments_for(gen, 0, width, lat.h)
    children = np.random.SeedSequence(seed).spawn(trials)
    best, best_i = -math.inf, -1
    for i, child in enumerate(children):
        f = random_function(child, support, lat, gen)
        r = _moment_quadratic_form(f.coeffs, table_k) / _moment_quadratic_form(f.coeffs, table_0)
        if r > best:
            best, best_i = r, i
    allowance = bound * PASS_RTOL + constant.tail_bound
    return VerificationReport(trials, bound, best, best_i, bound - best, best <= bound + allowance)


def read_coefficients(path):
    """Read a ``gamma,re,im`` CSV into ``{gamma: complex}``."""
    out = {}
    try:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() == "gamma":
                    continue
                try:
                    g = int(row[0])
                    re = float(row[1])
                    im = float(row[2]) if len(row) > 2 and row[2].strip() else 0.0
                except (ValueError, IndexError):
                    raise InputError(f"{path}: malformed row {row!r}") from None
                out[g] = out.get(g, 0) + complex(re, im)
    except OSError as exc:
        raise InputError(f"cannot read coefficient file {path}: {exc}") from None
    if not out:
        raise InputError(f"{path}: no coefficients")
    return out


def write_coefficients(path, f):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["gamma", "re", "im"])
        for g, c in zip(f.indices, f.coeffs):
            w.writerow([int(g), repr(float(c.real)), repr(float(c.imag))])

"""Generators of shift-invariant spaces, described through |phi_hat|^2.

Fourier convention used throughout the package::

    phi_hat(w) = int phi(x) exp(-i w x) dx,    ||f||^2 = (1/2pi) ||f_hat||^2

so that the integer shifts of phi are orthonormal exactly when
``sum_l |phi_hat(w + 2 pi l)|^2 == 1``.  Only the squared modulus is ever
evaluated; phases never enter any of the formulas.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DegenerateGeneratorError, InputError, UnsupportedGeneratorError

TWO_PI = 2.0 * math.pi

KINDS = ("shannon", "bspline", "gaussian", "dilated", "orthonormalized", "tensor", "tabulated")
ENVELOPE_MODES = ("polynomial", "super_exponential")


def _positive(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InputError(f"{name} must be a number, got {value!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise InputError(f"{name} must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class SpectralEnvelope:
    """Pointwise bound on |phi_hat|.

    ``polynomial``: |phi_hat(w)| <= c (1 + |w|)^(-p);
    ``super_exponential``: |phi_hat(w)| <= c exp(-p |w|).
    An optional ``support`` radius additionally declares phi_hat == 0 for
    |w| > support.
    """

    mode: str
    c: float
    p: float
    support: Optional[float] = None

    def __post_init__(self):
        if self.mode not in ENVELOPE_MODES:
            raise InputError(f"envelope mode must be one of {ENVELOPE_MODES}, got {self.mode!r}")
        object.__setattr__(self, "c", _positive("envelope amplitude c", self.c))
        object.__setattr__(self, "p", _positive("envelope exponent p", self.p))
        if self.support is not None:
            object.__setattr__(self, "support", _positive("envelope support", self.support))

    def bound(self, omega):
        r = np.abs(np.asarray(omega, dtype=float))
        if self.mode == "polynomial":
            out = self.c * (1.0 + r) ** (-self.p)
        else:
            out = self.c * np.exp(-self.p * r)
        if self.support is not None:
            out = np.where(r > self.support, 0.0, out)
        return out

    def bound_sq(self, omega):
        return self.bound(omega) ** 2

    def dilate(self, a):
        """Envelope of w -> a * phi_hat(a w)."""
        support = None if self.support is None else self.support / a
        if self.mode == "polynomial":
            # 1 + a|w| >= min(1, a) (1 + |w|)
            c = a * self.c * min(1.0, a) ** (-self.p)
            return SpectralEnvelope("polynomial", c, self.p, support)
        return SpectralEnvelope("super_exponential", a * self.c, a * self.p, support)

    def scale(self, factor):
        return SpectralEnvelope(self.mode, self.c * factor, self.p, self.support)

    @classmethod
    def from_dict(cls, obj):
        if not isinstance(obj, dict):
            raise InputError("envelope must be a JSON object")
        try:
            return cls(obj["mode"], obj["c"], obj["p"], obj.get("support"))
        except KeyError as exc:
            raise InputError(f"envelope is missing field {exc}") from None

    def to_dict(self):
        out = {"mode": self.mode, "c": self.c, "p": self.p}
        if self.support is not None:
            out["support"] = self.support
        return out


@dataclass(frozen=True)
class TailModel:
    """Exact large-frequency form ``|phi_hat(x)|^2 = modulation(x) * |x|^(-2 power)``.

    ``modulation`` is periodic with ``period``.  When the frequency lattice
    step is a multiple of the period, every lattice point carries the same
    modulation and the omitted tail of a periodization sum is a Hurwitz zeta
    value.
    """

    power: float
    modulation: Callable[[np.ndarray], np.ndarray]
    period: float


@dataclass(frozen=True, eq=False)
class Generator:
    """A generator phi, known through ``w -> |phi_hat(w)|^2``.

    Tensor generators take points of shape ``(..., dim)`` and carry one
    envelope per axis.  Instances are immutable and their evaluators pure.
    """

    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    envelope: Union[SpectralEnvelope, tuple]
    dim: int = 1
    is_orthonormal: bool = False
    tail_model: Optional[TailModel] = None
    inner: Optional["Generator"] = None
    axes: tuple = ()
    factor: Optional[float] = None
    sampled: bool = False
    label: str = ""

    def __call__(self, omega):
        return self.evaluator(np.asarray(omega, dtype=float))

    @property
    def is_tensor(self):
        return bool(self.axes)

    def __repr__(self):
        return f"Generator({self.label or self.kind}, dim={self.dim})"


# ---------------------------------------------------------------------------
# Specs


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative, JSON-serializable description of a generator (a tree)."""

    kind: str
    order: Optional[int] = None
    sigma: Optional[float] = None
    a: Optional[float] = None
    inner: Optional["GeneratorSpec"] = None
    axes: tuple = ()
    file: Optional[str] = None
    envelope: Optional[SpectralEnvelope] = None

    def __post_init__(self):
        kind = self.kind
        if kind not in KINDS:
            raise InputError(f"unknown generator kind {kind!r}; expected one of {KINDS}")
        if kind == "bspline":
            order = self.order
            if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
                if isinstance(order, float) and order.is_integer():
                    order = int(order)
                else:
                    raise InputError(f"bspline order must be an integer >= 1, got {order!r}")
            if order < 1:
                raise InputError(f"bspline order must be an integer >= 1, got {order!r}")
            object.__setattr__(self, "order", int(order))
        elif kind == "gaussian":
            object.__setattr__(self, "sigma", _positive("gaussian sigma", self.sigma))
        elif kind == "dilated":
            object.__setattr__(self, "a", _positive("dilation factor a", self.a))
            if not isinstance(self.inner, GeneratorSpec):
                raise InputError("dilated spec needs an inner spec")
        elif kind == "orthonormalized":
            if not isinstance(self.inner, GeneratorSpec):
                raise InputError("orthonormalized spec needs an inner spec")
        elif kind == "tensor":
            axes = tuple(self.axes)
            if not axes:
                raise InputError("tensor spec needs a non-empty list of axes")
            if not all(isinstance(ax, GeneratorSpec) for ax in axes):
                raise InputError("tensor axes must be generator specs")
            object.__setattr__(self, "axes", axes)
        elif kind == "tabulated":
            if not self.file:
                raise InputError("tabulated spec needs a sample file")
            if not isinstance(self.envelope, SpectralEnvelope):
                raise InputError("tabulated spec needs an explicit envelope")

    @classmethod
    def from_dict(cls, obj, base_dir=None):
        """Parse the JSON form; relative sample files resolve against ``base_dir``."""
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("generator spec must be a JSON object with a 'kind' field")
        kind = obj["kind"]
        if kind == "bspline":
            return cls(kind, order=obj.get("order"))
        if kind == "gaussian":
            return cls(kind, sigma=obj.get("sigma"))
        if kind in ("dilated", "orthonormalized"):
            if "inner" not in obj:
                raise InputError(f"{kind} spec needs an 'inner' field")
            inner = cls.from_dict(obj["inner"], base_dir)
            return cls(kind, a=obj.get("a"), inner=inner)
        if kind == "tensor":
            axes = obj.get("axes")
            if not isinstance(axes, list):
                raise InputError("tensor spec needs an 'axes' list")
            return cls(kind, axes=tuple(cls.from_dict(ax, base_dir) for ax in axes))
        if kind == "tabulated":
            path = obj.get("file")
            if path and base_dir is not None and not Path(path).is_absolute():
                path = str(Path(base_dir) / path)
            env = obj.get("envelope")
            return cls(kind, file=path, envelope=None if env is None else SpectralEnvelope.from_dict(env))
        return cls(kind)

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "bspline":
            out["order"] = self.order
        elif self.kind == "gaussian":
            out["sigma"] = self.sigma
        elif self.kind == "dilated":
            out["a"] = self.a
            out["inner"] = self.inner.to_dict()
        elif self.kind == "orthonormalized":
            out["inner"] = self.inner.to_dict()
        elif self.kind == "tensor":
            out["axes"] = [ax.to_dict() for ax in self.axes]
        elif self.kind == "tabulated":
            out["file"] = self.file
            out["envelope"] = self.envelope.to_dict()
        return out


# ---------------------------------------------------------------------------
# Built-in kinds


def _shannon_sq(omega):
    r = np.abs(omega)
    # half weight on the band edge keeps the Gram function identically 1
    return np.where(r < math.pi, 1.0, np.where(r == math.pi, 0.5, 0.0))


def shannon():
    """Ideal low-pass generator, |phi_hat|^2 = 1 on [-pi, pi]."""
    env = SpectralEnvelope("polynomial", 1.0 + math.pi, 1.0, support=math.pi)
    return Generator("shannon", _shannon_sq, env, is_orthonormal=True, label="shannon")


def bspline(order):
    """B-spline of order m, the m-fold self-convolution of 1_[0,1).

    |phi_hat(w)|^2 = (sin(w/2) / (w/2))^(2m).  Order 1 is the Haar function.
    """
    m = GeneratorSpec("bspline", order=order).order

    def evaluator(omega):
        return np.sinc(omega / TWO_PI) ** (2 * m)

    def modulation(x):
        return 4.0**m * np.sin(0.5 * x) ** (2 * m)

    # |sinc(w/2)| <= min(1, 2/|w|) and (1 + |w|) min(1, 2/|w|) <= 3
    env = SpectralEnvelope("polynomial", 3.0**m, float(m))
    return Generator(
        "bspline",
        evaluator,
        env,
        is_orthonormal=(m == 1),
        tail_model=TailModel(float(m), modulation, TWO_PI),
        label=f"bspline{m}",
    )


def gaussian(sigma):
    """Gaussian exp(-x^2 / (2 sigma^2)); |phi_hat|^2 = 2 pi sigma^2 exp(-sigma^2 w^2)."""
    sigma = _positive("gaussian sigma", sigma)
    amp = TWO_PI * sigma * sigma

    def evaluator(omega):
        return amp * np.exp(-((sigma * omega) ** 2))

    # sigma^2 w^2 / 2 - sigma |w| >= -1/2
    env = SpectralEnvelope("super_exponential", math.sqrt(amp) * math.exp(0.5), sigma)
    return Generator("gaussian", evaluator, env, label=f"gaussian({sigma:g})")


def load_tabulated(path, envelope):
    """Read a ``omega,phihat_sq`` CSV and check the declared envelope on the samples."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read tabulated generator file {path}: {exc}") from None
    if rows and rows[0] and rows[0][0].strip().lower() == "omega":
        rows = rows[1:]
    try:
        data = np.array([[float(r[0]), float(r[1])] for r in rows if r], dtype=float)
    except (ValueError, IndexError):
        raise InputError(f"{path}: expected two numeric columns omega,phihat_sq") from None
    if data.shape[0] < 2:
        raise InputError(f"{path}: need at least two samples")
    omega, values = data[:, 0], data[:, 1]
    if not np.all(np.isfinite(data)):
        raise InputError(f"{path}: non-finite samples")
    if np.any(np.diff(omega) <= 0):
        raise InputError(f"{path}: omega column must be strictly increasing")
    if np.any(values < 0):
        raise InputError(f"{path}: phihat_sq must be nonnegative")
    bad = values > envelope.bound_sq(omega) * (1.0 + 1e-12)
    if np.any(bad):
        w = omega[np.argmax(bad)]
        raise InputError(f"{path}: declared envelope does not dominate the sample at omega={w!r}")
    return omega, values


def tabulated(path, envelope):
    """Generator from samples; linear interpolation inside, envelope outside."""
    omega, values = load_tabulated(path, envelope)
    lo, hi = omega[0], omega[-1]

    def evaluator(w):
        inside = np.interp(w, omega, values)
        return np.where((w < lo) | (w > hi), envelope.bound_sq(w), inside)

    return Generator("tabulated", evaluator, envelope, sampled=True, label=f"tabulated({Path(path).name})")


# ---------------------------------------------------------------------------
# Transforms


def _is_multiple(big, small, rtol=1e-12):
    r = big / small
    n = round(r)
    return n >= 1 and abs(r - n) <= rtol * r


def dilate(gen, a):
    """Generator psi(x) = phi(x / a); |psi_hat(w)|^2 = a^2 |phi_hat(a w)|^2."""
    a = _positive("dilation factor a", a)
    if gen.dim != 1:
        raise UnsupportedGeneratorError("dilation is defined for one-dimensional generators")
    if a == 1.0:
        return gen
    a2 = a * a
    inner_eval = gen.evaluator

    def evaluator(omega):
        return a2 * inner_eval(a * omega)

    tail = None
    if gen.tail_model is not None:
        tm = gen.tail_model
        w = tm.modulation
        coef = a ** (2.0 - 2.0 * tm.power)
        tail = TailModel(tm.power, lambda x: coef * w(a * x), tm.period / a)
    return Generator(
        "dilated",
        evaluator,
        gen.envelope.dilate(a),
        tail_model=tail,
        inner=gen,
        factor=a,
        sampled=gen.sampled,
        label=f"dilated({gen.label}, {a:g})",
    )


def orthonormalize(gen, check_grid=1024, threshold=1e-8):
    """Orthonormalized generator |phi_hat|^2 / G_0, with G_0 evaluated lazily.

    Raises DegenerateGeneratorError when G_0 drops below ``threshold`` on a
    uniform grid of ``check_grid`` points over [0, 2 pi).
    """
    if gen.is_orthonormal:
        return gen
    if gen.is_tensor:
        return tensorize([orthonormalize(ax, check_grid, threshold) for ax in gen.axes])
    if gen.dim != 1:
        raise UnsupportedGeneratorError("orthonormalization needs a 1-D or tensor generator")
    from .periodization import periodize

    grid = np.arange(check_grid) * (TWO_PI / check_grid)
    g0 = periodize(gen, 0, grid)[0]
    gmin = float(np.min(g0))
    if not gmin > threshold:
        w = float(grid[np.argmin(g0)])
        raise DegenerateGeneratorError(
            f"Gram function of {gen.label or gen.kind} falls to {gmin:.3g} at omega={w:.6g} "
            f"(threshold {threshold:g}); shifts do not form a Riesz basis"
        )

    inner_eval = gen.evaluator

    def gram(omega):
        return periodize(gen, 0, omega)[0]

    def evaluator(omega):
        return inner_eval(omega) / gram(omega)

    tail = None
    tm = gen.tail_model
    if tm is not None and _is_multiple(TWO_PI, tm.period):
        w = tm.modulation
        tail = TailModel(tm.power, lambda x: w(x) / gram(x), TWO_PI)
    # grid minimum halved as a safety margin for the unsampled dips
    env = gen.envelope.scale(1.0 / math.sqrt(0.5 * gmin))
    return Generator(
        "orthonormalized",
        evaluator,
        env,
        is_orthonormal=True,
        tail_model=tail,
        inner=gen,
        sampled=gen.sampled,
        label=f"orthonormalized({gen.label})",
    )


def tensorize(gens: Sequence[Generator]):
    """Tensor-product generator; the evaluator multiplies per-axis values."""
    gens = tuple(gens)
    if not gens:
        raise InputError("tensorize needs at least one generator")
    if any(g.dim != 1 for g in gens):
        raise InputError("tensorize takes one-dimensional generators only")
    if len(gens) == 1:
        return gens[0]
    evals = [g.evaluator for g in gens]

    def evaluator(omega):
        omega = np.asarray(omega, dtype=float)
        if omega.shape[-1] != len(evals):
            raise InputError(f"expected points with {len(evals)} coordinates, got shape {omega.shape}")
        out = evals[0](omega[..., 0])
        for s in range(1, len(evals)):
            out = out * evals[s](omega[..., s])
        return out

    return Generator(
        "tensor",
        evaluator,
        tuple(g.envelope for g in gens),
        dim=len(gens),
        is_orthonormal=all(g.is_orthonormal for g in gens),
        axes=gens,
        sampled=any(g.sampled for g in gens),
        label="(" + " x ".join(g.label for g in gens) + ")",
    )


def make_generator(spec):
    """Build a Generator from a GeneratorSpec or its JSON dict form."""
    if isinstance(spec, dict):
        spec = GeneratorSpec.from_dict(spec)
    if not isinstance(spec, GeneratorSpec):
        raise InputError(f"expected a GeneratorSpec, got {type(spec).__name__}")
    kind = spec.kind
    if kind == "shannon":
        return shannon()
    if kind == "bspline":
        return bspline(spec.order)
    if kind == "gaussian":
        return gaussian(spec.sigma)
    if kind == "dilated":
        return dilate(make_generator(spec.inner), spec.a)
    if kind == "orthonormalized":
        return orthonormalize(make_generator(spec.inner))
    if kind == "tensor":
        return tensorize([make_generator(ax) for ax in spec.axes])
    return tabulated(spec.file, spec.envelope)

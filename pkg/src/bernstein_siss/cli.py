"""Command-line entry point: ``bernstein-siss <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 divergent series, 4 numerical
non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import bernstein_constant, bernstein_constant_nd, ratio_profile
from .errors import BernsteinError, ConvergenceError, DivergentSeriesError, InputError
from .extremal import sharpness_trace
from .generators import GeneratorSpec, dilate, make_generator
from .periodization import DEFAULT_TAIL_TOL, LatticeSpec
from .siss_functions import FiniteSissFunction, derivative_norm_sq, norm_sq, read_coefficients, verify_inequality

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIVERGENT = 3
EXIT_CONVERGENCE = 4


def fmt_float(x):
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj):
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_float(v) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one invocation."""

    command: str
    generator: str
    k: tuple
    step: float = 1.0
    scaled_a: float = None
    grid: int = 4096
    refine_tol: float = 1e-10
    tail_tol: float = DEFAULT_TAIL_TOL
    trials: int = 1000
    support: int = 8
    seed: int = 42
    orders: tuple = (8, 16, 32, 64, 128, 256, 512, 1024)
    samples: int = 2048
    coeffs: str = None
    fmt: str = "json"
    out: str = None

    def __post_init__(self):
        if any(k < 0 for k in self.k):
            raise InputError("derivative orders must be >= 0")
        LatticeSpec(self.step)
        if self.scaled_a is not None and not self.scaled_a > 0:
            raise InputError("--scaled-a must be positive")
        if self.trials < 0 or self.support < 0 or self.samples < 1:
            raise InputError("--trials and --support must be >= 0 and --samples >= 1")
        if not (self.refine_tol > 0 and self.tail_tol > 0):
            raise InputError("tolerances must be positive")

    @property
    def lattice(self):
        return LatticeSpec(self.step)


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def load_generator_spec(ref):
    """Read a generator spec from a JSON file path or an inline JSON object."""
    text = ref.strip()
    if text.startswith("{"):
        base = Path.cwd()
    else:
        path = Path(ref)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read generator file {ref}: {exc}") from None
        base = path.parent
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"generator spec is not valid JSON: {exc}") from None
    return GeneratorSpec.from_dict(obj, base_dir=base)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bernstein-siss",
        description="Sharp Bernstein constants in shift-invariant subspaces of L2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, multi=False):
        p.add_argument("--generator", required=True, help="generator spec: JSON file or inline JSON object")
        p.add_argument("--k", required=True, type=_int_list,
                       help="derivative order" + (" (comma-separated multi-index)" if multi else ""))
        p.add_argument("--step", type=float, default=1.0, help="lattice step h (default 1)")
        p.add_argument("--scaled-a", dest="scaled_a", type=float, default=None,
                       help="use the space spanned by phi((x - g) / a)")
        p.add_argument("--grid", type=int, default=4096, help="scan grid size for the sup search")
        p.add_argument("--refine-tol", dest="refine_tol", type=float, default=1e-10)
        p.add_argument("--tail-tol", dest="tail_tol", type=float, default=DEFAULT_TAIL_TOL)
        p.add_argument("--out", default=None, help="write results to this file instead of stdout")

    p = sub.add_parser("constant", help="sharp constant for one-dimensional generators")
    common(p)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p = sub.add_parser("constant-nd", help="sharp constant for tensor generators")
    common(p, multi=True)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p = sub.add_parser("verify", help="check the inequality on seeded random functions")
    common(p)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--support", type=int, default=8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    p = sub.add_parser("sharpness", help="Fejer extremal ratios approaching the constant")
    common(p, multi=True)
    p.add_argument("--orders", type=_int_list, default=(8, 16, 32, 64, 128, 256, 512, 1024))
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="csv")

    p = sub.add_parser("profile", help="G_k, G_0 and their ratio over one period")
    common(p)
    p.add_argument("--samples", type=int, default=2048)
    p.add_argument("--format", dest="fmt", choices=("csv",), default="csv")

    p = sub.add_parser("ratio", help="norms and ratio of one function given by a coefficient CSV")
    common(p)
    p.add_argument("--coeffs", required=True, help="CSV with columns gamma,re,im")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    return parser


def _config(ns):
    fields = {name: getattr(ns, name) for name in RunConfig.__dataclass_fields__ if hasattr(ns, name)}
    return RunConfig(**fields)


def _generator(cfg):
    gen = make_generator(load_generator_spec(cfg.generator))
    if cfg.scaled_a is not None:
        gen = dilate(gen, cfg.scaled_a)
    return gen


def _single_k(cfg):
    if len(cfg.k) != 1:
        raise InputError(f"{cfg.command} takes a single derivative order, got {cfg.k}")
    return cfg.k[0]


def _constant_fields(c, cfg):
    return {
        "value": c.value,
        "sqrt_value": c.sqrt_value,
        "argmax": list(c.argmax) if isinstance(c.argmax, tuple) else c.argmax,
        "tail_bound": c.tail_bound,
        "grid_size": c.grid_size,
        "refined": c.refined,
        "lower_estimate": c.lower_estimate,
        "k": list(c.k) if isinstance(c.k, tuple) else c.k,
        "step": cfg.step,
        "scaled_a": cfg.scaled_a,
        "refine_tol": cfg.refine_tol,
        "tail_tol": cfg.tail_tol,
    }


def _emit_record(record, fmt):
    if fmt == "json":
        return dumps(record) + "\n"
    flat = {k: (";".join(fmt_float(x) for x in v) if isinstance(v, list) else v) for k, v in record.items()}
    return _csv(list(flat), [["" if v is None else v for v in flat.values()]])


def _cmd_constant(cfg):
    gen = _generator(cfg)
    c = bernstein_constant(gen, _single_k(cfg), cfg.lattice, cfg.grid, cfg.refine_tol, cfg.tail_tol)
    return _emit_record(_constant_fields(c, cfg), cfg.fmt)


def _cmd_constant_nd(cfg):
    gen = _generator(cfg)
    c = bernstein_constant_nd(gen, cfg.k, cfg.grid, cfg.refine_tol, cfg.tail_tol, cfg.lattice)
    return _emit_record(_constant_fields(c, cfg), cfg.fmt)


def _cmd_verify(cfg):
    gen = _generator(cfg)
    k = _single_k(cfg)
    const = bernstein_constant(gen, k, cfg.lattice, cfg.grid, cfg.refine_tol, cfg.tail_tol)
    rep = verify_inequality(gen, k, cfg.lattice, cfg.trials, cfg.support, cfg.seed, constant=const)
    record = {
        "trials": rep.trials,
        "constant": rep.constant,
        "max_ratio": rep.max_ratio,
        "argmax_seed_index": rep.argmax_seed_index,
        "margin": rep.margin,
        "pass": rep.passed,
        "k": k,
        "support": cfg.support,
        "seed": cfg.seed,
        "step": cfg.step,
        "scaled_a": cfg.scaled_a,
    }
    return _emit_record(record, cfg.fmt)


def _cmd_sharpness(cfg):
    gen = _generator(cfg)
    k = cfg.k[0] if gen.dim == 1 and len(cfg.k) == 1 else cfg.k
    trace = sharpness_trace(gen, k, cfg.lattice, cfg.orders)
    if cfg.fmt == "csv":
        return _csv(["n", "ratio", "gap"], trace.rows())
    record = {
        "constant": trace.constant,
        "center": list(trace.center) if isinstance(trace.center, tuple) else trace.center,
        "orders": list(trace.orders),
        "ratios": list(trace.ratios),
        "gaps": list(trace.gaps),
    }
    return dumps(record) + "\n"


def _cmd_profile(cfg):
    gen = _generator(cfg)
    k = _single_k(cfg)
    period = cfg.lattice.period
    omega = np.arange(cfg.samples) * (period / cfg.samples)
    ratio, _, gk, g0 = ratio_profile(gen, k, omega, cfg.lattice, cfg.tail_tol)
    return _csv(["omega", "G_k", "G_0", "ratio"], zip(omega, gk, g0, ratio))


def _cmd_ratio(cfg):
    gen = _generator(cfg)
    k = _single_k(cfg)
    f = FiniteSissFunction.from_mapping(read_coefficients(cfg.coeffs), gen, cfg.step)
    if f.is_zero():
        raise InputError("the coefficient file describes the zero function")
    nrm = norm_sq(f)
    der = derivative_norm_sq(f, k)
    const = bernstein_constant(gen, k, cfg.lattice, cfg.grid, cfg.refine_tol, cfg.tail_tol)
    record = {
        "norm_sq": nrm,
        "derivative_norm_sq": der,
        "ratio": der / nrm,
        "constant": const.value,
        "k": k,
        "step": cfg.step,
        "scaled_a": cfg.scaled_a,
    }
    return _emit_record(record, cfg.fmt)


COMMANDS = {
    "constant": _cmd_constant,
    "constant-nd": _cmd_constant_nd,
    "verify": _cmd_verify,
    "sharpness": _cmd_sharpness,
    "profile": _cmd_profile,
    "ratio": _cmd_ratio,
}


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the process exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
        text = COMMANDS[cfg.command](cfg)
        if cfg.out:
            Path(cfg.out).write_text(text)
        else:
            stdout.write(text)
        return EXIT_OK
    except DivergentSeriesError as exc:
        print(f"error (divergent series): {exc}", file=stderr)
        return EXIT_DIVERGENT
    except ConvergenceError as exc:
        print(f"error (no convergence): {exc}", file=stderr)
        return EXIT_CONVERGENCE
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except BernsteinError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


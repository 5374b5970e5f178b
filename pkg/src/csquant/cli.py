"""``csquant`` command line: operators, symbols, spectra, studies and figure data.

Subcommands
-----------
quantize   observable -> operator JSON
symbol     operator (file or observable) -> lower symbol CSV on an (r, theta) grid
spectrum   operator (file or observable) -> eigenvalue CSV
study      commutator study over a range of orders -> JSON report
figures    data tables behind figures 1-5 -> CSV files

Exit codes: 0 success, 2 bad arguments or unreadable input, 3 numerical failure.
Output is written atomically (temporary file then rename); without
``--out`` it goes to stdout.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg, spectra
from .distrib import MEASURES, quantize_dirac_combo
from .errors import CSQuantError
from .expr import ExpressionError, angular_observable, general_observable, isotropic_observable, parse_dirac
from .fock import FockOperator
from .quantize import BUILTINS, Builtin, build_angle_operator, cot_fourier_coeffs, quantize, quantize_angular
from .symbols import lower_symbol_grid

__all__ = [
    "FORMAT_VERSION",
    "OperatorFile",
    "write_atomic",
    "parse_orders",
    "parse_grid",
    "build_parser",
    "main",
]

FORMAT_VERSION = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


@dataclass
class OperatorFile:
    """JSON form of a truncated operator; entries are row-major ``[re, im]`` pairs."""

    order: int
    hermitian: bool
    provenance: str
    entries: list[list[float]]
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_operator(cls, op: FockOperator) -> OperatorFile:
        flat = op.matrix.reshape(-1)
        return cls(op.order, bool(op.hermitian), op.provenance, [[float(v.real), float(v.imag)] for v in flat])

    def to_operator(self) -> FockOperator:
        arr = np.asarray(self.entries, dtype=float)
        mat = (arr[:, 0] + 1j * arr[:, 1]).reshape(self.order, self.order)
        return FockOperator(mat, self.hermitian, self.provenance)

    def to_json(self) -> str:
        # repr of a float round-trips exactly, so the file is lossless
        data = {
            "format_version": self.format_version,
            "order": self.order,
            "hermitian": self.hermitian,
            "provenance": self.provenance,
            "entries": self.entries,
        }
        return json.dumps(data, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> OperatorFile:
        try:
            data = json.loads(text)
            version = int(data["format_version"])
            order = int(data["order"])
            entries = data["entries"]
            hermitian = bool(data["hermitian"])
            provenance = str(data.get("provenance", ""))
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"not an operator file: {exc}") from None
        if version != FORMAT_VERSION:
            raise InputError(f"unsupported format_version {version}")
        if len(entries) != order * order or any(len(e) != 2 for e in entries):
            raise InputError("entry count does not match order")
        return cls(order, hermitian, provenance, [[float(a), float(b)] for a, b in entries], version)


def write_atomic(path: str | os.PathLike | None, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename; ``None`` means stdout."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _csv(header: str, columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    for line in header.splitlines():
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def parse_orders(text: str) -> list[int]:
    """``"a:b:step"`` (inclusive of ``b``) or a comma list."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            a, b, step = parts
            if step <= 0 or b < a:
                raise ValueError
            return list(range(a, b + 1, step))
        return [int(p) for p in text.split(",")]
    except ValueError:
        raise InputError(f"bad --orders {text!r}; expected a:b:step") from None


def parse_grid(text: str, default_span: tuple[float, float] | None = None) -> np.ndarray:
    """``"a:b:n"`` gives ``n`` points from ``a`` to ``b`` inclusive.

    A bare ``"n"`` gives ``n`` points on ``[0, 2*pi)`` when ``default_span``
    is None (the angular case) and on ``default_span`` otherwise.
    """
    try:
        parts = text.split(":")
        if len(parts) == 1:
            n = int(parts[0])
            if n < 1:
                raise ValueError
            if default_span is None:
                return 2.0 * math.pi * np.arange(n) / n
            return np.linspace(default_span[0], default_span[1], n)
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise ValueError
        return np.linspace(a, b, n)
    except (ValueError, IndexError):
        raise InputError(f"bad grid {text!r}; expected a:b:n or n") from None


def _add_observable_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("observable (choose one)")
    g.add_argument("--builtin", choices=BUILTINS)
    g.add_argument("--isotropic", metavar="EXPR", help="expression in u = |z|^2")
    g.add_argument("--angular", metavar="EXPR", help="expression in theta")
    g.add_argument("--general", metavar="EXPR", help="expression in z, zbar, r, theta, u, q, p")
    g.add_argument("--dirac", metavar="TERMS", help='Dirac-derivative combination "coef:b,a; ..."')
    p.add_argument("--measure", choices=MEASURES, default="plain")
    p.add_argument("--order", type=int, default=40)
    p.add_argument("--hbar", type=float, default=1.0)


def _operator_from_args(args) -> FockOperator:
    if getattr(args, "operator", None):
        try:
            text = Path(args.operator).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {args.operator}: {exc.strerror}") from None
        return OperatorFile.from_json(text).to_operator()
    chosen = [k for k in ("builtin", "isotropic", "angular", "general", "dirac") if getattr(args, k) is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one of --builtin/--isotropic/--angular/--general/--dirac or an operator file")
    if args.order < 1:
        raise InputError("--order must be positive")
    kind = chosen[0]
    if kind == "builtin":
        return quantize(Builtin(args.builtin, args.hbar), args.order)
    if kind == "isotropic":
        return quantize(isotropic_observable(args.isotropic), args.order)
    if kind == "angular":
        obs = angular_observable(args.angular, args.order - 1)
        return quantize(obs, args.order)
    if kind == "general":
        return quantize(general_observable(args.general), args.order)
    return quantize_dirac_combo(parse_dirac(args.dirac, args.measure), args.order)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_quantize(args) -> int:
    op = _operator_from_args(args)
    write_atomic(args.out, OperatorFile.from_operator(op).to_json())
    return 0


def cmd_symbol(args) -> int:
    op = _operator_from_args(args)
    r = parse_grid(args.r_grid, (0.0, 2.0))
    t = parse_grid(args.theta_grid)
    grid = lower_symbol_grid(op, r, t, hbar=args.hbar)
    write_atomic(args.out, grid.to_csv(f"lower symbol of {op.provenance}; order={op.order}; pad=0; hbar={args.hbar:g}"))
    return 0


def cmd_spectrum(args) -> int:
    op = _operator_from_args(args)
    if op.is_hermitian():
        vals = linalg.hermitian_eigen(op.matrix, vectors=False).eigenvalues.astype(complex)
    else:
        vals = np.linalg.eigvals(op.matrix)
        vals = vals[np.lexsort((vals.imag, vals.real))]
    rows = [(k, float(v.real), float(v.imag)) for k, v in enumerate(vals)]
    header = f"eigenvalues of {op.provenance}; order={op.order}; pad=0"
    write_atomic(args.out, _csv(header, ["index", "real", "imag"], rows))
    return 0


def cmd_study(args) -> int:
    orders = parse_orders(args.orders)
    if args.kind == "time":
        report = spectra.time_commutator_study(orders, pad=args.pad)
    else:
        report = spectra.angle_number_commutator_study(orders)
    write_atomic(args.out, report.to_json() + "\n")
    return 0


def figure_data(which: int, order: int | None = None, pad: int = 4, orders: Sequence[int] | None = None,
                theta_grid: np.ndarray | None = None, r_grid: np.ndarray | None = None) -> dict[str, str]:
    """CSV text for one figure, keyed by file name."""
    out: dict[str, str] = {}
    if which == 1:
        order = order or 100
        t = theta_grid if theta_grid is not None else 2.0 * math.pi * np.arange(360) / 360
        rs = r_grid if r_grid is not None else np.linspace(0.0, 1.0, 21)
        op = build_angle_operator(order)
        head = f"source=angle operator (lower symbol); order={order}; pad=0"
        curves = lower_symbol_grid(op, [0.5, 1.0, 5.0], t)
        out["figure1_curves.csv"] = curves.to_csv(head)
        out["figure1_surface.csv"] = lower_symbol_grid(op, rs, t).to_csv(head)
    elif which == 2:
        order = order or 200
        n = len(theta_grid) if theta_grid is not None else 360
        t = theta_grid if theta_grid is not None else 2.0 * math.pi * (np.arange(n) + 0.5) / n
        op = quantize_angular(cot_fourier_coeffs(order - 1), order, "cot(theta)")
        grid = lower_symbol_grid(op, [2.0, 8.0], t)
        rows = []
        for i, r in enumerate(grid.r_values):
            for j, th in enumerate(grid.theta_values):
                with np.errstate(divide="ignore"):
                    cot = float(np.cos(th) / np.sin(th)) if th % math.pi else math.copysign(math.inf, math.cos(th))
                rows.append((float(r), float(th), cot, float(np.real(grid.values[i, j]))))
        head = f"source=quantized cot(theta) (lower symbol); order={order}; pad=0"
        out["figure2_time_symbol.csv"] = _csv(head, ["r", "theta", "cot", "symbol"], rows)
    elif which in (3, 4):
        order = order or 100
        c = spectra.time_commutator(order, pad).matrix
        head = f"source=[A_t, A_H]; order={order}; pad={pad}"
        if which == 3:
            rows = [(m, n, float(abs(c[m, n]))) for m in range(order) for n in range(order)]
            out["figure3_commutator_abs.csv"] = _csv(head, ["m", "n", "abs"], rows)
        else:
            eig = linalg.hermitian_eigen(1j * c, vectors=False).eigenvalues
            out["figure4_spectrum.csv"] = _csv(
                head + "; eigenvalues of iC", ["index", "eigenvalue"], [(k, float(v)) for k, v in enumerate(eig)]
            )
    elif which == 5:
        orders = list(orders) if orders else list(range(10, 101, 10))
        report = spectra.time_commutator_study(orders, pad=pad, decay_row=None)
        head = f"source=[A_t, A_H] + iI; order={orders[0]}..{orders[-1]}; pad={pad}"
        rows = [(r.order, r.spectral_norm) for r in report.records]
        out["figure5_spectral_norm.csv"] = _csv(head, ["N", "lambda_max"], rows)
    else:
        raise InputError("--which must be 1..5")
    return out


def cmd_figures(args) -> int:
    whichs = [args.which] if args.which else [1, 2, 3, 4, 5]
    theta = parse_grid(args.theta_grid) if args.theta_grid else None
    rgrid = parse_grid(args.r_grid, (0.0, 1.0)) if args.r_grid else None
    orders = parse_orders(args.orders) if args.orders else None
    outdir = Path(args.out or ".")
    for w in whichs:
        for name, text in figure_data(w, args.order, args.pad, orders, theta, rgrid).items():
            write_atomic(outdir / name, text)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csquant", description="Coherent-state quantization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantize", help="quantize an observable to an operator file")
    _add_observable_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_quantize)

    for name, func, helptext in (
        ("symbol", cmd_symbol, "lower symbol on an (r, theta) grid"),
        ("spectrum", cmd_spectrum, "eigenvalues of an operator"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("operator", nargs="?", help="operator JSON file (instead of observable flags)")
        _add_observable_flags(p)
        p.add_argument("--out")
        if name == "symbol":
            p.add_argument("--r-grid", default="0:2:11", help="a:b:n")
            p.add_argument("--theta-grid", default="64", help="n (on [0, 2pi)) or a:b:n")
        p.set_defaults(func=func)

    p = sub.add_parser("study", help="commutator study over orders")
    p.add_argument("--kind", choices=("time", "angle-number"), default="time")
    p.add_argument("--orders", default="20:100:20", help="a:b:step")
    p.add_argument("--pad", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("figures", help="data tables for figures 1-5")
    p.add_argument("--which", type=int, choices=range(1, 6))
    p.add_argument("--order", type=int)
    p.add_argument("--pad", type=int, default=4)
    p.add_argument("--orders", help="orders for figure 5, a:b:step")
    p.add_argument("--r-grid", help="surface radii for figure 1, a:b:n")
    p.add_argument("--theta-grid", help="angular grid, n or a:b:n")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_figures)
    return parser


def _thread_limit():
    value = os.environ.get("CSQ_THREADS")
    if not value:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    try:
        n = int(value)
    except ValueError:
        raise InputError(f"CSQ_THREADS must be an integer, got {value!r}") from None
    return threadpool_limits(limits=max(1, n))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _thread_limit():
            return args.func(args)
    except (InputError, ExpressionError) as exc:
        print(f"csquant: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CSQuantError, ArithmeticError, np.linalg.LinAlgError, ValueError) as exc:
        print(f"csquant: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

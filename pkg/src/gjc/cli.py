"""Command-line surface: list models, compute spectra, run evolutions,
verify the operator algebra, and emit figure-ready CSV/JSON.

Every output file starts with '#'-prefixed header lines carrying a format
version and the full run manifest, so any result can be reproduced from
the file alone.  Floats are written in fixed 17-significant-digit
scientific notation to keep outputs diffable across runs and machines.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass

import numpy as np

from . import analytic, oracle
from .algebra import verify_relations
from .errors import ConfigError, TruncationError
from .model import DEFAULT_N_MAX, load_model, registry, registry_model
from .states import QubitBosonState, coherent_state, fock_state, observables

FORMAT_VERSION = "gjc-csv-1"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY_FAILED = 2
EXIT_TRUNCATION = 3


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to reproduce one command, embedded in each output."""

    mode: str
    model: str | None = None
    config: str | None = None
    n_max: int | None = None
    guard: int | None = None
    threshold: float | None = None
    initial: str | None = None
    t_max: float | None = None
    points: int | None = None
    engine: str | None = None

    def to_json(self) -> str:
        doc = {k: v for k, v in asdict(self).items() if v is not None}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gjc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _header_lines(manifest: RunManifest) -> list:
    return [f"# format: {FORMAT_VERSION}", f"# manifest: {manifest.to_json()}"]


def _resolve_model(args):
    if getattr(args, "config", None):
        return load_model(args.config, n_max=args.n_max), None, args.config
    name = getattr(args, "model", None)
    if not name:
        raise ConfigError("either --model NAME or --config PATH is required")
    return registry_model(name), name, None


def _resolve_nmax(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("GJC_NMAX")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"GJC_NMAX must be an integer, got {env!r}") from None
    return DEFAULT_N_MAX


def parse_initial(descriptor: str, n_max: int) -> QubitBosonState:
    """Build the initial state from 'fock:QUBIT:N' or 'coherent:QUBIT:ALPHA'."""
    parts = descriptor.split(":")
    if len(parts) != 3:
        raise ConfigError(
            f"initial state must be 'fock:QUBIT:N' or 'coherent:QUBIT:ALPHA', got {descriptor!r}"
        )
    kind, qubit, value = parts
    if qubit not in ("g", "e"):
        raise ConfigError(f"qubit level must be 'g' or 'e', got {qubit!r}")
    if kind == "fock":
        try:
            n = int(value)
        except ValueError:
            raise ConfigError(f"Fock index must be an integer, got {value!r}") from None
        try:
            return fock_state(qubit, n, n_max)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if kind == "coherent":
        try:
            alpha = complex(value)
        except ValueError:
            raise ConfigError(f"alpha must be a (complex) number, got {value!r}") from None
        return coherent_state(qubit, alpha, n_max)
    raise ConfigError(f"initial state kind must be 'fock' or 'coherent', got {kind!r}")


def cmd_list(_args) -> int:
    rows = [("name", "fig", "k", "g", "f(n)", "F(n)", "G(n)")]
    for entry in registry():
        s = entry.spec
        rows.append(
            (
                entry.name,
                str(entry.figure),
                str(s.k),
                f"{s.g:g}",
                s.f.describe(),
                s.F.describe(),
                s.G.describe(),
            )
        )
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return EXIT_OK


def cmd_spectrum(args) -> int:
    args.n_max = _resolve_nmax(args.n_max)
    spec, name, config = _resolve_model(args)
    if args.n_max < spec.k:
        raise ConfigError(f"--nmax {args.n_max} must be >= k={spec.k}")
    manifest = RunManifest(
        mode="spectrum", model=name, config=config, n_max=args.n_max
    )
    lines = _header_lines(manifest)
    lines.append("kind,n_lower,N,beta,Omega,E_plus,E_minus")
    for level in analytic.dark_levels(spec):
        n_total = level.n - spec.k / 2.0
        lines.append(
            "dark,%d,%s,%s,%s,%s,%s"
            % (
                level.n,
                _fmt(n_total),
                _fmt(0.0),
                _fmt(0.0),
                _fmt(level.energy),
                _fmt(level.energy),
            )
        )
    for m in analytic.manifolds(spec, args.n_max):
        lines.append(
            "manifold,%d,%s,%s,%s,%s,%s"
            % (
                m.n_lower,
                _fmt(m.n_total),
                _fmt(m.beta),
                _fmt(m.rabi_frequency),
                _fmt(m.e_plus),
                _fmt(m.e_minus),
            )
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_evolve(args) -> int:
    args.n_max = _resolve_nmax(args.n_max)
    spec, name, config = _resolve_model(args)
    if args.n_max < spec.k:
        raise ConfigError(f"--nmax {args.n_max} must be >= k={spec.k}")
    if args.points < 1:
        raise ConfigError(f"--points must be >= 1, got {args.points}")
    manifest = RunManifest(
        mode="evolve",
        model=name,
        config=config,
        n_max=args.n_max,
        initial=args.initial,
        t_max=args.tmax,
        points=args.points,
        engine=args.engine,
    )
    initial = parse_initial(args.initial, args.n_max)
    times = np.linspace(0.0, args.tmax, args.points)

    columns = ["t", "sigma_z", "n_mean", "x_mean", "y_mean"]
    if args.engine in ("analytic", "both"):
        trace = analytic.trace_observables(spec, initial, times)
    if args.engine in ("oracle", "both"):
        h = oracle.assemble(spec, args.n_max)
        states = oracle.propagate(h, initial, times)
        rows = np.array([observables(s) for s in states])
        oracle_trace = analytic.ObservableTrace(
            times=times,
            sigma_z=rows[:, 0],
            n_mean=rows[:, 1],
            x_mean=rows[:, 2],
            y_mean=rows[:, 3],
        )
        if args.engine == "oracle":
            trace = oracle_trace

    data = [trace.times, trace.sigma_z, trace.n_mean, trace.x_mean, trace.y_mean]
    if args.engine == "both":
        columns += ["resid_sigma_z", "resid_n_mean", "resid_x_mean", "resid_y_mean"]
        data += [
            np.abs(trace.sigma_z - oracle_trace.sigma_z),
            np.abs(trace.n_mean - oracle_trace.n_mean),
            np.abs(trace.x_mean - oracle_trace.x_mean),
            np.abs(trace.y_mean - oracle_trace.y_mean),
        ]

    lines = _header_lines(manifest)
    lines.append(",".join(columns))
    for i in range(times.size):
        lines.append(",".join(_fmt(col[i]) for col in data))
    text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    args.n_max = _resolve_nmax(args.n_max)
    spec, name, config = _resolve_model(args)
    guard = args.guard if args.guard is not None else 2 * spec.k
    manifest = RunManifest(
        mode="verify",
        model=name,
        config=config,
        n_max=args.n_max,
        guard=guard,
        threshold=args.threshold,
    )
    residuals = verify_relations(spec, args.n_max, guard)
    worst = max(residuals.values())
    ok = worst <= args.threshold
    width = max(len(k) for k in residuals)
    for relation, residual in residuals.items():
        status = "ok" if residual <= args.threshold else "FAIL"
        print(f"{relation.ljust(width)}  {residual:.3e}  {status}")
    print(
        f"worst residual {worst:.3e} {'<=' if ok else '>'} threshold {args.threshold:g}"
        f" -> {'PASS' if ok else 'FAIL'}"
    )
    if args.out:
        report = {
            "manifest": json.loads(manifest.to_json()),
            "residuals": residuals,
            "threshold": args.threshold,
            "pass": ok,
        }
        _atomic_write(args.out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gjc",
        description="Generalized Jaynes-Cummings models: closed-form dynamics, "
        "operator-algebra verification, and a brute-force cross-check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list the bundled reference models")

    def add_model_args(p):
        p.add_argument("--model", help="name of a bundled model (see 'gjc list')")
        p.add_argument("--config", help="path to a JSON model document")
        p.add_argument(
            "--nmax",
            dest="n_max",
            type=int,
            default=None,
            help=f"Fock-space cutoff (default {DEFAULT_N_MAX}; GJC_NMAX overrides)",
        )

    p_spec = sub.add_parser("spectrum", help="manifold angles, frequencies and eigenvalues")
    add_model_args(p_spec)
    p_spec.add_argument("--out", help="output CSV path (default: stdout)")

    p_evo = sub.add_parser("evolve", help="time evolution of the observables")
    add_model_args(p_evo)
    p_evo.add_argument(
        "--initial",
        default="coherent:g:3.0",
        help="initial state, 'fock:QUBIT:N' or 'coherent:QUBIT:ALPHA' (default coherent:g:3.0)",
    )
    p_evo.add_argument("--tmax", type=float, default=200.0, help="final time in 1/omega0")
    p_evo.add_argument("--points", type=int, default=2001, help="number of grid points")
    p_evo.add_argument(
        "--engine",
        choices=("analytic", "oracle", "both"),
        default="analytic",
        help="'both' appends per-observable residual columns",
    )
    p_evo.add_argument("--out", help="output CSV path (default: stdout)")

    p_ver = sub.add_parser("verify", help="check every operator-algebra relation")
    add_model_args(p_ver)
    p_ver.add_argument(
        "--guard",
        type=int,
        default=None,
        help="top Fock levels excluded from identity checks (default 2k)",
    )
    p_ver.add_argument("--threshold", type=float, default=1e-10)
    p_ver.add_argument("--out", help="optional JSON report path")

    return parser


_HANDLERS = {
    "list": cmd_list,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"truncation error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    return code


if __name__ == "__main__":
    sys.exit(main())

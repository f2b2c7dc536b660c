"""Command-line surface: generate, solve, compose, sweep, benchmark.

Exit codes: 0 success, 2 validation error, 3 not Z-linear, 4 numeric failure.
Failures print a machine-readable {"error": ..., "message": ...} JSON object
to stderr. Formats are documented byte-by-byte in FORMATS.md.
"""
from __future__ import annotations

import json
import math
import os
import sys
import time
from functools import reduce, wraps

import click
import numpy as np

from . import san
from .errors import ValidationError, ZleigError
from .forms import Spectrum
from .mx import SymbolicMatrix, generate_mx
from .posets import Poset
from .solver import solve, solve_batched, verify_by_substitution
from .stochastic import generate_stochastic_mx, parse_dfac

ENV_PRECISION = "ZLEIG_PRECISION_BITS"
ENV_WORKERS = "ZLEIG_WORKERS"


def _fail(exc: Exception, code: int) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    click.echo(json.dumps(payload), err=True)
    sys.exit(code)


def handle_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ZleigError as exc:
            _fail(exc, exc.exit_code)
        except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
            _fail(exc, 2)

    return wrapper


def _read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if path is None or path == "-":
        click.echo(text, nl=False)
    else:
        with open(path, "w") as fh:
            fh.write(text)


@click.group()
def main():
    """Z-linear-eigenvalue matrix toolkit."""


@main.command()
@click.option("--poset", "poset_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default="-", help="Matrix JSON output path ('-' = stdout).")
@click.option("--cap", default=None, type=int, help="Extension enumeration cap.")
@handle_errors
def gen(poset_path, out_path, cap):
    """Generate the symbolic matrix of a poset (Poset JSON -> Matrix JSON)."""
    p = Poset.from_json_dict(_read_json(poset_path))
    mx = generate_mx(p, cap=cap)
    _write_json(out_path, mx.to_json_dict())


@main.command("gen-stochastic")
@click.option("--dfac", required=True, help="Comma-separated Fibonacci factors, e.g. '2,13'.")
@click.option("--out", "out_path", default="-")
@handle_errors
def gen_stochastic(dfac, out_path):
    """Generate a stochastic block matrix from a Fibonacci factorization."""
    f = parse_dfac(int(x) for x in dfac.split(","))
    _write_json(out_path, generate_stochastic_mx(f).to_json_dict())


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default="-")
@click.option("--batches", default=1, type=int, help="Number of symbol batches (1 = unbatched).")
@click.option("--workers", default=None, type=int)
@click.option("--precision-bits", default="auto", help="'auto' or a mantissa bit count.")
@click.option("--coeff-bound", default=None, type=int)
@click.option("--verify", "verify_trials", default=0, type=int, help="Substitution oracle trials.")
@click.option("--seed", default=0, type=int)
@handle_errors
def eig(in_path, out_path, batches, workers, precision_bits, coeff_bound, verify_trials, seed):
    """Solve a Matrix JSON file for its symbolic spectrum (Spectrum JSON)."""
    mx = SymbolicMatrix.from_json_dict(_read_json(in_path))
    bits = None
    if precision_bits != "auto":
        bits = int(precision_bits)
    elif os.environ.get(ENV_PRECISION):
        bits = int(os.environ[ENV_PRECISION])
    if workers is None:
        workers = int(os.environ.get(ENV_WORKERS, "1"))
    if batches > 1:
        spectrum = solve_batched(mx, batches, workers=workers, coeff_bound=coeff_bound)
    else:
        spectrum = solve(mx, coeff_bound=coeff_bound, precision_bits=bits)
    payload = spectrum.to_json_dict()
    if verify_trials > 0:
        report = verify_by_substitution(mx, spectrum, trials=verify_trials, seed=seed)
        payload["verification"] = {
            "trials": report.trials,
            "max_discrepancy": report.max_discrepancy,
        }
    _write_json(out_path, payload)


def _term_matrix(term, dims):
    comps = []
    for h, comp in enumerate(term["components"]):
        comps.append(np.eye(dims[h]) if comp is None else np.asarray(comp, dtype=float))
    return reduce(np.kron, comps)


@main.command("san")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default="-")
@handle_errors
def san_cmd(model_path, out_path):
    """Assemble a SAN model (local/synchronized Kronecker terms) into a generator."""
    model = _read_json(model_path)
    factors = [np.asarray(f, dtype=float) for f in model["factors"]]
    dims = [f.shape[0] for f in factors]
    q0 = sum(_term_matrix(term, dims) for term in model["terms"])
    g = san.make_generator(q0)
    eigs = np.linalg.eigvals(g.q)
    order = np.lexsort((eigs.imag, eigs.real))
    _write_json(
        out_path,
        {
            "n": int(q0.shape[0]),
            "q0": g.q0.tolist(),
            "qd": g.qd.tolist(),
            "q": g.q.tolist(),
            "eigenvalues": [[float(e.real), float(e.imag)] for e in eigs[order]],
        },
    )


_SAFE_FUNCS = {
    name: getattr(math, name)
    for name in ("sin", "cos", "tan", "exp", "log", "sqrt", "pi", "e", "tanh")
}


def _entry_fn(rows):
    compiled = [[compile(str(cell), "<entry>", "eval") for cell in row] for row in rows]

    def fn(t):
        env = dict(_SAFE_FUNCS, t=t)
        return np.array(
            [[float(eval(c, {"__builtins__": {}}, env)) for c in row] for row in compiled]
        )

    return fn


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--csv", "csv_path", required=True)
@click.option("--svg", "svg_path", default=None)
@handle_errors
def sweep(config_path, csv_path, svg_path):
    """Sweep F(t) over a time grid; emit a CSV eigenvalue table and SVG line chart."""
    cfg_raw = _read_json(config_path)
    grid_spec = cfg_raw["grid"]
    grid = tuple(
        float(t)
        for t in np.linspace(grid_spec["start"], grid_spec["stop"], int(grid_spec["num"]))
    )
    fns = [_entry_fn(f) for f in cfg_raw["factors"]]
    dims = tuple(len(f) for f in cfg_raw["factors"])
    cfg = san.SweepConfig(s=float(cfg_raw["s"]), dims=dims, grid=grid)
    rows = san.sweep_F(cfg, fns)
    n = cfg.dimension
    with open(csv_path, "w") as fh:
        fh.write("t," + ",".join(f"lambda{i + 1}" for i in range(n)) + "\n")
        for t, eigs in rows:
            fh.write(f"{t:.12g}," + ",".join(f"{v:.12g}" for v in eigs) + "\n")
    if svg_path:
        _plot_sweep(rows, svg_path)


def _plot_sweep(rows, svg_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ts = [t for t, _ in rows]
    curves = np.array([eigs for _, eigs in rows])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for i in range(curves.shape[1]):
        ax.plot(ts, curves[:, i], lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("eigenvalue")
    ax.set_title("spectrum of F(t)")
    fig.tight_layout()
    fig.savefig(svg_path, format="svg")
    plt.close(fig)


def fit_loglog(sizes, means):
    """Least-squares slope of log(time) against log(n), with R^2."""
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(means, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def run_bench(sizes, reps: int) -> dict:
    rows = []
    for n in sizes:
        mx = generate_stochastic_mx(parse_dfac([n]))
        times = []
        for _ in range(reps):
            t0 = time.perf_counter()
            solve(mx)
            times.append(time.perf_counter() - t0)
        rows.append(
            {"n": n, "mean_s": float(np.mean(times)), "std_s": float(np.std(times)), "reps": reps}
        )
    slope, intercept, r2 = fit_loglog([r["n"] for r in rows], [r["mean_s"] for r in rows])
    return {"table": rows, "fit": {"slope": slope, "intercept": intercept, "r_squared": r2}}


@main.command()
@click.option("--sizes", default="13,21,34,55,89", help="Comma-separated Fibonacci dimensions.")
@click.option("--reps", default=3, type=int)
@click.option("--out", "out_path", default=None)
@handle_errors
def bench(sizes, reps, out_path):
    """Time the solver over a Fibonacci size ladder and fit a log-log scaling slope."""
    size_list = [int(x) for x in sizes.split(",")]
    result = run_bench(size_list, reps)
    click.echo(f"{'n':>6} {'mean (s)':>12} {'std (s)':>12}")
    for row in result["table"]:
        click.echo(f"{row['n']:>6} {row['mean_s']:>12.4f} {row['std_s']:>12.4f}")
    fit = result["fit"]
    click.echo(f"log-log slope {fit['slope']:.3f}  R^2 {fit['r_squared']:.4f}")
    if out_path:
        _write_json(out_path, result)


if __name__ == "__main__":
    main()

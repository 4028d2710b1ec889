"""Command-line interface.

Every command prints a JSON report (``probe`` and ``curvature`` also write
CSV tables). Exit codes: 0 success, 1 input/parse/IO error, 2 a numerical
precondition failed, 3 an integer was rounded from a value too far from an
integer.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
import warnings
from pathlib import Path

import numpy as np

from . import cohomology, configspace, ensemble, invariants, models, numkernel, states
from .configspace import GeneralConfiguration, ParameterGrid
from .errors import InputError, NumericalError, ResidualBreach

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_RESIDUAL = 0, 1, 2, 3

DEFAULTS = {
    "grid": "24x24",
    "tol_gap": numkernel.GAP_TOL,
    "tol_link": invariants.LINK_TOL,
    "residual_tol": invariants.RESIDUAL_TOL,
    "min_link": configspace.MIN_LINK,
    "max_base_step": configspace.MAX_BASE_STEP,
    "general": False,
}


class Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def parse_grid(text):
    try:
        sizes = tuple(int(s) for s in text.lower().split("x"))
    except ValueError:
        raise InputError(f"bad grid {text!r}; expected e.g. 24x24") from None
    return ParameterGrid(sizes)


def parse_int_matrix(text):
    try:
        rows = [[int(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError:
        raise InputError(f"bad matrix {text!r}; expected e.g. '2,1;0,1'") from None
    return np.array(rows, dtype=int)


def _read(path):
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _text(data, path):
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        raise InputError(f"{path} is not UTF-8") from None


class Session:
    """Collects inputs and warnings for one command's report."""

    def __init__(self, args):
        self.args = args
        self.digest = hashlib.sha256()
        self.warnings = []

    def read(self, path):
        data = _read(path)
        self.digest.update(len(data).to_bytes(8, "big"))
        self.digest.update(data)
        return _text(data, path)

    def config(self, path):
        return GeneralConfiguration.from_json(self.read(path))

    def report(self, results, residuals=None):
        return {
            "command": self.args.command,
            "argv": self.args.argv_echo,
            "inputs_digest": self.digest.hexdigest(),
            "results": results,
            "residuals": residuals or {},
            "warnings": self.warnings,
        }


def _write_atomic(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _classify(s, F):
    a = s.args
    adm = configspace.admissibility_check(F, a.min_link, a.max_base_step)
    if not adm.admissible:
        raise Failure(
            EXIT_NUMERICAL,
            f"configuration not admissible: min_link={adm.min_link:.3g} at {adm.worst_link}, "
            f"max_base_step={adm.max_base_step:.3g} at {adm.worst_step}",
        )
    return invariants.classify(F, tol_link=a.tol_link, residual_tol=a.residual_tol)


# -- commands --------------------------------------------------------------------

def cmd_model(s):
    a = s.args
    grid = parse_grid(a.grid)
    name = a.model
    if name == "qwz":
        F, gap = configspace.from_hamiltonian(models.qwz(a.m, grid), grid, a.tol_gap)
        params = {"m": a.m, "min_gap": gap}
    elif name == "hofstadter":
        F, gap = configspace.from_hamiltonian(models.hofstadter(a.p, a.q, grid), grid, a.tol_gap, band=a.band)
        params = {"p": a.p, "q": a.q, "band": a.band, "min_gap": gap}
    elif name == "sphere-wrap":
        F = models.sphere_wrap(a.c, grid)
        params = {"c": a.c}
    elif name == "selfmap":
        fiber = None if a.c is None else models.sphere_wrap(a.c, grid).fiber
        F = models.torus_selfmap(parse_int_matrix(a.matrix), grid, fiber=fiber)
        params = {"matrix": a.matrix, "c": a.c}
    else:
        F = GeneralConfiguration.constant(grid, n=a.n)
        params = {"n": a.n}
    text = F.to_json()
    if a.output:
        _write_atomic(a.output, text + "\n")
    else:
        return None, text
    return s.report({"model": name, "params": params, "sizes": list(grid.sizes), "output": a.output}), None


def cmd_classify(s):
    F = s.config(s.args.config)
    pc = _classify(s, F)
    return s.report({"phase_class": pc.to_dict(), "localizable": configspace.is_localizable(F)},
                    {"integer_rounding": pc.residual}), None


def cmd_compare(s):
    F, G = s.config(s.args.first), s.config(s.args.second)
    if F.d != G.d:
        raise InputError(f"configurations have d={F.d} and d={G.d}")
    pf, pg = _classify(s, F), _classify(s, G)
    return s.report({"same_phase": pf == pg, "first": pf.to_dict(), "second": pg.to_dict()},
                    {"integer_rounding": max(pf.residual, pg.residual)}), None


def cmd_chern(s):
    F = s.config(s.args.config)
    values, res = invariants.chern_vector_with_residual(F, s.args.tol_link)
    if res > s.args.residual_tol:
        raise ResidualBreach(f"rounding residual {res:.3e} exceeds {s.args.residual_tol:g}")
    return s.report({"chern": list(values)}, {"integer_rounding": res}), None


def cmd_degree(s):
    F = s.config(s.args.config)
    M, res = invariants.degree_matrix_with_residual(F)
    if res > s.args.residual_tol:
        raise ResidualBreach(f"rounding residual {res:.3e} exceeds {s.args.residual_tol:g}")
    return s.report({"degree": [[int(x) for x in row] for row in M]}, {"integer_rounding": res}), None


def _cw(s, source):
    if ":" in source and not Path(source).exists():
        s.digest.update(source.encode())
        return cohomology.load_cw(source)
    return cohomology.parse_cw(s.read(source))


def cmd_cohomology(s):
    X = _cw(s, s.args.source)
    G = cohomology.cohomology_group(X, s.args.k)
    return s.report({"degree": s.args.k, "group": G.to_dict(), "cells": list(X.cells)}), None


def cmd_k0(s):
    X = _cw(s, s.args.source)
    G = cohomology.reduced_k0(X)
    return s.report({"reduced_k0": G.to_dict(), "cells": list(X.cells)}), None


def cmd_ensemble(s):
    a = s.args
    F = s.config(a.config)
    mu = ensemble.MeasureOnGrid.from_json(s.read(a.measure))
    obs = ensemble.load_observable(s.read(a.observable), F.grid, F.n)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ensemble.GeneralConfigurationWarning)
        value = ensemble.ensemble_eval(mu, F, obs, general=a.general)
    s.warnings += [str(w.message) for w in caught]
    return s.report({"value": [value.real, value.imag], "localizable": configspace.is_localizable(F)}), None


def _csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(repr(float(x)) if isinstance(x, float) else str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_probe(s):
    a = s.args
    if a.kind == "escape":
        if a.N < 1 or not 1 <= a.rank <= a.N:
            raise InputError("need 1 <= rank <= N")
        block = np.diag(np.arange(a.rank, 0, -1).astype(complex)) * a.scale
        rows = [(n, v.real) for n, v in states.escape_table(a.N, block)]
        table = _csv(["n", "value"], rows)
        summary = {"N": a.N, "rank": a.rank, "nonzero_beyond_rank": any(v != 0 for n, v in rows if n > a.rank)}
    elif a.kind == "unital":
        if a.N < 1:
            raise InputError("need N >= 1")
        rng = np.random.default_rng(seed_from_env())
        rows = []
        for n in range(1, a.N + 1):
            x = rng.normal(size=(a.N, a.N)) + 1j * rng.normal(size=(a.N, a.N))
            v = states.unitalized_eval(states.INFINITY, states.UnitalizedElement(x, a.z))
            rows.append((n, v.real))
        table = _csv(["n", "value"], rows)
        summary = {"z": a.z, "state": "infinity"}
    else:
        if a.steps < 2 or not a.theta0 > 0:
            raise InputError("need steps >= 2 and theta0 > 0")
        angles = a.theta0 * 0.5 ** np.arange(a.steps)
        obs = np.array([[0.25, 1.0], [1.0, -0.5]], dtype=complex)
        rows = states.tau_continuity_table(obs, angles)
        table = _csv(["theta", "abs_delta"], rows)
        diffs = [r[1] for r in rows]
        summary = {"monotone_decreasing": all(x > y for x, y in zip(diffs, diffs[1:]))}
    if a.output:
        _write_atomic(a.output, table)
        return s.report({"probe": a.kind, "summary": summary, "output": a.output}), None
    return None, table


def cmd_curvature(s):
    F = s.config(s.args.config)
    if F.d != 2:
        raise InputError("curvature needs a d=2 configuration")
    flux = invariants.fhs_flux(F.fiber, s.args.tol_link)
    ch, res = invariants.fhs_chern_with_residual(F.fiber, s.args.tol_link)
    ax = F.grid.axes()
    rows = [(ax[0][i], ax[1][j], float(flux[i, j])) for i, j in np.ndindex(*flux.shape)]
    _write_atomic(s.args.out_csv, _csv(["k_x", "k_y", "plaquette_flux"], rows))
    total = math.fsum(flux.ravel())
    return s.report({"chern": ch, "flux_sum": total, "output": s.args.out_csv},
                    {"integer_rounding": res, "flux_sum_minus_2pi_chern": abs(total - 2 * np.pi * ch)}), None


COMMANDS = {
    "model": cmd_model,
    "classify": cmd_classify,
    "compare": cmd_compare,
    "chern": cmd_chern,
    "degree": cmd_degree,
    "cohomology": cmd_cohomology,
    "k0": cmd_k0,
    "ensemble": cmd_ensemble,
    "probe": cmd_probe,
    "curvature": cmd_curvature,
}


def seed_from_env():
    raw = os.environ.get("PHASEATLAS_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"PHASEATLAS_SEED must be an integer, got {raw!r}") from None


def _global_flags(parser, suppress):
    default = (lambda key: argparse.SUPPRESS) if suppress else DEFAULTS.get
    parser.add_argument("--grid", default=default("grid"), help="grid sizes, e.g. 24x24")
    parser.add_argument("--tol-gap", type=float, default=default("tol_gap"))
    parser.add_argument("--tol-link", type=float, default=default("tol_link"))
    parser.add_argument("--residual-tol", type=float, default=default("residual_tol"))
    parser.add_argument("--min-link", type=float, default=default("min_link"))
    parser.add_argument("--max-base-step", type=float, default=default("max_base_step"))
    parser.add_argument("--general", action="store_true", default=default("general"),
                        help="evaluate ensembles of non-localizable configurations")
    parser.add_argument("--print-config", action="store_true", default=default("print_config") or False)


def build_parser():
    parser = argparse.ArgumentParser(prog="phaseatlas", description=__doc__.splitlines()[0], allow_abbrev=False)
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("model", parents=[common], allow_abbrev=False, help="write a model configuration")
    p.add_argument("model", choices=["qwz", "hofstadter", "sphere-wrap", "selfmap", "constant"])
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--band", type=int, default=0)
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--matrix", default="1,0;0,1")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("-o", "--output")

    for name in ("classify", "chern", "degree"):
        p = sub.add_parser(name, parents=[common], allow_abbrev=False)
        p.add_argument("config")
    p = sub.add_parser("compare", parents=[common], allow_abbrev=False)
    p.add_argument("first")
    p.add_argument("second")
    p = sub.add_parser("cohomology", parents=[common], allow_abbrev=False)
    p.add_argument("source", help="CW file, torus:<d> or sphere:<n>")
    p.add_argument("k", type=int)
    p = sub.add_parser("k0", parents=[common], allow_abbrev=False)
    p.add_argument("source")
    p = sub.add_parser("ensemble", parents=[common], allow_abbrev=False)
    p.add_argument("config")
    p.add_argument("measure")
    p.add_argument("observable")
    p = sub.add_parser("probe", parents=[common], allow_abbrev=False)
    p.add_argument("kind", choices=["escape", "unital", "tau-continuity"])
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--z", type=float, default=3.0)
    p.add_argument("--theta0", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("-o", "--output")
    p = sub.add_parser("curvature", parents=[common], allow_abbrev=False)
    p.add_argument("config")
    p.add_argument("out_csv")
    for name in ("classify", "compare", "chern", "degree", "cohomology", "k0", "ensemble", "curvature"):
        sub.choices[name].add_argument("-o", "--output", help="also write the report here")
    return parser


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.print_config:
        stdout.write(_dump(DEFAULTS) + "\n")
        return EXIT_OK
    if args.command is None:
        parser.print_usage(stderr)
        return EXIT_INPUT
    args.argv_echo = argv
    session = Session(args)
    try:
        report, raw = COMMANDS[args.command](session)
    except Failure as exc:
        return _fail(stderr, exc.code, str(exc))
    except ResidualBreach as exc:
        return _fail(stderr, EXIT_RESIDUAL, str(exc))
    except NumericalError as exc:
        return _fail(stderr, EXIT_NUMERICAL, f"{type(exc).__name__}: {exc}")
    except (InputError, OSError) as exc:
        return _fail(stderr, EXIT_INPUT, f"{type(exc).__name__}: {exc}")
    if raw is not None:
        stdout.write(raw if raw.endswith("\n") else raw + "\n")
        return EXIT_OK
    text = _dump(report) + "\n"
    out = getattr(args, "output", None)
    if out and args.command not in ("model", "probe"):
        _write_atomic(out, text)
    stdout.write(text)
    return EXIT_OK


def _fail(stderr, code, message):
    stderr.write(f"error: {message}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

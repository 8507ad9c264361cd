"""Command-line surface: norm/dual/prox on vectors, completion and MTL runs,
prox benchmark, and synthetic trend experiments.

Exit codes: 0 success, 2 usage error, 3 data error, 4 solver divergence.
Every error path prints a single ``error:<kind>: message`` line to stderr.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

import numpy as np

from . import experiments
from .core import BoxParams, KSupportParams, ksupport_norm, theta_dual_norm, theta_norm
from .errors import (
    DataError,
    DivergenceError,
    InvalidInputError,
    InvalidParamsError,
    ThetaNormsError,
    UndefinedMetricError,
)
from .prox import ProxRequest, prox_sq_ksupport, prox_sq_ksupport_baseline, prox_sq_theta
from .spectral import ClusterParams, cluster_norm, spectral_ksupport_norm, spectral_theta_norm

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DIVERGED = 0, 2, 3, 4

# table labels <-> solver regularizer names
NORM_ALIASES = {
    "tr": "trace",
    "en": "elastic-net",
    "ks": "spectral-ksupport",
    "box": "spectral-box",
    "cn": "cluster",
    "c-ks": "centered-ksupport",
    "c-cn": "centered-cluster",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _read_vector(path):
    data = sys.stdin.read() if path in (None, "-") else open(path).read()
    try:
        vec = np.array([float(x) for x in data.split()], dtype=float)
    except ValueError as exc:
        raise DataError(f"could not parse vector: {exc}") from exc
    if vec.size == 0:
        raise DataError("empty input vector")
    return vec


def _read_matrix(path):
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise DataError("empty input matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DataError("ragged matrix rows")
    try:
        return np.array([[float(x) for x in r] for r in rows])
    except ValueError as exc:
        raise DataError(f"could not parse matrix: {exc}") from exc


def _vector_params(args, d):
    if args.ksupport:
        if args.k is None:
            raise _UsageError("--ksupport requires -k")
        return KSupportParams(k=args.k)
    if args.box:
        if None in (args.a, args.b, args.c):
            raise _UsageError("--box requires -a, -b and -c")
        p = BoxParams(a=args.a, b=args.b, c=args.c)
        p.validate_for_dim(d)
        return p
    raise _UsageError("choose --box or --ksupport")


def _emit_value(value, args):
    if args.format == "json":
        print(json.dumps({"value": value}))
    else:
        print(f"{value:.6g}")


def _emit_vector(x, args):
    if args.format == "json":
        print(json.dumps({"x": [float(v) for v in x]}))
    else:
        print(" ".join(f"{v:.6g}" for v in x))


def _cmd_norm(args):
    w = _read_vector(args.input)
    p = _vector_params(args, w.size)
    if isinstance(p, KSupportParams):
        value = ksupport_norm(w, p.k)
    else:
        value, _ = theta_norm(w, p)
    _emit_value(value, args)
    return EXIT_OK


def _cmd_dual(args):
    u = _read_vector(args.input)
    if not args.box:
        raise _UsageError("dual norm requires --box parameters")
    p = BoxParams(a=args.a, b=args.b, c=args.c)
    p.validate_for_dim(u.size)
    _emit_value(theta_dual_norm(u, p), args)
    return EXIT_OK


def _cmd_prox(args):
    w = _read_vector(args.input)
    p = _vector_params(args, w.size)
    req = ProxRequest(w=w, lam=args.lam, params=p)
    if isinstance(p, KSupportParams):
        x = prox_sq_ksupport_baseline(req) if args.baseline else prox_sq_ksupport(req)
    else:
        if args.baseline:
            raise _UsageError("--baseline applies to --ksupport only")
        x = prox_sq_theta(req)
    _emit_vector(x, args)
    return EXIT_OK


def _cmd_spectral_norm(args):
    W = _read_matrix(args.input)
    if args.cluster:
        if None in (args.a, args.b, args.k):
            raise _UsageError("--cluster requires -a, -b and -k")
        value = cluster_norm(W, ClusterParams(a=args.a, b=args.b, k=args.k))
    elif args.ksupport:
        if args.k is None:
            raise _UsageError("--ksupport requires -k")
        value = spectral_ksupport_norm(W, args.k)
    elif args.box:
        if None in (args.a, args.b, args.c):
            raise _UsageError("--box requires -a, -b and -c")
        p = BoxParams(a=args.a, b=args.b, c=args.c)
        value = spectral_theta_norm(W, p)
    else:
        raise _UsageError("choose --box, --ksupport or --cluster")
    _emit_value(value, args)
    return EXIT_OK


def _emit_rows(rows, args, columns=None):
    path = args.output
    if path:
        if args.format == "json":
            experiments.write_results_json(rows, path, columns)
        else:
            experiments.write_results_csv(rows, path, columns)
    else:
        if args.format == "json":
            print(json.dumps(rows, indent=2))
        else:
            cols = columns or experiments._columns_for(rows)
            print(",".join(cols))
            for row in rows:
                print(",".join(experiments._fmt(row.get(c, "")) for c in cols))


def _cmd_bench(args):
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = experiments.bench_prox(sizes, repeats=args.repeats, seed=args.seed)
    _emit_rows(rows, args, ["d", "k", "t_fast", "t_baseline", "max_abs_diff", "ok"])
    return EXIT_OK


def _parse_norm_list(text):
    names = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok in NORM_ALIASES:
            names.append(NORM_ALIASES[tok])
        elif tok in NORM_ALIASES.values():
            names.append(tok)
        else:
            raise _UsageError(f"unknown norm {tok!r}")
    if not names:
        raise _UsageError("empty norm list")
    return names


def _cmd_synth(args):
    kind = "synthetic-block" if args.dataset == "block" else "synthetic-lowrank"
    ds = experiments.DatasetSpec(
        kind=kind,
        size=args.size,
        rank=args.rank,
        blocks=args.blocks,
        noise_sd=args.noise_sd,
        rho=args.rho,
    )
    spec = experiments.ExperimentSpec(
        dataset=ds,
        regularizers=_parse_norm_list(args.norms),
        lambda_grid=[float(x) for x in args.lambda_grid.split(",")],
        k_grid=[int(x) for x in args.k_grid.split(",")],
        a_grid=[float(x) for x in args.a_grid.split(",")],
        repeats=args.repeats,
        seed=args.seed,
        tolerance=args.tolerance,
        max_iterations=args.max_iterations,
        threads=args.threads,
    )
    rows = experiments.grid_search(spec)
    _emit_rows(rows, args, experiments.RESULT_COLUMNS)
    return EXIT_OK


def _floats(text):
    return [float(x) for x in str(text).split(",") if str(x).strip()]


def _ints(text):
    return [int(x) for x in str(text).split(",") if str(x).strip()]


def _config_experiment(path, threads):
    """Build per-regularizer ExperimentSpecs from a sectioned key-value file."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if not cp.read(path):
        raise DataError(f"could not read config file {path}")
    if "data" not in cp:
        raise DataError("config needs a [data] section")
    data = cp["data"]
    kind = data.get("kind", "synthetic-lowrank")
    ds = experiments.DatasetSpec(
        kind=kind,
        size=data.getint("size", 50),
        rank=data.getint("rank", 5),
        blocks=data.getint("blocks", 5),
        noise_sd=data.getfloat("noise_sd", 1.0),
        rho=data.getfloat("rho", 0.2) if data.get("rho") else None,
        per_row=data.getint("per_row", 0) or None,
        path=data.get("path"),
        tasks=data.getint("tasks", 60),
        features=data.getint("features", 14),
        clusters=data.getint("clusters", 3),
        examples_per_task=data.getint("examples_per_task", 8),
    )
    if ds.rho is None and ds.per_row is None and kind not in ("lenk-style",):
        raise DataError("config [data] needs rho or per_row")
    solver = cp["solver"] if "solver" in cp else {}

    def sget(key, default, cast=float):
        if isinstance(solver, dict):
            return default
        raw = solver.get(key)
        return cast(raw) if raw is not None else default

    specs = []
    reg_sections = [s for s in cp.sections() if s in NORM_ALIASES or s in NORM_ALIASES.values()]
    if not reg_sections:
        raise DataError("config needs at least one regularizer section")
    for sec in reg_sections:
        reg = NORM_ALIASES.get(sec, sec)
        body = cp[sec]
        specs.append(
            experiments.ExperimentSpec(
                dataset=ds,
                regularizers=[reg],
                lambda_grid=_floats(body.get("lambda", "1.0")),
                k_grid=_ints(body.get("k", "1")),
                a_grid=_floats(body.get("a", "0.01")),
                repeats=int(sget("repeats", 1, int)),
                seed=int(sget("seed", 0, int)),
                tolerance=sget("tolerance", 1e-5),
                max_iterations=int(sget("max_iterations", 500, int)),
                b=float(body.get("b", "1.0")),
                mu=float(body.get("mu", "1.0")),
                eps_mean=float(body.get("eps_mean", "0.0")),
                threads=threads,
            )
        )
    return specs


def _cmd_complete(args):
    rows = []
    for spec in _config_experiment(args.config, args.threads):
        if spec.dataset.kind == "lenk-style":
            raise DataError("complete expects a completion dataset; use the mtl command")
        rows.extend(experiments.grid_search(spec))
    _emit_rows(rows, args, experiments.RESULT_COLUMNS)
    return EXIT_OK


def _cmd_mtl(args):
    rows = []
    for spec in _config_experiment(args.config, args.threads):
        if spec.dataset.kind != "lenk-style":
            raise DataError("mtl expects a lenk-style dataset section")
        rows.extend(experiments.grid_search(spec))
    _emit_rows(rows, args, experiments.RESULT_COLUMNS)
    return EXIT_OK


def _add_vector_opts(p):
    p.add_argument("--box", action="store_true", help="box norm parameters")
    p.add_argument("--ksupport", action="store_true", help="k-support norm")
    p.add_argument("--cluster", action="store_true", help="cluster norm (spectral only)")
    p.add_argument("-a", type=float, default=None)
    p.add_argument("-b", type=float, default=None)
    p.add_argument("-c", type=float, default=None)
    p.add_argument("-k", type=int, default=None)
    p.add_argument("--input", default=None, help="vector/matrix file (default: stdin)")


def _add_common_opts(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="theta-norms", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("norm", _cmd_norm), ("dual", _cmd_dual), ("prox", _cmd_prox),
                     ("spectral-norm", _cmd_spectral_norm)):
        p = sub.add_parser(name)
        _add_vector_opts(p)
        _add_common_opts(p)
        if name == "prox":
            p.add_argument("--lambda", dest="lam", type=float, required=True)
            p.add_argument("--baseline", action="store_true")
        p.set_defaults(fn=fn)

    p = sub.add_parser("bench")
    p.add_argument("--sizes", default="1000,2000,4000,8000,16000")
    p.add_argument("--repeats", type=int, default=5)
    _add_common_opts(p)
    p.set_defaults(fn=_cmd_bench)

    p = sub.add_parser("synth")
    p.add_argument("--dataset", choices=("lowrank", "block"), default="lowrank")
    p.add_argument("--size", type=int, default=50)
    p.add_argument("--rank", type=int, default=5)
    p.add_argument("--blocks", type=int, default=5)
    p.add_argument("--noise-sd", dest="noise_sd", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=0.2)
    p.add_argument("--norms", default="tr,ks,box")
    p.add_argument("--lambda-grid", dest="lambda_grid", default="0.2,0.5,1,2")
    p.add_argument("--k-grid", dest="k_grid", default="1,2,3,5")
    p.add_argument("--a-grid", dest="a_grid", default="0.001,0.01,0.1")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--max-iterations", dest="max_iterations", type=int, default=500)
    _add_common_opts(p)
    p.set_defaults(fn=_cmd_synth)

    for name, fn in (("complete", _cmd_complete), ("mtl", _cmd_mtl)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        _add_common_opts(p)
        p.set_defaults(fn=fn)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", None) is None:
            args.threads = int(os.environ.get("THETA_NORMS_THREADS", "1"))
        return args.fn(args)
    except _UsageError as exc:
        print(f"error:usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParamsError as exc:
        print(f"error:params: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, InvalidInputError, UndefinedMetricError, OSError) as exc:
        print(f"error:data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DivergenceError as exc:
        print(f"error:solver: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except ThetaNormsError as exc:
        print(f"error:internal: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

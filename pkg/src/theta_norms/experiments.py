"""Data generation, ingestion, masking, metrics, validation grids, benchmarks.

Reproduces the experimental protocol at desk scale: synthetic low-rank and
block-clustered matrices, uniform or per-row observation sampling with a 10%
validation split, relative-error and NMAE metrics, per-seed validation grids
over (lambda, k, a), and the prox timing benchmark.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import KSupportParams
from .errors import (
    DataError,
    DivergenceError,
    InvalidParamsError,
    ParseError,
    UndefinedMetricError,
)
from .observations import TEST, TRAIN, VAL, ObservationSet
from .prox import ProxRequest, prox_sq_ksupport, prox_sq_ksupport_baseline
from .solver import (
    CompletionProblem,
    MultitaskProblem,
    SolverConfig,
    solve,
)
from .spectral import numerical_rank

__all__ = [
    "DatasetSpec",
    "ExperimentSpec",
    "MtlData",
    "gen_lowrank",
    "gen_block",
    "gen_clustered_tasks",
    "sample_mask",
    "load_movielens",
    "load_jester",
    "load_mtl_csv",
    "metric_relative_error",
    "metric_nmae",
    "grid_search",
    "bench_prox",
    "RESULT_COLUMNS",
    "write_results_csv",
    "write_results_json",
]

RESULT_COLUMNS = ["dataset", "norm", "test_error_mean", "test_error_sd", "N", "r", "k", "a", "lambda"]


# ---------------------------------------------------------------------------
# generators


def gen_lowrank(m: int, r: int, noise_sd: float, seed: int) -> np.ndarray:
    """m x m matrix U V^T + noise_sd * E with i.i.d. standard Gaussian factors."""
    if r > m:
        raise InvalidParamsError(f"rank r={r} exceeds size m={m}")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((m, r))
    v = rng.standard_normal((m, r))
    e = rng.standard_normal((m, m))
    return u @ v.T + noise_sd * e


def gen_block(
    m: int,
    blocks: int = 5,
    block_size: int | None = None,
    level_range=(1.0, 10.0),
    noise_sd: float = 0.0,
    seed: int = 0,
) -> np.ndarray:
    """Block-diagonal m x m matrix with constant blocks plus Gaussian noise.

    Each diagonal block is filled with a level drawn uniformly from
    ``level_range``; the default paper-scale configuration is 100 x 100 with
    five 20 x 20 blocks (rank 5 when noiseless).
    """
    if block_size is None:
        block_size = m // blocks
    if blocks * block_size > m:
        raise InvalidParamsError(
            f"{blocks} blocks of size {block_size} do not fit in m={m}"
        )
    rng = np.random.default_rng(seed)
    levels = rng.uniform(level_range[0], level_range[1], size=blocks)
    w = np.zeros((m, m))
    for i, lvl in enumerate(levels):
        lo = i * block_size
        w[lo : lo + block_size, lo : lo + block_size] = lvl
    if noise_sd:
        w = w + noise_sd * rng.standard_normal((m, m))
    return w


@dataclass
class MtlData:
    """Per-task regression data with train/val/test example splits."""

    xs_train: list
    ys_train: list
    xs_val: list
    ys_val: list
    xs_test: list
    ys_test: list
    w_true: np.ndarray  # d x m

    @property
    def n_tasks(self):
        return len(self.xs_train)


def gen_clustered_tasks(
    n_tasks: int,
    n_features: int = 14,
    n_clusters: int = 3,
    n_train: int = 8,
    n_val: int = 4,
    n_test: int = 20,
    noise_sd: float = 0.5,
    mean_scale: float = 3.0,
    cluster_scale: float = 1.0,
    within_scale: float = 0.2,
    seed: int = 0,
) -> MtlData:
    """Clustered multitask regression data (Lenk-shaped, synthetic).

    Task weights share a common mean plus a per-cluster offset plus small
    within-cluster noise; features include a bias column of ones.
    """
    if n_clusters > n_tasks:
        raise InvalidParamsError("more clusters than tasks")
    rng = np.random.default_rng(seed)
    d = n_features
    mean = mean_scale * rng.standard_normal(d)
    offsets = cluster_scale * rng.standard_normal((n_clusters, d))
    assign = rng.integers(0, n_clusters, size=n_tasks)
    w_true = np.empty((d, n_tasks))
    for t in range(n_tasks):
        w_true[:, t] = mean + offsets[assign[t]] + within_scale * rng.standard_normal(d)

    def draw(n):
        x = rng.standard_normal((n, d))
        x[:, 0] = 1.0
        return x

    xs_tr, ys_tr, xs_va, ys_va, xs_te, ys_te = [], [], [], [], [], []
    for t in range(n_tasks):
        for n, xs, ys in ((n_train, xs_tr, ys_tr), (n_val, xs_va, ys_va), (n_test, xs_te, ys_te)):
            x = draw(n)
            ys.append(x @ w_true[:, t] + noise_sd * rng.standard_normal(n))
            xs.append(x)
    return MtlData(xs_tr, ys_tr, xs_va, ys_va, xs_te, ys_te, w_true)


# ---------------------------------------------------------------------------
# masking


def sample_mask(source, mode: str, amount, seed: int) -> ObservationSet:
    """Sample observations for training and tag splits.

    ``mode``: ``"fraction"`` keeps a uniform fraction ``amount`` of the
    available entries, ``"per-row"`` keeps ``amount`` entries per row.  10%
    of the sampled entries are tagged validation; the remaining available
    entries are tagged test.
    """
    if isinstance(source, ObservationSet):
        rows, cols = source.rows, source.cols
        avail_r, avail_c, avail_v = source.row_idx, source.col_idx, source.values
    else:
        dense = np.asarray(source, dtype=float)
        rows, cols = dense.shape
        avail_r, avail_c = np.divmod(np.arange(dense.size), cols)
        avail_v = dense.ravel()
    n_avail = avail_r.size
    rng = np.random.default_rng(seed)

    if mode == "fraction":
        if not 0.0 < amount <= 1.0:
            raise InvalidParamsError(f"fraction must be in (0, 1], got {amount}")
        n_samp = int(round(amount * n_avail))
        picked = rng.choice(n_avail, size=n_samp, replace=False)
    elif mode == "per-row":
        amount = int(amount)
        picked_parts = []
        for i in range(rows):
            idx = np.flatnonzero(avail_r == i)
            if idx.size < amount:
                raise InvalidParamsError(
                    f"row {i} has only {idx.size} available entries, need {amount}"
                )
            picked_parts.append(rng.choice(idx, size=amount, replace=False))
        picked = np.concatenate(picked_parts) if picked_parts else np.array([], dtype=int)
    else:
        raise InvalidParamsError(f"unknown sampling mode {mode!r}")

    split = np.full(n_avail, TEST, dtype=np.int8)
    picked = rng.permutation(picked)
    n_val = int(round(0.1 * picked.size))
    split[picked[:n_val]] = VAL
    split[picked[n_val:]] = TRAIN
    return ObservationSet(
        rows=rows, cols=cols, row_idx=avail_r, col_idx=avail_c, values=avail_v, split=split
    )


# ---------------------------------------------------------------------------
# loaders


def load_movielens(path) -> ObservationSet:
    """Read tab-separated ``user item rating timestamp`` lines (1-based ids)."""
    users, items, ratings = [], [], []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ParseError(f"{path}:{ln}: expected 4 tab-separated fields")
            try:
                u, i, r = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError as exc:
                raise ParseError(f"{path}:{ln}: {exc}") from exc
            if u < 1 or i < 1:
                raise ParseError(f"{path}:{ln}: ids must be >= 1")
            if not 1.0 <= r <= 5.0:
                raise DataError(f"{path}:{ln}: rating {r} outside [1, 5]")
            users.append(u - 1)
            items.append(i - 1)
            ratings.append(r)
    if not users:
        raise DataError(f"{path}: no ratings found")
    return ObservationSet(
        rows=max(users) + 1,
        cols=max(items) + 1,
        row_idx=np.array(users),
        col_idx=np.array(items),
        values=np.array(ratings),
    )


def load_jester(path) -> ObservationSet:
    """Read a dense CSV with 100 rating columns per user; 99 marks missing."""
    users, items, ratings = [], [], []
    n_rows = 0
    with open(path) as fh:
        for ln, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) != 100:
                raise ParseError(f"{path}:{ln}: expected 100 columns, got {len(row)}")
            try:
                vals = [float(x) for x in row]
            except ValueError as exc:
                raise ParseError(f"{path}:{ln}: {exc}") from exc
            for j, v in enumerate(vals):
                if v == 99.0:
                    continue
                if not -10.0 <= v <= 10.0:
                    raise DataError(f"{path}:{ln}: rating {v} outside [-10, 10]")
                users.append(n_rows)
                items.append(j)
                ratings.append(v)
            n_rows += 1
    if n_rows == 0:
        raise DataError(f"{path}: no rows found")
    return ObservationSet(
        rows=n_rows,
        cols=100,
        row_idx=np.array(users, dtype=np.int64),
        col_idx=np.array(items, dtype=np.int64),
        values=np.array(ratings),
    )


def load_mtl_csv(path, n_test_per_task: int = 0) -> MtlData:
    """Read multitask regression rows ``task,target,f1,...,fk``.

    A bias column of ones is prepended.  The last ``n_test_per_task`` examples
    of each task are held out as test, the rest train (no validation split;
    grids re-split if needed).
    """
    per_task: dict[int, list] = {}
    n_feat = None
    with open(path) as fh:
        for ln, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                task = int(row[0])
                vals = [float(x) for x in row[1:]]
            except ValueError as exc:
                raise ParseError(f"{path}:{ln}: {exc}") from exc
            if n_feat is None:
                n_feat = len(vals) - 1
            if len(vals) - 1 != n_feat or n_feat < 1:
                raise ParseError(f"{path}:{ln}: inconsistent feature count")
            per_task.setdefault(task, []).append(vals)
    if not per_task:
        raise DataError(f"{path}: no rows found")
    xs_tr, ys_tr, xs_te, ys_te = [], [], [], []
    for task in sorted(per_task):
        arr = np.asarray(per_task[task])
        y, x = arr[:, 0], arr[:, 1:]
        x = np.hstack([np.ones((x.shape[0], 1)), x])
        cut = arr.shape[0] - n_test_per_task
        if cut < 1:
            raise DataError(f"{path}: task {task} has too few examples")
        xs_tr.append(x[:cut])
        ys_tr.append(y[:cut])
        xs_te.append(x[cut:])
        ys_te.append(y[cut:])
    d = xs_tr[0].shape[1]
    return MtlData(xs_tr, ys_tr, [], [], xs_te, ys_te, np.zeros((d, len(xs_tr))))


# ---------------------------------------------------------------------------
# metrics


def metric_relative_error(truth, prediction, scope=None) -> float:
    """Squared Frobenius ratio ||truth - prediction||^2 / ||truth||^2.

    ``scope``: None for the full matrices, or ``(row_idx, col_idx)`` index
    arrays restricting both operands to those entries.
    """
    truth = np.asarray(truth, dtype=float)
    prediction = np.asarray(prediction, dtype=float)
    if scope is not None:
        ri, ci = scope
        truth = truth[ri, ci]
        prediction = prediction[ri, ci]
    denom = float(np.sum(truth * truth))
    if denom == 0.0:
        raise UndefinedMetricError("relative error undefined for zero-norm truth")
    diff = truth - prediction
    return float(np.sum(diff * diff)) / denom


def metric_nmae(truth_entries, predictions, r_min: float, r_max: float, literal: bool = False) -> float:
    """Normalized mean absolute error: MAE / (r_max - r_min).

    ``literal=True`` switches to the squared-norm variant
    ``||t - p||^2 (r_max - r_min) / n`` as printed in some write-ups; the
    standard definition is the default.
    """
    if r_max <= r_min:
        raise InvalidParamsError("need r_max > r_min")
    t = np.asarray(truth_entries, dtype=float)
    p = np.asarray(predictions, dtype=float)
    if t.size == 0:
        raise UndefinedMetricError("NMAE undefined on an empty set")
    if literal:
        return float(np.sum((t - p) ** 2)) * (r_max - r_min) / t.size
    return float(np.mean(np.abs(t - p))) / (r_max - r_min)


# ---------------------------------------------------------------------------
# experiment specs and grids


@dataclass
class DatasetSpec:
    """Dataset descriptor for grid experiments."""

    kind: str  # synthetic-lowrank | synthetic-block | movielens | jester | lenk-style
    size: int = 50
    rank: int = 5
    blocks: int = 5
    block_size: int | None = None
    level_range: tuple = (1.0, 10.0)
    noise_sd: float = 1.0
    rho: float | None = 0.2
    per_row: int | None = None
    path: str | None = None
    tasks: int = 60
    features: int = 14
    clusters: int = 3
    examples_per_task: int = 8

    _KINDS = ("synthetic-lowrank", "synthetic-block", "movielens", "jester", "lenk-style")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise InvalidParamsError(f"unknown dataset kind {self.kind!r}")


@dataclass
class ExperimentSpec:
    """Regularizer set, hyperparameter grids, repeats, and solver settings."""

    dataset: DatasetSpec
    regularizers: list
    lambda_grid: list
    k_grid: list = field(default_factory=lambda: [2])
    a_grid: list = field(default_factory=lambda: [0.01])
    repeats: int = 1
    seed: int = 0
    tolerance: float = 1e-5
    max_iterations: int = 500
    b: float = 1.0
    mu: float = 1.0
    eps_mean: float = 0.0
    threads: int = 1
    clamp_predictions: bool = False
    nmae_literal: bool = False

    def __post_init__(self):
        if not self.regularizers or not self.lambda_grid or not self.k_grid or not self.a_grid:
            raise InvalidParamsError("grids and regularizer set must be non-empty")
        if self.repeats < 1:
            raise InvalidParamsError("repeats must be >= 1")


def _grid_cells(reg: str, spec: ExperimentSpec):
    if reg in ("trace", "elastic-net"):
        return [{"lam": lam} for lam in spec.lambda_grid]
    if reg in ("spectral-ksupport", "centered-ksupport"):
        return [{"lam": lam, "k": k} for lam in spec.lambda_grid for k in spec.k_grid]
    return [
        {"lam": lam, "k": k, "a": a}
        for lam in spec.lambda_grid
        for k in spec.k_grid
        for a in spec.a_grid
    ]


def _completion_data(ds: DatasetSpec, seed: int):
    """Returns (observation source, clean ground truth or None, name, rating range)."""
    if ds.kind == "synthetic-lowrank":
        noisy = gen_lowrank(ds.size, ds.rank, ds.noise_sd, seed)
        clean = gen_lowrank(ds.size, ds.rank, 0.0, seed)
        return noisy, clean, f"lowrank-r{ds.rank}", None
    if ds.kind == "synthetic-block":
        noisy = gen_block(ds.size, ds.blocks, ds.block_size, ds.level_range, ds.noise_sd, seed)
        clean = gen_block(ds.size, ds.blocks, ds.block_size, ds.level_range, 0.0, seed)
        return noisy, clean, f"block-{ds.blocks}", None
    if ds.kind == "movielens":
        return load_movielens(ds.path), None, "movielens", (1.0, 5.0)
    if ds.kind == "jester":
        return load_jester(ds.path), None, "jester", (-10.0, 10.0)
    raise InvalidParamsError(f"{ds.kind} is not a completion dataset")


def _run_completion_cell(obs, clean, rating_range, reg, cell, spec: ExperimentSpec):
    problem = CompletionProblem(
        observations=obs,
        regularizer=reg,
        lam=cell["lam"],
        k=cell.get("k", 1),
        a=cell.get("a", 0.01),
        b=spec.b,
        mu=spec.mu,
        eps_mean=spec.eps_mean,
    )
    config = SolverConfig(max_iterations=spec.max_iterations, tolerance=spec.tolerance)
    try:
        w_hat, state = solve(problem, config)
    except DivergenceError:
        return {"val": math.inf, "test": math.inf, "n_iter": -1, "rank": -1, "diverged": True}
    if spec.clamp_predictions and rating_range is not None:
        w_hat = np.clip(w_hat, rating_range[0], rating_range[1])

    val = obs.subset(VAL)
    test = obs.subset(TEST)
    if rating_range is None:
        # synthetic: validate against the observed (noisy) values, report the
        # full-matrix relative error against the clean ground truth
        val_err = metric_relative_error(val.values, w_hat[val.row_idx, val.col_idx])
        test_err = metric_relative_error(clean, w_hat)
    else:
        val_err = metric_nmae(
            val.values, w_hat[val.row_idx, val.col_idx], *rating_range, literal=spec.nmae_literal
        )
        test_err = metric_nmae(
            test.values, w_hat[test.row_idx, test.col_idx], *rating_range, literal=spec.nmae_literal
        )
    return {
        "val": val_err,
        "test": test_err,
        "n_iter": state.iterations_run,
        "rank": numerical_rank(w_hat),
        "diverged": False,
    }


def _run_mtl_cell(data: MtlData, reg, cell, spec: ExperimentSpec):
    problem = MultitaskProblem(
        xs=data.xs_train,
        ys=data.ys_train,
        regularizer=reg,
        lam=cell["lam"],
        k=cell.get("k", 1),
        a=cell.get("a", 0.01),
        b=spec.b,
        mu=spec.mu,
        eps_mean=spec.eps_mean,
    )
    config = SolverConfig(max_iterations=spec.max_iterations, tolerance=spec.tolerance)
    try:
        w_hat, state = solve(problem, config)
    except DivergenceError:
        return {"val": math.inf, "test": math.inf, "n_iter": -1, "rank": -1, "diverged": True}

    def task_rmse(xs, ys):
        errs = [
            math.sqrt(float(np.mean((x @ w_hat[:, t] - y) ** 2)))
            for t, (x, y) in enumerate(zip(xs, ys))
        ]
        return float(np.mean(errs))

    return {
        "val": task_rmse(data.xs_val, data.ys_val),
        "test": task_rmse(data.xs_test, data.ys_test),
        "n_iter": state.iterations_run,
        "rank": numerical_rank(w_hat),
        "diverged": False,
    }


def grid_search(spec: ExperimentSpec):
    """Per-seed validation selection of (lambda, k, a) for each regularizer.

    For every repeat a fresh dataset/mask is drawn; each regularizer picks the
    grid cell minimizing validation error and contributes its test error,
    iteration count, rank, and chosen hyperparameters.  Rows follow
    :data:`RESULT_COLUMNS`.  Cells that diverge are skipped, not fatal.
    """
    ds = spec.dataset
    jobs = []  # (rep, reg, cell_idx) -> callable
    contexts = {}
    for rep in range(spec.repeats):
        seed = spec.seed + rep
        if ds.kind == "lenk-style":
            data = gen_clustered_tasks(
                n_tasks=ds.tasks,
                n_features=ds.features,
                n_clusters=ds.clusters,
                n_train=ds.examples_per_task,
                noise_sd=ds.noise_sd,
                seed=seed,
            )
            contexts[rep] = ("mtl", data, None, f"lenk-style-{ds.tasks}", None)
        else:
            source, clean, name, rating_range = _completion_data(ds, seed)
            mode = "per-row" if ds.per_row else "fraction"
            amount = ds.per_row if ds.per_row else ds.rho
            obs = sample_mask(source, mode, amount, seed=seed + 7919)
            contexts[rep] = ("completion", obs, clean, name, rating_range)

    for rep in range(spec.repeats):
        for reg in spec.regularizers:
            for ci, cell in enumerate(_grid_cells(reg, spec)):
                jobs.append((rep, reg, ci, cell))

    def run_job(job):
        rep, reg, ci, cell = job
        kind, first, second, name, rating_range = contexts[rep]
        if kind == "mtl":
            return _run_mtl_cell(first, reg, cell, spec)
        return _run_completion_cell(first, second, rating_range, reg, cell, spec)

    if spec.threads > 1:
        with ThreadPoolExecutor(max_workers=spec.threads) as pool:
            outcomes = list(pool.map(run_job, jobs))
    else:
        outcomes = [run_job(job) for job in jobs]
    by_key = {(rep, reg, ci): out for (rep, reg, ci, _), out in zip(jobs, outcomes)}

    rows = []
    for reg in spec.regularizers:
        cells = _grid_cells(reg, spec)
        per_rep = []
        for rep in range(spec.repeats):
            results = [(by_key[(rep, reg, ci)], cell) for ci, cell in enumerate(cells)]
            best, best_cell = min(results, key=lambda rc: rc[0]["val"])
            per_rep.append((best, best_cell))
        tests = np.array([b["test"] for b, _ in per_rep])
        rows.append(
            {
                "dataset": contexts[0][3],
                "norm": reg,
                "test_error_mean": float(tests.mean()),
                "test_error_sd": float(tests.std(ddof=1)) if len(tests) > 1 else 0.0,
                "N": float(np.mean([b["n_iter"] for b, _ in per_rep])),
                "r": float(np.mean([b["rank"] for b, _ in per_rep])),
                "k": _mean_or_none([c.get("k") for _, c in per_rep]),
                "a": _mean_or_none([c.get("a") for _, c in per_rep]),
                "lambda": float(np.mean([c["lam"] for _, c in per_rep])),
            }
        )
    return rows


def _mean_or_none(vals):
    vals = [v for v in vals if v is not None]
    return float(np.mean(vals)) if vals else None


def per_seed_test_errors(spec: ExperimentSpec):
    """Validation-selected test error per (regularizer, seed); used for trend checks."""
    out = {reg: [] for reg in spec.regularizers}
    for rep in range(spec.repeats):
        sub = replace(spec, repeats=1, seed=spec.seed + rep)
        for row in grid_search(sub):
            out[row["norm"]].append(row["test_error_mean"])
    return out


# ---------------------------------------------------------------------------
# prox benchmark


def bench_prox(
    sizes,
    k_rule=None,
    repeats: int = 5,
    lam: float = 1.0,
    seed: int = 0,
    baseline_repeats: int | None = None,
):
    """Median prox wall time for the fast and baseline k-support algorithms.

    ``k_rule`` maps d to k (default d/100, at least 1).  Outputs of the two
    algorithms are compared entrywise at every size.  The baseline gets
    markedly slower at large d, so its repeat count can be set separately.
    """
    if list(sizes) != sorted(sizes):
        raise InvalidParamsError("sizes must be ascending")
    if k_rule is None:
        k_rule = lambda d: max(1, d // 100)
    if baseline_repeats is None:
        baseline_repeats = repeats
    rng = np.random.default_rng(seed)
    reqs, diffs, batches = [], [], []
    for d in sizes:
        k = int(k_rule(d))
        req = ProxRequest(w=rng.standard_normal(d), lam=lam, params=KSupportParams(k=k))
        t0 = time.perf_counter()
        x_fast = prox_sq_ksupport(req)  # warmup; rough per-call estimate
        rough = time.perf_counter() - t0
        diffs.append(float(np.max(np.abs(x_fast - prox_sq_ksupport_baseline(req)))))
        # batch sub-10ms calls per measurement so timer noise stays small
        batches.append(max(1, int(math.ceil(0.008 / max(rough, 1e-6)))))
        reqs.append((d, k, req))
    # interleave timing rounds across sizes so transient machine load cannot
    # skew one size's median relative to the others
    t_fast = {d: [] for d in sizes}
    t_base = {d: [] for d in sizes}
    for _ in range(repeats):
        for (d, _, req), batch in zip(reqs, batches):
            t0 = time.perf_counter()
            for _ in range(batch):
                prox_sq_ksupport(req)
            t_fast[d].append((time.perf_counter() - t0) / batch)
    for _ in range(baseline_repeats):
        for d, _, req in reqs:
            t0 = time.perf_counter()
            prox_sq_ksupport_baseline(req)
            t_base[d].append(time.perf_counter() - t0)
    return [
        {
            "d": d,
            "k": k,
            "t_fast": float(np.median(t_fast[d])),
            "t_baseline": float(np.median(t_base[d])),
            "max_abs_diff": diff,
            "ok": diff <= 1e-10,
        }
        for (d, k, _), diff in zip(reqs, diffs)
    ]


# ---------------------------------------------------------------------------
# result emission


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        return f"{v:.6g}"
    return str(v)


def write_results_csv(rows, path, columns=None) -> None:
    columns = columns or _columns_for(rows)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in columns])


def write_results_json(rows, path, columns=None) -> None:
    columns = columns or _columns_for(rows)
    ordered = [{c: row.get(c) for c in columns} for row in rows]
    with open(path, "w") as fh:
        json.dump(ordered, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _columns_for(rows):
    if rows and "t_fast" in rows[0]:
        return ["d", "k", "t_fast", "t_baseline", "max_abs_diff", "ok"]
    return RESULT_COLUMNS

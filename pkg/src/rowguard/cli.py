"""Command-line harness.

Subcommands:

* ``synth``  write a synthetic dataset (A.csv + mask.csv)
* ``run``    one pipeline run on generated or user-supplied data (result.csv)
* ``grid``   parameter sweep with per-trial rows and per-condition aggregates
* ``bench``  runtime scaling over a list of row counts, with log-log slope

All outputs are CSV.  Given identical flags and seed, outputs are
byte-identical except for runtime columns.  The environment variable
ROWGUARD_THREADS caps grid worker parallelism (default: machine cores).
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .detect import AllRowsDiscardedError
from .metrics import inlier_relative_error, precision_recall, subspace_error
from .pipeline import PipelineConfig, run_pipeline
from .rsvd import RsvdConfig, best_rank_k_oracle, reconstruct
from .sketch import Distribution, SketchSpec
from .synth import SynthParams, generate

RESULT_HEADER = (
    "alpha,outlier_scale,c,epsilon,seed,s,projection_bypassed,"
    "precision,recall,rel_error,subspace_angle_deg,n_retained,runtime_ms"
)

AGG_METRICS = ("precision", "recall", "rel_error", "subspace_angle_deg", "n_retained", "runtime_ms")


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


@dataclass
class ExperimentGrid:
    """Sweep axes for cmd_grid; one run per (alpha, scale, c, epsilon, trial)."""

    alphas: list = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4])
    scales: list = field(default_factory=lambda: [5.0, 10.0])
    cs: list = field(default_factory=lambda: [2.5, 3.0, 3.5])
    epsilons: list = field(default_factory=lambda: [0.05, 0.1, 0.15])
    trials: int = 10

    def __post_init__(self):
        for name in ("alphas", "scales", "cs", "epsilons"):
            if not getattr(self, name):
                raise CliError(f"grid axis {name} must be nonempty")
        if self.trials < 1:
            raise CliError("trials must be at least 1")

    def cells(self):
        return [
            (alpha, scale, c, epsilon, trial)
            for alpha in self.alphas
            for scale in self.scales
            for c in self.cs
            for epsilon in self.epsilons
            for trial in range(self.trials)
        ]


def _fmt(value) -> str:
    """Stable CSV field: shortest round-trip decimal; '' for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_matrix_csv(path: Path, M: np.ndarray):
    with open(path, "w") as fh:
        for row in M:
            fh.write(",".join(repr(float(x)) for x in row))
            fh.write("\n")


def _write_mask_csv(path: Path, mask: np.ndarray):
    with open(path, "w") as fh:
        for flag in mask:
            fh.write(f"{int(flag)}\n")


def _read_matrix_csv(path: str) -> np.ndarray:
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise CliError(
                    f"{path}: line {lineno}: expected {width} fields, got {len(fields)}"
                )
            try:
                rows.append([float(f) for f in fields])
            except ValueError:
                raise CliError(f"{path}: line {lineno}: non-numeric field") from None
    if not rows:
        raise CliError(f"{path}: empty matrix file")
    return np.array(rows, dtype=np.float64)


def _read_mask_csv(path: str, m: int) -> np.ndarray:
    flags = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line not in ("0", "1"):
                raise CliError(f"{path}: line {lineno}: mask entries must be 0 or 1")
            flags.append(line == "1")
    if len(flags) != m:
        raise CliError(f"{path}: mask has {len(flags)} rows, matrix has {m}")
    return np.array(flags, dtype=bool)


def _sketch_spec(args, alpha: float, seed: int) -> SketchSpec:
    return SketchSpec(
        epsilon=args.epsilon,
        delta_prime=args.delta_prime,
        alpha=alpha,
        distribution=Distribution(args.sketch),
        dim_constant=args.dim_constant,
        sparse_density=args.sparse_density,
        seed=seed,
    )


def _single_run(A, cfg: PipelineConfig, k: int, B=None, mask=None, baseline: str | None = None):
    """Run once; returns (row fields, pipeline result or None, approximation)."""
    row = {
        "s": None,
        "projection_bypassed": None,
        "precision": None,
        "recall": None,
        "rel_error": None,
        "subspace_angle_deg": None,
    }
    if baseline == "pca":
        start = time.perf_counter()
        approx = best_rank_k_oracle(A, k)
        B_tilde = reconstruct(approx)
        row["runtime_ms"] = (time.perf_counter() - start) * 1000.0
        row["n_retained"] = A.shape[0]
        discarded = np.array([], dtype=np.int64)
        result = None
    else:
        result = run_pipeline(A, cfg)
        B_tilde = result.B_tilde
        row["runtime_ms"] = result.wall_time_ms
        row["n_retained"] = int(result.detection.retained.size)
        row["s"] = result.sketch_width
        row["projection_bypassed"] = result.projection_bypassed
        discarded = result.detection.discarded

    if mask is not None:
        prec, rec = precision_recall(mask, discarded)
        row["precision"] = prec
        row["recall"] = rec
    if B is not None and mask is not None:
        clean = ~np.asarray(mask, dtype=bool)
        row["rel_error"] = inlier_relative_error(B, B_tilde, mask)
        try:
            row["subspace_angle_deg"] = subspace_error(B[clean], B_tilde[clean], k)
        except ValueError:
            row["subspace_angle_deg"] = None
    return row, result, B_tilde


def _result_line(alpha, outlier_scale, c, epsilon, seed, row) -> str:
    fields = [
        _fmt(alpha),
        _fmt(outlier_scale),
        _fmt(c),
        _fmt(epsilon),
        _fmt(seed),
        _fmt(row.get("s")),
        _fmt(row.get("projection_bypassed")),
        _fmt(row.get("precision")),
        _fmt(row.get("recall")),
        _fmt(row.get("rel_error")),
        _fmt(row.get("subspace_angle_deg")),
        _fmt(row.get("n_retained")),
        _fmt(row.get("runtime_ms")),
    ]
    return ",".join(fields)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_synth(args):
    params = SynthParams(
        m=args.m, n=args.n, k=args.k, alpha=args.alpha,
        outlier_scale=args.outlier_scale, delta=args.delta, seed=args.seed,
    )
    ds = generate(params)
    out = _out_dir(args)
    _write_matrix_csv(out / "A.csv", ds.A)
    _write_mask_csv(out / "mask.csv", ds.outlier_mask)
    print(f"wrote {out / 'A.csv'} ({args.m}x{args.n}) and {out / 'mask.csv'}")


def cmd_run(args):
    if args.input:
        A = _read_matrix_csv(args.input)
        mask = _read_mask_csv(args.mask, A.shape[0]) if args.mask else None
        B = None
        outlier_scale = None
        alpha_field = args.alpha
    else:
        params = SynthParams(
            m=args.m, n=args.n, k=args.k, alpha=args.alpha,
            outlier_scale=args.outlier_scale, delta=args.delta, seed=args.seed,
        )
        ds = generate(params)
        A, B, mask = ds.A, ds.B, ds.outlier_mask
        outlier_scale = args.outlier_scale
        alpha_field = args.alpha

    if args.dump_norms and args.baseline:
        raise CliError("--dump-norms requires the screening pipeline, not --baseline")

    cfg = PipelineConfig(
        sketch=_sketch_spec(args, args.alpha, args.seed),
        rsvd=RsvdConfig(k=args.k, p=args.oversampling, seed=args.seed),
        threshold_c=args.threshold_c,
    )
    row, result, B_tilde = _single_run(A, cfg, args.k, B=B, mask=mask, baseline=args.baseline)

    out = _out_dir(args)
    line = _result_line(alpha_field, outlier_scale, args.threshold_c, args.epsilon, args.seed, row)
    with open(out / "result.csv", "w") as fh:
        fh.write(RESULT_HEADER + "\n")
        fh.write(line + "\n")
    print(RESULT_HEADER)
    print(line)

    if args.save_btilde:
        _write_matrix_csv(out / "B_tilde.csv", B_tilde)
    if args.dump_norms and result is not None:
        retained = set(result.detection.retained.tolist())
        with open(args.dump_norms, "w") as fh:
            fh.write("row_index,row_norm,retained\n")
            for i, rn in enumerate(result.detection.row_norms):
                fh.write(f"{i},{repr(float(rn))},{1 if i in retained else 0}\n")


def _grid_cell(args, alpha, scale, c, epsilon, trial):
    seed = args.seed + trial
    params = SynthParams(
        m=args.m, n=args.n, k=args.k, alpha=alpha,
        outlier_scale=scale, delta=args.delta, seed=seed,
    )
    ds = generate(params)
    spec = SketchSpec(
        epsilon=epsilon,
        delta_prime=args.delta_prime,
        alpha=alpha,
        distribution=Distribution(args.sketch),
        dim_constant=args.dim_constant,
        sparse_density=args.sparse_density,
        seed=seed,
    )
    cfg = PipelineConfig(
        sketch=spec,
        rsvd=RsvdConfig(k=args.k, p=args.oversampling, seed=seed),
        threshold_c=c,
    )
    row, _, _ = _single_run(ds.A, cfg, args.k, B=ds.B, mask=ds.outlier_mask)
    return _result_line(alpha, scale, c, epsilon, seed, row), row


def cmd_grid(args):
    grid = ExperimentGrid(alphas=args.alphas, scales=args.scales, cs=args.cs,
                          epsilons=args.epsilons, trials=args.trials)
    cells = grid.cells()
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda cell: _grid_cell(args, *cell), cells))
    else:
        outcomes = [_grid_cell(args, *cell) for cell in cells]

    out = _out_dir(args)
    with open(out / "result.csv", "w") as fh:
        fh.write(RESULT_HEADER + "\n")
        for line, _ in outcomes:
            fh.write(line + "\n")

    agg_header = ["alpha", "outlier_scale", "c", "epsilon", "trials"]
    for name in AGG_METRICS:
        agg_header += [f"{name}_mean", f"{name}_std"]
    with open(out / "result_agg.csv", "w") as fh:
        fh.write(",".join(agg_header) + "\n")
        idx = 0
        for alpha in grid.alphas:
            for scale in grid.scales:
                for c in grid.cs:
                    for epsilon in grid.epsilons:
                        rows = [outcomes[idx + t][1] for t in range(grid.trials)]
                        idx += grid.trials
                        fields = [_fmt(alpha), _fmt(scale), _fmt(c), _fmt(epsilon), str(grid.trials)]
                        for name in AGG_METRICS:
                            vals = [r[name] for r in rows if r[name] is not None]
                            if vals:
                                arr = np.asarray(vals, dtype=np.float64)
                                fields += [_fmt(arr.mean()), _fmt(arr.std())]
                            else:
                                fields += ["", ""]
                        fh.write(",".join(fields) + "\n")
    print(f"wrote {out / 'result.csv'} ({len(cells)} rows) and {out / 'result_agg.csv'}")


def cmd_bench(args):
    ms = args.m
    if any(b <= a for a, b in zip(ms, ms[1:])):
        raise CliError("bench row counts must be strictly ascending")
    reps = max(args.reps, 3)
    medians = []
    for m in ms:
        params = SynthParams(
            m=m, n=args.n, k=args.k, alpha=args.alpha,
            outlier_scale=args.outlier_scale, delta=args.delta, seed=args.seed,
        )
        ds = generate(params)
        cfg = PipelineConfig(
            sketch=_sketch_spec(args, args.alpha, args.seed),
            rsvd=RsvdConfig(k=args.k, p=args.oversampling, seed=args.seed),
            threshold_c=args.threshold_c,
        )
        times = [run_pipeline(ds.A, cfg).wall_time_ms for _ in range(reps)]
        medians.append(float(np.median(times)))
        print(f"m={m}: median {medians[-1]:.2f} ms over {reps} runs")

    out = _out_dir(args)
    with open(out / "bench.csv", "w") as fh:
        fh.write("m,runtime_ms_median\n")
        for m, med in zip(ms, medians):
            fh.write(f"{m},{repr(med)}\n")

    slope = ""
    if len(ms) >= 2:
        x = np.log(np.asarray(ms, dtype=np.float64))
        y = np.log(np.asarray(medians, dtype=np.float64))
        xc = x - x.mean()
        slope = repr(float(np.sum(xc * (y - y.mean())) / np.sum(xc * xc)))
    print(f"log-log slope: {slope}")


def _worker_count() -> int:
    env = os.environ.get("ROWGUARD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"ROWGUARD_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _add_common_data_flags(p: argparse.ArgumentParser):
    p.add_argument("--m", type=int, default=1000, help="number of rows")
    p.add_argument("--n", type=int, default=500, help="number of columns")
    p.add_argument("--k", type=int, default=10, help="target rank")
    p.add_argument("--alpha", type=float, default=0.1, help="adversarial row fraction")
    p.add_argument("--outlier-scale", type=float, default=10.0, help="outlier norm gap scale")
    p.add_argument("--delta", type=float, default=0.1, help="inlier row-noise bound")
    p.add_argument("--seed", type=int, default=42, help="base 64-bit seed")
    p.add_argument("--out", default=".", help="output directory")


def _add_pipeline_flags(p: argparse.ArgumentParser):
    p.add_argument("--epsilon", type=float, default=0.1, help="projection distortion bound")
    p.add_argument("--delta-prime", type=float, default=0.05, help="projection failure probability")
    p.add_argument("--threshold-c", type=float, default=3.0, help="threshold constant")
    p.add_argument("--oversampling", type=int, default=10, help="rank oversampling")
    p.add_argument("--sketch", choices=["gaussian", "sparse"], default="gaussian",
                   help="projection entry distribution")
    p.add_argument("--dim-constant", type=float, default=8.0,
                   help="leading constant of the projection dimension formula")
    p.add_argument("--sparse-density", type=float, default=1.0 / 3.0,
                   help="nonzero probability of the sparse projection")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rowguard",
        description="Robust randomized low-rank approximation with row-wise outlier screening.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    _add_common_data_flags(p_synth)
    p_synth.set_defaults(func=cmd_synth)

    p_run = sub.add_parser("run", help="run the pipeline once")
    _add_common_data_flags(p_run)
    _add_pipeline_flags(p_run)
    p_run.add_argument("--input", help="read the data matrix from this CSV instead of generating")
    p_run.add_argument("--mask", help="ground-truth outlier mask CSV (with --input)")
    p_run.add_argument("--baseline", choices=["pca"],
                       help="skip screening and use a plain rank-k truncation")
    p_run.add_argument("--dump-norms", help="write per-row sketch norms to this CSV")
    p_run.add_argument("--save-btilde", action="store_true", help="also write B_tilde.csv")
    p_run.set_defaults(func=cmd_run)

    p_grid = sub.add_parser("grid", help="parameter sweep")
    _add_common_data_flags(p_grid)
    _add_pipeline_flags(p_grid)
    p_grid.add_argument("--alphas", type=float, nargs="+", default=[0.1, 0.2, 0.3, 0.4])
    p_grid.add_argument("--scales", type=float, nargs="+", default=[5.0, 10.0])
    p_grid.add_argument("--cs", type=float, nargs="+", default=[2.5, 3.0, 3.5])
    p_grid.add_argument("--epsilons", type=float, nargs="+", default=[0.05, 0.1, 0.15])
    p_grid.add_argument("--trials", type=int, default=10)
    p_grid.set_defaults(func=cmd_grid)

    p_bench = sub.add_parser("bench", help="runtime scaling over row counts")
    _add_common_data_flags(p_bench)
    _add_pipeline_flags(p_bench)
    p_bench.add_argument("--reps", type=int, default=3, help="repetitions per row count (min 3)")
    p_bench.set_defaults(func=cmd_bench)
    # bench interprets --m as a list
    for action in p_bench._actions:
        if action.dest == "m":
            action.nargs = "+"
            action.default = [1000, 2000, 4000]
            action.help = "ascending list of row counts"
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except AllRowsDiscardedError as exc:
        print(f"pipeline failure: {exc}", file=sys.stderr)
        return 1
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

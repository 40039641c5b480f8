"""Command-line interface: ``frugalml ingest | analyze | bench``.

Exit codes: 0 success, 1 partial failure (a dataset or analysis stage failed),
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import os
import re
import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .errors import FrugalError
from .evaldata import (
    EvalMatrix,
    ImputationConfig,
    build_matrix,
    fetch_remote_records,
    format_eval_csv,
    format_pruning_report,
    impute_matrix,
    parse_eval_csv,
    prune_algorithms,
)
from .frugality import (
    ResourceKind,
    format_curves_csv,
    mean_curves,
    pairwise_crossings,
    rank_algorithms,
    score_matrix,
    w_sweep,
)
from .learners import LEARNERS, cross_validation, extract_meta_features, holdout, load_dataset_csv, metered_evaluate
from .learners.meta import format_meta_csv, parse_meta_csv
from .metaspace import (
    PointSet,
    choose_k_silhouette,
    hierarchical_cluster,
    hopkins,
    kmeans,
    pam_medoids,
    pca_project,
    select_representatives,
    standardize,
    summarize_clusters,
    svd_latent,
)
from .pareto import averaged_points, column_order, format_fronts_csv, pareto_front, per_dataset_fronts
from .report import HeatmapSpec, PlotSpec, emit_curves, emit_heatmap, emit_pareto, format_heatmap_csv

log = logging.getLogger("frugalml")

OUTPUT_ENV = "FRUGALML_OUTPUT_DIR"
MANIFEST_SCHEMA = "frugalml-manifest/1"
EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad arguments or unreadable/unwritable paths (exit 2)."""


class StageError(Exception):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage


# --------------------------------------------------------------------------- output bundle


class Bundle:
    """Writes files under one directory and records them for the manifest."""

    def __init__(self, root: Path):
        self.root = root
        self.files: list[str] = []
        try:
            root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise UsageError(f"cannot create output directory {root}: {exc}") from exc

    def write(self, rel: str, text: str) -> Path:
        path = self.root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        if rel not in self.files:
            self.files.append(rel)
        return path

    def write_json(self, rel: str, obj) -> Path:
        return self.write(rel, json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")

    def finish(self, command: str, config: dict) -> Path:
        entries = []
        for rel in sorted(self.files):
            data = (self.root / rel).read_bytes()
            entries.append({"path": rel, "bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()})
        manifest = {"schema": MANIFEST_SCHEMA, "command": command, "version": __version__,
                    "config": config, "files": entries}
        path = self.root / "manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


def validate_manifest(directory: str | os.PathLike) -> list[str]:
    """Problems with a bundle's manifest; an empty list means the bundle is valid."""
    root = Path(directory)
    try:
        manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        return [f"manifest unreadable: {exc}"]
    problems = []
    if manifest.get("schema") != MANIFEST_SCHEMA:
        problems.append(f"unexpected schema {manifest.get('schema')!r}")
    for entry in manifest.get("files", []):
        path = root / entry["path"]
        if not path.is_file():
            problems.append(f"missing file {entry['path']}")
        elif hashlib.sha256(path.read_bytes()).hexdigest() != entry["sha256"]:
            problems.append(f"checksum mismatch for {entry['path']}")
    return problems


def _safe_name(s: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", s) or "_"


def _wtag(w: float) -> str:
    return format(w, "g")


def _clean(obj):
    """Replace non-finite floats so JSON stays strict."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


# --------------------------------------------------------------------------- ingest


def cmd_ingest(args) -> int:
    if not args.inputs and not args.url:
        raise UsageError("ingest needs at least one input CSV or --url")
    records = []
    for path in args.inputs:
        records.extend(parse_eval_csv(_read_bytes(path)))
    for url in args.url or []:
        records.extend(fetch_remote_records(url, args.timeout_ms))
    matrix = build_matrix(records)
    pruned, removed = prune_algorithms(matrix, args.max_missing)

    observed_rows = pruned.mask.any(axis=1)
    if pruned.algorithms and not observed_rows.all():
        dropped = [d for d, ok in zip(pruned.datasets, observed_rows) if not ok]
        log.warning("dropping %d dataset(s) with no remaining observations: %s", len(dropped), ", ".join(dropped))
        pruned = pruned.select(datasets=[d for d, ok in zip(pruned.datasets, observed_rows) if ok])

    bundle = Bundle(Path(args.output))
    bundle.write("pruning_report.csv", format_pruning_report(removed))
    imputed_cells: list[tuple[str, str]] = []
    if not pruned.algorithms:
        log.warning("all algorithms were pruned: the evaluation matrix is empty")
        complete = pruned
    else:
        missing = ~pruned.mask
        imputed_cells = [(pruned.algorithms[j], pruned.datasets[i]) for i, j in zip(*np.nonzero(missing))]
        rank = args.rank
        if missing.any() and rank > min(pruned.shape):
            log.warning("imputation rank %d exceeds matrix dims %s; using %d", rank, pruned.shape, min(pruned.shape))
            rank = min(pruned.shape)
        config = ImputationConfig(rank, args.tolerance, args.max_iterations)
        complete = impute_matrix(pruned, config)
    bundle.write("matrix.csv", format_eval_csv(complete.records()))
    bundle.write("imputed_cells.csv", "algorithm_id,dataset_id\n" + "".join(f"{a},{d}\n" for a, d in sorted(imputed_cells)))
    bundle.finish("ingest", {"max_missing": args.max_missing, "rank": args.rank, "tolerance": args.tolerance,
                             "max_iterations": args.max_iterations})
    print(f"datasets: {len(complete.datasets)}  algorithms: {len(complete.algorithms)}  "
          f"imputed cells: {len(imputed_cells)}  pruned algorithms: {len(removed)}  "
          f"duplicates averaged: {matrix.duplicate_count}")
    if not complete.algorithms:
        print("warning: empty matrix (every algorithm was pruned)")
    return EXIT_OK


# --------------------------------------------------------------------------- analyze


def _load_complete_matrix(path: str) -> EvalMatrix:
    matrix = build_matrix(parse_eval_csv(_read_bytes(path)))
    if not matrix.is_complete:
        raise UsageError(f"{path}: matrix has {matrix.missing_count} unobserved cells; run 'frugalml ingest' first")
    if not matrix.algorithms:
        raise UsageError(f"{path}: matrix is empty")
    return matrix


def _stage(name: str, fn: Callable, *a, **kw):
    log.info("stage %s", name)
    try:
        return fn(*a, **kw)
    except (FrugalError, ValueError, np.linalg.LinAlgError) as exc:
        raise StageError(name, exc) from exc


def _sweep(args) -> list[float]:
    if args.w:
        return sorted(set(float(w) for w in args.w))
    return w_sweep(args.w_start, args.w_end, args.w_step)


def cmd_analyze(args) -> int:
    matrix = _load_complete_matrix(args.matrix)
    if args.exclude:
        keep = [a for a in matrix.algorithms if a not in set(args.exclude)]
        if not keep:
            raise UsageError("--exclude removes every algorithm")
        matrix = matrix.select(algorithms=keep)
    bundle = Bundle(Path(args.output))
    kind = ResourceKind(args.resource_kind)
    grid = _sweep(args)
    n = len(matrix.datasets)
    summary: dict = {"datasets": n, "algorithms": len(matrix.algorithms), "excluded": sorted(args.exclude or []),
                     "w_grid": grid, "resource_kind": kind.value, "seed": args.seed}

    def rankings():
        tables = [rank_algorithms(matrix, w, kind, args.ram_gb) for w in grid]
        for t in tables:
            bundle.write(f"rankings/rank_w{_wtag(t.w)}.csv", t.to_csv())
        bundle.write_json("rankings.json", [t.to_dict() for t in tables])
        summary["top_by_w"] = {_wtag(t.w): t.rows[0][0] for t in tables}

    def curves(name: str, datasets=None):
        cs = mean_curves(matrix, grid, datasets, kind, args.ram_gb)
        bundle.write(f"{name}.csv", format_curves_csv(cs))
        xs = pairwise_crossings(cs)
        bundle.write(f"{name}_crossings.csv", "algorithm_a,algorithm_b,w\n"
                     + "".join(f"{a},{b},{w!r}\n" for a, b, w in sorted(xs, key=lambda t: (t[2], t[0], t[1]))))
        spec = PlotSpec(title="Frugality curves" + (" (representative datasets)" if datasets else ""),
                        x_label="w", y_label="mean frugality score")
        bundle.write(f"{name}.svg", emit_curves(cs, spec))

    _stage("rankings", rankings)
    _stage("curves", curves, "curves")

    # latent space of the w=0 score matrix (which equals the AUC matrix)
    base_scores = score_matrix(matrix, 0.0, kind, args.ram_gb)
    latent_k = min(args.latent_rank, *base_scores.shape)
    latent = _stage("latent", svd_latent, base_scores, latent_k)
    bundle.write("latent.csv", latent.to_csv(matrix.datasets))
    summary["latent"] = {"k": latent_k, "explained_variance": latent.explained_variance,
                         "singular_values": latent.spectrum.tolist()}

    features = latent.U if args.cluster_space == "latent" else base_scores
    points = standardize(PointSet(matrix.datasets, features))
    clusterable = points.dim > 0 and n >= 2

    summary["hopkins"] = None
    if clusterable and n >= 4:
        try:
            summary["hopkins"] = _stage("hopkins", hopkins, points, None, args.seed)
        except StageError as exc:
            log.warning("%s; continuing without it", exc)
    else:
        log.warning("hopkins statistic skipped: needs >= 4 datasets with non-constant features")

    if not clusterable:
        k = 1
        summary["silhouette"] = {}
    elif args.k == "auto":
        if n >= 3:
            k, sil = _stage("silhouette", choose_k_silhouette, points, 2, min(args.k_max, n - 1), args.seed)
            summary["silhouette"] = {str(kk): v for kk, v in sil.items()}
        else:
            k = 1
            summary["silhouette"] = {}
    else:
        k = int(args.k)
        if not 1 <= k <= n:
            raise UsageError(f"--k {k} must be between 1 and the number of datasets ({n})")
        summary["silhouette"] = {}
    summary["k"] = k

    if clusterable:
        assignment = _stage("kmeans", kmeans, points, k, args.seed)
        pam = _stage("pam", pam_medoids, points, k, args.seed)
    else:
        assignment = pam = _stage("kmeans", kmeans, PointSet(matrix.datasets, np.zeros((n, 1))), 1, args.seed)
    bundle.write("kmeans.csv", assignment.to_csv())
    bundle.write("pam.csv", pam.to_csv())
    summary["cluster_sizes"] = assignment.sizes()
    summary["pam_medoids"] = list(pam.medoids or ())

    n_rep = min(max(args.representatives, k), n)
    reps = _stage("representatives", select_representatives, points, assignment, n_rep, args.seed) \
        if clusterable else list(matrix.datasets[:n_rep])
    rep_cluster = assignment.mapping()
    bundle.write("representatives.csv", "cluster,dataset_id\n" + "".join(f"{rep_cluster[d]},{d}\n" for d in reps))
    summary["representatives"] = reps
    _stage("curves", curves, "curves_representatives", reps)

    if clusterable:
        dims = min(2, points.dim)
        coords = _stage("pca", pca_project, points, dims)
        lines = ["id,cluster," + ",".join(f"pc{i + 1}" for i in range(dims))]
        for d, c, row in zip(matrix.datasets, assignment.labels, coords):
            lines.append(f"{d},{int(c)}," + ",".join(repr(float(v)) for v in row))
        bundle.write("pca.csv", "\n".join(lines) + "\n")

    if n >= 2:
        dendro = _stage("dendrogram", hierarchical_cluster, PointSet(matrix.datasets, latent.U))
        bundle.write("dendrogram.json", dendro.to_json() + "\n")
        row_order = list(dendro.leaf_order)
    else:
        row_order = list(matrix.datasets)
    cols = _stage("column_order", column_order, matrix)
    bundle.write("row_order.csv", "dataset_id\n" + "".join(f"{d}\n" for d in row_order))
    bundle.write("column_order.csv", "algorithm_id\n" + "".join(f"{a}\n" for a in cols))

    def fronts():
        per_ds = per_dataset_fronts(matrix)
        groups = {}
        for d in matrix.datasets:
            pts = averaged_points(matrix, [d])
            groups[d] = (pts, per_ds[d])
            spec = PlotSpec(title=f"Pareto front: {d}", x_label="AUC", y_label="train + test time (ms, log10)",
                            y_log10=True)
            bundle.write(f"pareto_datasets/{_safe_name(d)}.svg", emit_pareto(pts, per_ds[d], spec))
        bundle.write("fronts_datasets.csv", format_fronts_csv(groups))
        cgroups = {}
        for c in range(assignment.k):
            members = assignment.members(c)
            pts = averaged_points(matrix, members)
            front = pareto_front(pts)
            cgroups[c] = (pts, front)
            spec = PlotSpec(title=f"Cluster {c} ({len(members)} datasets, {len(front)} on front)",
                            x_label="mean AUC", y_label="mean time (ms, log10)", y_log10=True)
            bundle.write(f"pareto_cluster_{c}.svg", emit_pareto(pts, front, spec))
        bundle.write("fronts_clusters.csv", format_fronts_csv(cgroups))
        pts = averaged_points(matrix)
        front = pareto_front(pts)
        bundle.write("front_global.csv", format_fronts_csv({"all": (pts, front)}))
        bundle.write("pareto_global.svg", emit_pareto(pts, front, PlotSpec(
            title=f"All datasets ({len(front)} on front)", x_label="mean AUC",
            y_label="mean time (ms, log10)", y_log10=True)))
        summary["global_front"] = front.ids

    _stage("pareto", fronts)

    def heatmaps():
        for w in sorted(set(args.heatmap_w)):
            scores = score_matrix(matrix, w, kind, args.ram_gb)
            spec = HeatmapSpec(matrix.datasets, matrix.algorithms, row_order, cols,
                               title=f"Frugality scores, w={_wtag(w)}")
            bundle.write(f"heatmap_w{_wtag(w)}.svg", emit_heatmap(scores, spec))
            bundle.write(f"heatmap_w{_wtag(w)}.csv", format_heatmap_csv(scores, spec))

    _stage("heatmaps", heatmaps)

    if args.meta:
        meta = _stage("meta", parse_meta_csv, _read_bytes(args.meta).decode("utf-8"))
        rows = summarize_clusters(meta, assignment)
        bundle.write("cluster_summary.csv", "feature,cluster,count,mean,median\n" + "".join(
            f"{r['feature']},{r['cluster']},{r['count']},{r['mean']!r},{r['median']!r}\n" for r in rows))

    bundle.write_json("summary.json", _clean(summary))
    bundle.finish("analyze", _clean({
        "w_grid": grid, "heatmap_w": sorted(set(args.heatmap_w)), "k": args.k, "k_max": args.k_max,
        "seed": args.seed, "latent_rank": args.latent_rank, "cluster_space": args.cluster_space,
        "representatives": args.representatives, "resource_kind": kind.value, "ram_gb": args.ram_gb,
        "exclude": sorted(args.exclude or []),
    }))
    print(f"analyzed {n} datasets x {len(matrix.algorithms)} algorithms; k={k}; "
          f"{len(bundle.files)} files written to {bundle.root}")
    return EXIT_OK


# --------------------------------------------------------------------------- bench


def cmd_bench(args) -> int:
    learners = args.learners
    for lid in learners:
        if lid not in LEARNERS:
            raise UsageError(f"unknown learner {lid!r}; choose from {', '.join(LEARNERS)}")
    protocol = holdout(args.holdout) if args.holdout else cross_validation(args.folds)
    rows, meta, failed = [], [], []
    for path in args.datasets:
        name = Path(path).stem
        try:
            data = load_dataset_csv(_read_bytes(path), args.class_column, name=name)
            results = [metered_evaluate(lid, data, protocol, args.seed) for lid in learners]
        except (UsageError, FrugalError, ValueError) as exc:
            print(f"failed: {path}: {exc}", file=sys.stderr)
            failed.append(path)
            continue
        rows.extend(r.to_record() for r in results)
        if args.meta_out:
            try:
                meta.append((name, extract_meta_features(data, seed=args.seed)))
            except (FrugalError, ValueError) as exc:
                log.warning("meta-features for %s skipped: %s", path, exc)

    out = Path(args.output)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        fresh = not out.exists() or out.stat().st_size == 0
        with open(out, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(format_eval_csv(rows, header=fresh))
        if args.meta_out:
            mpath = Path(args.meta_out)
            mfresh = not mpath.exists() or mpath.stat().st_size == 0
            with open(mpath, "a", encoding="utf-8", newline="\n") as fh:
                fh.write(format_meta_csv(meta, header=mfresh))
    except OSError as exc:
        raise UsageError(f"cannot write {exc.filename}: {exc.strerror}") from exc
    print(f"{len(rows)} evaluation rows appended to {out}; {len(failed)} dataset(s) failed")
    return EXIT_PARTIAL if failed else EXIT_OK


# --------------------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError("must be a finite number >= 0")
    return v


def _k_value(text: str) -> str:
    if text == "auto":
        return text
    _positive_int(text)
    return text


def build_parser() -> argparse.ArgumentParser:
    default_out = os.environ.get(OUTPUT_ENV)
    parser = argparse.ArgumentParser(prog="frugalml", description="Frugality analysis of ML algorithm evaluations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, out_default: str):
        p.add_argument("--config", metavar="JSON", help="JSON file of option defaults; command-line flags win")
        p.add_argument("-o", "--output", default=default_out or out_default,
                       help=f"output location (default: ${OUTPUT_ENV} or %(default)s)")

    p = sub.add_parser("ingest", help="build, prune and impute the evaluation matrix")
    p.add_argument("inputs", nargs="*", help="evaluation CSV files (algorithm_id,dataset_id,auc,train_ms,test_ms)")
    p.add_argument("--url", action="append", help="HTTP(S) endpoint returning a JSON array of records (repeatable)")
    p.add_argument("--timeout-ms", type=_positive_int, default=10_000, help="remote fetch timeout")
    p.add_argument("--max-missing", type=int, default=10,
                   help="drop algorithms with more than this many missing datasets (default 10)")
    p.add_argument("--rank", type=_positive_int, default=5, help="SVD imputation rank (default 5)")
    p.add_argument("--tolerance", type=float, default=1e-6, help="relative change stopping rule (default 1e-6)")
    p.add_argument("--max-iterations", type=_positive_int, default=100, help="imputation iteration cap")
    common(p, "frugal_out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="scores, curves, clustering, Pareto fronts and heat maps")
    p.add_argument("matrix", help="complete matrix CSV written by 'ingest' (matrix.csv)")
    p.add_argument("--w", type=_nonneg_float, action="append",
                   help="evaluate only these w values (repeatable); overrides the sweep")
    p.add_argument("--w-start", type=_nonneg_float, default=0.0)
    p.add_argument("--w-end", type=_nonneg_float, default=1.0)
    p.add_argument("--w-step", type=float, default=0.05)
    p.add_argument("--heatmap-w", type=_nonneg_float, nargs="+", default=[0.1, 0.5, 1.0],
                   help="w values of the heat-map panels (default 0.1 0.5 1.0)")
    p.add_argument("--resource-kind", choices=[k.value for k in ResourceKind], default=ResourceKind.CPU_TIME_MS.value)
    p.add_argument("--ram-gb", type=float, default=1.0, help="RAM footprint used by --resource-kind ram_hours")
    p.add_argument("--k", type=_k_value, default="auto", help="number of dataset clusters, or 'auto' (silhouette)")
    p.add_argument("--k-max", type=_positive_int, default=10, help="largest k tried by --k auto")
    p.add_argument("--latent-rank", type=_positive_int, default=5, help="SVD latent features (default 5)")
    p.add_argument("--cluster-space", choices=["latent", "performance"], default="latent",
                   help="cluster datasets on SVD latent features or raw AUC rows")
    p.add_argument("--representatives", type=_positive_int, default=10, help="number of medoid datasets")
    p.add_argument("--exclude", action="append", metavar="ALGORITHM", help="drop an algorithm (e.g. a baseline)")
    p.add_argument("--meta", help="meta-feature CSV (from 'bench --meta-out') for per-cluster summaries")
    p.add_argument("--seed", type=int, default=0)
    common(p, "frugal_out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="evaluate the learner suite on local datasets")
    p.add_argument("datasets", nargs="+", help="dataset CSV files with a header row")
    p.add_argument("--class-column", default="class", help="name of the target column (default 'class')")
    p.add_argument("--learners", nargs="+", default=list(LEARNERS), help=f"subset of: {', '.join(LEARNERS)}")
    p.add_argument("--folds", type=_positive_int, default=10, help="stratified CV folds (default 10)")
    p.add_argument("--holdout", type=float, help="use a stratified holdout with this test fraction instead of CV")
    p.add_argument("--meta-out", help="also append meta-features to this CSV")
    p.add_argument("--seed", type=int, default=0)
    common(p, "evaluations.csv")
    p.set_defaults(func=cmd_bench)
    return parser


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = _load_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    except (FrugalError, OSError) as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Evaluation records: ingestion, the algorithm x dataset matrix, pruning and imputation."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import socket
import urllib.error
import urllib.request
from collections import defaultdict
from dataclasses import dataclass
from os import PathLike
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import ConfigError, DecodeError, ParseError, PreconditionError, TransportError

logger = logging.getLogger(__name__)

CSV_HEADER = ("algorithm_id", "dataset_id", "auc", "train_ms", "test_ms")
_NUMERIC_FIELDS = ("auc", "train_ms", "test_ms")


@dataclass(frozen=True)
class EvalRecord:
    """One (algorithm, dataset) measurement: AUC plus training and test time in ms."""

    algorithm_id: str
    dataset_id: str
    auc: float
    train_ms: float
    test_ms: float

    def __post_init__(self) -> None:
        problem = _record_problem(self.algorithm_id, self.dataset_id, self.auc, self.train_ms, self.test_ms)
        if problem:
            raise ValueError(problem)


def _record_problem(algorithm_id, dataset_id, auc, train_ms, test_ms) -> str | None:
    if not algorithm_id:
        return "empty algorithm_id"
    if not dataset_id:
        return "empty dataset_id"
    for name, value in (("auc", auc), ("train_ms", train_ms), ("test_ms", test_ms)):
        if not math.isfinite(value):
            return f"{name} is not finite"
    if not 0.0 <= auc <= 1.0:
        return "auc out of range"
    if train_ms < 0:
        return "negative train_ms"
    if test_ms < 0:
        return "negative test_ms"
    return None


@dataclass(frozen=True, eq=False)
class EvalMatrix:
    """Dense |datasets| x |algorithms| matrices of AUC and times with an observation mask.

    Unobserved cells hold NaN. ``duplicate_count`` is the number of records that
    were merged into an already populated cell by :func:`build_matrix`.
    """

    algorithms: tuple[str, ...]
    datasets: tuple[str, ...]
    auc: np.ndarray
    train_ms: np.ndarray
    test_ms: np.ndarray
    mask: np.ndarray
    duplicate_count: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "datasets", tuple(self.datasets))
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("duplicate algorithm ids")
        if len(set(self.datasets)) != len(self.datasets):
            raise ValueError("duplicate dataset ids")
        shape = (len(self.datasets), len(self.algorithms))
        for name in ("auc", "train_ms", "test_ms", "mask"):
            arr = np.array(getattr(self, name), dtype=bool if name == "mask" else float)
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        m = self.mask
        if np.any((self.auc[m] < 0) | (self.auc[m] > 1)) or not np.all(np.isfinite(self.auc[m])):
            raise ValueError("observed auc outside [0, 1]")
        for name in ("train_ms", "test_ms"):
            vals = getattr(self, name)[m]
            if not np.all(np.isfinite(vals)) or np.any(vals < 0):
                raise ValueError(f"observed {name} negative or non-finite")

    @property
    def shape(self) -> tuple[int, int]:
        return self.mask.shape

    @property
    def is_complete(self) -> bool:
        return bool(self.mask.all())

    @property
    def missing_count(self) -> int:
        return int((~self.mask).sum())

    def total_ms(self) -> np.ndarray:
        """Combined train + test time per cell."""
        return self.train_ms + self.test_ms

    def require_complete(self, what: str = "this operation") -> None:
        if not self.is_complete:
            raise PreconditionError(
                f"{what} needs a complete matrix but {self.missing_count} cells are unobserved; "
                "impute the matrix first"
            )

    def select(self, algorithms: Sequence[str] | None = None, datasets: Sequence[str] | None = None) -> "EvalMatrix":
        """Sub-matrix restricted to the given ids (order as given)."""
        algorithms = self.algorithms if algorithms is None else tuple(algorithms)
        datasets = self.datasets if datasets is None else tuple(datasets)
        ci = [self.algorithms.index(a) for a in algorithms]
        ri = [self.datasets.index(d) for d in datasets]
        ix = np.ix_(ri, ci)
        return EvalMatrix(
            algorithms, datasets,
            self.auc[ix], self.train_ms[ix], self.test_ms[ix], self.mask[ix],
        )

    def records(self) -> list[EvalRecord]:
        """Observed cells as records, dataset-major in axis order."""
        out = []
        for i, d in enumerate(self.datasets):
            for j, a in enumerate(self.algorithms):
                if self.mask[i, j]:
                    out.append(EvalRecord(a, d, float(self.auc[i, j]), float(self.train_ms[i, j]), float(self.test_ms[i, j])))
        return out


@dataclass(frozen=True)
class ImputationConfig:
    rank: int = 5
    tolerance: float = 1e-6
    max_iterations: int = 100

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ConfigError("rank must be a positive integer")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be a positive integer")


# --------------------------------------------------------------------------- ingestion


def _as_text_stream(source) -> IO[str]:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"), newline="")
    if isinstance(source, str):
        return io.StringIO(source, newline="")
    if isinstance(source, io.TextIOBase):
        return source
    # binary file-like object
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def parse_eval_csv(source) -> list[EvalRecord]:
    """Parse evaluation records from CSV.

    ``source`` may be bytes, a str, or a binary/text stream. The header must be
    exactly ``algorithm_id,dataset_id,auc,train_ms,test_ms``. Blank lines are
    ignored; any malformed row raises :class:`ParseError` naming its line.
    """
    reader = csv.reader(_as_text_stream(source))
    records: list[EvalRecord] = []
    header_seen = False
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            if tuple(cells) != CSV_HEADER:
                raise ParseError(f"unexpected header {','.join(cells)!r}, line {line}")
            header_seen = True
            continue
        if len(cells) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} columns, got {len(cells)}, line {line}")
        try:
            auc, train_ms, test_ms = (float(c) for c in cells[2:])
        except ValueError:
            raise ParseError(f"non-numeric field, line {line}") from None
        problem = _record_problem(cells[0], cells[1], auc, train_ms, test_ms)
        if problem:
            raise ParseError(f"{problem}, line {line}")
        records.append(EvalRecord(cells[0], cells[1], auc, train_ms, test_ms))
    return records


def read_eval_csv(path: str | PathLike) -> list[EvalRecord]:
    with open(path, "rb") as fh:
        return parse_eval_csv(fh)


def format_eval_csv(records: Iterable[EvalRecord], header: bool = True) -> str:
    """Serialize records; floats use shortest round-trip repr."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.algorithm_id, r.dataset_id, repr(float(r.auc)), repr(float(r.train_ms)), repr(float(r.test_ms))])
    return buf.getvalue()


def decode_records_json(payload) -> list[EvalRecord]:
    """Decode a JSON array (already parsed, or as str/bytes) of record objects."""
    if isinstance(payload, (str, bytes, bytearray)):
        try:
            payload = json.loads(payload)
        except json.JSONDecodeError as exc:
            raise DecodeError(f"invalid JSON: {exc}") from None
    if not isinstance(payload, list):
        raise DecodeError("expected a JSON array of records")
    records = []
    for i, item in enumerate(payload):
        if not isinstance(item, dict):
            raise DecodeError(f"element {i}: expected an object")
        missing = [k for k in CSV_HEADER if k not in item]
        if missing:
            raise DecodeError(f"element {i}: missing key(s) {', '.join(missing)}")
        for key in CSV_HEADER[:2]:
            if not isinstance(item[key], str):
                raise DecodeError(f"element {i}: {key} must be a string")
        for key in _NUMERIC_FIELDS:
            v = item[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise DecodeError(f"element {i}: {key} must be a number")
        values = [float(item[k]) for k in _NUMERIC_FIELDS]
        problem = _record_problem(item["algorithm_id"].strip(), item["dataset_id"].strip(), *values)
        if problem:
            raise DecodeError(f"element {i}: {problem}")
        records.append(EvalRecord(item["algorithm_id"].strip(), item["dataset_id"].strip(), *values))
    return records


def fetch_remote_records(url: str, timeout_ms: int = 10_000) -> list[EvalRecord]:
    """GET ``url`` and decode its JSON array of evaluation records."""
    if timeout_ms <= 0:
        raise ConfigError("timeout_ms must be positive")
    request = urllib.request.Request(url, headers={"Accept": "application/json"})
    try:
        with urllib.request.urlopen(request, timeout=timeout_ms / 1000.0) as resp:
            body = resp.read()
    except (urllib.error.URLError, socket.timeout, TimeoutError, ConnectionError) as exc:
        raise TransportError(f"fetching {url} failed: {exc}") from exc
    return decode_records_json(body)


# --------------------------------------------------------------------------- matrix


def build_matrix(records: Iterable[EvalRecord]) -> EvalMatrix:
    """Assemble records onto sorted axes; duplicate pairs are averaged field-wise."""
    cells: dict[tuple[str, str], list[EvalRecord]] = defaultdict(list)
    for r in records:
        cells[(r.dataset_id, r.algorithm_id)].append(r)
    algorithms = sorted({a for _, a in cells})
    datasets = sorted({d for d, _ in cells})
    a_idx = {a: j for j, a in enumerate(algorithms)}
    d_idx = {d: i for i, d in enumerate(datasets)}
    shape = (len(datasets), len(algorithms))
    auc = np.full(shape, np.nan)
    train = np.full(shape, np.nan)
    test = np.full(shape, np.nan)
    mask = np.zeros(shape, dtype=bool)
    duplicates = 0
    for (d, a), group in cells.items():
        i, j = d_idx[d], a_idx[a]
        duplicates += len(group) - 1
        auc[i, j] = math.fsum(r.auc for r in group) / len(group)
        train[i, j] = math.fsum(r.train_ms for r in group) / len(group)
        test[i, j] = math.fsum(r.test_ms for r in group) / len(group)
        mask[i, j] = True
    if duplicates:
        logger.warning("%d duplicate (algorithm, dataset) records were averaged", duplicates)
    return EvalMatrix(tuple(algorithms), tuple(datasets), auc, train, test, mask, duplicate_count=duplicates)


def prune_algorithms(matrix: EvalMatrix, max_missing: int = 10) -> tuple[EvalMatrix, list[tuple[str, int]]]:
    """Drop algorithms with strictly more than ``max_missing`` unobserved datasets.

    Returns the pruned matrix and ``(algorithm_id, missing_count)`` for each removed
    algorithm, sorted by count descending then id.
    """
    if max_missing < 0:
        raise ConfigError("max_missing must be non-negative")
    missing = (~matrix.mask).sum(axis=0)
    keep = [a for a, m in zip(matrix.algorithms, missing) if m <= max_missing]
    removed = [(a, int(m)) for a, m in zip(matrix.algorithms, missing) if m > max_missing]
    removed.sort(key=lambda t: (-t[1], t[0]))
    if not removed:
        return matrix, []
    pruned = matrix.select(algorithms=keep)
    return EvalMatrix(pruned.algorithms, pruned.datasets, pruned.auc, pruned.train_ms, pruned.test_ms,
                      pruned.mask, duplicate_count=matrix.duplicate_count), removed


def format_pruning_report(removed: Iterable[tuple[str, int]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["algorithm_id", "missing_count"])
    for a, n in sorted(removed, key=lambda t: (-t[1], t[0])):
        writer.writerow([a, n])
    return buf.getvalue()


# --------------------------------------------------------------------------- imputation


def impute_iterative_svd(
    values: np.ndarray,
    mask: np.ndarray,
    config: ImputationConfig = ImputationConfig(),
    row_ids: Sequence[str] | None = None,
    col_ids: Sequence[str] | None = None,
) -> np.ndarray:
    """Fill unobserved cells with a converged rank-``config.rank`` SVD reconstruction.

    Missing cells start at their column mean; each round rebuilds the matrix from
    the top singular triplets and overwrites only the missing cells. Iteration
    stops once the relative Frobenius change of the missing block falls below
    ``config.tolerance`` or after ``config.max_iterations`` rounds. Observed
    cells are returned unchanged.
    """
    values = np.asarray(values, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if values.shape != mask.shape or values.ndim != 2:
        raise ValueError("values and mask must be 2-D arrays of one shape")
    n_rows, n_cols = values.shape
    empty_cols = np.flatnonzero(~mask.any(axis=0))
    if empty_cols.size:
        j = int(empty_cols[0])
        name = col_ids[j] if col_ids is not None else f"column {j}"
        raise PreconditionError(f"algorithm {name} has no observed values")
    empty_rows = np.flatnonzero(~mask.any(axis=1))
    if empty_rows.size:
        i = int(empty_rows[0])
        name = row_ids[i] if row_ids is not None else f"row {i}"
        raise PreconditionError(f"dataset {name} has no observed values")
    if config.rank > min(n_rows, n_cols):
        raise ConfigError(f"rank {config.rank} exceeds min(matrix dims) = {min(n_rows, n_cols)}")
    if not np.all(np.isfinite(values[mask])):
        raise ValueError("observed cells must be finite")

    out = values.copy()
    missing = ~mask
    if not missing.any():
        return out
    col_means = np.array([values[mask[:, j], j].mean() for j in range(n_cols)])
    current = np.broadcast_to(col_means, values.shape)[missing].copy()
    out[missing] = current
    r = config.rank
    for _ in range(config.max_iterations):
        u, s, vt = np.linalg.svd(out, full_matrices=False)
        recon = (u[:, :r] * s[:r]) @ vt[:r]
        updated = recon[missing]
        change = np.linalg.norm(updated - current) / max(np.linalg.norm(current), np.finfo(float).tiny)
        out[missing] = updated
        current = updated
        if change < config.tolerance:
            break
    return out


_TIME_FLOOR_MS = 1e-3


def impute_matrix(matrix: EvalMatrix, config: ImputationConfig = ImputationConfig()) -> EvalMatrix:
    """Complete all three measures of ``matrix`` independently.

    AUC is imputed in raw space and the imputed cells are clipped to [0, 1];
    times are imputed in log10 space (observed zeros treated as 0.001 ms for the
    fit only) and exponentiated back.
    """
    if matrix.is_complete:
        return matrix
    kw = dict(config=config, row_ids=matrix.datasets, col_ids=matrix.algorithms)
    missing = ~matrix.mask
    auc = impute_iterative_svd(matrix.auc, matrix.mask, **kw)
    auc[missing] = np.clip(auc[missing], 0.0, 1.0)
    times = []
    for raw in (matrix.train_ms, matrix.test_ms):
        logged = np.log10(np.where(matrix.mask, np.maximum(np.nan_to_num(raw), _TIME_FLOOR_MS), 1.0))
        filled = impute_iterative_svd(logged, matrix.mask, **kw)
        t = np.array(raw, dtype=float)
        t[missing] = 10.0 ** filled[missing]
        times.append(t)
    return EvalMatrix(matrix.algorithms, matrix.datasets, auc, times[0], times[1],
                      np.ones(matrix.shape, dtype=bool), duplicate_count=matrix.duplicate_count)

"""Dataset meta-features: size, class entropy, nominal cardinality and a stump landmarker."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping

import numpy as np

from .data import NOMINAL, TabularDataset
from .evaluation import cross_validation, metered_evaluate

#: Column names as published by OpenML.
OPENML_NAMES = {
    "num_attributes": "NumAttributes",
    "class_entropy": "ClassEntropy",
    "max_nominal_att_distinct_values": "MaxNominalAttDistinctValues",
    "majority_class_size": "MajorityClassSize",
    "decision_stump_auc": "DecisionStumpAUC",
}


@dataclass(frozen=True)
class MetaFeatures:
    num_attributes: int
    class_entropy: float
    max_nominal_att_distinct_values: int
    majority_class_size: int
    decision_stump_auc: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def class_entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log2(p)).sum()) + 0.0


def extract_meta_features(dataset: TabularDataset, folds: int = 10, seed: int = 0) -> MetaFeatures:
    counts = dataset.class_counts()
    nominal = [j for j, a in enumerate(dataset.attributes) if a.kind == NOMINAL]
    if nominal:
        distinct = []
        for j in nominal:
            col = dataset.X[:, j]
            distinct.append(len(np.unique(col[~np.isnan(col)])))
        max_distinct = max(distinct)
    else:
        max_distinct = -1
    stump = metered_evaluate("stump", dataset, cross_validation(folds), seed)
    return MetaFeatures(
        num_attributes=len(dataset.attributes),
        class_entropy=class_entropy(counts),
        max_nominal_att_distinct_values=max_distinct,
        majority_class_size=int(counts.max()),
        decision_stump_auc=stump.auc,
    )


META_HEADER = ["dataset_id"] + list(OPENML_NAMES)


def format_meta_csv(rows: Iterable[tuple[str, MetaFeatures]], header: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(META_HEADER)
    for name, m in rows:
        d = m.as_dict()
        writer.writerow([name] + [repr(d[k]) for k in OPENML_NAMES])
    return buf.getvalue()


def parse_meta_csv(text: str) -> dict[str, dict[str, float]]:
    """Inverse of :func:`format_meta_csv`, as ``{dataset_id: {feature: value}}``."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return {}
    missing = [c for c in META_HEADER if c not in reader.fieldnames]
    if missing:
        raise ValueError(f"meta-feature CSV lacks column(s) {', '.join(missing)}")
    out: dict[str, dict[str, float]] = {}
    for row in reader:
        out[row["dataset_id"]] = {k: float(row[k]) for k in OPENML_NAMES}
    return out


def meta_rows(meta: Mapping[str, MetaFeatures]) -> list[tuple[str, MetaFeatures]]:
    return sorted(meta.items())

"""Tabular classification datasets loaded from CSV."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import LoadError

MISSING_TOKENS = frozenset({"", "?"})
NUMERIC = "numeric"
NOMINAL = "nominal"


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str
    values: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class TabularDataset:
    """Predictors as a float matrix plus integer class codes.

    Numeric cells hold their value, nominal cells the index of their value in
    ``Attribute.values``; NaN marks a missing cell in either kind.
    """

    name: str
    attributes: tuple[Attribute, ...]
    X: np.ndarray
    y: np.ndarray
    classes: tuple[str, ...]
    class_name: str = "class"

    def __post_init__(self) -> None:
        X = np.array(self.X, dtype=float).reshape(len(self.y), len(self.attributes))
        y = np.array(self.y, dtype=int)
        if np.any(np.isinf(X)):
            raise ValueError("infinite predictor value")
        if np.any((y < 0) | (y >= len(self.classes))):
            raise ValueError("class code out of range")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def n_instances(self) -> int:
        return len(self.y)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def columns(self) -> list[tuple[str, str]]:
        return [(a.name, a.kind) for a in self.attributes]

    def nominal_mask(self) -> np.ndarray:
        return np.array([a.kind == NOMINAL for a in self.attributes], dtype=bool)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=self.n_classes)

    def subset(self, index) -> "TabularDataset":
        return TabularDataset(self.name, self.attributes, self.X[index], self.y[index], self.classes, self.class_name)


def _parse_number(cell: str) -> float | None:
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def load_dataset_csv(source, class_column: str, name: str = "dataset") -> TabularDataset:
    """Read a CSV with a header row; ``?`` or an empty cell is missing.

    A column is numeric when every non-missing cell parses as a finite number,
    nominal otherwise. Nominal values and class labels are coded in sorted order.
    """
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    rows = [r for r in csv.reader(io.StringIO(text, newline="")) if r and any(c.strip() for c in r)]
    if not rows:
        raise LoadError("empty file: no header")
    header = [c.strip() for c in rows[0]]
    body = [[c.strip() for c in r] for r in rows[1:]]
    if not body:
        raise LoadError("no data rows")
    if class_column not in header:
        raise LoadError(f"class column {class_column!r} not in header")
    for line, r in enumerate(body, 2):
        if len(r) != len(header):
            raise LoadError(f"row has {len(r)} cells, header has {len(header)} (row {line})")
    ci = header.index(class_column)
    labels = [r[ci] for r in body]
    for line, lab in enumerate(labels, 2):
        if lab in MISSING_TOKENS:
            raise LoadError(f"missing class label (row {line})")
    classes = tuple(sorted(set(labels)))
    if len(classes) < 2:
        raise LoadError(f"class column {class_column!r} has fewer than 2 distinct values")
    class_index = {c: i for i, c in enumerate(classes)}

    attributes = []
    columns = []
    for j, col in enumerate(header):
        if j == ci:
            continue
        cells = [r[j] for r in body]
        present = [c for c in cells if c not in MISSING_TOKENS]
        parsed = [_parse_number(c) for c in present]
        if all(p is not None for p in parsed):
            attributes.append(Attribute(col, NUMERIC))
            columns.append([math.nan if c in MISSING_TOKENS else float(c) for c in cells])
        else:
            values = tuple(sorted(set(present)))
            index = {v: i for i, v in enumerate(values)}
            attributes.append(Attribute(col, NOMINAL, values))
            columns.append([math.nan if c in MISSING_TOKENS else float(index[c]) for c in cells])
    X = np.array(columns, dtype=float).T if columns else np.zeros((len(body), 0))
    y = np.array([class_index[lab] for lab in labels])
    return TabularDataset(name, tuple(attributes), X, y, classes, class_column)


def make_dataset(X, y, name: str = "synthetic", classes: Sequence[str] | None = None,
                 attribute_names: Sequence[str] | None = None) -> TabularDataset:
    """All-numeric dataset from arrays; ``y`` holds class codes."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    y = np.asarray(y, dtype=int)
    if classes is None:
        classes = tuple(str(c) for c in range(int(y.max()) + 1))
    if attribute_names is None:
        attribute_names = [f"x{j}" for j in range(X.shape[1])]
    return TabularDataset(name, tuple(Attribute(n, NUMERIC) for n in attribute_names), X, y, tuple(classes))

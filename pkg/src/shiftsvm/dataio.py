"""Dataset ingestion: delimited text files into the minority=-1 / majority=+1 form.

A dataset is described by a :class:`DatasetSpec`.  Specs for the benchmark
datasets live in a registry file (INI-style ``key = value`` sections, see
``datasets.ini``); the directory holding the data files is taken from the
``SHIFTSVM_DATA`` environment variable, falling back to ``./data``.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np

__all__ = [
    "DataError",
    "Sample",
    "Dataset",
    "DatasetSpec",
    "Summary",
    "load_dataset",
    "dataset_summary",
    "relabel_minority",
    "read_registry",
    "registry_spec",
    "load_registered",
    "data_dir",
    "DATA_ENV",
]

DATA_ENV = "SHIFTSVM_DATA"
MISSING = ("?", "")


class DataError(ValueError):
    """Raised when a data file or its spec cannot be turned into a Dataset."""


class Sample(NamedTuple):
    features: np.ndarray
    label: int


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix ``X`` (n, d) and labels ``y`` in {-1, +1}.

    -1 is always the minority class.  Arrays are made read-only.
    """

    X: np.ndarray
    y: np.ndarray
    name: str = "dataset"

    def __post_init__(self):
        X = np.array(self.X, dtype=float)
        y = np.array(self.y, dtype=int).ravel()
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise DataError(f"{self.name}: X must be (n, d) with one label per row")
        if not np.all(np.isin(y, (-1, 1))):
            raise DataError(f"{self.name}: labels must be -1 or +1")
        if not np.all(np.isfinite(X)):
            raise DataError(f"{self.name}: features contain missing or non-finite values")
        n_minus = int((y == -1).sum())
        n_plus = y.shape[0] - n_minus
        if n_minus == 0 or n_plus == 0:
            raise DataError(f"{self.name}: both classes must be present ({n_minus}:{n_plus})")
        if n_minus > n_plus:
            raise DataError(f"{self.name}: minority class -1 outnumbers +1 ({n_minus}:{n_plus})")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def d(self):
        return self.X.shape[1]

    @property
    def n_minus(self):
        return int((self.y == -1).sum())

    @property
    def n_plus(self):
        return int((self.y == 1).sum())

    @property
    def samples(self):
        return [Sample(x, int(l)) for x, l in zip(self.X, self.y)]

    def __len__(self):
        return self.y.shape[0]

    def subset(self, idx):
        return self.X[idx], self.y[idx]


@dataclass(frozen=True)
class DatasetSpec:
    """How to read one delimited text file.

    ``label_column`` and ``exclude_columns`` index the raw file columns
    (negative values count from the end).  Labels equal to ``minority``
    become -1.  If ``majority`` is given, every other raw label is merged
    into the minority class (for multi-class sources such as Arrhythmia).
    ``nominal_columns`` holds non-numeric columns that are coerced to
    integer codes in sorted order of their distinct values.
    """

    path: str
    label_column: int = -1
    minority: str | None = None
    majority: str | None = None
    missing: str = "drop-row"  # or "drop-column"
    exclude_columns: tuple = ()
    nominal_columns: tuple = ()
    name: str | None = None
    expected: tuple | None = None  # (n, d, n_minus, n_plus)
    expected_dropped_columns: int | None = None
    folds: int | None = None

    def __post_init__(self):
        if self.missing not in ("drop-row", "drop-column"):
            raise DataError(f"unknown missing-value policy {self.missing!r}")
        if self.minority is None and self.majority is None:
            raise DataError("spec needs a minority or majority label value")


class Summary(NamedTuple):
    name: str
    n_samples: int
    n_features: int
    n_minus: int
    n_plus: int
    minority_percent: int

    def __str__(self):
        return (f"{self.name:<14} {self.n_samples:>5} {self.n_features:>5} "
                f"{self.n_minus:>5} : {self.n_plus:<5} ({self.minority_percent}%)")


def relabel_minority(raw_labels, minority):
    """Map raw labels to -1 (``minority``) and +1 (the other value).

    Exactly two distinct raw values must be present.  The declared minority
    is honoured even when it is not the smaller class; callers that need
    the minority convention check counts afterwards.
    """
    raw = [str(v).strip() for v in raw_labels]
    values = set(raw)
    if len(values) != 2:
        raise DataError(f"expected exactly two classes, found {len(values)}: {sorted(values)}")
    minority = str(minority).strip()
    if minority not in values:
        raise DataError(f"minority label {minority!r} not among {sorted(values)}")
    return [-1 if v == minority else 1 for v in raw]


def _split_lines(text):
    rows = []
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith(("#", "@", "%")):
            continue
        rows.append(s)
    if not rows:
        raise DataError("file contains no data rows")
    if "," in rows[0]:
        return [[v.strip() for v in r.split(",")] for r in rows]
    return [r.split() for r in rows]


def load_dataset(spec: DatasetSpec) -> Dataset:
    """Read, clean and relabel one dataset file.

    Raises
    ------
    DataError
        On malformed rows, unparseable values, a class that vanishes after
        filtering, or counts that disagree with ``spec.expected``.
    """
    path = Path(spec.path)
    name = spec.name or path.stem
    if not path.is_file():
        raise DataError(f"{name}: data file not found: {path}")
    rows = _split_lines(path.read_text())
    width = len(rows[0])
    for lineno, r in enumerate(rows, 1):
        if len(r) != width:
            raise DataError(f"{name}: row {lineno} has {len(r)} fields, expected {width}")

    def col(i):
        if not -width <= i < width:
            raise DataError(f"{name}: column {i} out of range for {width} columns")
        return i % width

    label_col = col(spec.label_column)
    skip = {label_col} | {col(c) for c in spec.exclude_columns}
    nominal = {col(c) for c in spec.nominal_columns}
    feature_cols = [c for c in range(width) if c not in skip]
    labels = [r[label_col] for r in rows]
    if any(v in MISSING for v in labels):
        raise DataError(f"{name}: missing class label")

    cells = [[r[c] for c in feature_cols] for r in rows]
    miss = np.array([[v in MISSING for v in r] for r in cells], dtype=bool).reshape(len(rows), len(feature_cols))
    if spec.missing == "drop-column":
        keep_cols = ~miss.any(axis=0)
        dropped = int((~keep_cols).sum())
        if spec.expected_dropped_columns is not None and dropped != spec.expected_dropped_columns:
            raise DataError(f"{name}: dropped {dropped} columns with missing values, "
                            f"expected {spec.expected_dropped_columns}")
        keep_rows = np.ones(len(rows), dtype=bool)
    else:
        keep_cols = np.ones(len(feature_cols), dtype=bool)
        keep_rows = ~miss.any(axis=1)

    used_cols = [c for c, k in zip(feature_cols, keep_cols) if k]
    codes = {}
    for c in used_cols:
        if c in nominal:
            vals = sorted({r[c] for r, k in zip(rows, keep_rows) if k})
            codes[c] = {v: float(i) for i, v in enumerate(vals)}

    X = np.empty((int(keep_rows.sum()), len(used_cols)))
    kept_labels = []
    out = 0
    for lineno, (r, k) in enumerate(zip(rows, keep_rows), 1):
        if not k:
            continue
        for j, c in enumerate(used_cols):
            v = r[c]
            if c in codes:
                X[out, j] = codes[c][v]
                continue
            try:
                X[out, j] = float(v)
            except ValueError:
                raise DataError(f"{name}: row {lineno}, column {c}: cannot parse {v!r} as a number") from None
        kept_labels.append(labels[lineno - 1])
        out += 1

    if spec.majority is not None:
        major = str(spec.majority).strip()
        y = np.array([1 if v == major else -1 for v in kept_labels])
    else:
        before, after = set(labels), set(kept_labels)
        if len(before) == 2 and before != after:
            lost = ", ".join(sorted(before - after))
            raise DataError(f"{name}: class {lost} is empty after filtering")
        y = np.array(relabel_minority(kept_labels, spec.minority))
    if not (y == -1).any():
        raise DataError(f"{name}: minority class is empty after filtering")
    if not (y == 1).any():
        raise DataError(f"{name}: majority class is empty after filtering")
    ds = Dataset(X, y, name)
    if spec.expected is not None:
        got = (len(ds), ds.d, ds.n_minus, ds.n_plus)
        if tuple(int(v) for v in spec.expected) != got:
            raise DataError(f"{name}: loaded (n, d, n-, n+) = {got}, registry declares {tuple(spec.expected)}")
    return ds


def dataset_summary(ds: Dataset) -> Summary:
    pct = int(np.floor(100.0 * ds.n_minus / len(ds) + 0.5))
    return Summary(ds.name, len(ds), ds.d, ds.n_minus, ds.n_plus, pct)


def data_dir(path=None) -> Path:
    if path is not None:
        return Path(path)
    return Path(os.environ.get(DATA_ENV, "data"))


def _ints(value):
    return tuple(int(v) for v in value.replace(",", " ").split())


def read_registry(path=None, directory=None) -> dict[str, DatasetSpec]:
    """Parse a registry file into ``{name: DatasetSpec}``.

    Relative ``path`` entries are resolved against ``directory`` (default
    :func:`data_dir`).  Without ``path`` the bundled registry is used.
    """
    parser = configparser.ConfigParser(interpolation=None)
    if path is None:
        parser.read_string(resources.files("shiftsvm").joinpath("datasets.ini").read_text())
    else:
        with open(path) as fh:
            parser.read_file(fh)
    base = data_dir(directory)
    specs = {}
    for name in parser.sections():
        sec = parser[name]
        file = Path(sec["path"])
        if not file.is_absolute():
            file = base / file
        specs[name] = DatasetSpec(
            path=str(file),
            label_column=sec.getint("label_column", -1),
            minority=sec.get("minority"),
            majority=sec.get("majority"),
            missing=sec.get("missing", "drop-row"),
            exclude_columns=_ints(sec.get("exclude_columns", "")),
            nominal_columns=_ints(sec.get("nominal_columns", "")),
            name=name,
            expected=_ints(sec["expected"]) if "expected" in sec else None,
            expected_dropped_columns=sec.getint("expected_dropped_columns", None),
            folds=sec.getint("folds", None),
        )
    return specs


def registry_spec(name, registry=None, directory=None) -> DatasetSpec:
    specs = read_registry(registry, directory)
    if name not in specs:
        raise DataError(f"unknown dataset {name!r}; registered: {', '.join(specs)}")
    return specs[name]


def load_registered(name, registry=None, directory=None) -> Dataset:
    return load_dataset(registry_spec(name, registry, directory))

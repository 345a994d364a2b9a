"""CSV persistence for feature tables and cluster assignments.

features.csv    image_id,label,method,f1..fN
assignments.csv image_id,label,cluster

Floats are written with ``repr`` (shortest round-trip form), so reading a
file back reproduces every value exactly. An empty label field means the
image is unlabeled. Files are written to a temporary name and renamed into
place.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import FormatError
from .features import DIMENSIONS, FeatureVector

_METHOD_BY_DIM = {d: m for m, d in DIMENSIONS.items()}
ASSIGNMENT_HEADER = ["image_id", "label", "cluster"]


@dataclass(frozen=True)
class FeatureTable:
    method: str
    rows: tuple

    def __post_init__(self):
        if self.method not in DIMENSIONS:
            raise FormatError(f"unknown feature method {self.method!r}")
        rows = tuple(self.rows)
        seen = set()
        for r in rows:
            if r.method != self.method or len(r.values) != self.dimension:
                raise FormatError(f"row {r.image_id!r} does not match table method {self.method}")
            if r.image_id in seen:
                raise FormatError(f"duplicate image_id {r.image_id!r}")
            seen.add(r.image_id)
        object.__setattr__(self, "rows", rows)

    @property
    def dimension(self) -> int:
        return DIMENSIONS[self.method]

    @property
    def labeled(self) -> bool:
        return bool(self.rows) and all(r.label is not None for r in self.rows)

    def __len__(self):
        return len(self.rows)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def feature_header(dimension: int):
    return ["image_id", "label", "method"] + [f"f{i}" for i in range(1, dimension + 1)]


def features_to_csv(table: FeatureTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(feature_header(table.dimension))
    for r in table.rows:
        w.writerow([r.image_id, r.label or "", r.method, *(repr(v) for v in r.values)])
    return buf.getvalue()


def write_features(table: FeatureTable, path) -> None:
    atomic_write_text(path, features_to_csv(table))


def _read_csv(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return list(csv.reader(fh))
    except OSError as exc:
        raise FormatError(f"cannot read file ({exc.strerror or exc})", path=path) from exc


def read_features(path) -> FeatureTable:
    lines = _read_csv(path)
    if not lines:
        raise FormatError("empty file, expected a header", line=1, path=path)
    header = lines[0]
    dimension = len(header) - 3
    method = _METHOD_BY_DIM.get(dimension)
    if method is None or header != feature_header(dimension):
        raise FormatError(
            "header must be image_id,label,method,f1..f9 or f1..f18", line=1, path=path
        )
    rows = []
    seen = set()
    for lineno, fields in enumerate(lines[1:], start=2):
        if not fields:
            continue
        if len(fields) != len(header):
            raise FormatError(
                f"expected {len(header)} fields for a {method} table, got {len(fields)}",
                line=lineno,
                path=path,
            )
        image_id, label, row_method = fields[:3]
        if row_method != method:
            raise FormatError(
                f"row method {row_method!r} does not match {method} header", line=lineno, path=path
            )
        if not image_id:
            raise FormatError("empty image_id", line=lineno, path=path)
        if image_id in seen:
            raise FormatError(f"duplicate image_id {image_id!r}", line=lineno, path=path)
        seen.add(image_id)
        try:
            values = [float(v) for v in fields[3:]]
        except ValueError as exc:
            raise FormatError(f"bad feature value: {exc}", line=lineno, path=path) from None
        rows.append(FeatureVector(image_id, label or None, method, values))
    return FeatureTable(method, tuple(rows))


def write_assignments(path, image_ids, labels, clusters) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ASSIGNMENT_HEADER)
    for image_id, label, cluster in zip(image_ids, labels, clusters):
        w.writerow([image_id, label or "", int(cluster)])
    atomic_write_text(path, buf.getvalue())


def read_assignments(path):
    """Return ``[(image_id, label_or_None, cluster), ...]`` in file order."""
    lines = _read_csv(path)
    if not lines or lines[0] != ASSIGNMENT_HEADER:
        raise FormatError("header must be image_id,label,cluster", line=1, path=path)
    out = []
    seen = set()
    for lineno, fields in enumerate(lines[1:], start=2):
        if not fields:
            continue
        if len(fields) != 3:
            raise FormatError(f"expected 3 fields, got {len(fields)}", line=lineno, path=path)
        image_id, label, cluster = fields
        if image_id in seen:
            raise FormatError(f"duplicate image_id {image_id!r}", line=lineno, path=path)
        seen.add(image_id)
        try:
            c = int(cluster)
        except ValueError:
            raise FormatError(f"cluster {cluster!r} is not an integer", line=lineno, path=path) from None
        if c < 0:
            raise FormatError(f"negative cluster index {c}", line=lineno, path=path)
        out.append((image_id, label or None, c))
    return out

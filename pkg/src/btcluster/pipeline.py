"""End-to-end run: ingest, extract, (normalize), cluster, evaluate."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .clustering import KMeansConfig, KMeansModel, kmeans
from .dataset import LABELINGS, WANG_CLASSES, DatasetManifest, ingest
from .errors import FormatError, InputError, InvariantError
from .evaluation import EvaluationReport, LabeledAssignment, evaluate, report_to_csv
from .features import METHODS, extract
from .imagery import load_image
from .store import FeatureTable, atomic_write_text, write_assignments, write_features

log = logging.getLogger(__name__)


class StageError(InputError):
    """An input error annotated with the pipeline stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PipelineConfig:
    input: str
    labeling: str = "subdirs"
    method: str = "btc"
    k: int = 10
    seed: int = 0
    init: str = "kmeanspp"
    max_iter: int = 100
    normalize: bool = False
    out_dir: str = "results"
    workers: int = 1

    def __post_init__(self):
        if self.labeling not in LABELINGS:
            raise InputError(f"labeling must be one of {LABELINGS}, got {self.labeling!r}")
        if self.method not in METHODS:
            raise InputError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.workers < 1:
            raise InputError("workers must be at least 1")

    @property
    def kmeans_config(self) -> KMeansConfig:
        return KMeansConfig(k=self.k, seed=self.seed, init=self.init, max_iterations=self.max_iter)

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        """Parse flat ``key = value`` lines; ``#`` starts a comment."""
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot read config ({exc.strerror or exc})", path=path) from exc
        return cls.from_text(text, path=path)

    @classmethod
    def from_text(cls, text, path=None) -> "PipelineConfig":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise FormatError(f"expected key=value, got {raw.strip()!r}", line=lineno, path=path)
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "max_iterations":
                key = "max_iter"
            if key == "out":
                key = "out_dir"
            if key not in types:
                raise FormatError(f"unknown config key {key!r}", line=lineno, path=path)
            try:
                values[key] = _coerce(types[key], value)
            except ValueError as exc:
                raise FormatError(f"bad value for {key}: {exc}", line=lineno, path=path) from None
        if "input" not in values:
            raise FormatError("config must set input", path=path)
        return cls(**values)


def _coerce(type_name, value):
    if type_name == "int":
        return int(value)
    if type_name == "bool":
        v = value.lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {value!r}")
    return value


def extract_features(manifest: DatasetManifest, method: str, workers: int = 1) -> FeatureTable:
    """Decode and describe every image; output order follows the manifest."""

    def one(entry):
        return extract(load_image(entry.path), method, image_id=entry.image_id, label=entry.label)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, manifest.entries))
    else:
        rows = [one(e) for e in manifest.entries]
    return FeatureTable(method, tuple(rows))


def zscore(table: FeatureTable) -> FeatureTable:
    """Standardize each dimension to mean 0, population sd 1.

    Zero-variance dimensions become 0.
    """
    if not table.rows:
        return table
    X = np.array([r.values for r in table.rows], dtype=np.float64)
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    Z = np.zeros_like(X)
    live = sd > 0
    Z[:, live] = (X[:, live] - mean[live]) / sd[live]
    return FeatureTable(table.method, tuple(r.with_values(z) for r, z in zip(table.rows, Z)))


def class_order_for(labels):
    """Canonical Wang order when every label is a Wang class, else alphabetical."""
    present = set(labels)
    if present <= set(WANG_CLASSES):
        return [c for c in WANG_CLASSES if c in present]
    return sorted(present)


def cluster_table(table: FeatureTable, config: KMeansConfig) -> KMeansModel:
    model = kmeans(table.rows, config)
    if len(model.assignments) != len(table.rows):
        raise InvariantError("assignment count differs from row count")
    if np.bincount(model.assignments, minlength=config.k).min() == 0:
        raise InvariantError("k-means returned an empty cluster")
    return model


def evaluate_labeled(image_ids, labels, clusters) -> EvaluationReport:
    missing = [i for i, lab in zip(image_ids, labels) if lab is None]
    if missing:
        raise InputError(
            f"cannot evaluate: {len(missing)} image(s) have no class label (first: {missing[0]!r})"
        )
    assignments = [LabeledAssignment(i, lab, int(c)) for i, lab, c in zip(image_ids, labels, clusters)]
    report = evaluate(assignments, class_order_for(labels))
    total = sum(s.retrieved_count for s in report.per_class.values())
    if total != len(assignments):
        raise InvariantError(f"report retrieves {total} images, expected {len(assignments)}")
    return report


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except InputError as exc:
        raise StageError(name, exc) from exc


def run_pipeline(config: PipelineConfig):
    """Run every stage and write features.csv, assignments.csv, report.csv
    and run.json under ``config.out_dir``.

    Returns ``(table, model, report)``.
    """
    out = Path(config.out_dir)
    manifest = _stage("ingest", ingest, config.input, config.labeling)
    log.info("ingested %d images from %s", len(manifest), config.input)

    table = _stage("extract", extract_features, manifest, config.method, config.workers)
    if config.normalize:
        table = zscore(table)
    write_features(table, out / "features.csv")

    model = _stage("cluster", cluster_table, table, config.kmeans_config)
    log.info("k-means: %d iterations, converged=%s", model.iterations_run, model.converged)
    ids = [r.image_id for r in table.rows]
    labels = [r.label for r in table.rows]
    write_assignments(out / "assignments.csv", ids, labels, model.assignments)

    report = _stage("evaluate", evaluate_labeled, ids, labels, model.assignments)
    atomic_write_text(out / "report.csv", report_to_csv(report))

    meta = {
        "version": __version__,
        "config": asdict(config),
        "images": len(manifest),
        "dimension": table.dimension,
        "iterations_run": model.iterations_run,
        "converged": model.converged,
        "sse": model.sse,
    }
    atomic_write_text(out / "run.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return table, model, report

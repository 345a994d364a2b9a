"""Per-class recall and precision for a clustering with known labels.

Each cluster is named after the majority class among its members. For a
class ``c`` the retrieved set is every image in a cluster named ``c``;
recall divides the relevant hits by the class population and precision
divides them by the size of the retrieved set. Scores are percentages.
"""

from __future__ import annotations

import csv
import io
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Optional

from .errors import InputError

REPORT_COLUMNS = ("class", "recall", "precision", "retrieved", "relevant_retrieved")


@dataclass(frozen=True)
class LabeledAssignment:
    image_id: str
    true_class: str
    cluster: int


@dataclass(frozen=True)
class ClassScore:
    recall: float
    precision: float
    retrieved_count: int
    relevant_retrieved: int
    population: int
    # set when no cluster maps to the class; precision is then reported as 0
    empty_retrieval: bool = False


@dataclass(frozen=True)
class EvaluationReport:
    cluster_to_class: dict
    per_class: dict
    macro_recall: float
    macro_precision: float

    @property
    def classes(self):
        return list(self.per_class)


def map_clusters(assignments) -> dict:
    """Label each cluster with its majority class (ties: smallest name)."""
    members = defaultdict(Counter)
    for a in assignments:
        members[a.cluster][a.true_class] += 1
    if not members:
        raise InputError("cannot map clusters of an empty assignment list")
    mapping = {}
    for cluster in sorted(members):
        counts = members[cluster]
        mapping[cluster] = min(counts, key=lambda c: (-counts[c], c))
    return mapping


def score(assignments, mapping: dict, class_order: Optional[list] = None) -> EvaluationReport:
    """Recall and precision of every class that appears in ``assignments``.

    ``class_order`` fixes the row order of the report; classes it omits are
    appended in sorted order.
    """
    assignments = list(assignments)
    population = Counter(a.true_class for a in assignments)
    retrieved = Counter()
    hits = Counter()
    for a in assignments:
        try:
            predicted = mapping[a.cluster]
        except KeyError:
            raise InputError(
                f"image {a.image_id!r} is in cluster {a.cluster}, which has no class mapping"
            ) from None
        retrieved[predicted] += 1
        if predicted == a.true_class:
            hits[predicted] += 1

    order = [c for c in (class_order or []) if c in population]
    order += sorted(c for c in population if c not in order)

    per_class = {}
    for c in order:
        got, rel = retrieved[c], hits[c]
        per_class[c] = ClassScore(
            recall=100.0 * rel / population[c],
            precision=100.0 * rel / got if got else 0.0,
            retrieved_count=got,
            relevant_retrieved=rel,
            population=population[c],
            empty_retrieval=got == 0,
        )
    n = len(per_class)
    return EvaluationReport(
        cluster_to_class=dict(mapping),
        per_class=per_class,
        macro_recall=sum(s.recall for s in per_class.values()) / n if n else 0.0,
        macro_precision=sum(s.precision for s in per_class.values()) / n if n else 0.0,
    )


def evaluate(assignments, class_order=None) -> EvaluationReport:
    assignments = list(assignments)
    return score(assignments, map_clusters(assignments), class_order)


def pct(x: float) -> str:
    return f"{x:.2f}"


def report_rows(report: EvaluationReport):
    for name, s in report.per_class.items():
        yield (name, pct(s.recall), pct(s.precision), str(s.retrieved_count), str(s.relevant_retrieved))


def report_to_csv(report: EvaluationReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    w.writerows(report_rows(report))
    return buf.getvalue()


def format_table(report: EvaluationReport, title: str = "") -> str:
    """Aligned plain-text table: Classes / Recall / Precision, plus averages."""
    rows = [(name, pct(s.recall), pct(s.precision)) for name, s in report.per_class.items()]
    rows.append(("Average", pct(report.macro_recall), pct(report.macro_precision)))
    width = max(len("Classes"), *(len(r[0]) for r in rows))
    lines = [title] if title else []
    lines.append(f"{'Classes':<{width}}  {'Recall':>8}  {'Precision':>9}")
    for i, (name, r, p) in enumerate(rows):
        if i == len(rows) - 1:
            lines.append("-" * (width + 21))
        flag = ""
        if name in report.per_class and report.per_class[name].empty_retrieval:
            flag = "  (no cluster)"
        lines.append(f"{name:<{width}}  {r:>8}  {p:>9}{flag}")
    return "\n".join(lines) + "\n"

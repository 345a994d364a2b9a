from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from btcluster.errors import InputError
from btcluster.evaluation import (
    LabeledAssignment,
    evaluate,
    format_table,
    map_clusters,
    pct,
    report_to_csv,
    score,
)


def la(rows):
    return [LabeledAssignment(f"img{i}", c, k) for i, (c, k) in enumerate(rows)]


def test_majority_mapping():
    rows = la([("Buses", 0), ("Buses", 0), ("Flowers", 0), ("Buses", 1), ("Flowers", 1)])
    assert map_clusters(rows) == {0: "Buses", 1: "Buses"}


def test_tie_goes_to_smallest_name():
    assert map_clusters(la([("Flowers", 1), ("Buses", 1)])) == {1: "Buses"}


def test_many_clusters_one_class():
    rows = la([("Dinosaurs", 0), ("Dinosaurs", 1), ("Horses", 2)])
    assert map_clusters(rows) == {0: "Dinosaurs", 1: "Dinosaurs", 2: "Horses"}


def test_perfect_single_class():
    r = evaluate(la([("A", 0)] * 4))
    assert (r.per_class["A"].recall, r.per_class["A"].precision) == (100, 100)


def test_hand_counted_two_classes():
    rows = la([("A", 0), ("A", 0), ("B", 0), ("B", 1)])
    r = evaluate(rows)
    assert r.cluster_to_class == {0: "A", 1: "B"}
    a, b = r.per_class["A"], r.per_class["B"]
    assert (a.recall, pct(a.precision)) == (100, "66.67")
    assert a.relevant_retrieved * 3 == a.retrieved_count * 2
    assert (b.recall, b.precision) == (50, 100)


def test_unmapped_class_is_flagged():
    rows = la([("A", 0), ("A", 0), ("B", 0)])
    r = evaluate(rows)
    b = r.per_class["B"]
    assert (b.recall, b.precision, b.empty_retrieval) == (0, 0, True)
    assert "(no cluster)" in format_table(r)


def test_dinosaur_anchor_formatting():
    rows = [LabeledAssignment(f"d{i}", "Dinosaurs", 0) for i in range(99)]
    rows.append(LabeledAssignment("d99", "Dinosaurs", 1))
    rows += [LabeledAssignment(f"h{i}", "Horses", 0) for i in range(3)]
    rows += [LabeledAssignment(f"h{i}", "Horses", 1) for i in range(3, 100)]
    s = evaluate(rows).per_class["Dinosaurs"]
    assert (s.retrieved_count, s.relevant_retrieved, s.population) == (102, 99, 100)
    assert (pct(s.recall), pct(s.precision)) == ("99.00", "97.06")


def test_unknown_cluster_rejected():
    with pytest.raises(InputError, match="cluster 5"):
        score(la([("A", 5)]), {0: "A"})


def test_class_order_and_csv():
    r = score(la([("b", 0), ("a", 1)]), {0: "b", 1: "a"}, class_order=["b"])
    assert r.classes == ["b", "a"]
    assert report_to_csv(r).splitlines() == [
        "class,recall,precision,retrieved,relevant_retrieved",
        "b,100.00,100.00,1,1",
        "a,100.00,100.00,1,1",
    ]


def test_table_layout():
    r = evaluate(la([("Dinosaurs", 0), ("Beaches", 1)]))
    lines = format_table(r, title="t").splitlines()
    assert lines[0] == "t"
    assert lines[1].split() == ["Classes", "Recall", "Precision"]
    assert lines[-1].split() == ["Average", "100.00", "100.00"]


def brute_force(assignments, mapping):
    """Recount each class from scratch as integer pairs."""
    out = {}
    for c in {a.true_class for a in assignments}:
        retrieved = [a for a in assignments if mapping[a.cluster] == c]
        relevant = [a for a in retrieved if a.true_class == c]
        population = sum(a.true_class == c for a in assignments)
        out[c] = (len(relevant), population, len(retrieved))
    return out


labelled = st.lists(st.tuples(st.sampled_from("ABCDE"), st.integers(0, 5)), min_size=1, max_size=60)


@settings(max_examples=100)
@given(labelled)
def test_matches_brute_force_recount(rows):
    rows = la(rows)
    mapping = map_clusters(rows)
    report = score(rows, mapping)
    for c, (rel, pop, got) in brute_force(rows, mapping).items():
        s = report.per_class[c]
        assert (s.relevant_retrieved, s.population, s.retrieved_count) == (rel, pop, got)
        assert s.recall == 100.0 * rel / pop
        assert s.precision == (100.0 * rel / got if got else 0.0)
        assert 0 <= s.recall <= 100 and 0 <= s.precision <= 100
    assert sum(s.retrieved_count for s in report.per_class.values()) == len(rows)


@settings(max_examples=50)
@given(st.lists(st.sampled_from("ABCD"), min_size=1, max_size=30))
def test_pure_clusters_score_perfectly(classes):
    # one cluster per class, each cluster pure
    ids = {c: i for i, c in enumerate(sorted(set(classes)))}
    r = evaluate(la([(c, ids[c]) for c in classes]))
    assert all(s.recall == 100 and s.precision == 100 for s in r.per_class.values())
    assert r.macro_recall == r.macro_precision == 100

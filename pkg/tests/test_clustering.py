import numpy as np
import pytest

from patchtriage.clustering import (
    ClusterModel,
    kmeans_fit,
    kmeans_plus_plus_init,
    load_model,
    model_from_json,
    model_to_json,
    predict_category,
    save_model,
    seeded_fit,
    wcss,
)
from patchtriage.embeddings import embed_hashed
from patchtriage.errors import (
    DegenerateSeeding,
    DimensionMismatch,
    TooFewPoints,
)

from oracles import lloyd_reference

# Integer coordinates keep member sums exact, so centroid means are bit-equal
# no matter the summation order an implementation uses.
SIX_POINTS = [(0, 0), (2, 0), (0, 2), (10, 10), (12, 10), (10, 12)]
SIX_INIT = [(2, 0), (0, 2)]

TEN_POINTS = [
    (0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 1),
    (10, 0, 0), (11, 0, 0), (10, 1, 0),
    (0, 10, 10), (0, 11, 10), (1, 10, 11),
]
TEN_INIT = [(0, 0, 0), (1, 0, 0), (5, 5, 5)]


def assert_traces_equal(package_trace, oracle_trace):
    assert len(package_trace) == len(oracle_trace)
    for (got_c, got_a), (want_c, want_a) in zip(package_trace, oracle_trace):
        assert np.array_equal(got_c, np.array(want_c, dtype=float))
        assert list(got_a) == want_a


def test_lloyd_matches_oracle_six_points():
    trace = []
    model, assignment = kmeans_fit(
        np.array(SIX_POINTS, dtype=float), k=2, init=np.array(SIX_INIT, dtype=float),
        trace=trace,
    )
    oracle = lloyd_reference(SIX_POINTS, SIX_INIT, max_iter=300, tol=1e-4)
    assert_traces_equal(trace, oracle)
    assert model.iterations_run == len(trace)
    assert list(assignment) == oracle[-1][1]
    assert sorted(set(assignment)) == [0, 1]


def test_lloyd_matches_oracle_ten_points():
    trace = []
    model, assignment = kmeans_fit(
        np.array(TEN_POINTS, dtype=float), k=3, init=np.array(TEN_INIT, dtype=float),
        trace=trace,
    )
    oracle = lloyd_reference(TEN_POINTS, TEN_INIT, max_iter=300, tol=1e-4)
    assert_traces_equal(trace, oracle)
    assert len(trace) >= 2  # the deliberately bad start must actually move


def test_lloyd_matches_oracle_with_empty_cluster_repair():
    points = [(0, 0), (1, 0), (10, 0), (11, 0)]
    init = [(0, 0), (1, 0), (100, 0)]
    trace = []
    model, assignment = kmeans_fit(
        np.array(points, dtype=float), k=3, init=np.array(init, dtype=float),
        trace=trace,
    )
    oracle = lloyd_reference(points, init, max_iter=300, tol=1e-4)
    assert_traces_equal(trace, oracle)
    assert sorted(set(assignment)) == [0, 1, 2]  # the starved cluster recovered


def test_wcss_non_increasing_along_trace():
    points = np.array(TEN_POINTS, dtype=float)
    trace = []
    kmeans_fit(points, k=3, init=np.array(TEN_INIT, dtype=float), trace=trace)
    objectives = [wcss(points, c, a) for c, a in trace]
    assert all(b <= a + 1e-9 for a, b in zip(objectives, objectives[1:]))


def test_assignment_tie_breaks_to_lowest_cluster():
    model = ClusterModel(
        centroids=np.array([[0.0, 0.0], [2.0, 0.0]]),
        cluster_to_category={0: 4, 1: 9},
        k=2,
        seed=None,
        iterations_run=0,
    )
    category, distances = predict_category(model, np.array([1.0, 0.0]))
    assert distances[0] == distances[1]
    assert category == 4


def test_kmeans_plus_plus_deterministic():
    points = np.array(SIX_POINTS, dtype=float)
    a = kmeans_plus_plus_init(points, 2, np.random.default_rng(42))
    b = kmeans_plus_plus_init(points, 2, np.random.default_rng(42))
    assert np.array_equal(a, b)
    rows = {tuple(p) for p in points}
    assert all(tuple(c) in rows for c in a)


def test_kmeans_fit_identical_points_does_not_crash():
    points = np.ones((4, 2))
    model, assignment = kmeans_fit(points, k=2, seed=0)
    assert model.k == 2
    assert wcss(points, model.centroids, assignment) == 0.0


def test_kmeans_fit_validation():
    points = np.zeros((2, 3))
    with pytest.raises(TooFewPoints):
        kmeans_fit(points, k=3)
    with pytest.raises(ValueError):
        kmeans_fit(points, k=0)
    with pytest.raises(DimensionMismatch):
        kmeans_fit(points, k=2, init=np.zeros((2, 4)))


def test_kmeans_fit_identity_category_mapping():
    model, _ = kmeans_fit(np.array(SIX_POINTS, dtype=float), k=2, seed=1)
    assert model.cluster_to_category == {0: 0, 1: 1}
    assert model.trained_on == {"labeled": 0, "unlabeled": 6}


def test_seeded_fit_requires_two_categories():
    with pytest.raises(DegenerateSeeding):
        seeded_fit([])
    with pytest.raises(DegenerateSeeding):
        seeded_fit([(np.array([0.0, 0.0]), 3), (np.array([1.0, 0.0]), 3)])


def test_seeded_fit_fully_labeled_converges_to_class_means():
    labeled = [
        (np.array([0.0, 0.0]), 9),
        (np.array([2.0, 0.0]), 9),
        (np.array([10.0, 0.0]), 5),
        (np.array([12.0, 2.0]), 5),
    ]
    trace = []
    model, assignment = seeded_fit(labeled, trace=trace)
    assert model.iterations_run == 1
    # categories sorted: cluster 0 -> 5, cluster 1 -> 9
    assert model.cluster_to_category == {0: 5, 1: 9}
    assert np.array_equal(model.centroids, np.array([[11.0, 1.0], [1.0, 0.0]]))
    assert list(assignment) == [1, 1, 0, 0]
    assert model.trained_on == {"labeled": 4, "unlabeled": 0}


def test_seeded_fit_matches_constrained_oracle():
    labeled_vectors = [(0, 0), (2, 0), (10, 0)]
    labels = [5, 5, 9]
    unlabeled = [(1, 0), (9, 0), (4, 0)]
    trace = []
    model, assignment = seeded_fit(
        [(np.array(v, dtype=float), c) for v, c in zip(labeled_vectors, labels)],
        unlabeled=[np.array(u, dtype=float) for u in unlabeled],
        trace=trace,
    )
    class_means = [(1.0, 0.0), (10.0, 0.0)]  # categories sorted: 5 then 9
    oracle = lloyd_reference(
        labeled_vectors + unlabeled, class_means, max_iter=300, tol=1e-4,
        pinned=[0, 0, 1],
    )
    assert_traces_equal(trace, oracle)
    assert list(assignment) == oracle[-1][1]


def test_seeded_fit_pins_labeled_points_against_gravity():
    labeled = [
        (np.array([0.0, 0.0]), 5),
        (np.array([10.0, 0.0]), 5),  # sits on top of category 9's mass
        (np.array([10.0, 0.0]), 9),
        (np.array([12.0, 0.0]), 9),
    ]
    model, assignment = seeded_fit(labeled)
    assert list(assignment) == [0, 0, 1, 1]
    assert model.cluster_to_category == {0: 5, 1: 9}


def test_seeded_fit_rejects_mixed_dimensions():
    labeled = [(np.array([0.0, 0.0]), 1), (np.array([1.0, 1.0]), 2)]
    with pytest.raises(DimensionMismatch):
        seeded_fit(labeled, unlabeled=[np.array([0.0, 0.0, 0.0])])


def test_seeded_fit_accepts_embedding_vectors():
    labeled = [
        (embed_hashed("just added try and catch"), 9),
        (embed_hashed("nothing much there is no difference"), 1),
    ]
    model, _ = seeded_fit(labeled)
    category, _ = predict_category(model, embed_hashed("added try catch handling"))
    assert category == 9


def test_predict_category_validates_dimension():
    model, _ = kmeans_fit(np.array(SIX_POINTS, dtype=float), k=2, seed=0)
    with pytest.raises(DimensionMismatch):
        predict_category(model, np.zeros(5))


def test_predict_category_returns_all_distances():
    model, _ = kmeans_fit(np.array(TEN_POINTS, dtype=float), k=3, seed=0)
    category, distances = predict_category(model, np.array([0.0, 0.0, 0.0]))
    assert len(distances) == 3
    assert category == model.cluster_to_category[int(np.argmin(distances))]


def test_model_json_roundtrip():
    model, _ = seeded_fit(
        [
            (np.array([0.0, 1.0]), 3),
            (np.array([4.0, 5.0]), 7),
        ],
        model_version="test-1",
    )
    model.metadata["note"] = "roundtrip"
    doc = model_to_json(model)
    assert doc["format"] == "patchtriage-cluster-model"
    assert doc["k"] == 2
    assert doc["d"] == 2
    back = model_from_json(doc)
    assert np.array_equal(back.centroids, model.centroids)
    assert back.cluster_to_category == model.cluster_to_category
    assert back.model_version == "test-1"
    assert back.metadata["note"] == "roundtrip"


def test_model_save_load_atomic(tmp_path):
    model, _ = kmeans_fit(np.array(SIX_POINTS, dtype=float), k=2, seed=0)
    path = tmp_path / "model.json"
    save_model(model, path)
    assert not (tmp_path / "model.json.tmp").exists()
    loaded = load_model(path)
    assert np.array_equal(loaded.centroids, model.centroids)
    assert loaded.cluster_to_category == model.cluster_to_category


def test_cluster_model_validation():
    with pytest.raises(ValueError):
        ClusterModel(
            centroids=np.zeros((2, 3)),
            cluster_to_category={0: 0, 1: 1},
            k=3,  # does not match centroid rows
            seed=None,
            iterations_run=0,
        ).validate()
    with pytest.raises(ValueError):
        ClusterModel(
            centroids=np.zeros((2, 3)),
            cluster_to_category={0: 0, 2: 1},  # gap in cluster indices
            k=2,
            seed=None,
            iterations_run=0,
        ).validate()

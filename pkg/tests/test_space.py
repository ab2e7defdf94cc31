import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clustercert.errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    EmptySet,
    IndexOutOfRange,
    InvalidParams,
    NegativeDistance,
    NonpositiveWeight,
    NonzeroDiagonal,
)
from clustercert.space import (
    EdgeClass,
    ScaleParams,
    classify_edge,
    diameter,
    dump_space_json,
    load_points_csv,
    load_space_json,
    pairwise_distances,
    points_to_csv_text,
    save_points_csv,
    set_distance,
    space_from_json_dict,
    space_from_points,
    space_to_json_dict,
    validate_space,
)

from .conftest import make_space, space_from_1d


class TestValidateSpace:
    def test_happy_path(self):
        s = make_space([[0, 1], [1, 0]], [2.0, 3.0])
        assert s.n == 2
        assert s.total_measure == 5.0
        assert not s.uniform_weights
        assert s.triangle_ok

    def test_default_weights_uniform(self):
        s = make_space([[0, 1], [1, 0]])
        assert s.uniform_weights
        assert s.total_measure == 2.0

    def test_arrays_frozen_and_copied(self):
        d = np.array([[0.0, 1.0], [1.0, 0.0]])
        s = validate_space(d)
        with pytest.raises(ValueError):
            s.dist[0, 1] = 5.0
        d[0, 1] = 5.0  # caller's array stays independent
        assert s.dist[0, 1] == 1.0

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            validate_space(np.zeros((2, 3)))

    def test_empty(self):
        with pytest.raises(DimensionMismatch):
            validate_space(np.zeros((0, 0)))

    def test_negative_entry(self):
        with pytest.raises(NegativeDistance) as ei:
            make_space([[0, -1], [-1, 0]])
        assert ei.value.details() == {"i": 0, "j": 1}

    def test_nan_entry(self):
        with pytest.raises(NegativeDistance):
            make_space([[0, np.nan], [np.nan, 0]])

    def test_nonzero_diagonal(self):
        with pytest.raises(NonzeroDiagonal) as ei:
            make_space([[0, 1], [1, 0.5]])
        assert ei.value.details()["i"] == 1

    def test_asymmetric(self):
        with pytest.raises(AsymmetricMatrix) as ei:
            make_space([[0, 1], [2, 0]])
        assert ei.value.details() == {"i": 0, "j": 1}

    def test_bad_weight(self):
        with pytest.raises(NonpositiveWeight) as ei:
            make_space([[0, 1], [1, 0]], [1.0, 0.0])
        assert ei.value.details()["i"] == 1

    def test_weight_shape(self):
        with pytest.raises(DimensionMismatch):
            make_space([[0, 1], [1, 0]], [1.0])

    def test_labels(self):
        s = validate_space([[0, 1], [1, 0]], labels=["a", "b"])
        assert s.labels == ("a", "b")
        with pytest.raises(DimensionMismatch):
            validate_space([[0, 1], [1, 0]], labels=["a"])

    def test_triangle_violation_flagged(self):
        # 0.5 + 0.5 < 3: a genuine semimetric, accepted but flagged
        s = make_space(
            [[0, 0.5, 0.5], [0.5, 0, 3.0], [0.5, 3.0, 0]]
        )
        assert not s.triangle_ok

    def test_error_codes_serializable(self):
        with pytest.raises(NegativeDistance) as ei:
            make_space([[0, -1], [-1, 0]])
        d = ei.value.to_dict()
        assert d["type"] == "negative_distance"
        json.dumps(d)


class TestScaleParams:
    def test_medium_hi(self):
        p = ScaleParams(r=2.0, k=3)
        assert p.medium_hi == 6.0
        assert ScaleParams(r=1.0, k=2, medium_multiplier=4.0).medium_hi == 4.0

    @pytest.mark.parametrize(
        "kw",
        [
            dict(r=0.0, k=2),
            dict(r=-1.0, k=2),
            dict(r=float("inf"), k=2),
            dict(r=1.0, k=1),
            dict(r=1.0, k=2.5),
            dict(r=1.0, k=2, medium_multiplier=1.0),
            dict(r=1.0, k=2, medium_multiplier=0.5),
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(InvalidParams):
            ScaleParams(**kw)


class TestClassifyEdge:
    def test_boundaries_closed_on_the_left_class(self):
        p = ScaleParams(r=1.0, k=2)
        assert classify_edge(0.0, p) is EdgeClass.SHORT
        assert classify_edge(1.0, p) is EdgeClass.SHORT
        assert classify_edge(1.0 + 1e-12, p) is EdgeClass.MEDIUM
        assert classify_edge(3.0, p) is EdgeClass.MEDIUM
        assert classify_edge(3.0 + 1e-12, p) is EdgeClass.LONG

    def test_tol_shifts_both_edges(self):
        p = ScaleParams(r=1.0, k=2)
        assert classify_edge(1.05, p, tol=0.1) is EdgeClass.SHORT
        assert classify_edge(3.05, p, tol=0.1) is EdgeClass.MEDIUM
        assert classify_edge(3.15, p, tol=0.1) is EdgeClass.LONG

    def test_negative_rejected(self):
        with pytest.raises(InvalidParams):
            classify_edge(-0.1, ScaleParams(r=1.0, k=2))

    @given(
        d=st.floats(min_value=0, max_value=1e6),
        r=st.floats(min_value=1e-6, max_value=1e3),
        m=st.floats(min_value=1.0 + 1e-9, max_value=10.0, exclude_min=True),
    )
    def test_exactly_one_class(self, d, r, m):
        p = ScaleParams(r=r, k=2, medium_multiplier=m)
        c = classify_edge(d, p)
        want = (
            EdgeClass.SHORT if d <= r else EdgeClass.MEDIUM if d <= m * r else EdgeClass.LONG
        )
        assert c is want


class TestQueries:
    def test_diameter(self, tiny_space):
        assert diameter(tiny_space, [0, 1]) == 0.5
        assert diameter(tiny_space, [0, 3]) == 10.5
        assert diameter(tiny_space, [2]) == 0.0
        assert diameter(tiny_space, []) == 0.0

    def test_diameter_index_range(self, tiny_space):
        with pytest.raises(IndexOutOfRange):
            diameter(tiny_space, [0, 4])
        with pytest.raises(IndexOutOfRange):
            diameter(tiny_space, [-1])

    def test_set_distance(self, tiny_space):
        assert set_distance(tiny_space, [0, 1], [2, 3]) == 9.5
        assert set_distance(tiny_space, [0], [1]) == 0.5

    def test_set_distance_errors(self, tiny_space):
        with pytest.raises(EmptySet):
            set_distance(tiny_space, [], [0])
        with pytest.raises(EmptySet):
            set_distance(tiny_space, [0], [])
        with pytest.raises(InvalidParams):
            set_distance(tiny_space, [0, 1], [1, 2])


class TestSerialization:
    def test_json_round_trip_full(self, tiny_space):
        payload = space_to_json_dict(tiny_space)
        assert "weights" not in payload  # uniform 1.0 omitted
        back = space_from_json_dict(payload)
        np.testing.assert_array_equal(back.dist, tiny_space.dist)

    def test_json_round_trip_condensed_weighted(self):
        s = make_space([[0, 1, 2], [1, 0, 3], [2, 3, 0]], [1.0, 2.0, 3.0])
        payload = space_to_json_dict(s, condensed=True)
        assert payload["distances"]["condensed"] == [1.0, 2.0, 3.0]
        back = space_from_json_dict(payload)
        np.testing.assert_array_equal(back.dist, s.dist)
        np.testing.assert_array_equal(back.weights, s.weights)

    def test_condensed_length_checked(self):
        with pytest.raises(DimensionMismatch):
            space_from_json_dict({"n": 3, "distances": {"condensed": [1.0]}})

    def test_document_shape_errors(self):
        with pytest.raises(DimensionMismatch):
            space_from_json_dict([1, 2])
        with pytest.raises(DimensionMismatch):
            space_from_json_dict({"distances": [[0]]})
        with pytest.raises(DimensionMismatch):
            space_from_json_dict({"n": 2, "distances": [[0, 1]]})
        with pytest.raises(DimensionMismatch):
            space_from_json_dict({"n": 2})

    def test_file_round_trip(self, tmp_path, tiny_space):
        p = tmp_path / "s.json"
        dump_space_json(tiny_space, str(p), condensed=True)
        back = load_space_json(str(p))
        np.testing.assert_array_equal(back.dist, tiny_space.dist)

    @given(
        xs=st.lists(st.floats(min_value=-100, max_value=100), min_size=2, max_size=8)
    )
    @settings(max_examples=50)
    def test_condensed_round_trip_random(self, xs):
        s = space_from_1d(xs)
        back = space_from_json_dict(space_to_json_dict(s, condensed=True))
        np.testing.assert_array_equal(back.dist, s.dist)


class TestPointClouds:
    def test_metrics_match_manual(self):
        pts = np.array([[0.0, 0.0], [3.0, 4.0]])
        assert pairwise_distances(pts, "euclidean")[0, 1] == 5.0
        assert pairwise_distances(pts, "manhattan")[0, 1] == 7.0
        assert pairwise_distances(pts, "chebyshev")[0, 1] == 4.0

    def test_unknown_metric(self):
        with pytest.raises(InvalidParams):
            pairwise_distances(np.zeros((2, 2)), "cosine")

    def test_exact_symmetry(self):
        rng = np.random.default_rng(0)
        pts = rng.random((40, 3))
        for metric in ("euclidean", "manhattan", "chebyshev"):
            d = pairwise_distances(pts, metric)
            assert (d == d.T).all()
            assert (np.diagonal(d) == 0).all()

    def test_space_from_points_is_metric(self):
        rng = np.random.default_rng(1)
        s = space_from_points(rng.random((15, 2)))
        assert s.triangle_ok

    def test_csv_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        pts = rng.standard_normal((7, 3))
        p = tmp_path / "pts.csv"
        save_points_csv(pts, str(p))
        back = load_points_csv(str(p))
        np.testing.assert_array_equal(back, pts)  # repr round-trips exactly

    def test_csv_error_reports_line(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("x0,x1\n1.0,2.0\n1.0,oops\n")
        with pytest.raises(DimensionMismatch) as ei:
            load_points_csv(str(p))
        assert "row 3" in str(ei.value)

    def test_csv_ragged_row(self, tmp_path):
        p = tmp_path / "ragged.csv"
        p.write_text("x0,x1\n1.0,2.0\n3.0\n")
        with pytest.raises(DimensionMismatch) as ei:
            load_points_csv(str(p))
        assert "row 3" in str(ei.value)

    def test_csv_needs_rows(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("x0,x1\n")
        with pytest.raises(DimensionMismatch):
            load_points_csv(str(p))

    def test_csv_text_header(self):
        text = points_to_csv_text(np.zeros((1, 3)))
        assert text.splitlines()[0] == "x0,x1,x2"

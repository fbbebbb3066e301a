from decimal import Decimal
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from qdelaunay import PointSet, QuadraticForm, circumball, delaunay, full_decomposition, inverse_voronoi, voronoi
from qdelaunay import io
from qdelaunay.edgeweights import augment_to_sphere, weights_from_delaunay
from qdelaunay.proximity import mst
from qdelaunay.qform import InputError

from sampling import FORMS, sets

M, DG = FORMS["minkowski"], FORMS["degenerate"]


def roundtrip(doc):
    return io.loads(io.dumps(doc))


@given(st.fractions(max_denominator=1000))
def test_rational_strings_roundtrip(x):
    assert io.parse_rat(io.rat(x)) == x


def test_rational_formatting():
    assert io.rat(F(1, 4)) == "0.25"
    assert io.rat(F(1, 3)) == "1/3"
    assert io.parse_rat(Decimal("0.1")) == F(1, 10)
    with pytest.raises(InputError):
        io.parse_rat("x/2")
    with pytest.raises(InputError):
        io.parse_rat(True)


@pytest.mark.parametrize("form", ["euclidean", "minkowski", "degenerate"])
def test_form_and_points_roundtrip(form):
    Q = FORMS[form]
    assert io.form_from_json(roundtrip(io.form_to_json(Q))) == Q
    for X in sets(form, 3, seed=71):
        assert io.pointset_from_json(roundtrip(io.pointset_to_json(X))) == X


def test_form_presets_and_diag():
    assert io.form_from_json("minkowski") == M
    assert io.form_from_json({"diag": [1, 0]}) == DG
    with pytest.raises(InputError):
        io.form_from_json("hyperbolic")
    with pytest.raises(InputError):
        io.form_from_json({"dim": 3, "matrix": [[1, 0], [0, 1]]})


def test_ball_roundtrip():
    b = circumball(M, [(0, 0), (2, 0), (1, F(1, 2))])
    assert io.ball_from_json(roundtrip(io.ball_to_json(b))) == b


@pytest.mark.parametrize("form", ["euclidean", "minkowski", "degenerate"])
def test_complex_roundtrip(form):
    Q = FORMS[form]
    for X in sets(form, 3, seed=72):
        for c in (delaunay(Q, X), full_decomposition(Q, X)):
            back = io.complex_from_json(roundtrip(io.complex_to_json(c)))
            assert back.cells == c.cells and back.balls == c.balls and back.kind == c.kind


def test_tampered_balls_rejected():
    X = PointSet.from_coords([(0, 0), (2, 0), (1, F(1, 2))])
    doc = io.complex_to_json(delaunay(M, X))
    doc["balls"][0]["dprime"] = "1"
    with pytest.raises(InputError):
        io.complex_from_json(doc)


@pytest.mark.parametrize("form", ["euclidean", "minkowski"])
def test_voronoi_roundtrip(form):
    Q = FORMS[form]
    for X in sets(form, 3, seed=73):
        for inv in (False, True):
            cells = (inverse_voronoi if inv else voronoi)(Q, X)
            assert io.voronoi_from_json(roundtrip(io.voronoi_to_json(Q, X, cells, inv))) == cells


def test_weighted_graph_roundtrip():
    for X in sets("minkowski", 3, seed=74):
        g = weights_from_delaunay(M, X)
        for h in (g, augment_to_sphere(g)):
            back = io.weighted_graph_from_json(roundtrip(io.weighted_graph_to_json(h)))
            assert back.weights == h.weights and back.faces == h.faces and back.spherical == h.spherical


def test_proximity_graph_roundtrip():
    X = sets("degenerate", 1, seed=75)[0]
    g = mst(DG, X)
    assert io.proximity_graph_from_json(roundtrip(io.proximity_graph_to_json(g)), X.labels) == g


def test_malformed_documents():
    with pytest.raises(InputError):
        io.loads("{not json")
    with pytest.raises(InputError):
        io.pointset_from_json({"pts": []})
    with pytest.raises(InputError):
        io.pointset_from_json({"dim": 3, "points": [[0, 0]]})
    with pytest.raises(InputError):
        io.weighted_graph_from_json({"vertices": ["a", "a"], "edges": [], "faces": []})


def test_documents_carry_schema():
    X = PointSet.from_coords([(0, 0), (2, 0), (1, F(1, 2))])
    assert io.complex_to_json(delaunay(M, X))["schema"] == io.SCHEMA
    assert io.pointset_to_json(X)["schema"] == io.SCHEMA
    assert QuadraticForm.euclidean() == io.load_form("euclidean")

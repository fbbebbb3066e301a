from fractions import Fraction as F

import pytest

from qdelaunay import (
    PointSet, QuadraticForm, brute_force_delaunay, delaunay, full_decomposition, verify,
)
from qdelaunay.delaunay import make_complex
from qdelaunay.qform import InputError, PositionError

from sampling import sets

M = QuadraticForm.minkowski()
E = QuadraticForm.euclidean()
DG = QuadraticForm.degenerate()

XD = PointSet.from_coords([(0, 0), (1, 1), (2, 0), (3, 2)])
SQUARE = PointSet.from_coords([(0, 0), (2, 0), (0, 2), (2, F(21, 10))])


def hull_edges(c):
    count = {}
    for cell in c.cells:
        for e in ((cell[0], cell[1]), (cell[0], cell[2]), (cell[1], cell[2])):
            count[e] = count.get(e, 0) + 1
    return {e for e, k in count.items() if k == 1}


def test_single_minkowski_triangle():
    c = delaunay(M, PointSet.from_coords([(0, 0), (2, 0), (1, F(1, 2))]))
    assert c.cells == ((0, 1, 2),)
    assert c.balls[0].phi == (2, F(-5, 2)) and c.balls[0].dprime == 0


def test_degenerate_example_cells():
    assert delaunay(DG, XD).cells == ((0, 1, 2), (1, 2, 3))
    assert full_decomposition(DG, XD).cells == ((0, 1, 3), (0, 2, 3))


def test_perturbed_square_matches_euclidean_oracle():
    # (2, 21/10) pushes the top right corner outside the circle of the other three
    c = delaunay(E, SQUARE)
    assert c.cells == ((0, 1, 2), (1, 2, 3))
    assert c.cells == brute_force_delaunay(E, SQUARE).cells


def test_three_points_full_equals_delaunay():
    X = PointSet.from_coords([(0, 0), (2, 0), (1, F(1, 2))])
    assert full_decomposition(M, X).cells == delaunay(M, X).cells


@pytest.mark.parametrize("form", ["euclidean", "minkowski", "degenerate"])
def test_full_and_delaunay_share_hull_edges(form):
    Q = {"euclidean": E, "minkowski": M, "degenerate": DG}[form]
    for X in sets(form, 8, seed=11):
        assert hull_edges(delaunay(Q, X)) == hull_edges(full_decomposition(Q, X))


@pytest.mark.parametrize("form", ["euclidean", "minkowski", "degenerate"])
def test_random_sets_agree_with_brute_force(form):
    Q = {"euclidean": E, "minkowski": M, "degenerate": DG}[form]
    for X in sets(form, 10, seed=5):
        c = delaunay(Q, X)
        assert c.cells == brute_force_delaunay(Q, X).cells
        assert verify(c).ok
        f = full_decomposition(Q, X)
        assert f.cells == brute_force_delaunay(Q, X, kind="full").cells
        assert verify(f).ok


def test_flipped_diagonal_fails_with_inside_witness():
    flipped = make_complex(DG, XD, [(0, 1, 3), (0, 2, 3)])
    report = verify(flipped)
    assert not report.ok
    assert any(v["type"] == "point_inside" for v in report.violations)


def test_missing_cell_fails_coverage():
    gap = make_complex(DG, XD, [(0, 1, 2)])
    kinds = {v["type"] for v in verify(gap).violations}
    assert "coverage" in kinds


def test_position_errors():
    with pytest.raises(PositionError):
        delaunay(M, PointSet.from_coords([(0, 0), (1, 1), (3, 0)]))
    with pytest.raises(PositionError):
        delaunay(E, PointSet.from_coords([(0, 0), (1, 0), (0, 1), (1, 1)]))
    with pytest.raises(InputError):
        delaunay(E, PointSet.from_coords([(0, 0), (1, 0)]))


def test_three_dimensional_minkowski():
    Q = QuadraticForm.diag([1, 1, -1])
    X = PointSet.from_coords([(0, 0, 0), (2, 0, 0), (0, 2, 0), (2, 2, F(1, 3)), (1, 1, F(-1, 5))])
    c = delaunay(Q, X)
    assert c.cells == brute_force_delaunay(Q, X).cells
    assert verify(c).ok

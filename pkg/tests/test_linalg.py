from sympy import QQ

from src.linalg import (
    CoordinateIndex,
    determinant,
    in_span,
    independent_subset,
    nullspace,
    rank,
    same_span,
    spans_intersect,
)


def test_coordinate_index_is_stable():
    coords = CoordinateIndex(["a", "b"])
    assert coords.index("b") == 1
    assert coords.index("c") == 2
    assert len(coords) == 3


def test_rank_and_independent_subset():
    vectors = [{"a": 1, "b": 2}, {"a": 2, "b": 4}, {"c": QQ(1, 3)}]
    assert rank(vectors) == 2
    assert independent_subset(vectors) == [0, 2]
    assert independent_subset([{}, {}]) == []


def test_nullspace():
    rows = [{0: 1, 1: 1}, {1: 1, 2: -1}]
    basis = nullspace(rows, 3)
    assert len(basis) == 1
    v = basis[0]
    assert v[0] + v[1] == 0 and v[1] - v[2] == 0
    assert len(nullspace([{}], 2)) == 2


def test_span_comparisons():
    first = [{"x": 1, "y": 1}, {"x": 1, "y": -1}]
    second = [{"x": 1}, {"y": 5}]
    assert same_span(first, second)
    assert not same_span(first, [{"x": 1}])
    assert in_span({"x": 3, "y": 7}, first)
    assert not in_span({"z": 1}, first)
    assert spans_intersect([{"x": 1, "y": 1}], second)
    assert not spans_intersect([{"z": 1}], second)


def test_polynomial_determinant(ring3):
    x0, x1, x2 = ring3.gens
    assert determinant([[x0, x1], [x1, x2]], ring3) == x0 * x2 - x1 ** 2
    assert determinant([[x0, 0, 0], [x2, x1, 0], [x1, x0, x2]], ring3) == x0 * x1 * x2
    assert determinant([[x0, x1], [2 * x0, 2 * x1]], ring3) == 0
    vandermonde = [[ring3.one, x, x ** 2] for x in ring3.gens]
    assert determinant(vandermonde, ring3) == (x1 - x0) * (x2 - x0) * (x2 - x1)

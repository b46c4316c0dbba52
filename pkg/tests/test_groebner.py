import pytest
from sympy import QQ

from src.errors import NotHomogeneousError, RingMismatchError
from src.groebner import (
    Ideal,
    graded_piece_dim,
    homogeneous_basis,
    ideal_intersect,
    ideal_quotient,
    ideal_sum,
    is_groebner_basis,
    minors_ideal,
    normal_form,
    saturate,
    variable_saturation,
)
from src.linalg import rank
from src.polyring import MonomialOrder, monomials_of_degree, parse_poly


def test_twisted_cubic_basis(twisted_cubic):
    basis = twisted_cubic.groebner_basis
    assert len(basis) == 3
    assert is_groebner_basis(basis)
    assert all(g.LC == 1 for g in basis)


def test_graded_pieces(twisted_cubic):
    assert [graded_piece_dim(twisted_cubic, d) for d in (0, 1, 2, 3)] == [0, 0, 3, 10]
    assert len(homogeneous_basis(twisted_cubic, 2)) == 3
    assert all(b in twisted_cubic for b in homogeneous_basis(twisted_cubic, 3))


def test_membership_and_normal_form(twisted_cubic, ring4):
    x0, x1, x2, x3 = ring4.gens
    assert (x1 * x3 - x2 ** 2) * x0 in twisted_cubic
    assert x0 * x3 not in twisted_cubic
    assert normal_form(x0 * x3, twisted_cubic) == x0 * x3


def test_minimal_generators_drop_redundant(ring3):
    x0, x1, x2 = ring3.gens
    I = Ideal([x0 * x1, x0 * x1 * x2, x1 ** 2, x0 * x1 + x1 ** 2], ring3)
    assert len(I.minimal_generators) == 2


def test_order_does_not_change_ideal(twisted_cubic):
    lex_ideal = twisted_cubic.with_order(MonomialOrder("lex"))
    assert is_groebner_basis(lex_ideal.groebner_basis)
    assert all(g in twisted_cubic for g in lex_ideal.groebner_basis)


def test_intersection(ring3):
    x0, x1, _ = ring3.gens
    I = ideal_intersect(Ideal([x0], ring3), Ideal([x1], ring3))
    assert I == Ideal([x0 * x1], ring3)


def test_quotient_and_saturation(ring3):
    x0, x1, x2 = ring3.gens
    I = Ideal([x0 * x1, x0 * x2, x0 ** 2], ring3)
    assert ideal_quotient(I, Ideal([x1], ring3)) == Ideal([x0], ring3)
    assert saturate(I) == Ideal([x0], ring3)
    assert saturate(Ideal(list(ring3.gens), ring3)).is_unit()


def test_sum_and_unit(ring3):
    x0, x1, x2 = ring3.gens
    J = ideal_sum(Ideal([x0, x1], ring3), Ideal([x2], ring3))
    assert J == Ideal.irrelevant(ring3)
    assert not J.is_unit()
    assert Ideal.unit(ring3).is_unit()
    assert Ideal.zero(ring3).is_zero()


def test_minors(ring3):
    x0, x1, x2 = ring3.gens
    I = minors_ideal([[x0, x1], [x1, x2]], 2, ring3)
    assert I == Ideal([x0 * x2 - x1 ** 2], ring3)


def test_twisted_cubic_is_minors(twisted_cubic, ring4):
    x0, x1, x2, x3 = ring4.gens
    assert minors_ideal([[x0, x1, x2], [x1, x2, x3]], 2, ring4) == twisted_cubic


def test_rejects_inhomogeneous(ring3):
    with pytest.raises(NotHomogeneousError):
        Ideal([parse_poly("x_0^2 + x_1", ring3)], ring3)


def test_ring_mismatch(ring3, ring4):
    with pytest.raises(RingMismatchError):
        ideal_sum(Ideal.irrelevant(ring3), Ideal.irrelevant(ring4))


def test_buchberger_on_random_quadrics(ring3, random_poly, rng):
    for _ in range(200):
        count = int(rng.integers(2, 4))
        generators = [random_poly(ring3, 2, rng, terms=3, bound=3) for _ in range(count)]
        I = Ideal(generators, ring3)
        basis = I.groebner_basis
        assert is_groebner_basis(basis)
        assert all(g in I for g in I.generators)


def test_intersection_of_three_points(ring3, three_points):
    x0, x1, x2 = ring3.gens
    points = [Ideal([x1, x2], ring3), Ideal([x0, x2], ring3), Ideal([x0, x1], ring3)]
    I = ideal_intersect(ideal_intersect(points[0], points[1]), points[2])
    assert I == three_points
    assert sorted(I.minimal_generators, key=str) == sorted([x0 * x1, x0 * x2, x1 * x2], key=str)


def test_intersection_is_commutative_and_associative(ring3, random_poly, rng):
    for _ in range(30):
        A, B, C = (Ideal([random_poly(ring3, int(rng.integers(1, 3)), rng, bound=3) or ring3.gens[k]], ring3)
                   for k in range(3))
        assert ideal_intersect(A, B) == ideal_intersect(B, A)
        assert ideal_intersect(ideal_intersect(A, B), C) == ideal_intersect(A, ideal_intersect(B, C))


def test_saturation_by_variables(ring3):
    x0, x1, x2 = ring3.gens
    I = Ideal([x0 * x1, x0 * x2, x0 ** 2], ring3)
    assert variable_saturation(I, 0).is_unit()
    assert variable_saturation(I, 1) == Ideal([x0], ring3)
    assert variable_saturation(I, 2) == Ideal([x0], ring3)


def test_saturation_is_idempotent(ring3, twisted_cubic, three_points, random_poly, rng):
    x0 = ring3.gens[0]
    ideals = [twisted_cubic, three_points, Ideal([g * x0 for g in three_points.generators], ring3)]
    for _ in range(15):
        ideals.append(Ideal([random_poly(ring3, 2, rng, bound=3) for _ in range(2)], ring3))
    for I in ideals:
        S = saturate(I)
        assert saturate(S) == S
        assert saturate(I, Ideal.irrelevant(I.ring)) == S
        assert all(g in S for g in I.generators)


def test_graded_pieces_match_spanning_products(twisted_cubic, three_points, fat_point, random_poly, rng, ring3):
    ideals = [twisted_cubic, three_points, fat_point]
    for _ in range(10):
        ideals.append(Ideal([random_poly(ring3, int(rng.integers(1, 4)), rng, bound=3) for _ in range(2)], ring3))
    for I in ideals:
        for d in range(5):
            products = [I.ring.term_new(m, QQ(1)) * g for g in I.generators
                        for m in monomials_of_degree(I.nvars, d - sum(g.leading_expv()))]
            assert graded_piece_dim(I, d) == rank([dict(f.iterterms()) for f in products])

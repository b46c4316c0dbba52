import os

import pytest

from config import DATA_DIR
from src.data_io import read_form
from src.dist import (
    Distribution,
    SheafPresentation,
    chern_character,
    chern_classes,
    chern_json,
    conormal_sheaf,
    cw_complex,
    double_dual,
    euler_characteristic_check,
    instanton_certificates,
    integrability_check,
    lds_check,
    normal_sheaf,
    random_disjoint_lines,
    random_lines,
    random_vanishing_form,
    sheaf_cohomology_dim,
    sing_scheme,
    tangent_homology,
    tangent_sheaf,
    vector_field_singular_scheme,
)
from src.errors import (
    EmptyFormSpaceError,
    NotADistributionError,
    NotDescendingError,
    NotLDSError,
    UnsupportedDimensionError,
)
from src.forms import PForm, VectorField, nform_from_vfield, parse_form
from src.groebner import Ideal, graded_piece_dim, ideal_sum, saturate
from src.resolution import format_hilbert, hilbert_polynomial, scheme_dimension
from src.scenarios import THREE_POINTS_FORMS
from src.syzforms import form_space, same_form_span
from src.utils import binomial


@pytest.fixture
def diagonal_field_form(ring4):
    x0, x1, x2, x3 = ring4.gens
    v = VectorField(ring4, [x0, 2 * x1, 3 * x2, 4 * x3])
    return v, nform_from_vfield(v)


@pytest.fixture
def contact_form(ring4):
    return parse_form("x_0*dx_1 - x_1*dx_0 + x_2*dx_3 - x_3*dx_2", ring4)


def test_distribution_properties(contact_form):
    D = Distribution(contact_form)
    assert (D.n, D.p, D.d) == (3, 1, 0)
    assert D.is_lds
    assert not D.is_integrable


def test_rejects_forms_that_do_not_descend(ring4):
    with pytest.raises(NotDescendingError):
        Distribution(PForm.dx(ring4, 0))
    with pytest.raises(NotDescendingError):
        lds_check(PForm.dx(ring4, 0, 1))


def test_functions_are_not_distributions(ring4):
    f = PForm.from_poly(ring4.gens[0])
    assert lds_check(f)
    assert integrability_check(f)
    with pytest.raises(NotADistributionError):
        cw_complex(f)
    with pytest.raises(NotADistributionError):
        Distribution(f)


def test_one_forms_on_the_plane(ring3):
    omega = parse_form(THREE_POINTS_FORMS[0], ring3)
    assert lds_check(omega)
    assert integrability_check(omega)
    x0, x1, x2 = ring3.gens
    assert sing_scheme(omega) == Ideal([x0 * x1, x0 * x2], ring3)


def test_vector_field_forms(diagonal_field_form):
    v, omega = diagonal_field_form
    assert lds_check(omega)
    assert integrability_check(omega)
    sing = sing_scheme(omega)
    assert sing == vector_field_singular_scheme(v)
    assert scheme_dimension(sing) == 0


def test_complex_of_the_form(diagonal_field_form):
    _, omega = diagonal_field_form
    A, B = cw_complex(omega)
    assert B.compose(A).is_zero()
    assert B.shape == (4, 4)


def test_tangent_and_normal_ranks(diagonal_field_form):
    _, omega = diagonal_field_form
    tangent = tangent_sheaf(omega)
    normal = normal_sheaf(omega)
    assert tangent.rank == 1
    assert normal.rank == 2
    assert tangent.rank + normal.rank == 3
    assert conormal_sheaf(omega).rank == 2


def test_non_lds_form():
    omega = read_form(os.path.join(DATA_DIR, "non_lds.form"))
    assert not lds_check(omega)
    with pytest.raises(NotLDSError):
        integrability_check(omega)
    with pytest.raises(NotLDSError):
        tangent_sheaf(omega)
    assert tangent_homology(omega).is_zero()


@pytest.mark.parametrize("a", range(-5, 6))
def test_chern_classes_of_line_bundles(ring4, a):
    F = SheafPresentation.free_sheaf(ring4, a)
    assert F.rank == 1
    assert chern_classes(F) == (a, 0, 0)
    assert chern_classes(F.dual()) == (-a, 0, 0)


def test_chern_classes_of_tangent_bundle(ring4):
    T = SheafPresentation.tangent_bundle(ring4)
    assert T.rank == 3
    assert chern_classes(T) == (4, 6, 4)
    assert chern_classes(T.twist(-1)) == (1, 1, 1)
    assert chern_json(T)["c"] == [4, 6, 4]


def test_chern_character_is_additive(ring4):
    first = SheafPresentation.free_sheaf(ring4, 1)
    second = SheafPresentation.free_sheaf(ring4, -2, rank=2)
    total = first + second
    assert total.rank == 3
    expected = tuple(a + b for a, b in zip(chern_character(first), chern_character(second)))
    assert chern_character(total) == expected
    assert chern_classes(first + SheafPresentation.free_sheaf(ring4, 1)) == (2, 1, 0)


def test_chern_classes_need_three_space(ring3):
    with pytest.raises(UnsupportedDimensionError):
        chern_classes(SheafPresentation.free_sheaf(ring3, 0))


def test_cohomology_of_line_bundles(ring4):
    O = SheafPresentation.free_sheaf(ring4, 0)
    assert sheaf_cohomology_dim(O, 0, 1) == 4
    assert sheaf_cohomology_dim(SheafPresentation.free_sheaf(ring4, 1), 0, 0) == 4
    assert sheaf_cohomology_dim(O, 3, -4) == 1
    assert sheaf_cohomology_dim(O, 3, -5) == 4
    assert all(sheaf_cohomology_dim(O, i, d) == 0 for i in (1, 2) for d in range(-6, 3))
    assert sheaf_cohomology_dim(O, 4, 0) == 0


def test_cohomology_of_tangent_bundle(ring4):
    T = SheafPresentation.tangent_bundle(ring4)
    assert sheaf_cohomology_dim(T, 0, -1) == 4
    assert sheaf_cohomology_dim(T, 0, 0) == 15
    assert sheaf_cohomology_dim(T, 2, -4) == 1
    for d in range(-5, 2):
        assert euler_characteristic_check(T, d)


def test_double_dual_of_line_bundle(ring4):
    F = double_dual(SheafPresentation.free_sheaf(ring4, 2))
    assert chern_classes(F) == (2, 0, 0)


def test_trivial_bundle_certificates(ring4):
    F = SheafPresentation.free_sheaf(ring4, 0, rank=2)
    certificates = instanton_certificates(F)
    assert certificates["ok"]
    assert certificates["c"] == [0, 0, 0]


def test_random_lines_are_disjoint():
    lines = random_lines(3, seed=11)
    assert len(lines) == 3
    for k, L in enumerate(lines):
        assert scheme_dimension(L) == 1
        for M in lines[k + 1:]:
            assert saturate(ideal_sum(L, M)).is_unit()
    assert [L.generators for L in random_lines(3, seed=11)] == [L.generators for L in lines]


def test_union_of_two_lines():
    I = random_disjoint_lines(2, seed=5)
    assert scheme_dimension(I) == 1
    assert format_hilbert(hilbert_polynomial(I)) == "1/6*t^3 + t^2 - 1/6*t - 1"
    assert [binomial(d + 3, 3) - graded_piece_dim(I, d) for d in range(3, 6)] == [8, 10, 12]


def test_random_vanishing_form(three_points, ring3):
    omega = random_vanishing_form(1, 1, three_points, seed=3)
    expected = [parse_form(text, ring3) for text in THREE_POINTS_FORMS]
    assert omega
    assert same_form_span(expected + [omega], expected)
    assert random_vanishing_form(1, 1, three_points, seed=3) == omega
    assert form_space(three_points, 1, 1).contains(omega)


def test_empty_form_space(twisted_cubic):
    with pytest.raises(EmptyFormSpaceError):
        random_vanishing_form(1, 0, twisted_cubic)


def test_singular_set_has_codimension_two(contact_form, diagonal_field_form, ring3):
    omega_1, omega_2 = (parse_form(text, ring3) for text in THREE_POINTS_FORMS)
    forms = [contact_form, diagonal_field_form[1], omega_1 + omega_2.scale(2)]
    for omega in forms:
        assert Distribution(omega).is_lds
        assert scheme_dimension(sing_scheme(omega)) <= omega.n - 2

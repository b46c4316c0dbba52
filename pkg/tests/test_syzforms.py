import pytest
from sympy import QQ

from src.errors import MixedDegreeError, ShapeMismatchError, ShortcutNotApplicableError, UndefinedDeltaError
from src.forms import PForm, descends, parse_form
from src.groebner import Ideal
from src.polyring import parse_poly, polynomial_ring
from src.resolution import free_resolution
from src.scenarios import FAT_POINT_FAMILY, THREE_POINTS_FORMS, independence_checks
from src.syzforms import (
    RADIAL_PART,
    XI_IMAGE,
    brute_force_space,
    expected_dimension,
    form_space,
    radial_decomposition_check,
    radial_part_basis,
    same_form_span,
    strand_scalar,
    xi,
    xi_images_independent,
    xi_linear_strand,
    xi_radial_disjoint,
)


def vanishes_on(omega, I):
    return descends(omega) and all(c in I for c in omega.coefficients())


def test_three_points_forms(three_points, ring3):
    space = form_space(three_points, 1, 1)
    assert space.dim == 2
    assert space.split == {"tor": 2, "radial": 0}
    expected = [parse_form(text, ring3) for text in THREE_POINTS_FORMS]
    assert same_form_span(space.basis, expected)
    assert all(space.contains(f) for f in expected)
    assert not space.contains(PForm.dx(ring3, 0).scale(ring3.gens[1] ** 2))
    assert space.to_json()["dim"] == 2


def test_xi_images_vanish(three_points):
    for k in range(2):
        t = [QQ(int(i == k)) for i in range(2)]
        assert vanishes_on(xi(three_points, 1, t), three_points)


def test_zero_vector_gives_zero_form(three_points):
    omega = xi(three_points, 1, [0, 0])
    assert not omega
    assert omega.p == 1


def test_xi_rejects_bad_vectors(three_points):
    with pytest.raises(ShapeMismatchError):
        xi(three_points, 1, [1, 0, 0])
    ring = polynomial_ring(2)
    I = Ideal([parse_poly("x_0^2", ring), parse_poly("x_1^3", ring)], ring)
    with pytest.raises(MixedDegreeError):
        xi(I, 0, [1, 1])


def test_twisted_cubic_dimensions(twisted_cubic):
    assert form_space(twisted_cubic, 1, 1).dim == 2
    assert form_space(twisted_cubic, 1, 0).dim == 0
    assert form_space(twisted_cubic, 0, 1).dim == 3


def test_fat_point_family(fat_point, ring4):
    space = form_space(fat_point, 1, 1)
    assert space.dim == 5
    assert space.split["radial"] == 0
    family = [PForm(ring4, 1, {(k,): parse_poly(c, ring4) for k, c in enumerate(coeffs)})
              for coeffs in FAT_POINT_FAMILY]
    assert same_form_span(space.basis, family)
    for omega in space.basis:
        assert all(3 not in idx for idx in omega.terms)
        assert all(m[3] == 0 for f in omega.coefficients() for m in f.itermonoms())


@pytest.mark.parametrize("ideal_name, p_range, d_range", [
    ("three_points", range(0, 3), range(0, 4)),
    ("twisted_cubic", range(0, 4), range(0, 4)),
    ("fat_point", range(0, 3), range(0, 3)),
])
def test_matches_linear_system(request, ideal_name, p_range, d_range):
    I = request.getfixturevalue(ideal_name)
    for p in p_range:
        for d in d_range:
            space = form_space(I, p, d)
            oracle = brute_force_space(I, p, d)
            assert space.dim == oracle.dim == expected_dimension(I, p, d)
            assert same_form_span(space.basis, oracle.basis)
            assert xi_images_independent(space)
            assert xi_radial_disjoint(space)
            assert all(vanishes_on(f, I) for f in space.basis)


def test_radial_part(twisted_cubic):
    assert radial_part_basis(twisted_cubic, 1, 1) == []
    radial = radial_part_basis(twisted_cubic, 1, 2)
    assert radial
    space = form_space(twisted_cubic, 1, 2)
    assert space.split["tor"] == 0
    assert space.part(RADIAL_PART) == radial
    assert len(space.part(XI_IMAGE)) == space.split["tor"]


def test_form_space_range(twisted_cubic):
    with pytest.raises(ValueError):
        form_space(twisted_cubic, 4, 1)
    with pytest.raises(ValueError):
        form_space(twisted_cubic, -1, 1)


def test_linear_strand(twisted_cubic):
    strand = [xi_linear_strand(twisted_cubic, 1, 1, [QQ(int(i == k)) for i in range(2)]) for k in range(2)]
    assert same_form_span(strand, form_space(twisted_cubic, 1, 1).basis)
    assert not xi_linear_strand(twisted_cubic, 1, 1, [0, 0])
    with pytest.raises(ShortcutNotApplicableError):
        xi_linear_strand(twisted_cubic, 1, 2, [1, 0])
    with pytest.raises(ShapeMismatchError):
        xi_linear_strand(twisted_cubic, 1, 1, [1, 0, 0])


def test_strand_scalar(twisted_cubic, three_points, quartic_curve):
    assert strand_scalar(twisted_cubic, 1, 1) == 1
    assert strand_scalar(three_points, 1, 1) == 1
    assert strand_scalar(twisted_cubic, 0, 1) == 1
    assert strand_scalar(quartic_curve, 2, 1) == QQ(1, 2)


def test_quartic_curve_second_forms(quartic_curve):
    space = form_space(quartic_curve, 2, 1)
    assert space.split == {"tor": 3, "radial": 0}
    assert all(vanishes_on(f, quartic_curve) for f in space.basis)


def test_radial_decomposition(twisted_cubic, three_points, ring4, ring3):
    x0, x1, x2, x3 = ring4.gens
    for f in (x0, x1 ** 2 + x0 * x3, x2 * x3 ** 2):
        for k in range(2):
            t = [QQ(int(i == k)) for i in range(2)]
            assert radial_decomposition_check(twisted_cubic, 1, t, f)
    assert radial_decomposition_check(three_points, 1, [QQ(1), QQ(-3)], ring3.gens[2])
    with pytest.raises(UndefinedDeltaError):
        radial_decomposition_check(twisted_cubic, 1, [1, 0], ring4.one)
    with pytest.raises(ValueError):
        radial_decomposition_check(twisted_cubic, 0, [1, 0, 0], x0)


def test_random_tor_vectors(twisted_cubic, fat_point, rng):
    cases = [(twisted_cubic, 1, 2), (fat_point, 1, 5), (fat_point, 0, 5)]
    for _ in range(200):
        I, p, rank = cases[int(rng.integers(0, len(cases)))]
        t = [QQ(int(v)) for v in rng.integers(-4, 5, size=rank)]
        omega = xi(I, p, t)
        assert vanishes_on(omega, I)
        assert bool(omega) == any(t)
    assert free_resolution(fat_point).free_module(1).rank == 5


def test_radial_decomposition_on_random_inputs(three_points, twisted_cubic, fat_point, random_poly, rng):
    cases = [(three_points, 2), (twisted_cubic, 2), (fat_point, 5)]
    checked = 0
    while checked < 200:
        I, rank = cases[int(rng.integers(0, len(cases)))]
        f = random_poly(I.ring, int(rng.integers(1, 3)), rng)
        if not f:
            continue
        t = [QQ(int(v)) for v in rng.integers(-3, 4, size=rank)]
        assert radial_decomposition_check(I, 1, t, f)
        checked += 1


def test_images_independent_and_disjoint_on_random_ideals(ring4, random_poly, rng):
    for _ in range(12):
        I = Ideal([random_poly(ring4, int(rng.integers(1, 3)), rng, terms=3, bound=3) for _ in range(3)], ring4)
        if I.is_zero():
            continue
        for p in (1, 2):
            for d in (0, 1):
                assert independence_checks(I, p, d) == {"independent": True, "disjoint": True}

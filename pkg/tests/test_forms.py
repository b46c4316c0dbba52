import pytest
from sympy import QQ

from src.errors import ShapeMismatchError, UndefinedDeltaError, UnknownVariableError
from src.forms import (
    FormMatrix,
    PForm,
    VectorField,
    contract,
    contract_rad,
    delta,
    descends,
    differ_by_radial,
    exterior_derivative,
    form_from_json,
    form_to_json,
    format_form,
    matrix_ops,
    nform_from_vfield,
    parse_form,
    vfield_from_nform,
    volume_form,
)
from src.polyring import parse_poly


def test_indices_are_normalized_with_sign(ring3):
    assert PForm.dx(ring3, 1, 0) == -PForm.dx(ring3, 0, 1)
    assert not PForm.dx(ring3, 1, 1)
    assert PForm.dx(ring3, 2, 0, 1) == PForm.dx(ring3, 0, 1, 2)


def test_contraction_with_radial_field(ring3):
    x0, x1, _ = ring3.gens
    got = contract_rad(PForm.dx(ring3, 0, 1))
    assert got == PForm(ring3, 1, {(1,): x0, (0,): -x1})
    assert descends(got)


def test_contraction_of_functions_is_zero(ring3):
    assert not contract(PForm.from_poly(ring3.gens[0]), VectorField.rad(ring3))


def test_delta_on_constants_is_undefined(ring3):
    with pytest.raises(UndefinedDeltaError):
        delta(PForm.from_poly(ring3.one))
    assert not delta(PForm.zero(ring3, 1))


def test_delta_of_function(ring3):
    x0, x1, _ = ring3.gens
    got = delta(PForm.from_poly(x0 * x1))
    assert got == PForm(ring3, 1, {(0,): x1 * QQ(1, 2), (1,): x0 * QQ(1, 2)})
    assert contract_rad(got) == PForm.from_poly(x0 * x1)


def test_d_squared_vanishes(ring4, random_form, rng):
    for _ in range(200):
        p = int(rng.integers(0, 3))
        degree = int(rng.integers(0, 4))
        omega = random_form(ring4, p, degree, rng)
        assert not exterior_derivative(exterior_derivative(omega))


def test_delta_inverts_contraction_on_descending_forms(ring4, random_form, rng):
    for _ in range(200):
        p = int(rng.integers(0, 3))
        degree = int(rng.integers(0, 3))
        omega = contract_rad(random_form(ring4, p + 1, degree, rng))
        assert descends(omega)
        assert contract_rad(delta(omega)) == omega


def test_wedge_is_graded_commutative(ring4, random_form, rng):
    for _ in range(50):
        p, q = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        a = random_form(ring4, p, 1, rng)
        b = random_form(ring4, q, 2, rng)
        assert a.wedge(b) == b.wedge(a).scale((-1) ** (p * q))
        assert exterior_derivative(a.wedge(b)) == (
            exterior_derivative(a).wedge(b) + a.wedge(exterior_derivative(b)).scale((-1) ** p))


def test_vector_field_round_trip(ring4, random_poly, rng):
    for _ in range(200):
        degree = int(rng.integers(1, 3))
        v = VectorField(ring4, [random_poly(ring4, degree, rng) for _ in range(4)])
        omega = nform_from_vfield(v)
        if not omega:
            continue
        assert omega.p == 2
        assert descends(omega)
        assert differ_by_radial(vfield_from_nform(omega), v)


def test_radial_field_gives_zero_form(ring4):
    assert not nform_from_vfield(VectorField.rad(ring4))
    assert contract_rad(volume_form(ring4)).p == 3


def test_parse_and_format(ring3):
    text = "x_0*x_1*dx_2 - x_0*x_2*dx_1"
    omega = parse_form(text, ring3)
    x0, x1, x2 = ring3.gens
    assert omega == PForm(ring3, 1, {(2,): x0 * x1, (1,): -x0 * x2})
    assert parse_form(format_form(omega), ring3) == omega
    assert parse_form("dx_1^dx_0", ring3) == -PForm.dx(ring3, 0, 1)
    assert parse_form("x_0^2*dx_1^dx_2", ring3) == PForm(ring3, 2, {(1, 2): x0 ** 2})
    assert format_form(PForm.zero(ring3, 1)) == "0"


def test_parse_rejects_unknown_differential(ring3):
    with pytest.raises(UnknownVariableError):
        parse_form("x_0*dx_7", ring3)


def test_json(ring3):
    omega = parse_form("1/2*x_0*dx_1^dx_2 - x_1*dx_0^dx_2", ring3)
    data = form_to_json(omega)
    assert data["p"] == 2
    assert data["terms"][0] == {"idx": [0, 2], "coef": "-x_1"}
    assert form_from_json(data, ring3) == omega


def test_form_matrix_product(ring3):
    x0, x1, x2 = ring3.gens
    row = FormMatrix(ring3, 0, [[PForm.from_poly(x0), PForm.from_poly(x1)]])
    column = FormMatrix(ring3, 1, [[PForm.dx(ring3, 1)], [PForm.dx(ring3, 0)]])
    product = row.mul(column)
    assert product.shape == (1, 1)
    assert product.entry(0, 0) == PForm(ring3, 1, {(1,): x0, (0,): x1})
    assert row.apply([QQ(2), QQ(-1)]).entry(0, 0) == PForm.from_poly(2 * x0 - x1)
    with pytest.raises(ShapeMismatchError):
        row.mul(row)


def test_homogeneity(ring3):
    omega = PForm(ring3, 1, {(0,): parse_poly("x_1^2 + x_2", ring3)})
    assert not omega.is_homogeneous()
    assert PForm.dx(ring3, 0).total_degree() == 1


def test_matrix_ops(ring3):
    x0, x1, x2 = ring3.gens
    A = FormMatrix(ring3, 0, [[PForm.from_poly(x0 * x1), PForm.from_poly(x2 ** 2)]])
    B = FormMatrix(ring3, 0, [[PForm.from_poly(x2)], [PForm.from_poly(-x1)]])
    product = matrix_ops(A, B, "mul")
    assert product.entry(0, 0) == PForm.from_poly(x0 * x1 * x2 - x1 * x2 ** 2)
    deltas = matrix_ops(A, op="delta")
    assert deltas.p == 1
    assert matrix_ops(deltas, op="contract_rad") == A
    with pytest.raises(ValueError):
        matrix_ops(A, op="transpose")


def test_double_contraction_vanishes(ring4, random_form, random_poly, rng):
    for _ in range(200):
        omega = random_form(ring4, int(rng.integers(1, 5)), int(rng.integers(0, 3)), rng, terms=3)
        v = VectorField(ring4, [random_poly(ring4, int(rng.integers(0, 2)), rng) for _ in range(4)])
        assert not contract(contract(omega, v), v)
    assert not contract(contract(volume_form(ring4), VectorField.rad(ring4)), VectorField.rad(ring4))

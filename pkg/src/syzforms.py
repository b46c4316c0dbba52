"""Espacios de p-formas que se anulan sobre un subesquema Z ⊂ P^n.

La pieza de grado d de 𝒜^p(Z) se obtiene como suma directa de
- la imagen de ξ_p sobre la pieza Tor_p(I_Z, k)_{d+p+1} de la resolución
  minimal, y
- la parte radial (I_Z)_d · ι_rad Λ^{p+1}V*.

``brute_force_space`` resuelve el mismo problema con un único sistema lineal
y sirve de oráculo independiente.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import factorial

from sympy import QQ

from src.errors import MixedDegreeError, ShapeMismatchError, ShortcutNotApplicableError, UndefinedDeltaError
from src.forms import (
    FormMatrix,
    PForm,
    contract_rad,
    delta,
    form_to_json,
)
from src.groebner import graded_piece_dim, homogeneous_basis, normal_form
from src.linalg import CoordinateIndex, independent_subset, nullspace, rank, same_span, spans_intersect
from src.polyring import monomials_of_degree, poly_degree
from src.resolution import betti, free_resolution, tor_basis

logger = logging.getLogger(__name__)

XI_IMAGE = "xi_image"
RADIAL_PART = "radial_part"


def form_vector(omega):
    """Coordenadas de ω en la base {x^μ dx_J}"""
    return {(idx, m): c for idx, f in omega.terms.items() for m, c in f.iterterms()}


@dataclass
class FormSpace:
    ideal: object
    p: int
    d: int
    basis: list = field(default_factory=list)
    provenance: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def split(self):
        return {"tor": self.provenance.count(XI_IMAGE), "radial": self.provenance.count(RADIAL_PART)}

    def part(self, kind):
        return [f for f, k in zip(self.basis, self.provenance) if k == kind]

    def vectors(self):
        return [form_vector(f) for f in self.basis]

    def contains(self, omega):
        return rank(self.vectors() + [form_vector(omega)]) == rank(self.vectors())

    def to_json(self):
        return {"dim": self.dim, "basis": [form_to_json(f) for f in self.basis], "split": self.split}


def _strand_columns(twists, degree):
    return [k for k, j in enumerate(twists) if j == degree]


def _supported_columns(resolution, p, t):
    """Columnas de F_p (todas de un mismo grado) que soportan t"""
    module = resolution.free_module(p)
    if len(t) != module.rank:
        raise ShapeMismatchError(f"Vector de Tor de longitud {len(t)}; F_{p} tiene rango {module.rank}")
    support = [k for k, v in enumerate(t) if v]
    if not support:
        return None, []
    degrees = {module.twists[k] for k in support}
    if len(degrees) > 1:
        raise MixedDegreeError(f"El vector mezcla los grados {sorted(degrees)} de Tor_{p}")
    m = degrees.pop()
    return m, _strand_columns(module.twists, m)


def inner_matrix(resolution, p, cols):
    """δ(φ_1 · δ(⋯ δφ_p)) restringida a las columnas dadas de F_p"""
    G = FormMatrix.from_map(resolution.phi(p)).restrict_columns(cols).delta()
    for k in range(p - 1, 0, -1):
        G = FormMatrix.from_map(resolution.phi(k)).mul(G).delta()
    return G


def xi_matrix(resolution, p, cols):
    phi0 = FormMatrix.from_map(resolution.phi(0))
    if p == 0:
        return phi0.restrict_columns(cols)
    return phi0.mul(inner_matrix(resolution, p, cols))


def xi(I, p, t):
    """ξ_p(t) = (φ_0 ∘ δ ∘ φ_1 ∘ ⋯ ∘ δ ∘ φ_p)·t para t homogéneo"""
    resolution = free_resolution(I)
    m, cols = _supported_columns(resolution, p, t)
    if m is None:
        return PForm.zero(I.ring, p)
    G = xi_matrix(resolution, p, cols)
    return G.apply([QQ.convert(t[k]) for k in cols]).entry(0, 0)


def linear_strand_blocks(I, d, p):
    """Bloques φ_0⁰, φ_1⁰, …, φ_p⁰ del primer estrato lineal"""
    resolution = free_resolution(I)
    blocks = []
    phi0 = resolution.phi(0)
    blocks.append(phi0.submatrix([0], _strand_columns(phi0.source.twists, d + 1)))
    for i in range(1, p + 1):
        phi = resolution.phi(i)
        rows = _strand_columns(phi.target.twists, d + i)
        cols = _strand_columns(phi.source.twists, d + i + 1)
        blocks.append(phi.submatrix(rows, cols))
    return blocks


def xi_linear_strand(I, p, d, t):
    """ξ_p⁰(t) = φ_0⁰ · dφ_1⁰ ∧ ⋯ ∧ dφ_p⁰ · t (requiere (I)_d = 0)"""
    if graded_piece_dim(I, d) != 0:
        raise ShortcutNotApplicableError(f"(I)_{d} ≠ 0: el estrato lineal no calcula 𝒜^{p}(Z)_{d}")
    resolution = free_resolution(I)
    module = resolution.free_module(p)
    strand = _strand_columns(module.twists, d + p + 1)
    if len(t) == module.rank and len(t) != len(strand):
        outside = [k for k, v in enumerate(t) if v and k not in strand]
        if outside:
            raise MixedDegreeError(f"El vector tiene soporte fuera del grado {d + p + 1}")
        t = [t[k] for k in strand]
    elif len(t) != len(strand):
        raise ShapeMismatchError(f"Vector de longitud {len(t)} para un estrato de {len(strand)} columnas")
    if not any(t):
        return PForm.zero(I.ring, p)
    blocks = linear_strand_blocks(I, d, p)
    G = FormMatrix.from_map(blocks[0])
    differentials = [FormMatrix.from_map(b).exterior_derivative() for b in blocks[1:]]
    product = None
    for D in reversed(differentials):
        product = D if product is None else D.mul(product)
    if product is not None:
        G = G.mul(product)
    return G.apply([QQ.convert(v) for v in t]).entry(0, 0)


def scalar_ratio(a, b):
    """s con a = s·b (None si no son proporcionales)"""
    if not b:
        return QQ(0) if not a else None
    key = next(iter(sorted(b.terms)))
    m, c = next(iter(b.terms[key].iterterms()))
    s = dict(a.terms.get(key, a.ring.zero)).get(m, QQ(0)) / c
    return s if a == b.scale(s) else None


def strand_scalar(I, p, d):
    """Escalar observado entre ξ_p y ξ_p⁰ sobre el estrato lineal (esperado 1/p!)"""
    resolution = free_resolution(I)
    module = resolution.free_module(p)
    scalars = set()
    for k in _strand_columns(module.twists, d + p + 1):
        t = [QQ(int(i == k)) for i in range(module.rank)]
        s = scalar_ratio(xi(I, p, t), xi_linear_strand(I, p, d, t))
        scalars.add(s)
    if len(scalars) > 1 or None in scalars:
        logger.warning(f"ξ_{p} y ξ_{p}⁰ no son proporcionales con un escalar común: {scalars}")
        return None
    scalar = scalars.pop() if scalars else None
    logger.info(f"Escalar ξ_{p} / ξ_{p}⁰ = {scalar} (1/p! = {QQ(1, factorial(p))})")
    return scalar


def radial_candidates(I, p, d):
    ring = I.ring
    forms = []
    for F in homogeneous_basis(I, d):
        for J in combinations(range(ring.ngens), p + 1):
            forms.append(contract_rad(PForm.dx(ring, *J)).scale(F))
    return forms


def radial_part_basis(I, p, d):
    """Base de (I)_d · ι_rad Λ^{p+1}V* (subfamilia independiente de los productos)"""
    candidates = radial_candidates(I, p, d)
    keep = independent_subset([form_vector(f) for f in candidates])
    return [candidates[k] for k in keep]


def form_space(I, p, d):
    """Base de 𝒜^p(Z)_d: imágenes de ξ_p más la parte radial"""
    if p < 0 or p >= I.nvars:
        raise ValueError(f"Grado exterior {p} fuera de rango para P^{I.n}")
    m = d + p + 1
    basis, provenance = [], []
    for t in tor_basis(I, p, m):
        basis.append(xi(I, p, t))
        provenance.append(XI_IMAGE)
    for f in radial_part_basis(I, p, d):
        basis.append(f)
        provenance.append(RADIAL_PART)
    space = FormSpace(I, p, d, basis, provenance)
    logger.info(f"𝒜^{p}(Z)_{d}: dimensión {space.dim} {space.split}")
    return space


def brute_force_space(I, p, d):
    """Resuelve ι_rad ω = 0 y coeficientes en (I)_{d+1} como un único sistema lineal"""
    ring = I.ring
    nvars = ring.ngens
    tuples = list(combinations(range(nvars), p))
    monomials = monomials_of_degree(nvars, d + 1)
    unknowns = CoordinateIndex((J, m) for J in tuples for m in monomials)
    constraints = {}

    def add(row_key, column, value):
        row = constraints.setdefault(row_key, {})
        row[column] = row.get(column, 0) + value

    for J in tuples:
        for m in monomials:
            column = unknowns.index((J, m))
            for k, i in enumerate(J if p > 0 else ()):
                target = (J[:k] + J[k + 1:], tuple(e + (a == i) for a, e in enumerate(m)))
                add(("rad",) + target, column, QQ(-1) if k % 2 else QQ(1))
            remainder = normal_form(ring.term_new(m, ring.domain.one), I)
            for rm, c in remainder.iterterms():
                add(("nf", J, rm), column, c)
    rows = [row for row in constraints.values() if any(row.values())]
    null = nullspace(rows, len(unknowns))
    basis = []
    for vector in null:
        terms = {}
        for column, value in enumerate(vector):
            if value:
                J, m = unknowns.keys[column]
                terms[J] = terms.get(J, ring.zero) + ring.term_new(m, value)
        basis.append(PForm(ring, p, terms))
    logger.info(f"Oráculo: dim 𝒜^{p}(Z)_{d} = {len(basis)}")
    return FormSpace(I, p, d, basis, ["brute_force"] * len(basis))


def same_form_span(first, second):
    """Igualdad exacta de los espacios generados por dos familias de formas"""
    return same_span([form_vector(f) for f in first], [form_vector(f) for f in second])


def xi_images_independent(space):
    return rank([form_vector(f) for f in space.part(XI_IMAGE)]) == len(space.part(XI_IMAGE))


def xi_radial_disjoint(space):
    tor = [form_vector(f) for f in space.part(XI_IMAGE)]
    radial = [form_vector(f) for f in space.part(RADIAL_PART)]
    return not (tor and radial and spans_intersect(tor, radial))


def expected_dimension(I, p, d):
    """rango de la parte radial + β_{p, d+p+1}"""
    table = betti(free_resolution(I))
    return len(radial_part_basis(I, p, d)) + table[(p, d + p + 1)]


def radial_decomposition_check(I, p, t, f):
    """Comprueba f·ξ_p(t) = φ_0 · ι_rad(δf ∧ δ(φ_1 · δ(⋯ δφ_p)) · t)"""
    if not f or poly_degree(f) <= 0:
        raise UndefinedDeltaError("f debe ser homogéneo no constante")
    if p < 1:
        raise ValueError("La identidad requiere p ≥ 1")
    resolution = free_resolution(I)
    m, cols = _supported_columns(resolution, p, t)
    if m is None:
        return True
    values = [QQ.convert(t[k]) for k in cols]
    inner = inner_matrix(resolution, p, cols).apply(values)
    df = delta(PForm.from_poly(f))
    rhs = FormMatrix.from_map(resolution.phi(0)).mul(inner.wedge_left(df).contract_rad()).entry(0, 0)
    lhs = xi(I, p, t).scale(f)
    return lhs == rhs

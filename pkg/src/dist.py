"""Distribuciones y foliaciones en P^n definidas por una p-forma ω con ι_rad ω = 0.

Incluye los tests LDS e integrabilidad, el esquema singular, el complejo
O → O(1)⊗V → O(d+2)⊗Λ^{p-1}V* y las presentaciones de los haces tangente,
normal y conormal, con sus clases de Chern y dimensiones de cohomología.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from sympy import QQ

from src.errors import (
    CertificateError,
    EmptyFormSpaceError,
    NotADistributionError,
    NotDescendingError,
    NotLDSError,
    RetryBudgetExhaustedError,
    UnsupportedDimensionError,
)
from src.forms import (
    PForm,
    VectorField,
    contract,
    contract_multivector,
    descends,
    exterior_derivative,
    format_form,
)
from src.groebner import Ideal, ideal_intersect, ideal_sum, minors_ideal, saturate
from src.linalg import matrix_rank
from src.polyring import polynomial_ring
from src.resolution import (
    HILBERT_RING,
    GradedFreeModule,
    GradedMap,
    evaluate_hilbert,
    format_hilbert,
    graded_ext_dim,
    hilbert_function,
    hilbert_polynomial,
    homology_presentation,
    minimal_presentation,
    module_rank,
    resolve_module,
    scheme_dimension,
    syzygies,
)
from src.syzforms import form_space
from src.utils import format_rational, make_rng, random_integers

logger = logging.getLogger(__name__)

# td(P^3) = 1 + 2H + (11/6)H² + H³
TODD_P3 = (QQ(1), QQ(2), QQ(11, 6), QQ(1))


def require_descends(omega):
    if not descends(omega):
        raise NotDescendingError(f"ι_rad ω ≠ 0 para ω = {format_form(omega)}")


def require_positive_degree(omega):
    if omega.p < 1:
        raise NotADistributionError(f"Se esperaba una p-forma con p ≥ 1, recibido p = {omega.p}")


@dataclass
class Distribution:
    """Distribución de codimensión p y grado d dada por ω ∈ H⁰(Ω^p(d+p+1))"""

    omega: PForm

    def __post_init__(self):
        require_descends(self.omega)
        require_positive_degree(self.omega)
        self.omega.coefficient_degree()

    @property
    def n(self):
        return self.omega.n

    @property
    def p(self):
        return self.omega.p

    @property
    def d(self):
        return self.omega.coefficient_degree() - 1

    @cached_property
    def is_lds(self):
        return lds_check(self.omega)

    @cached_property
    def is_integrable(self):
        return integrability_check(self.omega)

    @cached_property
    def singular_scheme(self):
        return sing_scheme(self.omega)

    @cached_property
    def tangent(self):
        return tangent_sheaf(self.omega)

    @cached_property
    def normal(self):
        return normal_sheaf(self.omega)

    @cached_property
    def conormal(self):
        return conormal_sheaf(self.omega)


class SheafPresentation:
    """Haz coherente en P^n como conúcleo de un mapa de módulos libres graduados"""

    def __init__(self, presentation, name=""):
        self.presentation = presentation
        self.name = name

    @classmethod
    def free_sheaf(cls, ring, a=0, rank=1):
        """O(a)^rank"""
        target = GradedFreeModule((-a,) * rank)
        return cls(GradedMap.zero(ring, GradedFreeModule(()), target), f"O({a})")

    @classmethod
    def tangent_bundle(cls, ring):
        """TP^n = coker(O → O(1)^{n+1}) por la sucesión de Euler"""
        A = GradedMap(ring, GradedFreeModule((0,)), GradedFreeModule((-1,) * ring.ngens),
                      [[x] for x in ring.gens])
        return cls(A, "T")

    @property
    def ring(self):
        return self.presentation.ring

    @property
    def n(self):
        return self.ring.ngens - 1

    @cached_property
    def resolution(self):
        return resolve_module(self.presentation)

    @cached_property
    def hilbert(self):
        return hilbert_polynomial(self.resolution)

    @property
    def rank(self):
        return module_rank(self.resolution)

    def is_zero(self):
        """Haz nulo: polinomio de Hilbert idénticamente cero"""
        return not self.hilbert

    def twist(self, a):
        return SheafPresentation(self.presentation.shift(a), f"{self.name}({a})")

    def __add__(self, other):
        """Suma directa (presentación diagonal por bloques)"""
        A, B = self.presentation, other.presentation
        zero = self.ring.zero
        matrix = [list(row) + [zero] * B.source.rank for row in A.matrix]
        matrix += [[zero] * A.source.rank + list(row) for row in B.matrix]
        presentation = GradedMap(self.ring, A.source + B.source, A.target + B.target, matrix, check=False)
        return SheafPresentation(presentation, f"{self.name} + {other.name}")

    def dual(self):
        return SheafPresentation(dual_presentation(self.presentation), f"{self.name}^v")

    def __repr__(self):
        return f"SheafPresentation({self.name or '?'}: {self.presentation!r})"


def dual_presentation(presentation):
    """Presentación minimal de Hom(coker S, R) = ker(F₀* → F₁*)"""
    ring = presentation.ring
    dual_target = presentation.target.dual()
    if not presentation.source.rank:
        return GradedMap.zero(ring, GradedFreeModule(()), dual_target)
    if not dual_target.rank:
        return GradedMap.zero(ring, GradedFreeModule(()), GradedFreeModule(()))
    kernel = syzygies(presentation.transpose())
    if not kernel.source.rank:
        return GradedMap.zero(ring, GradedFreeModule(()), GradedFreeModule(()))
    relations = syzygies(kernel)
    return minimal_presentation(relations)


def double_dual(F):
    return F.dual().dual()


# ---------------------------------------------------------------------------
# Condiciones LDS e integrabilidad
# ---------------------------------------------------------------------------

def _basis_multivectors(ring, k):
    for K in combinations(range(ring.ngens), k):
        yield K, [VectorField.partial(ring, j) for j in K]


def lds_check(omega):
    """(ι_v ω) ∧ ω = 0 para todo v = ∂_{i_1} ∧ … ∧ ∂_{i_{p-1}}"""
    require_descends(omega)
    if omega.p == 0:
        return True
    for K, fields in _basis_multivectors(omega.ring, omega.p - 1):
        if contract_multivector(omega, fields).wedge(omega):
            logger.debug(f"LDS falla en v = ∂{K}")
            return False
    return True


def integrability_check(omega):
    """(ι_v ω) ∧ dω = 0 para todo v básico (requiere LDS)"""
    if not lds_check(omega):
        raise NotLDSError("La condición de integrabilidad solo se evalúa sobre formas LDS")
    if omega.p == 0:
        return True
    d_omega = exterior_derivative(omega)
    for K, fields in _basis_multivectors(omega.ring, omega.p - 1):
        if contract_multivector(omega, fields).wedge(d_omega):
            logger.debug(f"Integrabilidad falla en v = ∂{K}")
            return False
    return True


def sing_scheme(omega):
    """Saturación del ideal generado por los coeficientes de ω"""
    require_descends(omega)
    coefficients = [f for f in omega.coefficients() if f]
    I = Ideal(coefficients, omega.ring)
    result = saturate(I)
    logger.info(f"Esquema singular: {len(result.generators)} generadores, dimensión {scheme_dimension(result)}")
    return result


def cw_complex(omega):
    """(A, B): A = (x_0, …, x_n)ᵀ y B con columnas ι_{∂_j} ω en la base de Λ^{p-1}"""
    require_descends(omega)
    require_positive_degree(omega)
    ring = omega.ring
    nvars = ring.ngens
    degree = omega.coefficient_degree()
    A = GradedMap(ring, GradedFreeModule((0,)), GradedFreeModule((-1,) * nvars), [[x] for x in ring.gens])
    rows = list(combinations(range(nvars), omega.p - 1))
    contractions = [contract(omega, VectorField.partial(ring, j)) for j in range(nvars)]
    matrix = [[contractions[j].coefficient(K) for j in range(nvars)] for K in rows]
    B = GradedMap(ring, A.target, GradedFreeModule((-(degree + 1),) * len(rows)), matrix)
    return A, B


def tangent_homology(omega):
    """Homología central del complejo, sin exigir LDS"""
    A, B = cw_complex(omega)
    return SheafPresentation(homology_presentation(A, B), "T_D")


def _require_lds(omega):
    if not lds_check(omega):
        raise NotLDSError(f"La forma {format_form(omega)} no es LDS")


def tangent_sheaf(omega):
    _require_lds(omega)
    return tangent_homology(omega)


def normal_sheaf(omega):
    """Imagen de B presentada por sus sicigias"""
    _require_lds(omega)
    _, B = cw_complex(omega)
    return SheafPresentation(minimal_presentation(syzygies(B)), "N_D")


def conormal_sheaf(omega):
    return normal_sheaf(omega).dual()


# ---------------------------------------------------------------------------
# Clases de Chern y cohomología
# ---------------------------------------------------------------------------

def _todd_polynomials():
    t = HILBERT_RING.gens[0]
    exponential = [HILBERT_RING.one, t, t ** 2 * QQ(1, 2), t ** 3 * QQ(1, 6)]
    return [sum((exponential[a] * TODD_P3[m - a] for a in range(m + 1)), HILBERT_RING.zero)
            for m in range(4)]


def chern_character(F, n=3):
    """(ch_0, ch_1, ch_2, ch_3) a partir de P(t) = Σ ch_k ∫ H^k e^{tH} td(P^3)"""
    if n != 3 or F.n != 3:
        raise UnsupportedDimensionError("Las clases de Chern solo se calculan sobre P^3")
    polys = _todd_polynomials()
    ch = [QQ(0)] * 4
    remainder = dict(F.hilbert)
    for k in range(4):
        basis = polys[3 - k]
        degree = 3 - k
        lead = dict(basis).get((degree,), QQ(0))
        ch[k] = remainder.get((degree,), QQ(0)) / lead
        for m, c in basis.iterterms():
            remainder[m] = remainder.get(m, QQ(0)) - ch[k] * c
    if any(remainder.values()):
        raise CertificateError(f"P(t) no se ajusta a Riemann-Roch: resto {remainder}")
    return tuple(ch)


def chern_classes(F, n=3):
    """(c1, c2, c3) por Hirzebruch-Riemann-Roch en P^3"""
    ch0, ch1, ch2, ch3 = chern_character(F, n)
    c1 = ch1
    c2 = (c1 ** 2 - 2 * ch2) / 2
    c3 = (6 * ch3 - c1 ** 3 + 3 * c1 * c2) / 3
    values = (ch0, c1, c2, c3)
    if any(v.denominator != 1 for v in values):
        raise CertificateError(f"Clases de Chern no enteras: {[format_rational(v) for v in values]}")
    rank, c1, c2, c3 = (int(v.numerator) for v in values)
    logger.info(f"Chern de {F.name or 'F'}: rango {rank}, c = ({c1}, {c2}, {c3})")
    return c1, c2, c3


def chern_json(F):
    return {"rank": F.rank, "c": list(chern_classes(F)), "hilbert": format_hilbert(F.hilbert)}


def sheaf_cohomology_dim(F, i, d):
    """h^i(F(d)) por dualidad local graduada contra R(-n-1)"""
    resolution = F.resolution
    n = F.n
    if i < 0 or i > n:
        return 0
    if i >= 1:
        return graded_ext_dim(resolution, n - i, -d)
    return (hilbert_function(resolution, d) - graded_ext_dim(resolution, n + 1, -d)
            + graded_ext_dim(resolution, n, -d))


def cohomology_json(F, i, d):
    return {"i": i, "twist": d, "dim": sheaf_cohomology_dim(F, i, d)}


def euler_characteristic(F, d):
    return sum((-1) ** i * sheaf_cohomology_dim(F, i, d) for i in range(F.n + 1))


def euler_characteristic_check(F, d):
    """Σ (-1)^i h^i(F(d)) = P_F(d)"""
    return euler_characteristic(F, d) == evaluate_hilbert(F.hilbert, d)


def instanton_certificates(F):
    """Rango 2, c1 = 0, c3 = 0 y h¹(F(-2)) = 0"""
    c1, c2, c3 = chern_classes(F)
    h1 = sheaf_cohomology_dim(F, 1, -2)
    certificates = {
        "rank": F.rank,
        "c": [c1, c2, c3],
        "h1(F(-2))": h1,
        "ok": F.rank == 2 and c1 == 0 and c3 == 0 and h1 == 0,
    }
    logger.info(f"Certificados de instantón: {certificates}")
    return certificates


# ---------------------------------------------------------------------------
# Generadores aleatorios
# ---------------------------------------------------------------------------

def _random_line(ring, rng, bound):
    while True:
        rows = [random_integers(rng, ring.ngens, bound) for _ in range(2)]
        if matrix_rank([dict(enumerate(r)) for r in rows], ring.ngens) == 2:
            return Ideal([sum((c * x for c, x in zip(r, ring.gens)), ring.zero) for r in rows], ring)


def random_lines(count, seed=0, bound=50, retries=5, ring=None):
    """Lista de rectas de P^3 disjuntas dos a dos (certificado: saturate(L_i + L_j) = (1))"""
    if count < 1:
        raise ValueError("Se necesita al menos una recta")
    ring = ring or polynomial_ring(4)
    rng = make_rng(seed)
    lines = []
    failures = 0
    while len(lines) < count:
        candidate = _random_line(ring, rng, bound)
        if all(saturate(ideal_sum(candidate, L)).is_unit() for L in lines):
            lines.append(candidate)
            continue
        failures += 1
        logger.warning(f"Recta aleatoria no disjunta, reintento {failures}/{retries}")
        if failures >= retries:
            raise RetryBudgetExhaustedError(f"No se encontraron {count} rectas disjuntas tras {retries} intentos")
    return lines


def random_disjoint_lines(count, seed=0, bound=50, retries=5, ring=None):
    """Ideal de la unión de ``count`` rectas disjuntas aleatorias"""
    lines = random_lines(count, seed, bound, retries, ring)
    ideal = lines[0]
    for L in lines[1:]:
        ideal = ideal_intersect(ideal, L)
    logger.info(f"{count} rectas disjuntas: {len(ideal.minimal_generators)} generadores minimales")
    return ideal


def random_vanishing_form(p, d, Z, seed=0, bound=50, space=None):
    """Combinación entera aleatoria de la base de 𝒜^p(Z)_d (``space`` evita recalcularla)"""
    space = space or form_space(Z, p, d)
    if not space.dim:
        raise EmptyFormSpaceError(f"𝒜^{p}(Z)_{d} = 0")
    weights = random_integers(make_rng(seed), space.dim, bound, nonzero=True)
    omega = PForm.zero(Z.ring, p)
    for w, f in zip(weights, space.basis):
        if w:
            omega = omega + f.scale(QQ(w))
    if not descends(omega) or not all(Z.contains(f) for f in omega.coefficients()):
        raise CertificateError("La forma aleatoria no se anula sobre Z")
    return omega


def vector_field_singular_scheme(v):
    """Saturación de los menores 2×2 de la matriz [x; a]"""
    ring = v.ring
    matrix = [list(ring.gens), list(v.coefficients)]
    return saturate(minors_ideal(matrix, 2, ring))

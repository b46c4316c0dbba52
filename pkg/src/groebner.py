"""Bases de Gröbner y operaciones con ideales homogéneos.

El motor de Buchberger trabaja tanto con ideales como con submódulos de un
módulo libre graduado R^r. Un vector (f_1, …, f_r) se codifica como un
polinomio en variables auxiliares e_0, …, e_{r-1}, lineal en ellas, dentro de
un anillo cuyo orden es un orden de módulo. Las componentes de seguimiento
(e_r, …) registran cómo se escribe cada elemento en términos de los
generadores de entrada; de ahí salen las sicigias y los levantamientos.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, groupby

from sympy import QQ
from sympy.polys.rings import PolyRing

from src.errors import NotInImageError, RingMismatchError, ShapeMismatchError
from src.linalg import determinant
from src.polyring import (
    MonomialOrder,
    check_homogeneous,
    format_poly,
    monomials_of_degree,
    parse_poly,
    polynomial_ring,
    variable_names,
    with_order,
)

logger = logging.getLogger(__name__)

SELECTION_STRATEGIES = ("normal", "degree", "first")


@dataclass(frozen=True)
class ModuleOrder:
    """Orden en R^r (más bloque de seguimiento) inducido por un orden de R.

    Compara primero el bloque (principal > seguimiento), luego el grado
    desplazado deg(x) + shift[c], luego el orden base y por último la
    componente (e_0 > e_1 > …).
    """

    base: MonomialOrder
    nvars: int
    shifts: tuple
    main: int

    def __call__(self, monom):
        c = monom.index(1, self.nvars)
        x = monom[:self.nvars]
        c -= self.nvars
        return (c < self.main, sum(x) + self.shifts[c], self.base(x), -c)


@dataclass(frozen=True)
class EliminationOrder:
    """Orden de bloques: las variables eliminadas dominan a las demás"""

    base: MonomialOrder
    eliminated: tuple

    def __call__(self, monom):
        elim = tuple(monom[i] for i in self.eliminated)
        rest = tuple(e for i, e in enumerate(monom) if i not in self.eliminated)
        return (sum(elim), self.base(rest), elim)


@lru_cache(maxsize=None)
def module_ring(base_ring, shifts, main):
    names = variable_names(base_ring.ngens) + [f"e_{c}" for c in range(len(shifts))]
    order = ModuleOrder(base_ring.order, base_ring.ngens, shifts, main)
    return PolyRing(names, QQ, order)


class FreeModuleSpace:
    """Módulo libre ⊕ R(-shift_c) con componentes de seguimiento opcionales"""

    def __init__(self, base_ring, shifts=(0,), tracking=()):
        self.base_ring = base_ring
        self.nvars = base_ring.ngens
        self.shifts = tuple(int(s) for s in shifts)
        self.tracking = tuple(int(s) for s in tracking)
        self.rank = len(self.shifts)
        self.plain = self.rank == 1 and not self.tracking
        all_shifts = self.shifts + self.tracking
        self.all_shifts = all_shifts
        self.ring = base_ring if self.plain else module_ring(base_ring, all_shifts, self.rank)

    def unit(self, c):
        e = [0] * len(self.all_shifts)
        e[c] = 1
        return tuple(e)

    def element(self, vector, tracking=()):
        """Codifica un vector (y su parte de seguimiento) como polinomio del espacio"""
        if len(vector) != self.rank:
            raise ShapeMismatchError(f"Vector de longitud {len(vector)} en un módulo de rango {self.rank}")
        if self.plain:
            return with_order(vector[0], self.base_ring)
        terms = {}
        for c, f in enumerate(list(vector) + list(tracking)):
            if not f:
                continue
            if f.ring.ngens != self.nvars:
                raise RingMismatchError("Entrada de otro anillo en un vector del módulo")
            unit = self.unit(c)
            for m, coeff in f.iterterms():
                terms[m + unit] = coeff
        return self.ring.from_dict(terms)

    def split(self, element):
        """Inversa de ``element``: (parte principal, parte de seguimiento)"""
        if self.plain:
            return [element], []
        buckets = [dict() for _ in self.all_shifts]
        for m, coeff in element.iterterms():
            c = m.index(1, self.nvars) - self.nvars
            buckets[c][m[:self.nvars]] = coeff
        vectors = [self.base_ring.from_dict(b) for b in buckets]
        return vectors[:self.rank], vectors[self.rank:]

    def component(self, monom):
        return 0 if self.plain else monom.index(1, self.nvars) - self.nvars

    def degree(self, monom):
        if self.plain:
            return sum(monom) + self.shifts[0]
        c = self.component(monom)
        return sum(monom[:self.nvars]) + self.all_shifts[c]

    def in_main(self, monom):
        return self.plain or self.component(monom) < self.rank


class GroebnerEngine:
    """Buchberger incremental con criterios de Gebauer–Möller.

    Los elementos cuyo término líder cae en el bloque de seguimiento (parte
    principal nula) no entran en la base: se guardan en ``syzygies``.
    """

    def __init__(self, space, selection="normal"):
        if selection not in SELECTION_STRATEGIES:
            raise ValueError(f"Estrategia de selección desconocida: {selection}")
        self.space = space
        self.ring = space.ring
        self.selection = selection
        self.basis = []
        self.leads = []
        self.pairs = set()
        self.syzygies = []
        self.reductions = 0

    def lcm(self, i, j):
        return self.ring.monomial_lcm(self.leads[i], self.leads[j])

    def pair_degree(self, pair):
        return self.space.degree(self.lcm(*pair))

    def spoly(self, i, j):
        ring = self.ring
        lcm = self.lcm(i, j)
        s1 = self.basis[i].mul_monom(ring.monomial_div(lcm, self.leads[i]))
        s2 = self.basis[j].mul_monom(ring.monomial_div(lcm, self.leads[j]))
        return s1 - s2

    def reduce(self, f):
        if not f or not self.basis:
            return f
        self.reductions += 1
        return f.rem(self.basis)

    def add(self, f):
        """Reduce f y, si sobrevive en el bloque principal, lo añade a la base"""
        r = self.reduce(f)
        if not r:
            return None
        lead = r.leading_expv()
        if not self.space.in_main(lead):
            self.syzygies.append(r)
            return None
        r = r.monic()
        self.update(r, lead)
        return r

    def update(self, f, lmf):
        ring = self.ring
        lcm, mul, div = ring.monomial_lcm, ring.monomial_mul, ring.monomial_div
        lmG = self.leads
        comp = self.space.component(lmf)
        self.pairs = {p for p in self.pairs
                      if (not div(lcm(lmG[p[0]], lmG[p[1]]), lmf)
                          or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf)
                          or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf))}
        lcm_dict = {}
        for i, lm in enumerate(lmG):
            if self.space.component(lm) == comp:
                lcm_dict.setdefault(lcm(lm, lmf), []).append(i)
        minimalized = []
        for L in sorted(lcm_dict, key=ring.order):
            if all(not div(L, L_) for L_ in minimalized):
                minimalized.append(L)
        new = len(self.basis)
        for L in minimalized:
            if self.space.plain and any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
                continue
            self.pairs.add((min(lcm_dict[L]), new))
        self.basis.append(f)
        self.leads.append(lmf)

    def select(self, candidates):
        if self.selection == "first":
            return min(candidates, key=lambda p: (p[1], p[0]))
        if self.selection == "degree":
            return min(candidates, key=lambda p: (self.pair_degree(p), p))
        return min(candidates, key=lambda p: (self.pair_degree(p), self.ring.order(self.lcm(*p)), p))

    def complete(self, max_degree=None):
        """Procesa los pares S (de grado ≤ max_degree si se indica)"""
        while True:
            if max_degree is None:
                candidates = self.pairs
            else:
                candidates = [p for p in self.pairs if self.pair_degree(p) <= max_degree]
            if not candidates:
                return self
            pair = self.select(candidates)
            self.pairs.discard(pair)
            self.add(self.spoly(*pair))

    def minimal_basis(self):
        order = self.ring.order
        kept = []
        for f, lm in sorted(zip(self.basis, self.leads), key=lambda t: order(t[1])):
            if all(not self.ring.monomial_div(lm, g_lm) for _, g_lm in kept):
                kept.append((f, lm))
        return [f for f, _ in kept]

    def reduced_basis(self):
        """Base reducida, mónica y ordenada por término líder decreciente"""
        minimal = self.minimal_basis()
        reduced = []
        for i, g in enumerate(minimal):
            others = minimal[:i] + minimal[i + 1:]
            reduced.append((g.rem(others) if others else g).monic())
        return sorted(reduced, key=lambda g: self.ring.order(g.leading_expv()), reverse=True)


def element_degree(space, element):
    return space.degree(element.leading_expv())


def minimal_generator_indices(space, elements, selection="normal"):
    """Índices de un sistema minimal de generadores (Nakayama graduado).

    Los elementos deben ser homogéneos; se procesan por grado creciente y un
    elemento se descarta si su forma normal respecto de la base truncada en
    su grado es cero.
    """
    engine = GroebnerEngine(space, selection)
    nonzero = [k for k, e in enumerate(elements) if e]
    ordered = sorted(nonzero, key=lambda k: (element_degree(space, elements[k]), k))
    kept = []
    for degree, group in groupby(ordered, key=lambda k: element_degree(space, elements[k])):
        for k in group:
            engine.complete(degree)
            if engine.add(elements[k]) is not None:
                kept.append(k)
    return kept


def module_syzygies(base_ring, target_shifts, source_shifts, columns, selection="normal"):
    """Generadores minimales del módulo de sicigias de las columnas dadas.

    Devuelve (grados, vectores) con cada vector de longitud len(columns).
    """
    space = FreeModuleSpace(base_ring, target_shifts, source_shifts)
    zeros = [base_ring.zero] * len(columns)
    engine = GroebnerEngine(space, selection)
    augmented = []
    for k, column in enumerate(columns):
        tracking = list(zeros)
        tracking[k] = base_ring.one
        augmented.append(space.element(column, tracking))
    for degree, group in groupby(sorted(range(len(columns)), key=lambda k: (source_shifts[k], k)),
                                 key=lambda k: source_shifts[k]):
        for k in group:
            engine.complete(degree)
            engine.add(augmented[k])
    engine.complete()
    raw = [space.split(s)[1] for s in engine.syzygies]
    logger.debug(f"Sicigias: {len(engine.basis)} elementos en la base, {len(raw)} candidatas, "
                 f"{engine.reductions} reducciones")
    if not raw:
        return [], []
    syz_space = FreeModuleSpace(base_ring, source_shifts)
    elements = [syz_space.element(v) for v in raw]
    kept = minimal_generator_indices(syz_space, elements, selection)
    kept.sort(key=lambda k: (element_degree(syz_space, elements[k]), k))
    degrees = [element_degree(syz_space, elements[k]) for k in kept]
    return degrees, [raw[k] for k in kept]


def module_lift(base_ring, target_shifts, source_shifts, columns, targets, selection="normal"):
    """Expresa cada vector de ``targets`` como combinación de ``columns``"""
    space = FreeModuleSpace(base_ring, target_shifts, source_shifts)
    zeros = [base_ring.zero] * len(columns)
    engine = GroebnerEngine(space, selection)
    for k, column in enumerate(columns):
        tracking = list(zeros)
        tracking[k] = base_ring.one
        engine.add(space.element(column, tracking))
    engine.complete()
    coefficients = []
    for target in targets:
        main, tracking = space.split(engine.reduce(space.element(target, zeros)))
        if any(main):
            raise NotInImageError("El vector no pertenece a la imagen del mapa")
        coefficients.append([-c for c in tracking])
    return coefficients


# ---------------------------------------------------------------------------
# Ideales
# ---------------------------------------------------------------------------

class Ideal:
    """Ideal homogéneo de QQ[x_0..x_n] con base de Gröbner reducida en caché"""

    def __init__(self, generators, ring=None, selection="normal"):
        generators = list(generators)
        if ring is None:
            if not generators:
                raise ValueError("Un ideal sin generadores necesita su anillo")
            ring = generators[0].ring
        self.ring = ring
        if selection not in SELECTION_STRATEGIES:
            raise ValueError(f"Estrategia de selección desconocida: {selection}")
        self.selection = selection
        self.generators = [with_order(g, ring) for g in generators if g]
        for g in self.generators:
            check_homogeneous(g, "generador")

    @classmethod
    def from_strings(cls, texts, nvars, order=MonomialOrder()):
        ring = polynomial_ring(nvars, order)
        return cls([parse_poly(t, ring) for t in texts], ring)

    @classmethod
    def zero(cls, ring):
        return cls([], ring)

    @classmethod
    def unit(cls, ring):
        return cls([ring.one], ring)

    @classmethod
    def irrelevant(cls, ring):
        return cls(list(ring.gens), ring)

    @property
    def nvars(self):
        return self.ring.ngens

    @property
    def n(self):
        """Dimensión del espacio proyectivo ambiente"""
        return self.ring.ngens - 1

    @cached_property
    def groebner_basis(self):
        if not self.generators:
            return []
        engine = GroebnerEngine(FreeModuleSpace(self.ring), self.selection)
        for g in self.generators:
            engine.add(g)
        engine.complete()
        basis = engine.reduced_basis()
        logger.debug(f"Base de Gröbner: {len(basis)} elementos, {engine.reductions} reducciones")
        return basis

    @cached_property
    def minimal_generators(self):
        gens = sorted(self.generators, key=lambda g: (sum(g.leading_expv()), self.ring.order(g.leading_expv())))
        space = FreeModuleSpace(self.ring)
        kept = minimal_generator_indices(space, gens, self.selection)
        return [gens[k].monic() for k in kept]

    @property
    def leading_monomials(self):
        return [g.leading_expv() for g in self.groebner_basis]

    def with_order(self, order):
        """Mismo ideal en otro orden monomial (la base se regenera)"""
        ring = polynomial_ring(self.nvars, order)
        return Ideal([with_order(g, ring) for g in self.generators], ring, self.selection)

    def is_zero(self):
        return not self.groebner_basis

    def is_unit(self):
        return any(g.is_ground for g in self.groebner_basis)

    def contains(self, f):
        return not normal_form(f, self)

    def __contains__(self, f):
        return self.contains(f)

    def __eq__(self, other):
        return isinstance(other, Ideal) and ideal_equal(self, other)

    def __hash__(self):
        return hash(tuple(self.groebner_basis))

    def __repr__(self):
        gens = ", ".join(format_poly(g) for g in self.generators) or "0"
        return f"Ideal({gens})"


def same_ring(I, J):
    if I.nvars != J.nvars:
        raise RingMismatchError(f"Ideales en anillos distintos: {I.nvars} y {J.nvars} variables")
    return J if J.ring == I.ring else Ideal([with_order(g, I.ring) for g in J.generators], I.ring)


def groebner_basis(I):
    return I.groebner_basis


def normal_form(f, I):
    f = with_order(f, I.ring)
    basis = I.groebner_basis
    return f.rem(basis) if basis and f else f


def is_groebner_basis(basis):
    """Criterio de Buchberger: todos los S-polinomios reducen a cero"""
    if not basis:
        return True
    ring = basis[0].ring
    for f, g in combinations(basis, 2):
        lf, lg = f.leading_expv(), g.leading_expv()
        lcm = ring.monomial_lcm(lf, lg)
        s = (f.mul_monom(ring.monomial_div(lcm, lf)).quo_ground(f.LC)
             - g.mul_monom(ring.monomial_div(lcm, lg)).quo_ground(g.LC))
        if s and s.rem(basis):
            return False
    return True


def ideal_equal(I, J):
    J = same_ring(I, J)
    return I.groebner_basis == J.groebner_basis


def ideal_sum(I, J):
    J = same_ring(I, J)
    return Ideal(I.generators + J.generators, I.ring, I.selection)


def eliminate(generators, ring, eliminated, base=None):
    """Base de Gröbner de (generators) ∩ k[resto] con un orden de eliminación.

    ``ring`` contiene todas las variables; devuelve los elementos de la base
    reducida libres de las variables eliminadas (en ``ring``).
    """
    if base is None:
        base = ring.order if isinstance(ring.order, MonomialOrder) else MonomialOrder()
    order = EliminationOrder(base, tuple(eliminated))
    big = PolyRing(ring.symbols, QQ, order)
    engine = GroebnerEngine(FreeModuleSpace(big))
    for g in generators:
        engine.add(big.from_dict(dict(g)))
    engine.complete()
    kept = [g for g in engine.reduced_basis() if all(m[i] == 0 for m in g.itermonoms() for i in eliminated)]
    return [ring.from_dict(dict(g)) for g in kept]


@lru_cache(maxsize=None)
def _auxiliary_ring(ring):
    names = [str(s) for s in ring.symbols] + ["t"]
    return PolyRing(names, QQ, MonomialOrder())


def ideal_intersect(I, J):
    """I ∩ J eliminando t de t·I + (1 − t)·J"""
    J = same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal.zero(ring)
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    big = _auxiliary_ring(ring)
    t = big.gens[-1]

    def lift(f):
        return big.from_dict({m + (0,): c for m, c in f.iterterms()})

    gens = [t * lift(f) for f in I.generators] + [(1 - t) * lift(g) for g in J.generators]
    kept = eliminate(gens, big, (ring.ngens,), base=ring.order)
    result = Ideal([ring.from_dict({m[:-1]: c for m, c in g.iterterms()}) for g in kept], ring, I.selection)
    logger.debug(f"Intersección: {len(result.generators)} generadores")
    return result


def principal_quotient(I, g):
    """(I : g) = (I ∩ (g)) / g"""
    ring = I.ring
    if not g:
        return Ideal.unit(ring)
    inter = ideal_intersect(I, Ideal([g], ring))
    return Ideal([f.exquo(g) for f in inter.groebner_basis], ring, I.selection)


def ideal_quotient(I, J):
    J = same_ring(I, J)
    result = Ideal.unit(I.ring)
    for g in J.generators:
        result = ideal_intersect(result, principal_quotient(I, g))
    return result


def variable_saturation(I, j):
    """(I : x_j^∞) dividiendo por x_j la base degrevlex en la que x_j es la menor variable"""
    ring = I.ring
    order = MonomialOrder("degrevlex", tuple(k for k in range(I.nvars) if k != j) + (j,))
    x = ring.gens[j]
    divided = []
    for g in I.with_order(order).groebner_basis:
        g = with_order(g, ring)
        divided.append(g.exquo(x ** min(m[j] for m in g.itermonoms())))
    return Ideal(divided, ring, I.selection)


def _saturate_irrelevant(I):
    """I : m^∞ = ∩_j (I : x_j^∞); solo se intersecan las piezas que no están encajadas"""
    result = variable_saturation(I, 0)
    for j in range(1, I.nvars):
        K = variable_saturation(I, j)
        if all(K.contains(g) for g in result.generators):
            continue
        if all(result.contains(g) for g in K.generators):
            result = K
            continue
        logger.debug(f"Saturación: x_{j} exige una intersección")
        result = ideal_intersect(result, K)
    return result


def saturate(I, J=None):
    """(I : J^∞); con J irrelevante (por defecto) se satura variable a variable"""
    if J is None:
        if I.is_zero():
            return I
        return Ideal(_saturate_irrelevant(I).minimal_generators, I.ring, I.selection)
    J = same_ring(I, J)
    current = I
    steps = 0
    while True:
        quotient = ideal_quotient(current, J)
        steps += 1
        if ideal_equal(quotient, current):
            logger.debug(f"Saturación estable tras {steps} cocientes")
            return Ideal(current.minimal_generators, I.ring, I.selection)
        current = quotient


def graded_piece_dim(I, d):
    """dim_k (I)_d contando monomios de grado d en el ideal inicial"""
    if d < 0:
        return 0
    leads = I.leading_monomials
    div = I.ring.monomial_div
    return sum(1 for m in monomials_of_degree(I.nvars, d) if any(div(m, lm) is not None for lm in leads))


def homogeneous_basis(I, d):
    """Base de (I)_d formada por μ − NF(μ) con μ en el ideal inicial"""
    ring = I.ring
    leads = I.leading_monomials
    div = ring.monomial_div
    basis = []
    for m in monomials_of_degree(I.nvars, d):
        if any(div(m, lm) is not None for lm in leads):
            mono = ring.term_new(m, ring.domain.one)
            basis.append(mono - normal_form(mono, I))
    return basis


def minors_ideal(matrix, k, ring):
    """Ideal de los menores k×k de una matriz de polinomios"""
    rows, cols = len(matrix), len(matrix[0]) if matrix else 0
    minors = []
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            minors.append(determinant([[matrix[r][c] for c in cs] for r in rs], ring))
    return Ideal(minors, ring)


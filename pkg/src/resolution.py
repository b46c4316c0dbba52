"""Resoluciones libres graduadas, tablas de Betti, Tor, Hilbert y Ext.

Convenciones:
- ``GradedFreeModule((j_1, …))`` es ⊕ R(-j_k); los j son los grados de los
  generadores.
- Un ``GradedMap`` guarda la matriz por filas (filas = generadores del
  destino, columnas = generadores del origen); la entrada (r, c) es homogénea
  de grado source.twists[c] - target.twists[r].
- Un módulo se representa por una presentación: el módulo es el conúcleo del
  mapa de relaciones.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import pandas as pd
from sympy import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from src.errors import (
    NonMinimalResolutionError,
    NotAComplexError,
    NotHomogeneousError,
    ShapeMismatchError,
)
from src.groebner import (
    FreeModuleSpace,
    Ideal,
    graded_piece_dim,
    minimal_generator_indices,
    module_lift,
    module_syzygies,
)
from src.linalg import rank as vectors_rank
from src.polyring import format_poly, format_terms, is_homogeneous, monomials_of_degree, poly_degree
from src.utils import binomial

logger = logging.getLogger(__name__)

HILBERT_RING = PolyRing("t", QQ, lex)


@dataclass(frozen=True)
class GradedFreeModule:
    twists: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(j) for j in self.twists))

    @property
    def rank(self):
        return len(self.twists)

    def dim(self, d, nvars):
        """dim_k del grado d de ⊕ R(-j)"""
        return sum(binomial(d - j + nvars - 1, nvars - 1) for j in self.twists)

    def shift(self, a):
        """M(a): los generadores bajan a grados j - a"""
        return GradedFreeModule(tuple(j - a for j in self.twists))

    def dual(self, twist=0):
        """Hom(·, R(-twist)) en términos de grados de generadores"""
        return GradedFreeModule(tuple(twist - j for j in self.twists))

    def restrict(self, indices):
        return GradedFreeModule(tuple(self.twists[k] for k in indices))

    def __add__(self, other):
        return GradedFreeModule(self.twists + other.twists)

    def betti(self):
        return Counter(self.twists)

    def __str__(self):
        if not self.twists:
            return "0"
        return " + ".join(f"R({-j})^{b}" if b > 1 else f"R({-j})" for j, b in sorted(self.betti().items()))


class GradedMap:
    """Matriz de polinomios homogéneos entre módulos libres graduados"""

    def __init__(self, ring, source, target, matrix, check=True):
        self.ring = ring
        self.source = source if isinstance(source, GradedFreeModule) else GradedFreeModule(source)
        self.target = target if isinstance(target, GradedFreeModule) else GradedFreeModule(target)
        rows = [list(row) for row in matrix]
        if not rows and self.target.rank:
            rows = [[] for _ in range(self.target.rank)]
        self.matrix = [[ring.from_dict(dict(f)) if f.ring != ring else f for f in row] for row in rows]
        if len(self.matrix) != self.target.rank or any(len(row) != self.source.rank for row in self.matrix):
            raise ShapeMismatchError(
                f"Matriz {len(self.matrix)}x{len(self.matrix[0]) if self.matrix else 0} incompatible con "
                f"rangos {self.target.rank} <- {self.source.rank}")
        if check:
            self.check_homogeneous()

    @classmethod
    def from_columns(cls, ring, source, target, columns, check=True):
        target = target if isinstance(target, GradedFreeModule) else GradedFreeModule(target)
        matrix = [[col[r] for col in columns] for r in range(target.rank)]
        return cls(ring, source, target, matrix, check)

    @classmethod
    def zero(cls, ring, source, target):
        source, target = GradedFreeModule(tuple(source.twists)), GradedFreeModule(tuple(target.twists))
        return cls(ring, source, target, [[ring.zero] * source.rank for _ in range(target.rank)], check=False)

    def check_homogeneous(self):
        for r, row in enumerate(self.matrix):
            for c, f in enumerate(row):
                if not f:
                    continue
                expected = self.source.twists[c] - self.target.twists[r]
                if not is_homogeneous(f) or poly_degree(f) != expected:
                    raise NotHomogeneousError(
                        f"Entrada ({r}, {c}) = {format_poly(f)} debería ser homogénea de grado {expected}")

    @property
    def shape(self):
        return self.target.rank, self.source.rank

    def column(self, c):
        return [row[c] for row in self.matrix]

    @property
    def columns(self):
        return [self.column(c) for c in range(self.source.rank)]

    def is_zero(self):
        return not any(f for row in self.matrix for f in row)

    def compose(self, other):
        """self ∘ other"""
        if other.target.twists != self.source.twists:
            raise ShapeMismatchError("Los módulos intermedios de la composición no coinciden")
        zero = self.ring.zero
        matrix = []
        for row in self.matrix:
            new_row = []
            for c in range(other.source.rank):
                total = zero
                for k, f in enumerate(row):
                    g = other.matrix[k][c]
                    if f and g:
                        total = total + f * g
                new_row.append(total)
            matrix.append(new_row)
        return GradedMap(self.ring, other.source, self.target, matrix, check=False)

    def transpose(self, twist=0):
        """Mapa dual Hom(target, R(-twist)) -> Hom(source, R(-twist))"""
        matrix = [[self.matrix[r][c] for r in range(self.target.rank)] for c in range(self.source.rank)]
        return GradedMap(self.ring, self.target.dual(twist), self.source.dual(twist), matrix, check=False)

    def submatrix(self, rows, cols):
        matrix = [[self.matrix[r][c] for c in cols] for r in rows]
        return GradedMap(self.ring, self.source.restrict(cols), self.target.restrict(rows), matrix, check=False)

    def shift(self, a):
        return GradedMap(self.ring, self.source.shift(a), self.target.shift(a), self.matrix, check=False)

    def degree_columns(self, d):
        """Imágenes de la base monomial de (source)_d como vectores de (target)_d"""
        nvars = self.ring.ngens
        vectors = []
        for c, s in enumerate(self.source.twists):
            col = self.column(c)
            for m in monomials_of_degree(nvars, d - s):
                vec = {}
                for r, f in enumerate(col):
                    if not f:
                        continue
                    for fm, coeff in f.iterterms():
                        key = (r, tuple(a + b for a, b in zip(fm, m)))
                        vec[key] = vec.get(key, 0) + coeff
                vectors.append(vec)
        return vectors

    def degree_rank(self, d):
        """Rango del mapa k-lineal en grado d"""
        if not self.source.rank or not self.target.rank:
            return 0
        return vectors_rank(self.degree_columns(d))

    @cached_property
    def key(self):
        return (self.ring, self.source.twists, self.target.twists,
                tuple(tuple(row) for row in self.matrix))

    def __eq__(self, other):
        return isinstance(other, GradedMap) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def dump(self, name="phi"):
        lines = [f"{name}: {self.source} -> {self.target}"]
        lines.append(f"  twists: {list(self.source.twists)} -> {list(self.target.twists)}")
        for row in self.matrix:
            lines.append("  [" + ", ".join(format_poly(f) for f in row) + "]")
        return "\n".join(lines)

    def __repr__(self):
        return f"GradedMap({self.target.rank}x{self.source.rank}, {self.source} -> {self.target})"


def ideal_map(I):
    """φ_0: F_0 -> R dado por los generadores minimales del ideal"""
    gens = I.minimal_generators
    source = GradedFreeModule(tuple(poly_degree(g) for g in gens))
    return GradedMap(I.ring, source, GradedFreeModule((0,)), [list(gens)])


def syzygies(phi, selection="normal"):
    """ψ con destino = source(φ), φ∘ψ = 0 e imagen(ψ) = ker(φ) (generadores minimales)"""
    ring = phi.ring
    degrees, vectors = module_syzygies(ring, phi.target.twists, phi.source.twists, phi.columns, selection)
    source = GradedFreeModule(tuple(degrees))
    return GradedMap.from_columns(ring, source, phi.source, vectors)


def lift(targets, phi, selection="normal"):
    """Matriz L con φ·L = targets (los targets son un GradedMap hacia target(φ))"""
    coefficients = module_lift(phi.ring, phi.target.twists, phi.source.twists, phi.columns,
                               targets.columns, selection)
    return GradedMap.from_columns(phi.ring, targets.source, phi.source, coefficients)


def minimal_image_generators(phi, selection="normal"):
    """Restringe φ a un sistema minimal de columnas que genera su imagen"""
    if not phi.target.rank:
        return GradedMap.zero(phi.ring, GradedFreeModule(()), phi.target)
    space = FreeModuleSpace(phi.ring, phi.target.twists)
    elements = [space.element(col) for col in phi.columns]
    kept = sorted(minimal_generator_indices(space, elements, selection))
    return phi.submatrix(range(phi.target.rank), kept)


def find_unit(matrix):
    for r, row in enumerate(matrix):
        for c, f in enumerate(row):
            if f and f.is_ground:
                return r, c
    return None


def cancel_unit(matrix, r, c):
    """Elimina la fila r y la columna c usando la unidad matrix[r][c]"""
    pivot = matrix[r][c]
    inverse = pivot.ring.domain.one / pivot.LC
    new = []
    for i, row in enumerate(matrix):
        if i == r:
            continue
        factor = row[c] * inverse if row[c] else None
        new_row = []
        for j, f in enumerate(row):
            if j == c:
                continue
            if factor is not None and matrix[r][j]:
                f = f - factor * matrix[r][j]
            new_row.append(f)
        new.append(new_row)
    return new


def minimal_presentation(phi, selection="normal"):
    """Presentación minimal del conúcleo de φ"""
    current = phi
    while True:
        current = minimal_image_generators(current, selection)
        unit = find_unit(current.matrix)
        if unit is None:
            return current
        r, c = unit
        rows = [k for k in range(current.target.rank) if k != r]
        cols = [k for k in range(current.source.rank) if k != c]
        current = GradedMap(current.ring, current.source.restrict(cols), current.target.restrict(rows),
                            cancel_unit(current.matrix, r, c), check=False)


@dataclass(frozen=True)
class BettiTable:
    entries: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.entries.get(tuple(key), 0)

    @property
    def regularity(self):
        return max((j - i for (i, j) in self.entries), default=0)

    @property
    def length(self):
        return max((i for (i, _) in self.entries), default=0)

    def totals(self):
        totals = Counter()
        for (i, _), b in self.entries.items():
            totals[i] += b
        return dict(sorted(totals.items()))

    def to_json(self):
        return {"betti": [{"i": i, "j": j, "b": b} for (i, j), b in sorted(self.entries.items())]}

    def to_frame(self):
        """Tabla al estilo de Macaulay2: filas j - i, columnas i"""
        if not self.entries:
            return pd.DataFrame()
        cols = range(0, self.length + 1)
        rows = range(min(j - i for (i, j) in self.entries), self.regularity + 1)
        frame = pd.DataFrame(
            [[self.entries.get((i, i + r), 0) for i in cols] for r in rows],
            index=[str(r) for r in rows], columns=list(cols))
        frame.loc["total"] = [self.totals().get(i, 0) for i in cols]
        return frame

    def __str__(self):
        frame = self.to_frame()
        return "0" if frame.empty else frame.replace(0, ".").to_string()


@dataclass(frozen=True)
class FreeResolution:
    """F_0 <- F_1 <- … ; ``differentials[i]`` es F_{i+1} -> F_i.

    Para ideales ``augmentation`` es φ_0: F_0 -> R y φ_i = differentials[i-1];
    para módulos el módulo resuelto es coker(differentials[0]).
    """

    ring: PolyRing
    modules: tuple
    differentials: tuple
    augmentation: GradedMap = None
    minimal: bool = True

    @property
    def length(self):
        return len(self.differentials)

    def phi(self, i):
        if self.augmentation is not None:
            return self.augmentation if i == 0 else self.differentials[i - 1]
        return self.differentials[i]

    @property
    def maps(self):
        head = [self.augmentation] if self.augmentation is not None else []
        return head + list(self.differentials)

    def free_module(self, i):
        return self.modules[i] if 0 <= i < len(self.modules) else GradedFreeModule(())

    def dump(self):
        names = "phi" if self.augmentation is not None else "d"
        offset = 0 if self.augmentation is not None else 1
        return "\n".join(m.dump(f"{names}_{k + offset}") for k, m in enumerate(self.maps))


def _chain(ring, modules, maps, augmentation, selection):
    current = maps[-1] if maps else augmentation
    while True:
        syz = syzygies(current, selection)
        if not syz.source.rank:
            break
        maps.append(syz)
        modules.append(syz.source)
        current = syz
        if len(maps) > ring.ngens + 1:
            raise NotAComplexError("La resolución excede la longitud de Hilbert; el orden no es válido")
    return minimalize(FreeResolution(ring, tuple(modules), tuple(maps), augmentation, minimal=False))


@lru_cache(maxsize=64)
def _resolve_ideal(ring, basis, selection):
    phi0 = ideal_map(Ideal(list(basis), ring, selection))
    logger.info(f"Resolviendo ideal con generadores en grados {list(phi0.source.twists)}")
    if not phi0.source.rank:
        return FreeResolution(ring, (phi0.source,), (), phi0)
    return _chain(ring, [phi0.source], [], phi0, selection)


def free_resolution(I, selection=None):
    """Resolución libre graduada minimal del ideal homogéneo I"""
    resolution = _resolve_ideal(I.ring, tuple(I.groebner_basis), selection or I.selection)
    logger.debug(f"Betti: {betti(resolution).to_json()}")
    return resolution


@lru_cache(maxsize=64)
def _resolve_presentation(phi, selection):
    presentation = minimal_presentation(phi, selection)
    modules = [presentation.target]
    if not presentation.target.rank:
        return FreeResolution(phi.ring, tuple(modules), ())
    if not presentation.source.rank:
        return FreeResolution(phi.ring, tuple(modules), ())
    modules.append(presentation.source)
    return _chain(phi.ring, modules, [presentation], None, selection)


def resolve_module(presentation, selection="normal"):
    """Resolución minimal de coker(presentation)"""
    return _resolve_presentation(presentation, selection)


def minimalize(resolution):
    """Cancela entradas unidad de las diferenciales propagando a los vecinos"""
    ring = resolution.ring
    twists = [list(m.twists) for m in resolution.modules]
    maps = [[list(row) for row in m.matrix] for m in resolution.differentials]
    augmentation = None
    if resolution.augmentation is not None:
        augmentation = [list(row) for row in resolution.augmentation.matrix]
    cancelled = 0
    while True:
        found = None
        for k, matrix in enumerate(maps):
            unit = find_unit(matrix)
            if unit is not None:
                found = (k, unit)
                break
        if found is None:
            break
        k, (r, c) = found
        maps[k] = cancel_unit(maps[k], r, c)
        if k + 1 < len(maps):
            maps[k + 1] = [row for i, row in enumerate(maps[k + 1]) if i != c]
        if k >= 1:
            maps[k - 1] = [[f for j, f in enumerate(row) if j != r] for row in maps[k - 1]]
        elif augmentation is not None:
            augmentation = [[f for j, f in enumerate(row) if j != r] for row in augmentation]
        del twists[k + 1][c]
        del twists[k][r]
        cancelled += 1
    while len(twists) > 1 and not twists[-1]:
        twists.pop()
        maps.pop()
    if cancelled:
        logger.debug(f"Minimalización: {cancelled} unidades canceladas")
    modules = [GradedFreeModule(tuple(t)) for t in twists]
    differentials = tuple(GradedMap(ring, modules[k + 1], modules[k], maps[k], check=False)
                          for k in range(len(maps)))
    aug = None
    if augmentation is not None:
        aug = GradedMap(ring, modules[0], GradedFreeModule((0,)), augmentation, check=False)
    return FreeResolution(ring, tuple(modules), differentials, aug, minimal=True)


def is_minimal(resolution):
    return all(find_unit(m.matrix) is None for m in resolution.differentials)


def betti(resolution):
    if not resolution.minimal or not is_minimal(resolution):
        raise NonMinimalResolutionError("La tabla de Betti requiere una resolución minimal")
    entries = {}
    for i, module in enumerate(resolution.modules):
        for j, b in module.betti().items():
            entries[(i, j)] = b
    return BettiTable(entries)


def tor_basis(I, p, m):
    """Vectores canónicos de k^{β_{p,m}} etiquetados por las columnas de grado m de F_p"""
    resolution = free_resolution(I)
    if p < 0 or p >= len(resolution.modules):
        return []
    twists = resolution.modules[p].twists
    return [tuple(QQ(int(i == k)) for i in range(len(twists))) for k, j in enumerate(twists) if j == m]


def as_resolution(M):
    if isinstance(M, FreeResolution):
        return M
    if isinstance(M, Ideal):
        return free_resolution(M)
    return resolve_module(M)


def binomial_polynomial(shift, n):
    """C(t - shift + n, n) como polinomio en t"""
    t = HILBERT_RING.gens[0]
    poly = HILBERT_RING.one
    for k in range(1, n + 1):
        poly *= (t - shift + k)
    factorial = 1
    for k in range(2, n + 1):
        factorial *= k
    return poly.quo_ground(QQ(factorial))


def hilbert_polynomial(M):
    """P(t) = Σ_i (-1)^i Σ_j β_ij C(t - j + n, n)"""
    resolution = as_resolution(M)
    n = resolution.ring.ngens - 1
    total = HILBERT_RING.zero
    for i, module in enumerate(resolution.modules):
        for j, b in module.betti().items():
            total += (-1) ** i * b * binomial_polynomial(j, n)
    return total


def evaluate_hilbert(poly, t):
    value = QQ(t)
    return sum((c * value ** m[0] for m, c in poly.iterterms()), QQ(0))


def format_hilbert(poly):
    return format_terms(poly.terms(), ["t"])


def hilbert_function(M, d):
    resolution = as_resolution(M)
    nvars = resolution.ring.ngens
    return sum((-1) ** i * module.dim(d, nvars) for i, module in enumerate(resolution.modules))


def hilbert_numerator(M):
    """Numerador de la serie de Hilbert: {j: Σ_i (-1)^i β_ij}"""
    resolution = as_resolution(M)
    numerator = Counter()
    for i, module in enumerate(resolution.modules):
        for j, b in module.betti().items():
            numerator[j] += (-1) ** i * b
    return {j: c for j, c in sorted(numerator.items()) if c}


def regularity(M):
    return betti(as_resolution(M)).regularity


def module_rank(M):
    """Rango genérico: coeficiente principal de P(t) por n!"""
    poly = hilbert_polynomial(M)
    n = as_resolution(M).ring.ngens - 1
    factorial = 1
    for k in range(2, n + 1):
        factorial *= k
    return int(dict(poly).get((n,), QQ(0)) * factorial)


def scheme_dimension(I):
    """Dimensión de V(I) ⊂ P^n (-1 si es vacío)"""
    n = I.ring.ngens - 1
    quotient = binomial_polynomial(0, n) - hilbert_polynomial(I)
    return quotient.degree() if quotient else -1


def homology_presentation(A, B, selection="normal"):
    """Presentación minimal de ker(B)/im(A) para un complejo · -A-> G -B-> ·"""
    if A.target.twists != B.source.twists:
        raise ShapeMismatchError("A y B no son consecutivos")
    if not B.compose(A).is_zero():
        raise NotAComplexError("B∘A ≠ 0")
    K = syzygies(B, selection)
    ring = B.ring
    if not K.source.rank:
        return GradedMap.zero(ring, GradedFreeModule(()), GradedFreeModule(()))
    L = lift(A, K, selection) if A.source.rank else GradedMap.zero(ring, GradedFreeModule(()), K.source)
    relations = syzygies(K, selection)
    source = L.source + relations.source
    columns = L.columns + relations.columns
    presentation = GradedMap.from_columns(ring, source, K.source, columns)
    result = minimal_presentation(presentation, selection)
    logger.info(f"Homología: {result.target.rank} generadores, {result.source.rank} relaciones")
    return result


def graded_ext_dim(M, q, d):
    """dim_k Ext^q_R(M, R(-n-1))_d a partir de la resolución dualizada"""
    resolution = as_resolution(M)
    nvars = resolution.ring.ngens
    twist = nvars
    module = resolution.free_module(q)
    if not module.rank:
        return 0
    dim = module.dual(twist).dim(d, nvars)
    if q < len(resolution.differentials):
        dim -= resolution.differentials[q].transpose(twist).degree_rank(d)
    if q >= 1 and q - 1 < len(resolution.differentials):
        dim -= resolution.differentials[q - 1].transpose(twist).degree_rank(d)
    return dim


def is_complex(resolution):
    maps = resolution.maps
    return all(maps[k].compose(maps[k + 1]).is_zero() for k in range(len(maps) - 1))


def homology_defects(resolution, d):
    """dim H_i en grado d para cada F_i (i ≥ 1, y F_0 si es resolución de un ideal)"""
    nvars = resolution.ring.ngens
    maps = resolution.maps
    defects = []
    for k, module in enumerate(resolution.modules):
        if resolution.augmentation is None and k == 0:
            continue
        outgoing = maps[k] if resolution.augmentation is not None else maps[k - 1]
        index = k + 1 if resolution.augmentation is not None else k
        incoming = maps[index] if index < len(maps) else None
        defect = module.dim(d, nvars) - outgoing.degree_rank(d)
        if incoming is not None:
            defect -= incoming.degree_rank(d)
        defects.append(defect)
    return defects


def is_exact_in_degree(resolution, d):
    return all(defect == 0 for defect in homology_defects(resolution, d))


def ideal_hilbert_check(I, d):
    """Compara la función de Hilbert de la resolución con graded_piece_dim"""
    return hilbert_function(I, d) == graded_piece_dim(I, d)

"""Álgebra lineal exacta sobre QQ para piezas graduadas.

Los vectores son diccionarios ``clave -> coeficiente`` con claves arbitrarias
(monomios, pares (índice, monomio), ...). Las matrices se construyen dispersas
con ``DomainMatrix`` de sympy.
"""

import logging

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)


class CoordinateIndex:
    """Asigna índices de columna consecutivos a claves hashables"""

    def __init__(self, keys=()):
        self.positions = {}
        self.keys = []
        for key in keys:
            self.index(key)

    def index(self, key):
        position = self.positions.get(key)
        if position is None:
            position = len(self.keys)
            self.positions[key] = position
            self.keys.append(key)
        return position

    def __len__(self):
        return len(self.keys)


def to_domain_matrix(rows, ncols):
    """Matriz dispersa a partir de filas ``{columna: valor}``"""
    data = {}
    for i, row in enumerate(rows):
        entries = {j: QQ.convert(v) for j, v in row.items() if v}
        if entries:
            data[i] = entries
    return DomainMatrix(data, (len(rows), ncols), QQ)


def matrix_rank(rows, ncols):
    if not any(any(row.values()) for row in rows):
        return 0
    return to_domain_matrix(rows, ncols).rank()


def _indexed(vectors, coords=None):
    coords = coords or CoordinateIndex()
    rows = [{coords.index(k): v for k, v in vec.items() if v} for vec in vectors]
    return rows, coords


def rank(vectors):
    """Rango de una familia de vectores dispersos"""
    rows, coords = _indexed(vectors)
    return matrix_rank(rows, len(coords))


def independent_subset(vectors):
    """Índices de la primera subfamilia maximal linealmente independiente"""
    rows, coords = _indexed(vectors)
    if not any(rows):
        return []
    columns = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            columns.setdefault(j, {})[i] = v
    matrix = DomainMatrix(columns, (len(coords), len(rows)), QQ)
    _, pivots = matrix.rref()
    return list(pivots)


def nullspace(rows, ncols):
    """Base del núcleo de la matriz dada por filas dispersas (lista de listas de QQ)"""
    if not any(any(row.values()) for row in rows):
        return [[QQ(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    basis = reduced.nullspace_from_rref(pivots)
    return basis.to_list()


def same_span(first, second):
    """Igualdad exacta de los subespacios generados"""
    rows, coords = _indexed(first)
    other, coords = _indexed(second, coords)
    r1 = matrix_rank(rows, len(coords))
    r2 = matrix_rank(other, len(coords))
    if r1 != r2:
        return False
    return matrix_rank(rows + other, len(coords)) == r1


def in_span(vector, basis):
    rows, coords = _indexed(list(basis) + [vector])
    return matrix_rank(rows[:-1], len(coords)) == matrix_rank(rows, len(coords))


def spans_intersect(first, second):
    """True si los subespacios generados tienen intersección no nula"""
    rows, coords = _indexed(first)
    other, coords = _indexed(second, coords)
    total = matrix_rank(rows + other, len(coords))
    return total < matrix_rank(rows, len(coords)) + matrix_rank(other, len(coords))


def determinant(matrix, ring):
    """Determinante de una matriz cuadrada de polinomios de ``ring``"""
    domain = ring.to_domain()
    size = len(matrix)
    rows = [[domain.convert(f) for f in row] for row in matrix]
    return DomainMatrix(rows, (size, size), domain).det()

"""Álgebra exterior Ω^p_R = R ⊗ Λ^p V* con coeficientes polinómicos.

Una p-forma guarda sus coeficientes indexados por tuplas estrictamente
crecientes (i_1 < … < i_p); los índices se normalizan con el signo de la
permutación al construirla. Se usa deg dx_i = deg x_i = 1.
"""

import logging
import re
from itertools import combinations

from sympy import QQ

from src.errors import (
    NotHomogeneousError,
    PolynomialParseError,
    RingMismatchError,
    ShapeMismatchError,
    UndefinedDeltaError,
    UnknownVariableError,
)
from src.polyring import (
    PolynomialParser,
    format_monomial,
    format_poly,
    is_homogeneous,
    parse_poly,
    poly_degree,
    with_order,
)
from src.utils import format_rational

logger = logging.getLogger(__name__)

DX_RE = re.compile(r"dx_?(\d+)")


def sort_with_sign(indices):
    """(tupla ordenada, signo) o (None, 0) si hay índices repetidos"""
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return None, 0
    sign = 1
    for i in range(len(indices)):
        for j in range(len(indices) - 1 - i):
            if indices[j] > indices[j + 1]:
                indices[j], indices[j + 1] = indices[j + 1], indices[j]
                sign = -sign
    return tuple(indices), sign


class PForm:
    """Forma diferencial Σ A_I dx_I de grado exterior p"""

    def __init__(self, ring, p, terms=None):
        self.ring = ring
        self.p = p
        self.terms = {}
        for idx, coeff in (terms or {}).items():
            if len(idx) != p:
                raise ShapeMismatchError(f"Índice {idx} en una {p}-forma")
            if not coeff:
                continue
            key, sign = sort_with_sign(idx)
            if key is None:
                continue
            if key[-1:] and key[-1] >= ring.ngens:
                raise IndexError(f"dx_{key[-1]} fuera de rango")
            if not hasattr(coeff, "ring"):
                coeff = ring.ground_new(QQ.convert(coeff))
            coeff = with_order(coeff, ring)
            total = self.terms.get(key, ring.zero) + sign * coeff
            if total:
                self.terms[key] = total
            else:
                self.terms.pop(key, None)

    @classmethod
    def zero(cls, ring, p):
        return cls(ring, p)

    @classmethod
    def from_poly(cls, f):
        return cls(f.ring, 0, {(): f})

    @classmethod
    def dx(cls, ring, *indices):
        return cls(ring, len(indices), {tuple(indices): ring.one})

    @property
    def n(self):
        return self.ring.ngens - 1

    def coefficient(self, idx):
        key, sign = sort_with_sign(idx)
        if key is None:
            return self.ring.zero
        return sign * self.terms.get(key, self.ring.zero)

    def coefficients(self):
        return [self.terms[k] for k in sorted(self.terms)]

    def items(self):
        return sorted(self.terms.items())

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other):
        if not isinstance(other, PForm):
            raise TypeError(f"Operación no soportada con {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError("Formas sobre anillos distintos")

    def __add__(self, other):
        self._check(other)
        if not other:
            return self
        if not self:
            return other
        if other.p != self.p:
            raise ShapeMismatchError(f"Suma de formas de grados {self.p} y {other.p}")
        terms = dict(self.terms)
        for idx, coeff in other.terms.items():
            terms[idx] = terms.get(idx, self.ring.zero) + coeff
        return PForm(self.ring, self.p, terms)

    def __neg__(self):
        return PForm(self.ring, self.p, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        """Producto por un polinomio o un racional"""
        if hasattr(factor, "ring"):
            factor = with_order(factor, self.ring)
        else:
            factor = QQ.convert(factor)
        return PForm(self.ring, self.p, {k: v * factor for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, PForm):
            return self.wedge(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def wedge(self, other):
        self._check(other)
        terms = {}
        for I, f in self.terms.items():
            for J, g in other.terms.items():
                key, sign = sort_with_sign(I + J)
                if key is None:
                    continue
                terms[key] = terms.get(key, self.ring.zero) + sign * f * g
        return PForm(self.ring, self.p + other.p, terms)

    def __eq__(self, other):
        if not isinstance(other, PForm):
            return NotImplemented
        if not self and not other:
            return self.ring == other.ring
        return self.ring == other.ring and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        if not self:
            return hash(0)
        return hash((self.p, tuple(sorted(self.terms.items()))))

    def coefficient_degree(self):
        """Grado común de los coeficientes (-1 para la forma nula)"""
        degrees = {poly_degree(f) for f in self.terms.values()}
        if not degrees:
            return -1
        if len(degrees) > 1 or not all(is_homogeneous(f) for f in self.terms.values()):
            raise NotHomogeneousError(f"Forma no homogénea: {format_form(self)}")
        return degrees.pop()

    def total_degree(self):
        return self.coefficient_degree() + self.p

    def is_homogeneous(self):
        try:
            self.coefficient_degree()
            return True
        except NotHomogeneousError:
            return False

    def map_coefficients(self, fn):
        return PForm(self.ring, self.p, {k: fn(v) for k, v in self.terms.items()})

    def __repr__(self):
        return f"PForm(p={self.p}, {format_form(self)})"


def wedge(a, b):
    return a.wedge(b)


def exterior_derivative(omega):
    ring = omega.ring
    terms = {}
    for idx, f in omega.terms.items():
        for i, x in enumerate(ring.gens):
            if i in idx:
                continue
            df = f.diff(x)
            if not df:
                continue
            key, sign = sort_with_sign((i,) + idx)
            terms[key] = terms.get(key, ring.zero) + sign * df
    return PForm(ring, omega.p + 1, terms)


class VectorField:
    """Campo Σ a_j ∂/∂x_j"""

    def __init__(self, ring, coefficients):
        coefficients = [with_order(a, ring) for a in coefficients]
        if len(coefficients) != ring.ngens:
            raise ShapeMismatchError(f"Un campo en {ring.ngens} variables necesita {ring.ngens} coeficientes")
        self.ring = ring
        self.coefficients = tuple(coefficients)

    @classmethod
    def rad(cls, ring):
        """Campo radial (de Euler) Σ x_i ∂/∂x_i"""
        return cls(ring, ring.gens)

    @classmethod
    def partial(cls, ring, j):
        return cls(ring, [ring.one if i == j else ring.zero for i in range(ring.ngens)])

    def degree(self):
        degrees = {poly_degree(a) for a in self.coefficients if a}
        if len(degrees) > 1 or not all(is_homogeneous(a) for a in self.coefficients):
            raise NotHomogeneousError("Campo vectorial no homogéneo")
        return degrees.pop() if degrees else -1

    def __sub__(self, other):
        return VectorField(self.ring, [a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)


def contract(omega, v):
    """Producto interior ι_v ω; la contracción de una 0-forma es cero"""
    ring = omega.ring
    if omega.p == 0:
        return PForm.zero(ring, 0)
    terms = {}
    for idx, f in omega.terms.items():
        for k, i in enumerate(idx):
            a = v.coefficients[i]
            if not a:
                continue
            rest = idx[:k] + idx[k + 1:]
            value = a * f if k % 2 == 0 else -(a * f)
            terms[rest] = terms.get(rest, ring.zero) + value
    return PForm(ring, omega.p - 1, terms)


def contract_multivector(omega, fields):
    """ι_{v_1∧…∧v_k} ω := ι_{v_k} ⋯ ι_{v_1} ω (la lista vacía deja ω igual)"""
    for v in fields:
        omega = contract(omega, v)
    return omega


def contract_rad(omega):
    return contract(omega, VectorField.rad(omega.ring))


def descends(omega):
    """ω desciende a P^n si ι_rad ω = 0"""
    return not contract_rad(omega)


def delta(omega):
    """δω = dω / (grado total de ω)"""
    if not omega:
        return PForm.zero(omega.ring, omega.p + 1)
    degree = omega.total_degree()
    if degree == 0:
        raise UndefinedDeltaError("δ no está definido en formas de grado total 0")
    return exterior_derivative(omega).scale(QQ(1, degree))


class FormMatrix:
    """Matriz de formas con producto dado por el producto exterior"""

    def __init__(self, ring, p, entries):
        self.ring = ring
        self.p = p
        self.entries = [list(row) for row in entries]
        width = {len(row) for row in self.entries}
        if len(width) > 1:
            raise ShapeMismatchError("Filas de longitudes distintas")
        for row in self.entries:
            for e in row:
                if e and e.p != p:
                    raise ShapeMismatchError(f"Entrada de grado {e.p} en una matriz de {p}-formas")

    @classmethod
    def from_map(cls, graded_map):
        return cls(graded_map.ring, 0, [[PForm.from_poly(f) for f in row] for row in graded_map.matrix])

    @classmethod
    def column_vector(cls, forms, ring, p):
        return cls(ring, p, [[f] for f in forms])

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def entry(self, r, c):
        e = self.entries[r][c]
        return e if e else PForm.zero(self.ring, self.p)

    def column(self, c):
        return [self.entry(r, c) for r in range(self.shape[0])]

    def restrict_columns(self, cols):
        return FormMatrix(self.ring, self.p, [[row[c] for c in cols] for row in self.entries])

    def map_entries(self, fn, p):
        return FormMatrix(self.ring, p, [[fn(self.entry(r, c)) for c in range(self.shape[1])]
                                         for r in range(self.shape[0])])

    def mul(self, other):
        rows, inner = self.shape
        inner2, cols = other.shape
        if inner != inner2:
            raise ShapeMismatchError(f"Producto {rows}x{inner} por {inner2}x{cols}")
        p = self.p + other.p
        result = []
        for r in range(rows):
            new_row = []
            for c in range(cols):
                total = PForm.zero(self.ring, p)
                for k in range(inner):
                    a, b = self.entries[r][k], other.entries[k][c]
                    if a and b:
                        total = total + a.wedge(b)
                new_row.append(total)
            result.append(new_row)
        return FormMatrix(self.ring, p, result)

    def delta(self):
        return self.map_entries(delta, self.p + 1)

    def contract_rad(self):
        return self.map_entries(contract_rad, max(self.p - 1, 0))

    def exterior_derivative(self):
        return self.map_entries(exterior_derivative, self.p + 1)

    def wedge_left(self, form):
        return self.map_entries(lambda e: form.wedge(e), self.p + form.p)

    def apply(self, t):
        """Producto matriz-vector con un vector de racionales"""
        rows, cols = self.shape
        if len(t) != cols:
            raise ShapeMismatchError(f"Vector de longitud {len(t)} para {cols} columnas")
        out = []
        for r in range(rows):
            total = PForm.zero(self.ring, self.p)
            for c, value in enumerate(t):
                if value and self.entries[r][c]:
                    total = total + self.entries[r][c].scale(value)
            out.append([total])
        return FormMatrix(self.ring, self.p, out)

    def is_zero(self):
        return not any(e for row in self.entries for e in row)

    def __eq__(self, other):
        return (isinstance(other, FormMatrix) and self.shape == other.shape
                and all(self.entry(r, c) == other.entry(r, c)
                        for r in range(self.shape[0]) for c in range(self.shape[1])))


def matrix_ops(A, B=None, op="mul"):
    if op == "mul":
        return A.mul(B)
    if op == "delta":
        return A.delta()
    if op == "contract_rad":
        return A.contract_rad()
    raise ValueError(f"Operación de matrices desconocida: {op}")


def volume_form(ring):
    return PForm.dx(ring, *range(ring.ngens))


def nform_from_vfield(v, n=None):
    """ω = ι_rad ι_v (dx_0∧…∧dx_n), una (n-1)-forma"""
    if n is not None and n != v.ring.ngens - 1:
        raise ShapeMismatchError(f"El campo vive en P^{v.ring.ngens - 1}, no en P^{n}")
    return contract_rad(contract(volume_form(v.ring), v))


def vfield_from_nform(omega):
    """Recupera v (módulo múltiplos de rad) de ι_v(dx_0∧…∧dx_n) = dω/(d + n)"""
    ring = omega.ring
    n = ring.ngens - 1
    d = omega.coefficient_degree() - 1
    eta = exterior_derivative(omega).scale(QQ(1, d + n))
    full = tuple(range(n + 1))
    coefficients = []
    for j in range(n + 1):
        c = eta.coefficient(full[:j] + full[j + 1:])
        coefficients.append(c if j % 2 == 0 else -c)
    return VectorField(ring, coefficients)


def differ_by_radial(v, w):
    """True si v - w es múltiplo polinómico del campo radial"""
    diff = v - w
    x = v.ring.gens
    return all(not (x[i] * diff.coefficients[j] - x[j] * diff.coefficients[i])
               for i, j in combinations(range(v.ring.ngens), 2))


# ---------------------------------------------------------------------------
# Texto y JSON
# ---------------------------------------------------------------------------

class FormParser(PolynomialParser):
    """Polinomios extendidos con símbolos dx_i; '^' entre dx denota ∧"""

    def dx_factor(self, token):
        match = DX_RE.fullmatch(token[1])
        if match is None:
            raise self.error(f"Símbolo desconocido '{token[1]}'", token, UnknownVariableError)
        index = int(match.group(1))
        if index >= self.ring.ngens:
            raise self.error(f"dx_{index} fuera de rango", token, UnknownVariableError)
        return PForm.dx(self.ring, index)

    def parse_factor(self):
        token = self.current
        if token[0] == "name":
            self.advance()
            value = self.dx_factor(token)
        elif token[0] == "op" and token[1] == "(":
            self.advance()
            value = self.parse_expr()
            self.expect(")")
            if self.current[1] == "^" and self.tokens[self.index + 1][0] == "num":
                exponent = self.parse_exponent()
                if value.p != 0:
                    raise self.error("Potencia de una forma de grado positivo")
                value = PForm.from_poly(value.coefficient(()) ** exponent)
        else:
            value = PForm.from_poly(super().parse_factor())
        while (self.current[0] == "op" and self.current[1] == "^"
               and self.tokens[self.index + 1][0] == "name"):
            self.advance()
            value = value.wedge(self.dx_factor(self.advance()))
        return value


def parse_form(text, ring):
    """Lee una forma en el formato `coef * dx_i^dx_j ± …`"""
    value = FormParser(text, ring).parse()
    if not isinstance(value, PForm):
        raise PolynomialParseError("El texto no define una forma", text)
    return value


def format_form(omega):
    if not omega:
        return "0"
    names = [str(s) for s in omega.ring.symbols]
    order = omega.ring.order
    items = [(m, idx, c) for idx, f in omega.terms.items() for m, c in f.iterterms()]
    items.sort(key=lambda t: (order(t[0]), [-i for i in t[1]]), reverse=True)
    pieces = []
    for m, idx, c in items:
        body = [format_monomial(m, names)] if any(m) else []
        body += ["^".join(f"dx_{i}" for i in idx)] if idx else []
        magnitude = format_rational(-c if c < 0 else c)
        text = "*".join(b for b in body if b)
        if not text:
            text = magnitude
        elif magnitude != "1":
            text = f"{magnitude}*{text}"
        pieces.append(("-" if c < 0 else "+", text))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def form_to_json(omega):
    return {"p": omega.p, "terms": [{"idx": list(idx), "coef": format_poly(f)} for idx, f in omega.items()]}


def form_from_json(data, ring):
    terms = {tuple(t["idx"]): parse_poly(t["coef"], ring) for t in data.get("terms", [])}
    return PForm(ring, int(data["p"]), terms)

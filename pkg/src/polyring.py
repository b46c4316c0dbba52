"""Aritmética exacta de polinomios sobre los racionales.

Los polinomios son ``PolyElement`` de sympy sobre ``QQ`` (con gmpy2 como tipo
base cuando está instalado). Este módulo fija la convención de variables
``x_0 … x_n``, los órdenes monomiales y el formato de texto de entrada/salida.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

from sympy import QQ
from sympy.polys.orderings import grevlex, grlex, lex
from sympy.polys.rings import PolyRing

from src.errors import (
    NonIntegerExponentError,
    NotHomogeneousError,
    PolynomialParseError,
    RingMismatchError,
    UnknownVariableError,
)
from src.utils import format_rational

logger = logging.getLogger(__name__)

ORDER_KEYS = {"degrevlex": grevlex, "deglex": grlex, "lex": lex}


@dataclass(frozen=True)
class MonomialOrder:
    """Orden monomial con permutación opcional de variables.

    ``permutation`` lista los índices de variable de mayor a menor; por
    defecto x_0 > x_1 > … > x_n.
    """

    kind: str = "degrevlex"
    permutation: tuple | None = None

    def __post_init__(self):
        if self.kind not in ORDER_KEYS:
            raise ValueError(f"Orden monomial desconocido: {self.kind}")
        if self.permutation is not None and sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError(f"Permutación de variables inválida: {self.permutation}")

    def __call__(self, monom):
        if self.permutation is not None:
            monom = tuple(monom[i] for i in self.permutation)
        return ORDER_KEYS[self.kind](monom)


DEFAULT_ORDER = MonomialOrder()


def variable_names(nvars):
    return [f"x_{i}" for i in range(nvars)]


@lru_cache(maxsize=None)
def polynomial_ring(nvars, order=DEFAULT_ORDER):
    """Anillo QQ[x_0..x_{nvars-1}] con el orden indicado"""
    if nvars < 1:
        raise ValueError("El anillo necesita al menos una variable")
    if isinstance(order, str):
        order = MonomialOrder(order)
    return PolyRing(variable_names(nvars), QQ, order)


def with_order(f, ring):
    """Lleva f a otro anillo con las mismas variables (p. ej. al cambiar de orden)"""
    if f.ring == ring:
        return f
    if f.ring.ngens != ring.ngens:
        raise RingMismatchError(f"Número de variables distinto: {f.ring.ngens} vs {ring.ngens}")
    return ring.from_dict(dict(f))


# ---------------------------------------------------------------------------
# Lectura y escritura de texto
# ---------------------------------------------------------------------------

TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>x_?\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])|(?P<bad>\S))"
)


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if match is None:
            break
        kind = match.lastgroup
        if kind is not None:
            tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class PolynomialParser:
    """Descenso recursivo sobre la gramática expr/term/factor.

    Subclases pueden extender ``parse_factor`` (el lector de formas lo hace
    para los símbolos dx_i).
    """

    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message, token=None, cls=PolynomialParseError):
        token = token or self.current
        return cls(message, self.text, token[2])

    def expect(self, value):
        if self.current[1] != value:
            raise self.error(f"Se esperaba '{value}' y se encontró '{self.current[1] or 'fin'}'")
        return self.advance()

    def parse(self):
        if self.current[0] == "end":
            raise self.error("Texto vacío")
        value = self.parse_expr()
        if self.current[0] != "end":
            raise self.error(f"Símbolo inesperado '{self.current[1]}'")
        return value

    def zero(self):
        return self.ring.zero

    def parse_expr(self):
        sign = 1
        if self.current[1] in "+-" and self.current[0] == "op":
            sign = -1 if self.advance()[1] == "-" else 1
        value = self.parse_term()
        value = value if sign > 0 else -value
        while self.current[0] == "op" and self.current[1] in "+-":
            op = self.advance()[1]
            term = self.parse_term()
            value = value + term if op == "+" else value - term
        return value

    def parse_term(self):
        value = self.parse_factor()
        while self.current[0] == "op" and self.current[1] == "*":
            self.advance()
            value = value * self.parse_factor()
        return value

    def parse_exponent(self):
        if not (self.current[0] == "op" and self.current[1] == "^"):
            return 1
        self.advance()
        token = self.current
        if token[0] != "num":
            raise self.error(f"Exponente no entero '{token[1]}'", token, NonIntegerExponentError)
        self.advance()
        nxt = self.current
        if nxt[0] == "op" and nxt[1] == "/" or nxt[0] == "bad" and nxt[1] == ".":
            raise self.error("Exponente no entero", nxt, NonIntegerExponentError)
        return int(token[1])

    def parse_variable(self, token):
        index = int(token[1].lstrip("x_"))
        if index >= self.ring.ngens:
            raise self.error(f"Variable desconocida '{token[1]}' (hay {self.ring.ngens} variables)",
                             token, UnknownVariableError)
        return self.ring.gens[index]

    def parse_factor(self):
        token = self.current
        if token[0] == "num":
            self.advance()
            numerator = int(token[1])
            if self.current[0] == "op" and self.current[1] == "/":
                self.advance()
                den = self.current
                if den[0] != "num" or int(den[1]) == 0:
                    raise self.error("Denominador inválido", den)
                self.advance()
                return self.ring.ground_new(QQ(numerator, int(den[1])))
            return self.ring.ground_new(QQ(numerator))
        if token[0] == "var":
            self.advance()
            return self.parse_variable(token) ** self.parse_exponent()
        if token[0] == "name":
            raise self.error(f"Variable desconocida '{token[1]}'", token, UnknownVariableError)
        if token[0] == "op" and token[1] == "(":
            self.advance()
            value = self.parse_expr()
            self.expect(")")
            return value ** self.parse_exponent()
        raise self.error(f"Símbolo inesperado '{token[1] or 'fin'}'")


def parse_poly(text, nvars, order=DEFAULT_ORDER):
    """Lee un polinomio en la gramática de texto (acepta x0 y x_0)"""
    ring = nvars if isinstance(nvars, PolyRing) else polynomial_ring(nvars, order)
    return PolynomialParser(text, ring).parse()


def format_monomial(monom, names=None):
    names = names or variable_names(len(monom))
    factors = []
    for name, e in zip(names, monom):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def format_terms(terms, names=None):
    """Formato canónico de una lista ordenada de (monomio, coeficiente)"""
    if not terms:
        return "0"
    pieces = []
    for monom, coeff in terms:
        sign = "-" if coeff < 0 else "+"
        magnitude = format_rational(-coeff if coeff < 0 else coeff)
        body = format_monomial(monom, names)
        if not body:
            text = magnitude
        elif magnitude == "1":
            text = body
        else:
            text = f"{magnitude}*{body}"
        pieces.append((sign, text))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def format_poly(f):
    """Texto canónico con variables x_i, términos en orden decreciente"""
    return format_terms(f.terms(), [str(s) for s in f.ring.symbols])


# ---------------------------------------------------------------------------
# Operaciones
# ---------------------------------------------------------------------------

def poly_arith(a, b, op):
    if a.ring != b.ring:
        raise RingMismatchError(f"Anillos distintos: {a.ring} y {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Operación desconocida: {op}")


def monomial_degree(monom):
    return sum(monom)


def poly_degree(f):
    """Grado total; -1 para el polinomio cero"""
    return max((sum(m) for m in f.itermonoms()), default=-1)


def is_homogeneous(f):
    return len({sum(m) for m in f.itermonoms()}) <= 1


def check_homogeneous(f, what="polinomio"):
    if not is_homogeneous(f):
        raise NotHomogeneousError(f"El {what} {format_poly(f)} no es homogéneo")
    return poly_degree(f)


def homogeneous_component(f, d):
    return f.ring.from_dict({m: c for m, c in f.iterterms() if sum(m) == d})


def partial_derivative(f, i):
    if not 0 <= i < f.ring.ngens:
        raise IndexError(f"Índice de variable fuera de rango: {i}")
    return f.diff(f.ring.gens[i])


def euler_defect(f):
    """Σ x_i ∂_i f − deg(f)·f; cero para todo f homogéneo"""
    ring = f.ring
    total = ring.zero
    for i, x in enumerate(ring.gens):
        total += x * partial_derivative(f, i)
    return total - poly_degree(f) * f if f else total


@lru_cache(maxsize=None)
def monomials_of_degree(nvars, d):
    """Exponentes de grado d, en orden decreciente lexicográfico"""
    if d < 0:
        return ()
    monomials = []
    for combo in combinations_with_replacement(range(nvars), d):
        expv = [0] * nvars
        for i in combo:
            expv[i] += 1
        monomials.append(tuple(expv))
    return tuple(sorted(monomials, reverse=True))

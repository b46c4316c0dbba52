"""Formatos de archivo: ideales, formas y salida JSON.

Archivo de ideal::

    # comentario
    vars: 4
    x_1*x_3 - x_2^2
    x_1*x_2 - x_0*x_3

Un generador por línea (se admite una coma final). Los archivos de forma
usan la misma cabecera y el texto de la forma puede ocupar varias líneas.
"""

import json
import logging
import re
from pathlib import Path

from src.errors import PolynomialParseError
from src.forms import format_form, parse_form
from src.groebner import Ideal
from src.polyring import DEFAULT_ORDER, format_poly, parse_poly, polynomial_ring

logger = logging.getLogger(__name__)

HEADER_RE = re.compile(r"vars\s*:\s*(\d+)\s*$")


def _content_lines(text):
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def _split_header(text, source):
    lines = _content_lines(text)
    if not lines:
        raise PolynomialParseError(f"Archivo vacío: {source}", text)
    match = HEADER_RE.match(lines[0])
    if match is None:
        raise PolynomialParseError(f"Falta la cabecera 'vars: N' en {source}", lines[0])
    return int(match.group(1)), lines[1:]


def parse_ideal_text(text, order=DEFAULT_ORDER, source="<texto>", selection="normal"):
    nvars, lines = _split_header(text, source)
    ring = polynomial_ring(nvars, order)
    generators = [parse_poly(line.rstrip(","), ring) for line in lines]
    return Ideal(generators, ring, selection)


def format_ideal_text(I):
    lines = [f"vars: {I.nvars}"]
    lines += [format_poly(g) for g in I.generators]
    return "\n".join(lines) + "\n"


def read_ideal(path, order=DEFAULT_ORDER, selection="normal"):
    """Lee un ideal desde archivo"""
    path = Path(path)
    try:
        I = parse_ideal_text(path.read_text(encoding="utf-8"), order, str(path), selection)
        logger.info(f"Ideal leído de {path}: {len(I.generators)} generadores en {I.nvars} variables")
        return I
    except Exception as e:
        logger.error(f"Error leyendo el ideal {path}: {e}")
        raise


def write_ideal(I, path):
    Path(path).write_text(format_ideal_text(I), encoding="utf-8")


def parse_form_text(text, order=DEFAULT_ORDER, source="<texto>"):
    nvars, lines = _split_header(text, source)
    if not lines:
        raise PolynomialParseError(f"Archivo de forma sin forma: {source}", text)
    return parse_form(" ".join(lines), polynomial_ring(nvars, order))


def read_form(path, order=DEFAULT_ORDER):
    path = Path(path)
    try:
        return parse_form_text(path.read_text(encoding="utf-8"), order, str(path))
    except Exception as e:
        logger.error(f"Error leyendo la forma {path}: {e}")
        raise


def format_form_text(omega):
    return f"vars: {omega.ring.ngens}\n{format_form(omega)}\n"


def to_json(data):
    """JSON determinista (mismo orden de claves en cada ejecución)"""
    return json.dumps(data, indent=2, ensure_ascii=False)


def write_json(data, path):
    try:
        Path(path).write_text(to_json(data) + "\n", encoding="utf-8")
        logger.info(f"Resultado guardado en {path}")
    except Exception as e:
        logger.error(f"Error guardando {path}: {e}")
        raise

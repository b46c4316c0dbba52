import json
import logging
from math import comb
from pathlib import Path

import numpy as np
from sympy import QQ

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level="INFO", log_file=None):
    """Configura el logging de la aplicación (solo lo llama el punto de entrada)"""
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True
    )


class Config:
    """Clase para manejar la configuración de la aplicación"""

    def __init__(self, path="config.json"):
        self.path = Path(path)
        self.DEFAULT_CONFIG = {
            "groebner": {
                "selection": "normal"
            },
            "resolution": {
                "degree_slack": 2
            },
            "random": {
                "coefficient_bound": 50,
                "retries": 5,
                "seed": 0
            },
            "scenarios": {
                "instanton_lines": 5
            }
        }
        self.config = self.load_config()

    def load_config(self):
        """Carga la configuración desde archivo, sección a sección sobre los valores por defecto"""
        config = {section: dict(values) for section, values in self.DEFAULT_CONFIG.items()}
        try:
            if self.path.exists():
                with open(self.path, 'r') as f:
                    for section, values in json.load(f).items():
                        config.setdefault(section, {}).update(values)
            return config
        except Exception as e:
            logger.error(f"Error cargando la configuración: {e}")
            return config

    def save_config(self):
        """Guarda la configuración actual"""
        try:
            with open(self.path, 'w') as f:
                json.dump(self.config, f, indent=4)
        except Exception as e:
            logger.error(f"Error guardando la configuración: {e}")

    def get(self, section, key):
        return self.config[section][key]


def make_rng(seed):
    """Generador pseudoaleatorio reproducible (PCG64 de 64 bits)"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(int(seed)))


def random_integers(rng, size, bound=50, nonzero=False):
    """Enteros uniformes en [-bound, bound]; con ``nonzero`` el vector no es nulo"""
    while True:
        values = [int(v) for v in rng.integers(-bound, bound + 1, size=size)]
        if not nonzero or any(values) or size == 0:
            return values


def format_rational(value):
    """Formatea racionales exactos como 'a' o 'a/b'"""
    value = QQ.convert(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

def binomial(top, bottom):
    """Coeficiente binomial con la convención C(a, b) = 0 si a < b o a < 0"""
    if bottom < 0 or top < bottom:
        return 0
    return comb(top, bottom)

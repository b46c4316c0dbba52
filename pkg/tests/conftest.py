from itertools import combinations

import pytest
from sympy import QQ

from src.forms import PForm
from src.groebner import Ideal
from src.polyring import monomials_of_degree, parse_poly, polynomial_ring
from src.scenarios import FAT_POINT, THREE_POINTS, TWISTED_CUBIC
from src.utils import make_rng

RATIONAL_NORMAL_QUARTIC = ["x_0*x_2 - x_1^2", "x_0*x_3 - x_1*x_2", "x_0*x_4 - x_1*x_3",
                           "x_1*x_3 - x_2^2", "x_1*x_4 - x_2*x_3", "x_2*x_4 - x_3^2"]


def build_ideal(texts, nvars):
    ring = polynomial_ring(nvars)
    return Ideal([parse_poly(t, ring) for t in texts], ring)


@pytest.fixture
def ring3():
    return polynomial_ring(3)


@pytest.fixture
def ring4():
    return polynomial_ring(4)


@pytest.fixture
def three_points():
    return build_ideal(THREE_POINTS, 3)


@pytest.fixture
def twisted_cubic():
    return build_ideal(TWISTED_CUBIC, 4)


@pytest.fixture
def fat_point():
    return build_ideal(FAT_POINT, 4)


@pytest.fixture
def quartic_curve():
    return build_ideal(RATIONAL_NORMAL_QUARTIC, 5)


@pytest.fixture
def rng():
    return make_rng(20240611)


@pytest.fixture
def random_poly():
    """Polinomio homogéneo aleatorio con pocos términos y coeficientes pequeños"""
    def build(ring, degree, rng, terms=3, bound=5):
        monomials = monomials_of_degree(ring.ngens, degree)
        picks = rng.choice(len(monomials), size=min(terms, len(monomials)), replace=False)
        f = ring.zero
        for k in picks:
            c = int(rng.integers(-bound, bound + 1))
            if c:
                f += ring.term_new(monomials[int(k)], QQ(c))
        return f
    return build


@pytest.fixture
def random_form(random_poly):
    def build(ring, p, degree, rng, terms=2):
        indices = list(combinations(range(ring.ngens), p))
        picks = rng.choice(len(indices), size=min(terms, len(indices)), replace=False)
        return PForm(ring, p, {indices[int(k)]: random_poly(ring, degree, rng) for k in picks})
    return build

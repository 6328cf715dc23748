"""Shared helpers for building random ring elements and series."""

import random
from fractions import Fraction

import pytest

from anomcancel.algebra import GradedPoly, QSeries, RingSpec


@pytest.fixture
def rng():
    return random.Random(20240317)


def random_fraction(rng: random.Random, span: int = 6) -> Fraction:
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return Fraction(num, den)


def random_poly(rng: random.Random, spec: RingSpec, terms: int = 4,
                max_exp: int = 2) -> GradedPoly:
    """Random element of the truncated ring (coefficients in a small box)."""
    n = len(spec.gens)
    out = {}
    for _ in range(terms):
        exps = tuple(rng.randint(0, max_exp) for _ in range(n))
        out[exps] = random_fraction(rng)
    return GradedPoly.from_terms(spec, out)


def random_nilpotent(rng: random.Random, spec: RingSpec, terms: int = 3) -> GradedPoly:
    p = random_poly(rng, spec, terms)
    return p - p.constant_term()


def random_rational_series(rng: random.Random, order: int) -> QSeries:
    return QSeries.rational([random_fraction(rng) for _ in range(2 * order + 1)], order)


def random_ring_series(rng: random.Random, spec: RingSpec, order: int,
                       terms: int = 3) -> QSeries:
    return QSeries([random_poly(rng, spec, terms) for _ in range(2 * order + 1)],
                   order, spec)

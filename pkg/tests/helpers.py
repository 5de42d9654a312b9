"""Shared generators for the property tests."""

from __future__ import annotations

import random

import sympy
from hypothesis import strategies as st

from modeq.polycore import MPoly

VARS3 = ("X", "Y", "Z")


@st.composite
def mpolys(draw, vars_=VARS3, max_deg=4, max_terms=5, coeff=50):
    n = len(vars_)
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_deg) for _ in range(n)]),
            st.integers(-coeff, coeff),
            max_size=max_terms,
        )
    )
    return MPoly(vars_, terms)


def random_mpoly(rng: random.Random, vars_, deg, nterms=5, coeff=1000) -> MPoly:
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        e = [0] * len(vars_)
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(len(vars_))] += 1
        terms[tuple(e)] = rng.randint(-coeff, coeff)
    return MPoly(vars_, terms)


def to_sympy(p: MPoly):
    syms = sympy.symbols(p.vars)
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if hasattr(c, "numerator") else sympy.Integer(c)
        for s, k in zip(syms, e):
            term *= s**k
        expr += term
    return expr, syms


def from_sympy(expr, vars_) -> MPoly:
    poly = sympy.Poly(sympy.expand(expr), *sympy.symbols(vars_))
    from fractions import Fraction

    return MPoly(vars_, {e: Fraction(int(c.p), int(c.q)) for e, c in poly.terms()})


def random_form(pres, w, rng: random.Random, max_terms=4, coeff=30):
    """Random homogeneous form of weight w, or None if that weight is empty."""
    from modeq.gradedring import GradedPoly

    monos = pres.monomials_of_weight(w)
    if not monos:
        return None
    picks = rng.sample(monos, min(len(monos), rng.randint(1, max_terms)))
    terms = {tuple(m): rng.choice([c for c in range(-coeff, coeff + 1) if c]) for m in picks}
    return GradedPoly(pres, MPoly(pres.gen_names, terms), w)


def random_pair(pres, rng: random.Random, max_weight=60):
    while True:
        w = rng.randint(1, max_weight)
        f = random_form(pres, w, rng)
        g = random_form(pres, w, rng)
        if f is not None and g is not None:
            return f, g


def random_fraction(rng: random.Random, n: int, d: int, coeff=1000):
    """Random fraction in J1..Jn with numerator and denominator of degree <= d."""
    from modeq.polycore import RatFrac

    vs = tuple(f"J{i}" for i in range(1, n + 1))
    num = random_mpoly(rng, vs, rng.randint(0, d), coeff=coeff)
    den = MPoly.zero(vs)
    while den.is_zero():
        den = random_mpoly(rng, vs, rng.randint(0, d), coeff=coeff)
    return RatFrac(num, den)

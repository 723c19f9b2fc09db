"""Shared fixtures and closed-form reference laws for the test suite.

The reference formulas below were derived independently from the
critical-point equations of the two model families and are used as
oracles; the library itself never sees them.
"""

from __future__ import annotations

import math

import pytest
from gmpy2 import mpq

from bicount import ParamPoly, expand_series, models

# --- closed-form growth laws for the degree-4 family ------------------------
# Maxima of |V| on the circle change branch at lam = 1/3 and 3.


def ising_alpha(lam: float) -> float:
    if lam < 1 / 3:
        return 2 / 3
    if lam < 3:
        return -16 * lam ** 2 / (3 * lam ** 2 - 18 * lam + 3)
    return 2 * lam ** 2 / 3


def ising_c(lam: float) -> float:
    if lam < 1 / 3:
        return (1 / math.pi) * math.sqrt(1 / (2 - 6 * lam))
    if lam < 3:
        return (1 / math.pi) * math.sqrt(
            8 * lam / (-3 * lam ** 2 + 10 * lam - 3)
        )
    return (1 / math.pi) * math.sqrt(lam / (2 * lam - 6))


# --- closed-form law for the mixed degree-3/4 family ------------------------
# For lam < 1/2 the dominant critical point of g is (2, 0); above 1/2 a
# symmetric pair takes over.  Solving x = x^2/2 + lam y^2 / 2,
# y = lam x y + lam^2 y^3 / 6 gives lam*x = 4 lam - sqrt(2 lam (8 lam - 3)),
# y^2 = 6 (1 - lam x) / lam^2, and
#   -det H_g = (2 r / lam) (1 + r - 4 lam),  r = sqrt(2 lam (8 lam - 3)).


def mixed_alpha(lam: float) -> float:
    if lam < 0.5:
        return 1.5
    r = math.sqrt(2 * lam * (8 * lam - 3))
    return 6 * lam ** 2 / ((8 * lam - 3) * (16 * lam - 3 - 4 * r))

def mixed_c(lam: float) -> float:
    if lam < 0.5:
        return 1 / (2 * math.pi * math.sqrt(1 - 2 * lam))
    r = math.sqrt(2 * lam * (8 * lam - 3))
    return (1 / math.pi) * math.sqrt(
        lam / (32 * lam ** 2 - 12 * lam + 2 * (1 - 4 * lam) * r)
    )


def eval_param(coeff, lam) -> mpq:
    """Evaluate an exact coefficient (rational or lam-polynomial)."""
    if isinstance(coeff, ParamPoly):
        return coeff(lam)
    return mpq(coeff)


@pytest.fixture(scope="session")
def ising_series_200():
    """Exact lam-polynomial coefficients A_0..A_200 of the degree-4 family."""
    return expand_series(models.ising_model(), 200)


@pytest.fixture(scope="session")
def mixed_series_150():
    """Exact A_0..A_150 of the mixed family at lam = 1/4 and lam = 1."""
    pot = models.mixed_degree_model()
    return {
        mpq(1, 4): expand_series(pot.at_lambda(mpq(1, 4)), 150),
        mpq(1): expand_series(pot.at_lambda(mpq(1)), 150),
    }

"""Ready-made interaction potentials used throughout the docs and tests."""

from __future__ import annotations

from .expansion import PotentialSpec
from .polyring import ParamPoly

__all__ = [
    "ising_model",
    "cubic_model",
    "quintic_model",
    "mixed_degree_model",
]

_LAM = ParamPoly((0, 1))
_LAM2 = ParamPoly((0, 0, 1))


def ising_model() -> PotentialSpec:
    """Degree-4 family V = x^4/4! + lam x^2 y^2/4 + lam^2 y^4/4!.

    The coefficient of lam^k in A_n counts 4-regular graphs with k
    yellow edges and an even number of yellow half-edges per vertex,
    i.e. the even-subgraph (Ising) partition function averaged over
    random 4-regular graphs of Euler characteristic -n.
    """
    return PotentialSpec(
        {(4, 0): 1, (2, 2): _LAM, (0, 4): _LAM2}, param=True
    )


def cubic_model() -> PotentialSpec:
    """Single cubic vertex type: V = x^3/3!."""
    return PotentialSpec({(3, 0): 1})


def quintic_model() -> PotentialSpec:
    """Single quintic vertex type: V = x^5/5! (A_n = 0 unless 3 | n)."""
    return PotentialSpec({(5, 0): 1})


def mixed_degree_model() -> PotentialSpec:
    """Inhomogeneous family V = x^3/3! + lam x y^2/2 + lam^2 y^4/4!.

    Mixes degree-3 and degree-4 vertices, so no regularity structure is
    available; used to probe the exponent-route law beyond the
    homogeneous case.
    """
    return PotentialSpec(
        {(3, 0): 1, (1, 2): _LAM, (0, 4): _LAM2}, param=True
    )

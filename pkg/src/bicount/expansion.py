"""Exact expansion coefficients A_n of the bivariate exponential integral.

The integral ``(z/2pi) * integral exp(z*g(x,y)) dx dy`` with exponent

    g(x,y) = -x^2/2 - y^2/2 + V(x,y),
    V(x,y) = sum_{u+w >= 3} L_{u,w} x^u y^w / (u! w!),

admits a large-z expansion ``sum A_n z^{-n}`` whose coefficients equal
automorphism-weighted counts of edge-bicolored graphs with vertex
degrees >= 3 and Euler characteristic -n, each vertex of bidegree
(u, w) weighted by L_{u,w}.

This module computes A_0..A_N exactly by a three-step scheme:

1. collect ``F_k = sum_{u+w=k+2} L_{u,w} x^u y^w/(u!w!)``,
2. run the recursion ``Q_m = (1/m) sum_k k F_k Q_{m-k}`` with Q_0 = 1,
3. read off ``A_n = sum (2s-1)!! (2t-1)!! q^{(2n)}_{2s,2t}`` from the
   even-even coefficients of Q_{2n}.

For a potential homogeneous of degree k there is a much faster route:
with M = k/(k-2) and K = 2/(k-2),

    A_n = sum_{s+t=nM} (2s-1)!! (2t-1)!! [x^{2s} y^{2t}] V^{nK} / (nK)!

and A_n = 0 whenever nK (equivalently nM) is not an integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import List, Mapping, Optional, Sequence

from gmpy2 import mpq

from .errors import ValidationError
from .polyring import BivarPoly, Coeff, ParamPoly, Rational, rational

__all__ = [
    "PotentialSpec",
    "RegularityInfo",
    "QSeries",
    "double_factorial",
    "build_F",
    "q_recursion",
    "extract_A",
    "a_poly",
    "fast_homogeneous_A",
    "expand_series",
]


_DBLF: List[int] = [1, 1]  # _DBLF[i] = (i-1)!! shifted: see _dblf


def _dblf(m: int) -> int:
    """(m)!! for odd m >= -1, via a growing table; (-1)!! = 1."""
    idx = (m + 1) // 2
    while len(_DBLF) <= idx:
        k = 2 * len(_DBLF) - 1
        _DBLF.append(_DBLF[-1] * k)
    return _DBLF[idx]


def double_factorial(m: int) -> int:
    """m!! = m (m-2) (m-4) ... 1 for odd m, with (-1)!! = 1 by convention."""
    if m < -1 or m % 2 == 0:
        raise ValidationError(f"double factorial needs an odd m >= -1, got {m}")
    return _dblf(m)


@dataclass(frozen=True)
class RegularityInfo:
    """Edge/vertex bookkeeping for a degree-k homogeneous potential.

    A k-regular graph of Euler characteristic -n has nM edges and nK
    vertices, where M = k/(k-2) and K = 2/(k-2).
    """

    k: int
    M: Rational
    K: Rational

    @classmethod
    def from_degree(cls, k: int) -> "RegularityInfo":
        if k < 3:
            raise ValidationError(f"vertex degree must be at least 3, got {k}")
        return cls(k=k, M=mpq(k, k - 2), K=mpq(2, k - 2))

    @property
    def vanishing_period(self) -> int:
        """Smallest d with A_n = 0 unless d divides n (denominator of K)."""
        return int(self.K.denominator)


class PotentialSpec:
    """The interaction coefficients L_{u,w} of the exponent g.

    Terms with 1 <= u + w < 3 are forbidden: the quadratic part of g is
    fixed at -x^2/2 - y^2/2 and anything below cubic order would break
    the Gaussian normalization.  Coefficients are exact rationals or
    polynomials in the model parameter lam, never mixed.
    """

    __slots__ = ("terms", "param")

    def __init__(self, terms: Mapping, param: bool = False):
        poly = BivarPoly(terms, param=param)  # variant checks + zero dropping
        for (u, w) in poly.terms:
            if u + w < 3:
                raise ValidationError(
                    f"term ({u},{w}) has total degree {u + w} < 3; "
                    "only degree >= 3 interaction terms are allowed"
                )
        self.terms = poly.terms
        self.param = poly.param

    def __eq__(self, other) -> bool:
        if not isinstance(other, PotentialSpec):
            return NotImplemented
        return self.param == other.param and self.terms == other.terms

    def __repr__(self) -> str:
        return f"PotentialSpec({self.terms!r}, param={self.param})"

    def is_empty(self) -> bool:
        return not self.terms

    def max_degree(self) -> int:
        return max((u + w for u, w in self.terms), default=-1)

    def homogeneous_degree(self) -> Optional[int]:
        degs = {u + w for u, w in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def regularity(self) -> Optional[RegularityInfo]:
        k = self.homogeneous_degree()
        if k is None:
            return None
        return RegularityInfo.from_degree(k)

    def coeff(self, u: int, w: int) -> Coeff:
        zero = ParamPoly() if self.param else mpq(0)
        return self.terms.get((u, w), zero)

    def interaction_poly(self) -> BivarPoly:
        """V(x,y) = sum L_{u,w} x^u y^w / (u! w!)."""
        out = {}
        for (u, w), c in self.terms.items():
            out[(u, w)] = c / (factorial(u) * factorial(w))
        return BivarPoly._raw(out, self.param)

    def at_lambda(self, lam) -> "PotentialSpec":
        """Substitute an exact rational value for lam."""
        if not self.param:
            return self
        lam = rational(lam)
        out = {}
        for key, c in self.terms.items():
            v = c(lam)
            if v != 0:
                out[key] = v
        spec = object.__new__(PotentialSpec)
        spec.terms = out
        spec.param = False
        return spec


@dataclass
class QSeries:
    """The recursion polynomials Q_0..Q_M with coefficient access."""

    Q: List[BivarPoly]

    def coeff(self, m: int, s: int, t: int) -> Coeff:
        return self.Q[m].coeff(s, t)

    def __len__(self) -> int:
        return len(self.Q)


def build_F(pot: PotentialSpec, N: int) -> List[BivarPoly]:
    """Degree-graded interaction slices F_1..F_{2N}.

    F_k collects the terms with u + w = k + 2, each divided by u! w!.
    Returned as a list indexed 0..2N with F[0] identically zero.
    """
    if N < 1:
        raise ValidationError("N must be at least 1")
    F = [dict() for _ in range(2 * N + 1)]
    for (u, w), c in pot.terms.items():
        k = u + w - 2
        if 1 <= k <= 2 * N:
            F[k][(u, w)] = c / (factorial(u) * factorial(w))
    return [BivarPoly._raw(d, pot.param) for d in F]


def _nonzero_slices(F: Sequence[BivarPoly]) -> List[tuple]:
    return [(k, F[k].terms) for k in range(1, len(F)) if F[k].terms]


def _q_step(m: int, Qdicts: Mapping[int, dict], slices, bound: int) -> dict:
    """One recursion step: m * Q_m = sum_k k F_k Q_{m-k}, as raw dicts."""
    acc: dict = {}
    for k, fterms in slices:
        if k > m:
            continue
        prev = Qdicts[m - k]
        if not prev:
            continue
        for (u1, w1), c1 in fterms.items():
            kc1 = k * c1
            for (u2, w2), c2 in prev.items():
                u = u1 + u2
                w = w1 + w2
                if u + w > bound:
                    continue
                key = (u, w)
                v = kc1 * c2
                if key in acc:
                    s = acc[key] + v
                    if s == 0:
                        del acc[key]
                    else:
                        acc[key] = s
                else:
                    acc[key] = v
    inv = mpq(1, m)
    return {key: c * inv for key, c in acc.items()}


def q_recursion(F: Sequence[BivarPoly], upto: int) -> QSeries:
    """Run Q_0 = 1, Q_m = (1/m) sum_{k=1}^{m} k F_k Q_{m-k} up to m = upto.

    Products are truncated at total degree 3*upto (no term of Q_m can
    exceed degree 3m, since each F_k has degree k + 2 <= 3k).
    """
    if len(F) <= upto:
        raise ValidationError(f"F must cover indices 1..{upto}")
    param = F[1].param if len(F) > 1 else False
    slices = _nonzero_slices(F[: upto + 1])
    bound = 3 * upto
    Qdicts: dict = {0: {(0, 0): ParamPoly((1,)) if param else mpq(1)}}
    for m in range(1, upto + 1):
        Qdicts[m] = _q_step(m, Qdicts, slices, bound)
    return QSeries([BivarPoly._raw(Qdicts[m], param) for m in range(upto + 1)])


def _extract_one(qdict: dict, param: bool) -> Coeff:
    """A_n from the even-even coefficients of the raw Q_{2n} dict."""
    if param:
        acc: List = []
        for (u, w), c in qdict.items():
            if u % 2 or w % 2:
                continue
            weight = _dblf(u - 1) * _dblf(w - 1)
            cs = c.coeffs
            if len(cs) > len(acc):
                acc.extend([mpq(0)] * (len(cs) - len(acc)))
            for i, ci in enumerate(cs):
                if ci:
                    acc[i] += weight * ci
        return ParamPoly(acc)
    total = mpq(0)
    for (u, w), c in qdict.items():
        if u % 2 or w % 2:
            continue
        total += _dblf(u - 1) * _dblf(w - 1) * c
    return total


def extract_A(qs: QSeries, N: int) -> List[Coeff]:
    """A_n = sum (2s-1)!! (2t-1)!! q^{(2n)}_{2s,2t} for n = 0..N."""
    if len(qs.Q) < 2 * N + 1:
        raise ValidationError(f"need Q_0..Q_{2 * N}, have {len(qs.Q)}")
    param = qs.Q[0].param
    return [_extract_one(qs.Q[2 * n].terms, param) for n in range(N + 1)]


def a_poly(s: int, t: int, lam: Mapping) -> Coeff:
    """Coefficient of x^s y^t in exp(sum lam_{u,w} x^u y^w / (u! w!)).

    ``lam`` maps exponent pairs with u + w >= 1 to values (rationals or
    lam-polynomials); the expansion is truncated at total degree s + t,
    which is exact for this coefficient.
    """
    terms = {}
    for (u, w), c in lam.items():
        if u + w < 1:
            raise ValidationError("exponents must satisfy u + w >= 1")
        if u + w <= s + t:
            c = c if isinstance(c, ParamPoly) else rational(c)
            terms[(u, w)] = c / (factorial(u) * factorial(w))
    L = BivarPoly(terms)
    bound = s + t
    acc = BivarPoly.one(L.param)
    power = acc
    for j in range(1, bound + 1):
        power = power.mul(L, bound).scale(mpq(1, j))
        if power.is_zero():
            break
        acc = acc + power
    return acc.coeff(s, t)


def _zero_coeff(param: bool) -> Coeff:
    return ParamPoly() if param else mpq(0)


def fast_homogeneous_A(pot: PotentialSpec, n: int) -> Coeff:
    """A_n for a homogeneous potential via the V^{nK} coefficient formula.

    Returns exact zero when nK = 2n/(k-2) is not an integer.
    """
    reg = pot.regularity()
    if reg is None:
        raise ValidationError("potential is not homogeneous")
    if n == 0:
        return ParamPoly((1,)) if pot.param else mpq(1)
    nK = n * reg.K
    if nK.denominator != 1:
        return _zero_coeff(pot.param)
    j = int(nK)
    W = pot.interaction_poly().pow(j)
    return _assemble_from_power(W.terms, pot.param, j)


def _assemble_from_power(wdict: dict, param: bool, j: int) -> Coeff:
    return _extract_one(wdict, param) / factorial(j)


def _homogeneous_series(pot: PotentialSpec, N: int) -> List[Coeff]:
    """A_0..A_N via an incremental sweep of the powers V, V^2, ..."""
    reg = pot.regularity()
    assert reg is not None
    k = reg.k
    param = pot.param
    A = [_zero_coeff(param) for _ in range(N + 1)]
    A[0] = ParamPoly((1,)) if param else mpq(1)
    V = pot.interaction_poly().terms
    if not V:
        return A
    jmax = (2 * N) // (k - 2)
    P = {(0, 0): ParamPoly((1,)) if param else mpq(1)}
    for j in range(1, jmax + 1):
        nxt: dict = {}
        for (u1, w1), c1 in P.items():
            for (u2, w2), c2 in V.items():
                key = (u1 + u2, w1 + w2)
                v = c1 * c2
                if key in nxt:
                    nxt[key] = nxt[key] + v
                else:
                    nxt[key] = v
        P = {key: c for key, c in nxt.items() if c != 0}
        two_n = j * (k - 2)
        if two_n % 2 == 0 and two_n // 2 <= N:
            A[two_n // 2] = _assemble_from_power(P, param, j)
    return A


def _recursion_series(pot: PotentialSpec, N: int) -> List[Coeff]:
    """A_0..A_N via the Q recursion, keeping only the window of Q_m needed."""
    param = pot.param
    one = ParamPoly((1,)) if param else mpq(1)
    if N == 0:
        return [one]
    F = build_F(pot, N)
    slices = _nonzero_slices(F)
    kmax = max((k for k, _ in slices), default=1)
    bound = 3 * (2 * N)
    window: dict = {0: {(0, 0): one}}
    A: List[Coeff] = [one]
    for m in range(1, 2 * N + 1):
        window[m] = _q_step(m, window, slices, bound)
        if m % 2 == 0:
            A.append(_extract_one(window[m], param))
        stale = m - kmax
        if stale in window:
            del window[stale]
    return A


def expand_series(pot: PotentialSpec, N: int, method: str = "auto") -> List[Coeff]:
    """Exact A_0..A_N.

    method: "auto" picks the homogeneous fast path when the potential is
    homogeneous, otherwise the Q recursion; "recursion" and
    "homogeneous" force the respective route.
    """
    if N < 0:
        raise ValidationError("N must be nonnegative")
    if method == "auto":
        method = "homogeneous" if pot.regularity() is not None else "recursion"
    if method == "homogeneous":
        return _homogeneous_series(pot, N)
    if method == "recursion":
        return _recursion_series(pot, N)
    raise ValidationError(f"unknown method {method!r}")

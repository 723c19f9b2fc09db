"""Exact coefficient rings and sparse bivariate polynomials.

Two coefficient variants are supported and never mixed inside one
polynomial:

* plain rationals (``gmpy2.mpq``, arbitrary precision, always in lowest
  terms with positive denominator), and
* dense univariate polynomials in one model parameter ``lam``
  (:class:`ParamPoly`), with rational coefficients stored in ascending
  degree order.

A bivariate polynomial (:class:`BivarPoly`) maps exponent pairs
``(u, w)`` for ``x^u y^w`` to nonzero coefficients of a single variant.
All arithmetic is exact; floating point never enters this module.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

from gmpy2 import mpq

from .errors import CoefficientVariantError

__all__ = [
    "Rational",
    "rational",
    "ParamPoly",
    "Coeff",
    "BivarPoly",
]

# Exact rational scalar.  gmpy2.mpq keeps lowest terms and a positive
# denominator by construction and is interchangeable with
# fractions.Fraction in comparisons and hashing.
Rational = mpq


def rational(value) -> Rational:
    """Coerce ``value`` to an exact rational.

    Accepts mpq, int, Fraction, strings like ``"35/384"`` or ``"0.25"``,
    and floats (converted exactly via their binary expansion).
    """
    if isinstance(value, mpq):
        return value
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        return mpq(Fraction(value))
    if isinstance(value, float):
        return mpq(*value.as_integer_ratio())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class ParamPoly:
    """Polynomial in the model parameter ``lam`` with rational coefficients.

    Coefficients are stored ascending (``coeffs[i]`` multiplies
    ``lam**i``) with trailing zeros trimmed; the zero polynomial has an
    empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, value) -> "ParamPoly":
        return cls((value,))

    @classmethod
    def variable(cls) -> "ParamPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree in lam; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, mpq, Fraction)):
            return self == ParamPoly((other,))
        return NotImplemented

    def __hash__(self):
        return hash(("ParamPoly", self.coeffs))

    def __neg__(self) -> "ParamPoly":
        return ParamPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "ParamPoly":
        other = _as_param(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return ParamPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "ParamPoly":
        return self + (-_as_param(other))

    def __rsub__(self, other) -> "ParamPoly":
        return _as_param(other) + (-self)

    def __mul__(self, other) -> "ParamPoly":
        if isinstance(other, (int, mpq, Fraction)):
            if other == 0:
                return ParamPoly()
            q = rational(other)
            return ParamPoly(tuple(c * q for c in self.coeffs))
        if not isinstance(other, ParamPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ParamPoly()
        out = [mpq(0)] * (len(a) + len(b) - 1)
        for i, ci in enumerate(a):
            if ci == 0:
                continue
            for j, dj in enumerate(b):
                if dj == 0:
                    continue
                out[i + j] += ci * dj
        return ParamPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "ParamPoly":
        q = rational(scalar)
        return ParamPoly(tuple(c / q for c in self.coeffs))

    def __pow__(self, e: int) -> "ParamPoly":
        if e < 0:
            raise ValueError("negative powers are not defined")
        out = ParamPoly((1,))
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, lam) -> Rational:
        """Evaluate at an exact rational value of lam (Horner)."""
        lam = rational(lam)
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc

    def __repr__(self) -> str:
        if not self.coeffs:
            return "ParamPoly(0)"
        parts = [f"{c}*lam^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "ParamPoly(" + " + ".join(parts) + ")"


def _as_param(value) -> "ParamPoly":
    if isinstance(value, ParamPoly):
        return value
    if isinstance(value, (int, mpq, Fraction)):
        return ParamPoly((value,))
    return NotImplemented


# A coefficient is either a plain rational or a lam-polynomial.
Coeff = Union[Rational, ParamPoly]


def _is_param_coeff(c) -> bool:
    return isinstance(c, ParamPoly)


class BivarPoly:
    """Sparse bivariate polynomial ``sum c_{u,w} x^u y^w``.

    ``terms`` maps exponent pairs to nonzero coefficients; ``param``
    records the coefficient variant (all-rational or all-:class:`ParamPoly`).
    Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("terms", "param")

    def __init__(self, terms: Optional[Mapping] = None, param: bool = False):
        clean: dict = {}
        param_seen = None
        for key, c in (terms or {}).items():
            u, w = key
            if u < 0 or w < 0 or u != int(u) or w != int(w):
                raise ValueError(f"bad exponent pair {key!r}")
            if param and not _is_param_coeff(c):
                c = ParamPoly((c,))  # promote to a constant lam-polynomial
            if _is_param_coeff(c):
                this_param = True
            else:
                c = rational(c)
                this_param = False
            if param_seen is None:
                param_seen = this_param
            elif param_seen != this_param:
                raise CoefficientVariantError(
                    "mixed rational and lam-polynomial coefficients"
                )
            if c != 0:
                clean[(int(u), int(w))] = c
        if param_seen is not None and param_seen != param:
            param = param_seen
        self.terms = clean
        self.param = param

    @classmethod
    def _raw(cls, terms: dict, param: bool) -> "BivarPoly":
        """Trusted constructor: terms already clean, no zero values."""
        obj = object.__new__(cls)
        obj.terms = terms
        obj.param = param
        return obj

    @classmethod
    def zero(cls, param: bool = False) -> "BivarPoly":
        return cls._raw({}, param)

    @classmethod
    def one(cls, param: bool = False) -> "BivarPoly":
        c = ParamPoly((1,)) if param else mpq(1)
        return cls._raw({(0, 0): c}, param)

    @classmethod
    def monomial(cls, u: int, w: int, coeff) -> "BivarPoly":
        return cls({(u, w): coeff})

    # -- queries ---------------------------------------------------------

    def zero_coeff(self) -> Coeff:
        return ParamPoly() if self.param else mpq(0)

    def coeff(self, u: int, w: int) -> Coeff:
        return self.terms.get((u, w), self.zero_coeff())

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> int:
        """Largest u + w over stored terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(u + w for u, w in self.terms)

    def homogeneous_degree(self) -> Optional[int]:
        """The common total degree of all terms, or None if mixed/zero."""
        degs = {u + w for u, w in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.param == other.param and self.terms == other.terms

    def __hash__(self):
        return hash((self.param, frozenset(self.terms.items())))

    def __iter__(self) -> Iterator:
        return iter(sorted(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "BivarPoly(0)"
        bits = [f"({c!r})*x^{u}*y^{w}" for (u, w), c in sorted(self.terms.items())]
        return "BivarPoly(" + " + ".join(bits) + ")"

    # -- ring operations -------------------------------------------------

    def _check_variant(self, other: "BivarPoly") -> None:
        if self.param != other.param:
            raise CoefficientVariantError(
                "cannot combine rational and lam-polynomial polynomials"
            )

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        self._check_variant(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            if key in out:
                s = out[key] + c
                if s == 0:
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = c
        return BivarPoly._raw(out, self.param)

    def __neg__(self) -> "BivarPoly":
        return BivarPoly._raw({k: -c for k, c in self.terms.items()}, self.param)

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-other)

    def scale(self, scalar) -> "BivarPoly":
        """Multiply every coefficient by a scalar (rational or int)."""
        if scalar == 0:
            return BivarPoly.zero(self.param)
        if not self.param:
            scalar = rational(scalar)
        return BivarPoly._raw(
            {k: c * scalar for k, c in self.terms.items()}, self.param
        )

    def mul(self, other: "BivarPoly", max_total_degree: Optional[int] = None
            ) -> "BivarPoly":
        """Exact product, optionally dropping terms with u + w above a bound."""
        self._check_variant(other)
        out: dict = {}
        bound = max_total_degree
        for (u1, w1), c1 in self.terms.items():
            for (u2, w2), c2 in other.terms.items():
                u = u1 + u2
                w = w1 + w2
                if bound is not None and u + w > bound:
                    continue
                key = (u, w)
                v = c1 * c2
                if key in out:
                    s = out[key] + v
                    if s == 0:
                        del out[key]
                    else:
                        out[key] = s
                else:
                    out[key] = v
        return BivarPoly._raw(out, self.param)

    def __mul__(self, other: "BivarPoly") -> "BivarPoly":
        return self.mul(other)

    def pow(self, e: int, max_total_degree: Optional[int] = None) -> "BivarPoly":
        """e-th power by repeated squaring with optional truncation."""
        if e < 0:
            raise ValueError("negative powers are not defined")
        result = BivarPoly.one(self.param)
        base = self
        while e:
            if e & 1:
                result = result.mul(base, max_total_degree)
            e >>= 1
            if e:
                base = base.mul(base, max_total_degree)
        return result

    def __pow__(self, e: int) -> "BivarPoly":
        return self.pow(e)

    # -- calculus and evaluation ------------------------------------------

    def diff(self, var: int) -> "BivarPoly":
        """Exact partial derivative; var 0 for x, 1 for y."""
        out: dict = {}
        for (u, w), c in self.terms.items():
            e = u if var == 0 else w
            if e == 0:
                continue
            key = (u - 1, w) if var == 0 else (u, w - 1)
            v = c * e
            if key in out:
                out[key] = out[key] + v
            else:
                out[key] = v
        return BivarPoly._raw({k: c for k, c in out.items() if c != 0}, self.param)

    def subs_lambda(self, lam) -> "BivarPoly":
        """Evaluate lam-polynomial coefficients at an exact rational lam."""
        if not self.param:
            return self
        lam = rational(lam)
        out = {}
        for key, c in self.terms.items():
            v = c(lam)
            if v != 0:
                out[key] = v
        return BivarPoly._raw(out, False)

    def __call__(self, x, y):
        """Evaluate at a point (rational variant only).

        Float or complex arguments give a float/complex result; exact
        arguments (int, mpq, Fraction) give an exact rational result.
        """
        if self.param:
            raise CoefficientVariantError(
                "substitute a lam value before evaluating"
            )
        if isinstance(x, (float, complex)) or isinstance(y, (float, complex)):
            acc = 0.0
            for (u, w), c in self.terms.items():
                acc = acc + float(c) * (x ** u) * (y ** w)
            return acc
        x = rational(x)
        y = rational(y)
        acc = mpq(0)
        for (u, w), c in self.terms.items():
            acc = acc + c * (x ** u) * (y ** w)
        return acc

"""Growth laws A_n ~ c Gamma(n) alpha^n from critical-point data.

Two routes are implemented and cross-validate each other for
homogeneous potentials of degree k (with M = k/(k-2), K = 2/(k-2)):

* circle route: the maxima Phi of |V| on the unit circle give

      A_n ~ (1/(2 sqrt(2) pi)) k^{nM+1/2} K^{n-1/2} Gamma(n)
            * sum_{Phi} V^{nK} / sqrt(B),
      B = k^2 - (V_xx + V_yy)/V,

  valid when nK, nM are integers (A_n = 0 otherwise);

* exponent route: the minimal-norm nonzero critical points Psi of
  g = -x^2/2 - y^2/2 + V, taken in the set of complex points with real
  coordinate ratio, give

      A_n ~ (1/(2 pi)) Gamma(n) sum_{Psi} (-g)^{-n} / sqrt(-det H_g).

Points of Psi arise from Phi by scaling with the k-2 complex roots of
l^{2-k} = k V(x,y); for inhomogeneous potentials real critical points
are located by damped Newton iteration from a coarse grid instead.

All critical points are found numerically (float precision); the exact
pipeline never feeds through this module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateCriticalPointError,
    RootRefinementError,
    UnsupportedRegimeError,
    ValidationError,
)
from .expansion import PotentialSpec
from .polyring import BivarPoly

__all__ = [
    "CirclePoint",
    "GCritPoint",
    "AsymptoticLaw",
    "circle_critical_points",
    "select_maxima",
    "law_circle",
    "lift_to_g",
    "g_real_critical_points",
    "g_critical_points",
    "law_g",
    "integral_check",
]

SAMPLES_PER_DEGREE = 720     # angular samples = 720 * k
NEWTON_MAX_ITER = 100
ANGLE_DEDUP_TOL = 1e-9
MAX_TIE_REL = 1e-9           # relative tie tolerance for equal maxima
DEGENERACY_MARGIN = 1e-8     # relative margin for non-degeneracy checks
GRAD_TOL = 1e-10


@dataclass(frozen=True)
class CirclePoint:
    """Critical point of V restricted to the unit circle."""

    x: float
    y: float
    v_value: float
    b_value: float
    degenerate: bool

    @property
    def angle(self) -> float:
        return math.atan2(self.y, self.x)


@dataclass(frozen=True)
class GCritPoint:
    """Nonzero critical point of the exponent g, possibly complex."""

    w: complex
    z: complex
    g_value: complex
    hess_det: complex
    lift_factor: Optional[complex] = None

    @property
    def norm(self) -> float:
        return math.hypot(abs(self.w), abs(self.z))


@dataclass(frozen=True)
class AsymptoticLaw:
    """The pair (alpha, c) in A_n ~ c Gamma(n) alpha^n.

    ``vanishing_period`` is the smallest d with A_n = 0 unless d | n;
    the law applies along that progression.
    """

    alpha: float
    c: float
    vanishing_period: int
    route: str
    contributing_points: tuple = field(default=())


def _require_fixed(pot: PotentialSpec) -> None:
    if pot.param:
        raise ValidationError("substitute a lam value before numeric analysis")


def _float_terms(p: BivarPoly) -> List[Tuple[int, int, float]]:
    return [(u, w, float(c)) for (u, w), c in sorted(p.terms.items())]


def _eval_terms(terms, x, y):
    acc = 0.0
    for u, w, c in terms:
        acc += c * x ** u * y ** w
    return acc


def _eval_terms_np(terms, x, y):
    acc = np.zeros_like(x)
    for u, w, c in terms:
        acc = acc + c * x ** u * y ** w
    return acc


class _VData:
    """Float views of V and its first and second partial derivatives."""

    def __init__(self, pot: PotentialSpec):
        _require_fixed(pot)
        V = pot.interaction_poly()
        self.V = _float_terms(V)
        Vx, Vy = V.diff(0), V.diff(1)
        self.Vx = _float_terms(Vx)
        self.Vy = _float_terms(Vy)
        self.Vxx = _float_terms(Vx.diff(0))
        self.Vxy = _float_terms(Vx.diff(1))
        self.Vyy = _float_terms(Vy.diff(1))

    def grad_g(self, x, y) -> Tuple[float, float]:
        return (-x + _eval_terms(self.Vx, x, y), -y + _eval_terms(self.Vy, x, y))

    def hess_g(self, x, y):
        return (
            -1.0 + _eval_terms(self.Vxx, x, y),
            _eval_terms(self.Vxy, x, y),
            -1.0 + _eval_terms(self.Vyy, x, y),
        )

    def g(self, x, y):
        return -0.5 * (x * x + y * y) + _eval_terms(self.V, x, y)


def _circle_h(vd: _VData, phi: float) -> float:
    """Tangential derivative witness h = sin * V_x - cos * V_y."""
    x, y = math.cos(phi), math.sin(phi)
    return y * _eval_terms(vd.Vx, x, y) - x * _eval_terms(vd.Vy, x, y)


def _circle_h_prime(vd: _VData, phi: float) -> float:
    x, y = math.cos(phi), math.sin(phi)
    vx = _eval_terms(vd.Vx, x, y)
    vy = _eval_terms(vd.Vy, x, y)
    vxx = _eval_terms(vd.Vxx, x, y)
    vxy = _eval_terms(vd.Vxy, x, y)
    vyy = _eval_terms(vd.Vyy, x, y)
    # d/dphi with x' = -y, y' = x
    return x * vx + y * vy - y * y * vxx + 2.0 * x * y * vxy - x * x * vyy


def _newton_angle(vd: _VData, phi: float, scale: float,
                  bracket: Optional[Tuple[float, float]] = None) -> Optional[float]:
    """Refine a root of h; bisection fallback when a bracket is known."""
    lo_hi = None
    if bracket is not None:
        lo, hi = bracket
        flo = _circle_h(vd, lo)
        lo_hi = (lo, hi, flo)
    tol = 1e-13 * max(1.0, scale)
    for _ in range(NEWTON_MAX_ITER):
        f = _circle_h(vd, phi)
        fp = _circle_h_prime(vd, phi)
        if fp != 0.0:
            step = f / fp
            new = phi - step
        else:
            step = math.inf
            new = math.nan
        inside = lo_hi is not None and (lo_hi[0] <= new <= lo_hi[1])
        if not math.isfinite(new) or (lo_hi is not None and not inside
                                      and abs(step) > (lo_hi[1] - lo_hi[0])):
            if lo_hi is None:
                return None
            lo, hi, flo = lo_hi
            mid = 0.5 * (lo + hi)
            fmid = _circle_h(vd, mid)
            if (flo <= 0.0) == (fmid <= 0.0):
                lo_hi = (mid, hi, fmid)
            else:
                lo_hi = (lo, mid, flo)
            phi = 0.5 * (lo_hi[0] + lo_hi[1])
            continue
        if lo_hi is not None and inside:
            lo, hi, flo = lo_hi
            fnew = _circle_h(vd, new)
            if (flo <= 0.0) == (fnew <= 0.0):
                lo_hi = (new, hi, fnew)
            else:
                lo_hi = (lo, new, flo)
        if abs(new - phi) <= 1e-14 and abs(f) <= tol:
            return new
        phi = new
    if abs(_circle_h(vd, phi)) <= tol:
        return phi
    if bracket is not None:
        raise RootRefinementError(
            "circle root refinement did not converge in "
            f"{NEWTON_MAX_ITER} iterations"
        )
    return None


def circle_critical_points(pot: PotentialSpec) -> List[CirclePoint]:
    """All critical points of |V| on the unit circle.

    The one-dimensional witness h(phi) = sin(phi) V_x - cos(phi) V_y is
    sampled densely (720 k points); sign changes and almost-zero
    plateaus seed Newton refinement, and refined angles closer than
    1e-9 are merged.
    """
    _require_fixed(pot)
    reg = pot.regularity()
    if reg is None:
        raise ValidationError("circle analysis needs a homogeneous potential")
    k = reg.k
    vd = _VData(pot)
    n_samples = SAMPLES_PER_DEGREE * k
    phis = np.arange(n_samples + 1) * (2.0 * math.pi / n_samples)
    xs, ys = np.cos(phis), np.sin(phis)
    h = ys * _eval_terms_np(vd.Vx, xs, ys) - xs * _eval_terms_np(vd.Vy, xs, ys)
    scale = float(np.max(np.abs(h)))
    if scale == 0.0:
        raise ValidationError("the circle witness vanishes identically")
    plateau = 1e-7 * scale

    roots: List[float] = []
    for i in range(n_samples):
        a, b = float(phis[i]), float(phis[i + 1])
        fa, fb = float(h[i]), float(h[i + 1])
        if abs(fa) < plateau:
            seed = _newton_angle(vd, a, scale)
            if seed is not None:
                roots.append(seed % (2.0 * math.pi))
        if (fa < 0.0) != (fb < 0.0):
            seed = _newton_angle(vd, 0.5 * (a + b), scale, bracket=(a, b))
            if seed is not None:
                roots.append(seed % (2.0 * math.pi))

    roots.sort()
    merged: List[float] = []
    for phi in roots:
        if merged and min(abs(phi - merged[-1]),
                          2.0 * math.pi - abs(phi - merged[-1])) < ANGLE_DEDUP_TOL:
            continue
        if merged and min(abs(phi - merged[0]),
                          2.0 * math.pi - abs(phi - merged[0])) < ANGLE_DEDUP_TOL:
            continue
        merged.append(phi)

    points = []
    for phi in merged:
        x, y = math.cos(phi), math.sin(phi)
        v = _eval_terms(vd.V, x, y)
        s2 = _eval_terms(vd.Vxx, x, y) + _eval_terms(vd.Vyy, x, y)
        margin_scale = max(abs(k * k * v), abs(s2), 1e-300)
        degenerate = abs(k * k * v - s2) <= DEGENERACY_MARGIN * margin_scale
        b = math.inf if v == 0.0 else k * k - s2 / v
        points.append(CirclePoint(x=x, y=y, v_value=v, b_value=b,
                                  degenerate=degenerate))
    return points


def select_maxima(points: Sequence[CirclePoint]) -> List[CirclePoint]:
    """The global maxima Phi of |V|, all within a relative 1e-9 tie.

    Raises DegenerateCriticalPointError when a selected maximum fails
    the curvature margin (the law's derivation needs B > 0 strictly).
    """
    if not points:
        raise ValidationError("no circle critical points supplied")
    vmax = max(abs(p.v_value) for p in points)
    if vmax == 0.0:
        raise ValidationError("V vanishes at every circle critical point")
    phi = [p for p in points if abs(p.v_value) >= vmax * (1.0 - MAX_TIE_REL)]
    for p in phi:
        if p.degenerate:
            raise DegenerateCriticalPointError(
                f"maximum at ({p.x:.6f}, {p.y:.6f}) is degenerate"
            )
    # a genuine maximum of |V| has B >= 0; a tied point with B < 0 is a
    # near-tied local minimum swept in by the tolerance, not a member of Phi
    phi = [p for p in phi if p.b_value > 0.0]
    if not phi:
        raise DegenerateCriticalPointError(
            "no curvature-positive maximum survives the tie tolerance"
        )
    return phi


def law_circle(pot: PotentialSpec) -> AsymptoticLaw:
    """Growth law from the circle maxima:

    alpha = k^M K |V|max^K,
    c     = (1/(2 sqrt(2) pi)) sqrt(k/K) sum_{Phi} B^{-1/2}.
    """
    reg = pot.regularity()
    if reg is None:
        raise ValidationError("circle law needs a homogeneous potential")
    phi = select_maxima(circle_critical_points(pot))
    k = reg.k
    if k % 2 == 0:
        signs = {p.v_value > 0.0 for p in phi}
        if len(signs) > 1:
            raise UnsupportedRegimeError(
                "maxima with mixed V signs at even degree are not covered"
            )
        if not signs.pop():
            raise UnsupportedRegimeError(
                "negative V at even-degree maxima gives an alternating "
                "law; not covered"
            )
    vmax = max(abs(p.v_value) for p in phi)
    M, K = float(reg.M), float(reg.K)
    alpha = k ** M * K * vmax ** K
    csum = sum(1.0 / math.sqrt(p.b_value) for p in phi)
    c = csum * math.sqrt(k / K) / (2.0 * math.sqrt(2.0) * math.pi)
    return AsymptoticLaw(alpha=alpha, c=c,
                         vanishing_period=reg.vanishing_period,
                         route="circle", contributing_points=tuple(phi))


def _antipodal_classes(phi: Sequence[CirclePoint]) -> List[CirclePoint]:
    """One representative per antipodal pair {(x,y), (-x,-y)}."""
    reps: List[CirclePoint] = []
    used = [False] * len(phi)
    for i, p in enumerate(phi):
        if used[i]:
            continue
        used[i] = True
        for j in range(i + 1, len(phi)):
            q = phi[j]
            if not used[j] and abs(p.x + q.x) < 1e-8 and abs(p.y + q.y) < 1e-8:
                used[j] = True
                break
        else:
            raise ValidationError(
                "maxima of a homogeneous potential must come in "
                "antipodal pairs"
            )
        reps.append(p)
    return reps


def _g_point(vd: _VData, w: complex, z: complex,
             lift: Optional[complex]) -> GCritPoint:
    gx = -w + _eval_terms(vd.Vx, w, z)
    gy = -z + _eval_terms(vd.Vy, w, z)
    scale = max(1.0, abs(w), abs(z))
    if math.hypot(abs(gx), abs(gy)) > 1e-8 * scale:
        raise RootRefinementError("candidate point fails the gradient check")
    h00, h01, h11 = vd.hess_g(w, z)
    det = h00 * h11 - h01 * h01
    return GCritPoint(w=w, z=z, g_value=vd.g(w, z), hess_det=det,
                      lift_factor=lift)


def lift_to_g(phi: Sequence[CirclePoint], pot: PotentialSpec) -> List[GCritPoint]:
    """Scale circle maxima to critical points of g.

    For each antipodal pair of maxima with value v = V(x,y), the k-2
    complex solutions of l^{2-k} = k v give the points (l x, l y); the
    pair partner produces the same set, so only one representative is
    lifted.
    """
    reg = pot.regularity()
    if reg is None:
        raise ValidationError("the lift needs a homogeneous potential")
    k = reg.k
    vd = _VData(pot)
    out: List[GCritPoint] = []
    for p in _antipodal_classes(phi):
        v = p.v_value
        if v == 0.0:
            raise ValidationError("V vanishes at a maximum; nothing to lift")
        base = cmath.exp(-cmath.log(complex(k * v)) / (k - 2))
        for j in range(k - 2):
            ell = base * cmath.exp(2.0j * math.pi * j / (k - 2))
            out.append(_g_point(vd, ell * p.x, ell * p.y, ell))
    # safety: distinct antipodal classes give distinct lifts
    dedup: List[GCritPoint] = []
    for pt in out:
        if not any(abs(pt.w - q.w) + abs(pt.z - q.z)
                   < 1e-9 * (1.0 + pt.norm) for q in dedup):
            dedup.append(pt)
    dedup.sort(key=lambda q: (round(q.w.real, 12), round(q.w.imag, 12),
                              round(q.z.real, 12), round(q.z.imag, 12)))
    return dedup


def _lift_radius(pot: PotentialSpec) -> float:
    """Search radius estimate from the homogeneity slices of V."""
    V = pot.interaction_poly()
    slices: dict = {}
    for (u, w), c in V.terms.items():
        slices.setdefault(u + w, {})[(u, w)] = c
    phis = np.arange(720) * (2.0 * math.pi / 720)
    xs, ys = np.cos(phis), np.sin(phis)
    radius = 0.0
    for d, terms in slices.items():
        ft = [(u, w, float(c)) for (u, w), c in terms.items()]
        m = float(np.max(np.abs(_eval_terms_np(ft, xs, ys))))
        if m > 0.0:
            radius = max(radius, (d * m) ** (-1.0 / (d - 2)))
    if radius == 0.0:
        raise ValidationError("potential has no interaction terms")
    return 2.0 * radius


def g_real_critical_points(pot: PotentialSpec,
                           grid: int = 41) -> List[GCritPoint]:
    """Minimal-norm nonzero real critical points of g by multi-start Newton.

    Starts on a grid over [-R, R]^2 with R twice the largest
    slice-based scaling estimate; converged points are deduplicated and
    the set of minimal Euclidean norm (relative tie 1e-9) is returned.
    """
    _require_fixed(pot)
    if pot.max_degree() < 3:
        raise ValidationError("potential must contain interaction terms")
    vd = _VData(pot)
    R = _lift_radius(pot)
    found: List[Tuple[float, float]] = []
    coords = np.linspace(-R, R, grid)
    for x0 in coords:
        for y0 in coords:
            x, y = float(x0), float(y0)
            for _ in range(NEWTON_MAX_ITER):
                gx, gy = vd.grad_g(x, y)
                if math.hypot(gx, gy) <= 1e-12 * (1.0 + math.hypot(x, y)):
                    break
                h00, h01, h11 = vd.hess_g(x, y)
                det = h00 * h11 - h01 * h01
                if det == 0.0 or not math.isfinite(det):
                    break
                dx = (-gx * h11 + gy * h01) / det
                dy = (-gy * h00 + gx * h01) / det
                x += dx
                y += dy
                if math.hypot(x, y) > 4.0 * R:
                    break
            else:
                continue
            gx, gy = vd.grad_g(x, y)
            r = math.hypot(x, y)
            if math.hypot(gx, gy) > GRAD_TOL * (1.0 + r) or r <= 1e-9 * (1.0 + R):
                continue
            if not any(math.hypot(x - a, y - b) < 1e-8 * (1.0 + r)
                       for a, b in found):
                found.append((x, y))
    if not found:
        raise RootRefinementError(
            "no nonzero critical point found within the search box"
        )
    rmin = min(math.hypot(x, y) for x, y in found)
    sel = [(x, y) for x, y in found
           if math.hypot(x, y) <= rmin * (1.0 + 1e-9)]
    sel.sort()
    return [_g_point(vd, complex(x), complex(y), None) for x, y in sel]


def g_critical_points(pot: PotentialSpec) -> List[GCritPoint]:
    """Psi for any fixed potential: exact lift when homogeneous, real
    Newton search otherwise."""
    if pot.regularity() is not None:
        return lift_to_g(select_maxima(circle_critical_points(pot)), pot)
    return g_real_critical_points(pot)


def law_g(psi: Sequence[GCritPoint], pot: PotentialSpec) -> AsymptoticLaw:
    """Growth law from critical points of g:

    alpha = 1/|g| at the minimal |-g| points, c = (1/(2 pi)) times the
    sum of (-det H_g)^{-1/2} over those points.  For homogeneous
    potentials the full root-of-unity orbit is summed, which reproduces
    the k-2 multiplicity along the progression where A_n does not
    vanish.
    """
    if not psi:
        raise ValidationError("empty critical point set")
    reg = pot.regularity()
    period = reg.vanishing_period if reg is not None else 1
    neg_g = [-p.g_value for p in psi]
    mods = [abs(v) for v in neg_g]
    mmin = min(mods)
    if mmin <= 0.0:
        raise ValidationError("g vanishes at a critical point")
    contributing = [i for i, m in enumerate(mods)
                    if m <= mmin * (1.0 + 1e-9)]
    if not any(abs(neg_g[i].imag) <= 1e-9 * mods[i] and neg_g[i].real > 0.0
               for i in contributing):
        raise UnsupportedRegimeError(
            "no real positive -g among the dominant critical points"
        )
    csum = 0.0
    for i in contributing:
        p = psi[i]
        det = p.hess_det
        hscale = max(1.0, abs(det))
        if abs(det.imag) > 1e-8 * hscale:
            raise UnsupportedRegimeError("non-real Hessian determinant")
        if abs(det) <= DEGENERACY_MARGIN * max(1.0, abs(p.w) ** 2, abs(p.z) ** 2):
            raise DegenerateCriticalPointError(
                f"critical point ({p.w:.6f}, {p.z:.6f}) has a singular Hessian"
            )
        if -det.real <= 0.0:
            raise UnsupportedRegimeError(
                "positive Hessian determinant at a dominant point"
            )
        phase = neg_g[i] / mods[i]
        if abs(phase ** period - 1.0) > 1e-6:
            raise UnsupportedRegimeError(
                "critical value phases incompatible with the vanishing period"
            )
        csum += 1.0 / math.sqrt(-det.real)
    alpha = 1.0 / mmin
    c = csum / (2.0 * math.pi)
    return AsymptoticLaw(alpha=alpha, c=c, vanishing_period=period,
                         route="g",
                         contributing_points=tuple(psi[i] for i in contributing))


def integral_check(pot: PotentialSpec, n: int,
                   quad_points: int = 16384) -> float:
    """A_n for a homogeneous potential by direct angular quadrature:

        A_n = 2^{nM} (nM)! / (2 pi (nK)!) *
              integral_{-pi}^{pi} V(cos phi, sin phi)^{nK} dphi.

    The periodic integrand is integrated on a uniform grid (at least
    10^4 points); magnitudes are carried in log space so large n do not
    overflow intermediate factors.
    """
    _require_fixed(pot)
    reg = pot.regularity()
    if reg is None:
        raise ValidationError("integral form needs a homogeneous potential")
    if n == 0:
        return 1.0
    nK = n * reg.K
    nM = n * reg.M
    if nK.denominator != 1 or nM.denominator != 1:
        raise ValidationError(
            f"nK = {nK} or nM = {nM} is not an integer; A_{n} = 0 exactly"
        )
    j = int(nK)
    vd = _VData(pot)
    m = max(quad_points, 10000)
    phis = np.arange(m) * (2.0 * math.pi / m)
    xs, ys = np.cos(phis), np.sin(phis)
    vals = _eval_terms_np(vd.V, xs, ys)
    vmax = float(np.max(np.abs(vals)))
    if vmax == 0.0:
        return 0.0
    mean = float(np.mean((vals / vmax) ** j))
    if mean == 0.0:
        return 0.0
    sign = 1.0 if mean > 0.0 else -1.0
    log_total = (
        int(nM) * math.log(2.0)
        + math.lgamma(int(nM) + 1)
        - math.log(2.0 * math.pi)
        - math.lgamma(j + 1)
        + j * math.log(vmax)
        + math.log(abs(mean) * 2.0 * math.pi)
    )
    return sign * math.exp(log_total)

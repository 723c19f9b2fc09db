"""Parameter sweeps and data-driven analysis of the growth law.

Includes the analytic sweep of (alpha, c) over a lam grid, a blind
ratio-based fit of the law from exact coefficient data, kink/divergence
based transition detection, and simultaneous (Aberth-Ehrlich) root
finding for the coefficient polynomials A_n(lam).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .asymptotics import (
    AsymptoticLaw,
    g_critical_points,
    law_circle,
    law_g,
)
from .errors import (
    BicountError,
    FitError,
    RootRefinementError,
    ValidationError,
)
from .expansion import PotentialSpec
from .polyring import ParamPoly, rational

__all__ = [
    "ScanRow",
    "RootSet",
    "scan",
    "fit_law",
    "detect_transitions",
    "roots_of_An",
]


@dataclass(frozen=True)
class ScanRow:
    """One grid point of a lam sweep; error rows carry a marker instead."""

    lam: float
    alpha: Optional[float]
    c: Optional[float]
    regime_id: int
    error: Optional[str] = None
    alpha_fit: Optional[float] = None
    c_fit: Optional[float] = None


@dataclass(frozen=True)
class RootSet:
    """All complex roots of A_n(lam) with a backward-error certificate."""

    n: int
    roots: Tuple[complex, ...]
    residual: float


def _regime_signature(law: AsymptoticLaw) -> tuple:
    """Structural fingerprint of which critical-point family is active."""
    sig = []
    for p in law.contributing_points:
        if law.route == "circle":
            x, y = p.x, p.y
            is_real = True
        else:
            x, y = p.w, p.z
            is_real = abs(x.imag) + abs(y.imag) <= 1e-8 * (1.0 + abs(x) + abs(y))
        if abs(y) <= 1e-6 * (1.0 + abs(x)):
            axis = "x"
        elif abs(x) <= 1e-6 * (1.0 + abs(y)):
            axis = "y"
        else:
            axis = "generic"
        sig.append((axis, is_real))
    return tuple(sorted(sig))


def _law_at(pot: PotentialSpec, lam: float, homogeneous: bool) -> AsymptoticLaw:
    fixed = pot.at_lambda(rational(lam))
    if homogeneous:
        return law_circle(fixed)
    return law_g(g_critical_points(fixed), fixed)


def scan(pot: PotentialSpec, lam_range: Tuple[float, float, int],
         threads: int = 1) -> List[ScanRow]:
    """Evaluate the growth law on a uniform lam grid.

    Each grid point gets (alpha, c) and a regime id that changes only
    when the active critical-point family changes; points where the law
    is degenerate or uncovered are marked with an error string.
    """
    a, b, steps = lam_range
    if steps < 1:
        raise ValidationError("steps must be at least 1")
    if a <= 0:
        raise ValidationError("the scan requires lam > 0")
    if steps > 1 and b <= a:
        raise ValidationError("need b > a for a multi-point scan")
    lams = [a] if steps == 1 else [a + i * (b - a) / (steps - 1)
                                   for i in range(steps)]
    homogeneous = pot.regularity() is not None

    def work(lam: float):
        try:
            return _law_at(pot, lam, homogeneous)
        except BicountError as exc:
            return exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, lams))
    else:
        results = [work(lam) for lam in lams]

    rows: List[ScanRow] = []
    regime_ids: dict = {}
    for lam, res in zip(lams, results):
        if isinstance(res, BicountError):
            rows.append(ScanRow(lam=lam, alpha=None, c=None,
                                regime_id=-1, error=str(res)))
            continue
        sig = _regime_signature(res)
        if sig not in regime_ids:
            regime_ids[sig] = len(regime_ids)
        rows.append(ScanRow(lam=lam, alpha=res.alpha, c=res.c,
                            regime_id=regime_ids[sig]))
    return rows


def detect_transitions(rows: Sequence[ScanRow],
                       kink_factor: float = 5.0,
                       spike_factor: float = 5.0) -> List[float]:
    """Locate parameter values where the law changes branch.

    A grid point is flagged when the discrete second difference of
    alpha exceeds ``kink_factor`` times its median absolute value, when
    c exceeds ``spike_factor`` times its median, or when the row itself
    failed as degenerate.  Adjacent flags are clustered and each
    cluster is reported by its midpoint.
    """
    if len(rows) < 10:
        raise ValidationError("need at least 10 rows to detect transitions")
    lams = [r.lam for r in rows]
    flagged = {i for i, r in enumerate(rows) if r.error is not None}

    alphas = [r.alpha for r in rows]
    d2 = {}
    for i in range(1, len(rows) - 1):
        trip = alphas[i - 1: i + 2]
        if None in trip:
            continue
        d2[i] = abs(trip[0] - 2.0 * trip[1] + trip[2])
    if d2:
        med = float(np.median(list(d2.values())))
        ascale = float(np.median([abs(x) for x in alphas if x is not None]))
        threshold = kink_factor * max(med, 1e-14 * max(ascale, 1.0))
        flagged.update(i for i, v in d2.items() if v > threshold)

    cs = [r.c for r in rows if r.c is not None]
    if cs:
        medc = float(np.median(cs))
        flagged.update(
            i for i, r in enumerate(rows)
            if r.c is not None and r.c > spike_factor * medc
        )

    if not flagged:
        return []
    idx = sorted(flagged)
    clusters: List[List[int]] = [[idx[0]]]
    for i in idx[1:]:
        if i - clusters[-1][-1] <= 2:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return [0.5 * (lams[c[0]] + lams[c[-1]]) for c in clusters]


def _log_abs(value) -> float:
    """log |value| for an exact rational of arbitrary size."""
    num = abs(int(value.numerator))
    den = int(value.denominator)

    def biglog(x: int) -> float:
        if x.bit_length() <= 900:
            return math.log(x)
        shift = x.bit_length() - 900
        return math.log(x >> shift) + shift * math.log(2.0)

    return biglog(num) - biglog(den)


def fit_law(values: Sequence, n_max: Optional[int] = None,
            period: Optional[int] = None) -> Tuple[float, float]:
    """Estimate (alpha, c) in A_n ~ c Gamma(n) alpha^n from exact data.

    Uses the ratio r_n = A_{n+d} / (A_n n (n+1) ... (n+d-1)) along the
    progression with step d (the vanishing period, inferred from the
    zero pattern when not given), takes alpha = r_n^{1/d} with one step
    of Richardson extrapolation in 1/n, and reads c off the largest
    usable term.  Everything is carried in log space.
    """
    if n_max is None:
        n_max = len(values) - 1
    n_max = min(n_max, len(values) - 1)
    nonzero = [n for n in range(1, n_max + 1) if values[n] != 0]
    if len(nonzero) < 20:
        raise FitError(
            f"need at least 20 nonzero coefficients, have {len(nonzero)}"
        )
    if period is None:
        period = 0
        for n in nonzero:
            period = gcd(period, n)
    d = period
    usable = [n for n in range(d, n_max + 1, d) if values[n] != 0]
    signs = {(values[n] > 0) for n in usable}
    if len(signs) > 1:
        raise FitError("sign-inconsistent coefficient sequence")
    logs = {n: _log_abs(values[n]) for n in usable}

    pairs = [n for n in usable if (n + d) in logs]
    if len(pairs) < 2:
        raise FitError("too few consecutive terms along the progression")
    n2 = pairs[-1]
    n1 = pairs[-2]

    def alpha_at(n: int) -> float:
        lr = logs[n + d] - logs[n]
        for i in range(d):
            lr -= math.log(n + i)
        return math.exp(lr / d)

    a1, a2 = alpha_at(n1), alpha_at(n2)
    alpha = (n2 * a2 - n1 * a1) / (n2 - n1) if n2 != n1 else a2
    n_top = n2 + d
    c = math.exp(logs[n_top] - math.lgamma(n_top) - n_top * math.log(alpha))
    return alpha, c


def _dd_coeffs(coeffs) -> Tuple[np.ndarray, np.ndarray]:
    """Split exact coefficients into double-double longdouble parts."""
    hi = []
    lo = []
    for c in coeffs:
        h = float(c)
        hi.append(h)
        lo.append(float(c - rational(h)))
    return (np.array(hi, dtype=np.longdouble),
            np.array(lo, dtype=np.longdouble))


def _eval_extended(hi: np.ndarray, lo: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Horner evaluation in clongdouble with split coefficients."""
    zl = z.astype(np.clongdouble)
    acc = np.zeros_like(zl)
    for h, l in zip(hi[::-1], lo[::-1]):
        acc = acc * zl + (np.clongdouble(h) + np.clongdouble(l))
    return acc


def roots_of_An(a_n: ParamPoly, n: int, max_sweeps: int = 1000) -> RootSet:
    """All complex roots of the coefficient polynomial A_n(lam).

    Runs simultaneous Aberth-Ehrlich iteration on float-converted
    coefficients, then certifies and polishes the roots with extended
    precision (double-double coefficient splits evaluated in 80-bit
    arithmetic).  The reported residual is the largest backward error
    |p(root)| / sum_i |c_i| |root|^i and must not exceed 1e-8.
    """
    coeffs = list(a_n.coeffs)
    if not coeffs:
        raise ValidationError("cannot find roots of the zero polynomial")
    # factor out lam = 0 roots
    zero_roots = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zero_roots += 1
    degree = len(coeffs) - 1
    if degree == 0:
        roots: List[complex] = [0.0 + 0.0j] * zero_roots
        return RootSet(n=n, roots=tuple(sorted(
            roots, key=lambda r: (r.real, r.imag))), residual=0.0)

    scale = max(abs(c) for c in coeffs)
    norm = [c / scale for c in coeffs]
    cf = np.array([float(c) for c in norm], dtype=complex)
    # Fujiwara bound: all roots lie within 2 max_i |c_{d-i}/c_d|^(1/i),
    # which stays tame even when the leading coefficient is tiny
    lead = abs(cf[-1])
    radius = 2.0 * max(
        (abs(cf[degree - i]) / lead) ** (1.0 / i)
        for i in range(1, degree + 1)
    )
    radius = max(radius, 1e-3)

    j = np.arange(degree)
    z = radius * np.exp(2j * math.pi * (j + 0.5) / degree + 0.4j)

    dcf = cf[1:] * np.arange(1, degree + 1)
    abs_cf = np.abs(cf)
    converged = False
    for _ in range(max_sweeps):
        p = np.polyval(cf[::-1], z)
        dp = np.polyval(dcf[::-1], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(dp != 0, p / dp, 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            denom = 1.0 - w * s
            corr = np.where(denom != 0, w / denom, w)
        z = z - corr
        max_corr = np.max(np.abs(corr) / (1.0 + np.abs(z)))
        if max_corr < 1e-13:
            converged = True
            break
        if max_corr < 1e-2:
            # multiple or ill-conditioned roots stall the corrections at
            # the noise floor; accept on the backward error instead
            pv = np.abs(np.polyval(cf[::-1], z))
            az = np.abs(z)
            bscale = np.zeros_like(az)
            for i, a in enumerate(abs_cf):
                bscale = bscale + a * az ** i
            if np.max(pv / np.maximum(bscale, 1e-300)) < 1e-12:
                converged = True
                break
    if not converged:
        raise RootRefinementError(
            f"Aberth iteration did not settle within {max_sweeps} sweeps"
        )

    # extended-precision polish
    hi, lo = _dd_coeffs(norm)
    dnorm = [c * (i + 1) for i, c in enumerate(norm[1:])]
    dhi, dlo = _dd_coeffs(dnorm)
    zl = z.astype(np.clongdouble)
    for _ in range(3):
        pv = _eval_extended(hi, lo, zl)
        dv = _eval_extended(dhi, dlo, zl)
        step = np.where(dv != 0, pv / dv, 0.0)
        zl = zl - step

    # the coefficients are real, so the true root multiset is closed
    # under conjugation: realify near-real roots and average the rest
    # into exact conjugate pairs
    raw = [complex(v) for v in zl.astype(complex)]
    raw = [complex(r.real, 0.0) if abs(r.imag) <= 1e-7 * (1 + abs(r)) else r
           for r in raw]
    upper = [r for r in raw if r.imag > 0]
    lower = [r for r in raw if r.imag < 0]
    final = [r for r in raw if r.imag == 0]
    used = [False] * len(lower)
    for r in upper:
        best, best_d = None, None
        for i, s in enumerate(lower):
            if used[i]:
                continue
            dist = abs(s - r.conjugate())
            if best_d is None or dist < best_d:
                best, best_d = i, dist
        if best is not None and best_d <= 1e-4 * (1 + abs(r)):
            used[best] = True
            avg = 0.5 * (r + lower[best].conjugate())
            final.extend([avg, avg.conjugate()])
        else:
            final.append(r)
    final.extend(s for i, s in enumerate(lower) if not used[i])

    zf = np.array(final, dtype=complex).astype(np.clongdouble)
    pv = np.abs(_eval_extended(hi, lo, zf))
    az = np.abs(zf)
    bscale = np.zeros_like(az)
    for i, c in enumerate(norm):
        bscale = bscale + abs(float(c)) * az ** i
    residual = float(np.max(pv / np.maximum(bscale, 1e-300)))
    if residual > 1e-8:
        raise RootRefinementError(
            f"root residual {residual:.3e} exceeds 1e-8"
        )
    final.extend([0.0 + 0.0j] * zero_roots)
    final.sort(key=lambda r: (r.real, r.imag))
    return RootSet(n=n, roots=tuple(final), residual=residual)

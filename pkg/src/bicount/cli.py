"""Command-line front end.

Subcommands
-----------
expand      exact expansion coefficients A_0..A_N
enumerate   brute-force graph census / oracle value of A_n
asympt      growth law (alpha, c) from critical points at a fixed lam
phase-scan  (alpha, c) over a lam grid plus blind transition detection
roots       complex roots of the coefficient polynomial A_n(lam)

Exit codes: 0 success, 2 parse error, 3 validation error, 4 resource
guard, 5 degenerate/uncovered math.  Exact values are serialized as
"p/q" strings (never JSON numbers) and floats are printed with 17
significant digits, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from gmpy2 import mpq

from . import __version__
from .asymptotics import (
    circle_critical_points,
    g_critical_points,
    law_circle,
    law_g,
    lift_to_g,
    select_maxima,
)
from .census import chi_census, enumerate_census, weighted_A
from .errors import (
    DegenerateCriticalPointError,
    FitError,
    InstanceTooLargeError,
    PotentialFormatError,
    RootRefinementError,
    UnsupportedRegimeError,
    ValidationError,
)
from .expansion import PotentialSpec, expand_series
from .phasescan import detect_transitions, roots_of_An, scan
from .polyring import ParamPoly, rational

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_TOO_LARGE = 4
EXIT_DEGENERATE = 5


# -- exact value serialization ------------------------------------------------


def _rat_str(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _coeff_json(c):
    if isinstance(c, ParamPoly):
        return [_rat_str(x) for x in c.coeffs] or ["0"]
    return _rat_str(c)


def _parse_rat(text: str):
    try:
        return rational(str(Fraction(text)))
    except (ValueError, ZeroDivisionError) as exc:
        raise PotentialFormatError(f"bad rational {text!r}: {exc}") from exc


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


# -- potential files ----------------------------------------------------------


def load_potential_data(data: dict) -> PotentialSpec:
    """Build a PotentialSpec from the JSON object form."""
    if not isinstance(data, dict) or "terms" not in data:
        raise PotentialFormatError('potential file needs a "terms" list')
    raw = data["terms"]
    if not isinstance(raw, list):
        raise PotentialFormatError('"terms" must be a list')
    terms = {}
    any_param = any(isinstance(item.get("coeff"), dict)
                    for item in raw if isinstance(item, dict))
    for item in raw:
        if not isinstance(item, dict) or not {"u", "w", "coeff"} <= set(item):
            raise PotentialFormatError(
                'each term needs "u", "w" and "coeff" fields'
            )
        u, w = item["u"], item["w"]
        if not isinstance(u, int) or not isinstance(w, int):
            raise PotentialFormatError("exponents u, w must be integers")
        if (u, w) in terms:
            raise PotentialFormatError(f"duplicate term ({u},{w})")
        coeff = item["coeff"]
        if isinstance(coeff, str):
            value = _parse_rat(coeff)
            terms[(u, w)] = ParamPoly((value,)) if any_param else value
        elif isinstance(coeff, dict) and "poly" in coeff:
            entries = coeff["poly"]
            if not isinstance(entries, list):
                raise PotentialFormatError('"poly" must be a list of strings')
            terms[(u, w)] = ParamPoly([_parse_rat(e) for e in entries])
        else:
            raise PotentialFormatError(
                f'coefficient of ({u},{w}) must be "p/q" or {{"poly": [...]}}'
            )
    return PotentialSpec(terms, param=any_param)


def load_potential(path: str) -> PotentialSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise PotentialFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise PotentialFormatError(f"{path} is not valid JSON: {exc}") from exc
    return load_potential_data(data)


def dump_potential(pot: PotentialSpec) -> dict:
    terms = []
    for (u, w), c in sorted(pot.terms.items()):
        if isinstance(c, ParamPoly):
            coeff = {"poly": [_rat_str(x) for x in c.coeffs]}
        else:
            coeff = _rat_str(c)
        terms.append({"u": u, "w": w, "coeff": coeff})
    return {"terms": terms}


# -- output helpers -----------------------------------------------------------


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_json(args, obj) -> None:
    _write(args, json.dumps(obj, indent=2, sort_keys=True) + "\n")


# -- subcommands --------------------------------------------------------------


def cmd_expand(args) -> int:
    pot = load_potential(args.potential)
    if args.lam is not None:
        pot = pot.at_lambda(_parse_rat(args.lam))
    series = expand_series(pot, args.n)
    if args.format == "json":
        _write_json(args, {
            "n_max": args.n,
            "param": pot.param,
            "A": [_coeff_json(c) for c in series],
        })
    else:
        lines = []
        for n, c in enumerate(series):
            cj = _coeff_json(c)
            cells = cj if isinstance(cj, list) else [cj]
            lines.append(",".join([str(n), *cells]))
        _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_enumerate(args) -> int:
    if args.potential == "generic":
        min_degree = args.min_degree if args.min_degree is not None else 1
        censuses = []
        for s in range(args.n + 1):
            t = args.n - s
            entries = enumerate_census(s, t, min_degree=min_degree)
            censuses.append({
                "s": s,
                "t": t,
                "entries": [
                    {"profile": [list(d) for d in e.profile],
                     "weight": _rat_str(e.weight)}
                    for e in entries
                ],
            })
        obj = {"mode": "generic", "edges": args.n,
               "min_degree": min_degree, "censuses": censuses}
        if args.format == "json":
            _write_json(args, obj)
        else:
            lines = ["s,t,profile,weight"]
            for group in censuses:
                for e in group["entries"]:
                    prof = ";".join(f"{u}.{w}" for u, w in e["profile"])
                    lines.append(
                        f"{group['s']},{group['t']},{prof},{e['weight']}")
            _write(args, "\n".join(lines) + "\n")
        return 0

    pot = load_potential(args.potential)
    if args.lam is not None:
        pot = pot.at_lambda(_parse_rat(args.lam))
    total = weighted_A(args.n, pot)
    by_split: dict = {}
    if args.n > 0:
        for s, t, entry in chi_census(args.n, pot):
            by_split.setdefault((s, t), []).append(entry)
    censuses = [
        {
            "s": s,
            "t": t,
            "entries": [
                {"profile": [list(d) for d in e.profile],
                 "weight": _rat_str(e.weight)}
                for e in entries
            ],
        }
        for (s, t), entries in sorted(by_split.items())
    ]
    obj = {"mode": "potential", "n": args.n,
           "weighted_A": _coeff_json(total), "censuses": censuses}
    if args.format == "json":
        _write_json(args, obj)
    else:
        lines = ["s,t,profile,weight"]
        for group in censuses:
            for e in group["entries"]:
                prof = ";".join(f"{u}.{w}" for u, w in e["profile"])
                lines.append(f"{group['s']},{group['t']},{prof},{e['weight']}")
        _write(args, "\n".join(lines) + "\n")
    return 0


def _circle_point_json(p) -> dict:
    return {
        "x": _fmt_float(p.x),
        "y": _fmt_float(p.y),
        "V": _fmt_float(p.v_value),
        "B": _fmt_float(p.b_value),
    }


def _g_point_json(p) -> dict:
    out = {
        "w": [_fmt_float(p.w.real), _fmt_float(p.w.imag)],
        "z": [_fmt_float(p.z.real), _fmt_float(p.z.imag)],
        "g": [_fmt_float(p.g_value.real), _fmt_float(p.g_value.imag)],
        "hess_det": [_fmt_float(p.hess_det.real), _fmt_float(p.hess_det.imag)],
    }
    if p.lift_factor is not None:
        out["lift_factor"] = [_fmt_float(p.lift_factor.real),
                              _fmt_float(p.lift_factor.imag)]
    return out


def cmd_asympt(args) -> int:
    pot = load_potential(args.potential)
    if pot.param:
        if args.lam is None:
            raise ValidationError(
                "--lambda is required for a parametric potential"
            )
        pot = pot.at_lambda(_parse_rat(args.lam))
    homogeneous = pot.regularity() is not None
    obj: dict = {"homogeneous": homogeneous}
    if homogeneous:
        phi = select_maxima(circle_critical_points(pot))
        circle = law_circle(pot)
        psi = lift_to_g(phi, pot)
        glaw = law_g(psi, pot)
        agreement = max(
            abs(circle.alpha - glaw.alpha) / circle.alpha,
            abs(circle.c - glaw.c) / circle.c,
        )
        obj.update({
            "alpha": _fmt_float(circle.alpha),
            "c": _fmt_float(circle.c),
            "vanishing_period": circle.vanishing_period,
            "phi": [_circle_point_json(p) for p in phi],
            "psi": [_g_point_json(p) for p in psi],
            "g_route": {"alpha": _fmt_float(glaw.alpha),
                        "c": _fmt_float(glaw.c)},
            "route_agreement": _fmt_float(agreement),
        })
    else:
        psi = g_critical_points(pot)
        glaw = law_g(psi, pot)
        obj.update({
            "alpha": _fmt_float(glaw.alpha),
            "c": _fmt_float(glaw.c),
            "vanishing_period": glaw.vanishing_period,
            "phi": [],
            "psi": [_g_point_json(p) for p in psi],
        })
    _write_json(args, obj)
    return 0


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise PotentialFormatError("--range must be a:b:steps")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise PotentialFormatError(f"bad range {text!r}: {exc}") from exc


def cmd_phase_scan(args) -> int:
    pot = load_potential(args.potential)
    rng = _parse_range(args.range)
    rows = scan(pot, rng, threads=args.threads)
    transitions = detect_transitions(
        rows, kink_factor=args.kink_threshold,
        spike_factor=args.spike_threshold,
    ) if len(rows) >= 10 else []
    if args.format == "json":
        _write_json(args, {
            "rows": [
                {
                    "lambda": _fmt_float(r.lam),
                    "alpha": None if r.alpha is None else _fmt_float(r.alpha),
                    "c": None if r.c is None else _fmt_float(r.c),
                    "regime": r.regime_id,
                    "error": r.error,
                }
                for r in rows
            ],
            "transitions": [_fmt_float(t) for t in transitions],
        })
    else:
        lines = ["lambda,alpha,c,regime"]
        for r in rows:
            alpha = "" if r.alpha is None else _fmt_float(r.alpha)
            c = "" if r.c is None else _fmt_float(r.c)
            lines.append(f"{_fmt_float(r.lam)},{alpha},{c},{r.regime_id}")
        for t in transitions:
            lines.append(f"# transition,{_fmt_float(t)}")
        _write(args, "\n".join(lines) + "\n")
    return 0


def cmd_roots(args) -> int:
    pot = load_potential(args.potential)
    if not pot.param:
        raise ValidationError("roots need a lam-parametric potential")
    series = expand_series(pot, args.n)
    a_n = series[args.n]
    if not isinstance(a_n, ParamPoly) or not a_n:
        raise ValidationError(f"A_{args.n} vanishes identically")
    rs = roots_of_An(a_n, args.n)
    if args.format == "json":
        _write_json(args, {
            "n": rs.n,
            "residual": _fmt_float(rs.residual),
            "roots": [[_fmt_float(r.real), _fmt_float(r.imag)]
                      for r in rs.roots],
        })
    else:
        lines = ["re_root,im_root"]
        for r in rs.roots:
            lines.append(f"{_fmt_float(r.real)},{_fmt_float(r.imag)}")
        _write(args, "\n".join(lines) + "\n")
    return 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bicount",
        description="Exact enumeration and growth asymptotics of "
                    "edge-bicolored graphs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, lam=True):
        p.add_argument("--potential", required=True,
                       help="potential JSON file")
        if lam:
            p.add_argument("--lambda", dest="lam", default=None,
                           help="exact value for lam, e.g. 1/4")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("--out", default=None, help="output path (else stdout)")
        p.add_argument("--threads", type=int,
                       default=os.cpu_count() or 1,
                       help="worker threads for grid sweeps")

    p = sub.add_parser("expand", help="exact A_0..A_N")
    common(p)
    p.add_argument("--n", type=int, required=True, help="largest index N")
    p.set_defaults(func=cmd_expand, default_format="json")

    p = sub.add_parser("enumerate", help="graph census oracle")
    common(p)
    p.add_argument("--n", type=int, required=True,
                   help="Euler index n (edge count in generic mode)")
    p.add_argument("--min-degree", type=int, default=None,
                   help="minimum vertex degree (generic mode, default 1)")
    p.set_defaults(func=cmd_enumerate, default_format="json")

    p = sub.add_parser("asympt", help="growth law at a fixed lam")
    common(p)
    p.set_defaults(func=cmd_asympt, default_format="json")

    p = sub.add_parser("phase-scan", help="growth law over a lam grid")
    common(p, lam=False)
    p.add_argument("--range", required=True, help="grid as a:b:steps")
    p.add_argument("--kink-threshold", type=float, default=5.0,
                   help="alpha second-difference factor over its median")
    p.add_argument("--spike-threshold", type=float, default=5.0,
                   help="c factor over its median")
    p.set_defaults(func=cmd_phase_scan, default_format="csv")

    p = sub.add_parser("roots", help="complex roots of A_n(lam)")
    common(p, lam=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_roots, default_format="csv")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except PotentialFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InstanceTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (DegenerateCriticalPointError, UnsupportedRegimeError,
            RootRefinementError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())

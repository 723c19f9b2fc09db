"""bicount: exact enumeration and growth asymptotics of edge-bicolored graphs.

The expansion coefficients A_n of the bivariate exponential integral
(z/2pi) * int exp(z g(x,y)) dx dy with g = -x^2/2 - y^2/2 + V count
edge-bicolored graphs with vertex degrees >= 3 and Euler characteristic
-n, weighted by 1/|Aut| and by one potential coefficient per vertex.
This package computes those coefficients exactly, checks them against a
brute-force graph census, and evaluates the n -> infinity growth law
A_n ~ c Gamma(n) alpha^n from critical points of the exponent,
including blind phase-transition detection over a model parameter.
"""

from .asymptotics import (
    AsymptoticLaw,
    CirclePoint,
    GCritPoint,
    circle_critical_points,
    g_critical_points,
    g_real_critical_points,
    integral_check,
    law_circle,
    law_g,
    lift_to_g,
    select_maxima,
)
from .census import (
    CensusEntry,
    enumerate_census,
    eulerian_sum,
    perfect_matchings,
    regular_monochrome_classes,
    weighted_A,
)
from .errors import (
    BicountError,
    CoefficientVariantError,
    DegenerateCriticalPointError,
    FitError,
    InstanceTooLargeError,
    PotentialFormatError,
    RootRefinementError,
    UnsupportedRegimeError,
    ValidationError,
)
from .expansion import (
    PotentialSpec,
    QSeries,
    RegularityInfo,
    a_poly,
    build_F,
    double_factorial,
    expand_series,
    extract_A,
    fast_homogeneous_A,
    q_recursion,
)
from .phasescan import (
    RootSet,
    ScanRow,
    detect_transitions,
    fit_law,
    roots_of_An,
    scan,
)
from .polyring import BivarPoly, Coeff, ParamPoly, Rational, rational

__version__ = "0.1.0"

"""The exact coefficient pipeline: slices, recursion, extraction, fast path."""

import random

import pytest
from gmpy2 import mpq

from bicount import (
    BivarPoly,
    ParamPoly,
    PotentialSpec,
    ValidationError,
    a_poly,
    build_F,
    double_factorial,
    expand_series,
    extract_A,
    fast_homogeneous_A,
    models,
    q_recursion,
)

LAM = ParamPoly((0, 1))
LAM2 = ParamPoly((0, 0, 1))

A1_EXPECTED = ParamPoly((mpq(1, 8), mpq(1, 4), mpq(1, 8)))
A2_EXPECTED = ParamPoly(
    (mpq(35, 384), mpq(5, 32), mpq(19, 64), mpq(5, 32), mpq(35, 384))
)
A3_EXPECTED = ParamPoly((
    mpq(385, 3072), mpq(105, 512), mpq(1295, 3072), mpq(175, 256),
    mpq(1295, 3072), mpq(105, 512), mpq(385, 3072),
))


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(1) == 1
    assert double_factorial(5) == 15
    assert double_factorial(9) == 945
    for bad in (0, 2, -3):
        with pytest.raises(ValidationError):
            double_factorial(bad)


class TestPotentialSpec:
    def test_rejects_low_degree_terms(self):
        for u, w in ((2, 0), (1, 1), (0, 1), (0, 0)):
            with pytest.raises(ValidationError):
                PotentialSpec({(u, w): 1})

    def test_empty_is_valid(self):
        pot = PotentialSpec({})
        assert pot.is_empty()
        assert expand_series(pot, 3) == [mpq(1), mpq(0), mpq(0), mpq(0)]

    def test_regularity(self):
        reg = models.ising_model().regularity()
        assert (reg.k, reg.M, reg.K) == (4, 2, 1)
        assert reg.M == reg.K * reg.k / 2
        assert reg.M - reg.K == 1
        assert reg.vanishing_period == 1
        assert models.quintic_model().regularity().vanishing_period == 3
        assert models.mixed_degree_model().regularity() is None

    def test_at_lambda(self):
        fixed = models.ising_model().at_lambda(mpq(1, 2))
        assert fixed.terms == {(4, 0): 1, (2, 2): mpq(1, 2), (0, 4): mpq(1, 4)}


class TestBuildF:
    def test_ising_single_slice(self):
        F = build_F(models.ising_model(), 3)
        expected = BivarPoly({
            (4, 0): ParamPoly((mpq(1, 24),)),
            (2, 2): ParamPoly((0, mpq(1, 4))),
            (0, 4): ParamPoly((0, 0, mpq(1, 24))),
        })
        assert F[2] == expected
        for k in (1, 3, 4, 5, 6):
            assert F[k].is_zero()

    def test_empty_potential(self):
        F = build_F(PotentialSpec({}), 2)
        assert all(f.is_zero() for f in F)

    def test_cubic_placement(self):
        F = build_F(models.cubic_model(), 2)
        assert F[1] == BivarPoly({(3, 0): mpq(1, 6)})
        assert F[2].is_zero() and F[3].is_zero() and F[4].is_zero()


class TestQRecursion:
    def test_q0_is_one(self):
        for pot in (models.ising_model(), models.cubic_model()):
            qs = q_recursion(build_F(pot, 2), 4)
            assert qs.Q[0] == BivarPoly.one(pot.param)

    def test_ising_low_orders(self):
        F = build_F(models.ising_model(), 2)
        qs = q_recursion(F, 4)
        assert qs.Q[1].is_zero()
        assert qs.Q[2] == F[2]
        assert qs.Q[4] == (F[2] * F[2]).scale(mpq(1, 2))

    def test_cubic_q1(self):
        F = build_F(models.cubic_model(), 1)
        qs = q_recursion(F, 2)
        assert qs.Q[1] == F[1]

    def test_exponential_identity(self):
        # sum_m Q_m zeta^m must equal the truncated Taylor series of
        # exp(sum_k F_k zeta^k), expanded directly in a third variable.
        M0 = 8
        for pot in (models.ising_model(),
                    PotentialSpec({(3, 0): mpq(1, 2), (2, 1): mpq(-2, 3),
                                   (0, 4): mpq(5, 7)})):
            F = build_F(pot, (M0 + 1) // 2)
            qs = q_recursion(F, M0)
            one = ParamPoly((1,)) if pot.param else mpq(1)
            # series in zeta with BivarPoly coefficients, index m = 0..M0
            S = [BivarPoly.zero(pot.param) for _ in range(M0 + 1)]
            for k in range(1, min(len(F), M0 + 1)):
                S[k] = F[k]
            exp_series = [BivarPoly.zero(pot.param) for _ in range(M0 + 1)]
            exp_series[0] = BivarPoly.one(pot.param)
            power = list(exp_series)  # S^0
            fact = 1
            for j in range(1, M0 + 1):
                fact *= j
                nxt = [BivarPoly.zero(pot.param) for _ in range(M0 + 1)]
                for m1 in range(M0 + 1):
                    if power[m1].is_zero():
                        continue
                    for m2 in range(1, M0 + 1 - m1):
                        if S[m2].is_zero():
                            continue
                        nxt[m1 + m2] = nxt[m1 + m2] + power[m1] * S[m2]
                power = nxt
                for m in range(M0 + 1):
                    exp_series[m] = exp_series[m] + power[m].scale(mpq(1, fact))
            for m in range(M0 + 1):
                assert exp_series[m] == qs.Q[m], f"mismatch at m={m}"


class TestExtraction:
    def test_ising_exact_values(self):
        qs = q_recursion(build_F(models.ising_model(), 3), 6)
        A = extract_A(qs, 3)
        assert A[0] == ParamPoly((1,))
        assert A[1] == A1_EXPECTED
        assert A[2] == A2_EXPECTED
        assert A[3] == A3_EXPECTED

    def test_cubic_a1(self):
        qs = q_recursion(build_F(models.cubic_model(), 1), 2)
        assert extract_A(qs, 1)[1] == mpq(5, 24)

    def test_parity_pruning_is_invisible(self):
        # dropping odd-parity monomials from the final Q_{2n} cannot
        # change the extracted values
        pot = PotentialSpec({(3, 0): 1, (2, 1): mpq(1, 3), (0, 3): -2})
        F = build_F(pot, 2)
        qs = q_recursion(F, 4)
        A = extract_A(qs, 2)
        pruned = QSeriesLike([
            BivarPoly({k: c for k, c in q.terms.items()
                       if k[0] % 2 == 0 and k[1] % 2 == 0})
            for q in qs.Q
        ])
        assert extract_A(pruned, 2) == A


class QSeriesLike:
    def __init__(self, Q):
        self.Q = Q


class TestAPoly:
    def assignment(self):
        rng = random.Random(123)
        return {
            (u, w): mpq(rng.randint(-5, 5), rng.randint(1, 5))
            for u in range(5) for w in range(5) if 1 <= u + w <= 4
        }

    def test_base_cases(self):
        lam = self.assignment()
        assert a_poly(0, 0, lam) == 1
        assert a_poly(1, 0, lam) == lam[(1, 0)]
        expected = (lam[(2, 0)] + lam[(1, 0)] ** 2) / 2
        assert a_poly(2, 0, lam) == expected

    def test_symmetric_cases(self):
        lam = self.assignment()
        assert a_poly(0, 1, lam) == lam[(0, 1)]
        expected = (lam[(0, 2)] + lam[(0, 1)] ** 2) / 2
        assert a_poly(0, 2, lam) == expected


class TestFastPath:
    def test_matches_printed_values(self):
        pot = models.ising_model()
        assert fast_homogeneous_A(pot, 1) == A1_EXPECTED
        assert fast_homogeneous_A(pot, 2) == A2_EXPECTED
        assert fast_homogeneous_A(pot, 3) == A3_EXPECTED

    def test_integrality_vanishing(self):
        quintic = models.quintic_model()
        assert fast_homogeneous_A(quintic, 1) == 0
        assert fast_homogeneous_A(quintic, 2) == 0
        assert fast_homogeneous_A(quintic, 3) != 0

    def test_rejects_inhomogeneous(self):
        with pytest.raises(ValidationError):
            fast_homogeneous_A(models.mixed_degree_model(), 1)

    @pytest.mark.parametrize("pot", [
        models.ising_model(), models.cubic_model(), models.quintic_model(),
    ], ids=["ising", "cubic", "quintic"])
    def test_route_equality(self, pot):
        N = 12
        recursion = expand_series(pot, N, method="recursion")
        for n in range(N + 1):
            assert fast_homogeneous_A(pot, n) == recursion[n], f"n={n}"

    def test_sweep_matches_single_calls(self):
        pot = models.ising_model()
        sweep = expand_series(pot, 6, method="homogeneous")
        assert sweep == [fast_homogeneous_A(pot, n) for n in range(7)]


def test_q_degree_bound():
    # every slice F_k has total degree k + 2 <= 3k, so Q_m stays within 3m
    pot = PotentialSpec({(3, 0): 1, (2, 2): mpq(1, 2), (1, 4): mpq(-1, 3)})
    qs = q_recursion(build_F(pot, 4), 8)
    for m, q in enumerate(qs.Q):
        assert q.total_degree() <= 3 * m


class TestDivisibility:
    def test_quintic_q_slices(self):
        qs = q_recursion(build_F(models.quintic_model(), 6), 12)
        for m in range(13):
            if m % 3 != 0:
                assert qs.Q[m].is_zero(), f"Q_{m} should vanish"

    def test_quintic_a_progression(self):
        A = expand_series(models.quintic_model(), 9)
        for n in range(10):
            if n % 3 != 0:
                assert A[n] == 0
            else:
                assert A[n] != 0


def test_streaming_recursion_matches_qseries():
    pot = PotentialSpec({(3, 0): mpq(1, 2), (1, 2): mpq(2, 5), (0, 4): 3})
    N = 5
    via_stream = expand_series(pot, N, method="recursion")
    via_qs = extract_A(q_recursion(build_F(pot, N), 2 * N), N)
    assert via_stream == via_qs

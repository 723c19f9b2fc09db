"""Sweeps, fitting, transition detection, coefficient-polynomial roots."""

import math
from math import factorial

import pytest
from gmpy2 import mpq

from bicount import (
    FitError,
    ParamPoly,
    PotentialSpec,
    detect_transitions,
    expand_series,
    fit_law,
    models,
    roots_of_An,
    scan,
)
from conftest import eval_param, ising_alpha, ising_c


class TestScan:
    def test_rows_match_closed_forms(self):
        rows = scan(models.ising_model(), (0.05, 3.95, 79))
        checked = 0
        for r in rows:
            if min(abs(r.lam - 1 / 3), abs(r.lam - 3)) < 0.05:
                continue
            assert r.error is None
            assert r.alpha == pytest.approx(ising_alpha(r.lam), rel=1e-9)
            assert r.c == pytest.approx(ising_c(r.lam), rel=1e-9)
            checked += 1
        assert checked > 70

    def test_regime_ids_change_only_at_transitions(self):
        rows = scan(models.ising_model(), (0.05, 3.95, 79))
        regimes = [r.regime_id for r in rows if r.error is None]
        changes = sum(1 for a, b in zip(regimes, regimes[1:]) if a != b)
        assert changes == 2
        assert sorted(set(regimes)) == [0, 1, 2]

    def test_single_point_scan(self):
        rows = scan(models.ising_model(), (2.0, 2.0, 1))
        assert len(rows) == 1
        assert rows[0].alpha == pytest.approx(64 / 21, rel=1e-9)

    def test_grid_hitting_transition_marks_one_degenerate_row(self):
        third = 1 / 3
        rows = scan(models.ising_model(), (third - 0.1, third + 0.1, 3))
        errors = [r for r in rows if r.error is not None]
        assert len(errors) == 1
        assert errors[0].lam == pytest.approx(third, abs=1e-12)

    def test_threads_agree_with_serial(self):
        serial = scan(models.ising_model(), (0.5, 2.5, 9))
        threaded = scan(models.ising_model(), (0.5, 2.5, 9), threads=4)
        assert serial == threaded


class TestDetect:
    def test_ising_transitions(self):
        rows = scan(models.ising_model(), (0.05, 3.95, 200))
        found = detect_transitions(rows)
        assert len(found) == 2
        assert min(abs(t - 1 / 3) for t in found) <= 0.05
        assert min(abs(t - 3.0) for t in found) <= 0.05

    def test_lambda_free_potential_has_no_transitions(self):
        rows = scan(PotentialSpec({(4, 0): 1}), (0.05, 3.95, 40))
        assert detect_transitions(rows) == []

    def test_mixed_family_transition(self):
        rows = scan(models.mixed_degree_model(), (0.05, 1.0, 96))
        found = detect_transitions(rows)
        assert found, "no transition reported"
        assert min(abs(t - 0.5) for t in found) <= 0.05

    def test_needs_enough_rows(self):
        rows = scan(models.ising_model(), (0.5, 2.5, 9))
        with pytest.raises(Exception):
            detect_transitions(rows)


class TestFit:
    def synthetic(self, alpha, c, n_top, period=1):
        vals = [mpq(0)] * (n_top + 1)
        for n in range(period, n_top + 1, period):
            vals[n] = c * factorial(n - 1) * alpha ** n
        vals[0] = mpq(1)
        return vals

    def test_exact_law_recovery(self):
        alpha, c = mpq(3, 2), mpq(5, 7)
        vals = self.synthetic(alpha, c, 60)
        a_fit, c_fit = fit_law(vals)
        assert a_fit == pytest.approx(float(alpha), rel=1e-10)
        assert c_fit == pytest.approx(float(c), rel=1e-10)

    def test_exact_law_recovery_with_period(self):
        alpha, c = mpq(2, 3), mpq(9, 4)
        vals = self.synthetic(alpha, c, 90, period=3)
        a_fit, c_fit = fit_law(vals)
        assert a_fit == pytest.approx(float(alpha), rel=1e-10)
        assert c_fit == pytest.approx(float(c), rel=1e-10)

    def test_too_few_terms(self):
        with pytest.raises(FitError):
            fit_law(self.synthetic(mpq(2), mpq(1), 15))

    def test_sign_inconsistency(self):
        vals = self.synthetic(mpq(3, 2), mpq(1), 40)
        vals[25] = -vals[25]
        with pytest.raises(FitError):
            fit_law(vals)

    def test_ising_fit_against_closed_form(self, ising_series_200):
        lam = mpq(1)
        vals = [eval_param(a, lam) for a in ising_series_200]
        a_fit, _ = fit_law(vals, n_max=200)
        assert abs(a_fit / ising_alpha(1.0) - 1) <= 1e-2


class TestRoots:
    def test_a1_double_root(self):
        a1 = expand_series(models.ising_model(), 1)[1]
        rs = roots_of_An(a1, 1)
        assert len(rs.roots) == 2
        for r in rs.roots:
            assert abs(r - (-1.0)) <= 1e-6
        assert rs.residual <= 1e-8

    @pytest.mark.parametrize("n", [5, 10])
    def test_degree_conjugacy_residual(self, n, ising_series_200):
        a_n = ising_series_200[n]
        rs = roots_of_An(a_n, n)
        assert len(rs.roots) == 2 * n == a_n.degree
        assert rs.residual <= 1e-8
        unmatched = list(rs.roots)
        while unmatched:
            r = unmatched.pop()
            conj = min(unmatched, key=lambda s: abs(s - r.conjugate()),
                       default=None)
            if abs(r.imag) <= 1e-8 * (1 + abs(r)):
                continue
            assert conj is not None
            assert abs(conj - r.conjugate()) <= 1e-8 * (1 + abs(r))
            unmatched.remove(conj)

    def test_roots_approach_the_transition(self, ising_series_200):
        dists = []
        for n in (10, 25):
            rs = roots_of_An(ising_series_200[n], n)
            dists.append(min(abs(r - 1 / 3) for r in rs.roots))
        assert dists[1] < dists[0]

    def test_zero_polynomial_rejected(self):
        with pytest.raises(Exception):
            roots_of_An(ParamPoly(), 1)

"""Tests for the analytic failure probability formulas."""

import math
from fractions import Fraction

import pytest

from wbcsim.analytics import (
    BoundKind,
    FailureReport,
    failure_report,
    pf_bruteforce,
    pf_no_faulty_exact,
    pf_R_bounds,
    pf_S_bounds,
)
from wbcsim.protocol import AdversaryConfig, ProtocolParams

NO_FAULTY = AdversaryConfig.NO_FAULTY
S_FAULTY = AdversaryConfig.S_FAULTY
R0_FAULTY = AdversaryConfig.R0_FAULTY


def params(mu, lam, m):
    return ProtocolParams.create(mu, lam, m)


class TestNoFaulty:
    @pytest.mark.parametrize("m,expected", [(1, Fraction(2, 3)), (2, Fraction(4, 9))])
    def test_small_m_exact(self, m, expected):
        assert pf_no_faulty_exact(params("0.3", "0.8", m), exact=True).value == expected

    def test_float_matches_exact(self):
        p = params("0.272", "0.94", 60)
        exact = pf_no_faulty_exact(p, exact=True).value
        assert math.isclose(pf_no_faulty_exact(p).value, float(exact), rel_tol=1e-12)

    def test_kind_is_exact(self):
        report = pf_no_faulty_exact(params("0.3", "0.8", 5))
        assert report.kind is BoundKind.EXACT and report.config is NO_FAULTY


class TestBounds:
    @pytest.mark.parametrize("fn,cfg", [(pf_S_bounds, S_FAULTY), (pf_R_bounds, R0_FAULTY)])
    def test_lower_at_most_upper(self, fn, cfg):
        for m in (5, 30, 120):
            lo, hi = fn(params("0.272", "0.94", m))
            assert lo.config is cfg and lo.kind is BoundKind.LOWER and hi.kind is BoundKind.UPPER
            assert 0 <= lo.value <= hi.value <= 1

    @pytest.mark.parametrize("fn", [pf_S_bounds, pf_R_bounds])
    def test_float_matches_exact_backend(self, fn):
        p = params("0.272", "0.94", 30)
        lo_q, hi_q = fn(p, exact=True)
        lo_f, hi_f = fn(p)
        assert math.isclose(lo_f.value, float(lo_q.value), rel_tol=1e-11)
        assert math.isclose(hi_f.value, float(hi_q.value), rel_tol=1e-11)

    def test_upper_bounds_shrink_with_m(self):
        values = [max(pf_S_bounds(params("0.272", "0.94", m))[1].value, pf_R_bounds(params("0.272", "0.94", m))[1].value) for m in (100, 200, 300)]
        assert values[0] > values[1] > values[2]

    def test_first_crossings_below_five_percent(self):
        # the three per-configuration resource requirements
        assert pf_no_faulty_exact(params("0.272", "0.94", 143)).value < 0.05
        assert pf_no_faulty_exact(params("0.272", "0.94", 142)).value >= 0.05
        assert pf_S_bounds(params("0.272", "0.94", 246))[1].value < 0.05
        assert pf_S_bounds(params("0.272", "0.94", 245))[1].value >= 0.05
        assert pf_R_bounds(params("0.272", "0.94", 280))[1].value < 0.05
        assert pf_R_bounds(params("0.272", "0.94", 279))[1].value >= 0.05


class TestBruteForceOracle:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_no_faulty_equivalence(self, m):
        p = params("0.272", "0.94", m)
        assert pf_bruteforce(NO_FAULTY, p).value == pf_no_faulty_exact(p, exact=True).value

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("kind", [BoundKind.LOWER, BoundKind.UPPER])
    def test_faulty_equivalence(self, m, kind):
        p = params("0.272", "0.94", m)
        idx = 0 if kind is BoundKind.LOWER else 1
        assert pf_bruteforce(S_FAULTY, p, kind).value == pf_S_bounds(p, exact=True)[idx].value
        assert pf_bruteforce(R0_FAULTY, p, kind).value == pf_R_bounds(p, exact=True)[idx].value

    def test_rejects_large_m(self):
        with pytest.raises(ValueError):
            pf_bruteforce(NO_FAULTY, params("0.272", "0.94", 9))

    def test_rejects_exact_kind_for_faulty(self):
        with pytest.raises(ValueError):
            pf_bruteforce(S_FAULTY, params("0.3", "0.8", 2), BoundKind.EXACT)


class TestFailureReport:
    def test_rejects_out_of_range_values(self):
        p = params("0.3", "0.8", 2)
        with pytest.raises(ValueError):
            FailureReport(NO_FAULTY, BoundKind.EXACT, 1.5, p)

    def test_dispatch(self):
        p = params("0.272", "0.94", 20)
        assert failure_report(NO_FAULTY, BoundKind.EXACT, p).value == pf_no_faulty_exact(p).value
        assert failure_report(S_FAULTY, BoundKind.UPPER, p).value == pf_S_bounds(p)[1].value
        assert failure_report(R0_FAULTY, BoundKind.LOWER, p).value == pf_R_bounds(p)[0].value
        with pytest.raises(ValueError):
            failure_report(NO_FAULTY, BoundKind.UPPER, p)
        with pytest.raises(ValueError):
            failure_report(S_FAULTY, BoundKind.EXACT, p)

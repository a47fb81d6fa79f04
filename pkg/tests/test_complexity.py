"""Query-count planning: exact integer formulas, never floating logs.

The closed-form expectations below were recomputed by hand with exact
power comparisons before being frozen here.
"""

import pytest

from qvint.complexity import (InstanceClassification, QueryPlan,
                              ReductionPlan, classify_instance,
                              multivariate_query_bounds, plan_bounded_error,
                              plan_high_probability, univariate_reduction)
from qvint.domain import build_monomial_domain, build_vandermonde_domain
from qvint.errors import ContractError, ParameterError
from qvint.field import FieldParams


def stats_for(q, d):
    params = FieldParams(q) if q in (2, 3, 5, 7, 11, 13) else FieldParams(2, 2)
    return build_vandermonde_domain(params, d).stats()


class TestBoundedErrorPlan:
    def test_spec_instances(self):
        assert plan_bounded_error(4, 5, 5).k == 2
        assert plan_bounded_error(6, 5, 5).k == 3
        assert plan_bounded_error(2, 3, 3).k == 1
        assert plan_bounded_error(10, 3, 3).k == 5

    def test_minimality(self):
        for n, q, size in ((4, 5, 5), (6, 5, 5), (10, 3, 3), (3, 7, 4)):
            plan = plan_bounded_error(n, q, size)
            k = plan.k
            assert (size * q) ** k >= q ** n
            assert k == 1 or (size * q) ** (k - 1) < q ** n

    def test_rule_and_note(self):
        plan = plan_bounded_error(4, 5, 5)
        assert plan.rule == "low-regime"
        assert "1/k!" in plan.note

    def test_rejects_bad_parameters(self):
        with pytest.raises(ParameterError):
            plan_bounded_error(0, 5, 5)
        with pytest.raises(ParameterError):
            plan_bounded_error(4, 5, 0)


class TestHighProbabilityPlan:
    def test_q_larger_than_domain(self):
        plan = plan_high_probability(4, 5, 4, 1)
        assert plan.k == 3
        assert plan.rule == "high-regime-q-large"

    def test_tie_rule_agrees_on_both_formulas(self):
        plan = plan_high_probability(4, 7, 7, 1)
        assert plan.k == 3
        assert plan.rule == "high-regime-tie"

    def test_domain_larger_than_q(self):
        dom = build_monomial_domain(FieldParams(3), 2, 2)
        stats = dom.stats()
        plan = plan_high_probability(
            stats.length, stats.field_order, stats.size, stats.zero_touching)
        assert plan.k == 7
        assert plan.rule == "high-regime-V-large"

    def test_degenerate_no_zero_touching(self):
        plan = plan_high_probability(4, 5, 5, 0)
        assert plan.k == 1
        assert plan.rule == "high-regime-degenerate"

    def test_minimality_q_large(self):
        for n, q, size, v0 in ((4, 5, 4, 1), (6, 7, 4, 1), (8, 11, 6, 2)):
            k = plan_high_probability(n, q, size, v0).k
            assert size ** (2 * k) >= v0 ** (2 * k) * size * q ** n
            assert k == 1 or \
                size ** (2 * (k - 1)) < v0 ** (2 * (k - 1)) * size * q ** n

    def test_all_vectors_zero_touching_is_an_error(self):
        with pytest.raises(ParameterError):
            plan_high_probability(4, 5, 5, 5)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ParameterError):
            plan_high_probability(4, 5, 5, -1)
        with pytest.raises(ParameterError):
            plan_high_probability(4, 5, 5, 6)

    def test_plan_validation(self):
        with pytest.raises(ContractError):
            QueryPlan(0, "low-regime", "")


class TestPlanSweep:
    @pytest.mark.parametrize("q", (5, 7, 11, 13))
    def test_low_at_most_high_when_both_defined(self, q):
        params = FieldParams(q)
        for d in range(1, q - 1):
            stats = build_vandermonde_domain(params, d).stats()
            low = plan_bounded_error(stats.length, q, stats.size)
            high = plan_high_probability(
                stats.length, q, stats.size, stats.zero_touching)
            assert 1 <= low.k <= high.k

    def test_vandermonde_zero_touching_is_one(self):
        for q, d in ((5, 2), (7, 4), (13, 6)):
            stats = build_vandermonde_domain(FieldParams(q), d).stats()
            assert stats.zero_touching == 1


class TestMultivariateBounds:
    def test_reference_values(self):
        assert multivariate_query_bounds(6, 3, 2) == (1, 32)
        assert multivariate_query_bounds(10, 3, 2) == (2, 50)
        assert multivariate_query_bounds(10, 2, 3) == (1, 44)

    def test_lower_at_most_upper_across_grid(self):
        for n in range(1, 40):
            for q in (2, 3, 5):
                for m in (1, 2, 3):
                    lo, hi = multivariate_query_bounds(n, q, m)
                    assert 1 <= lo <= hi

    def test_ceiling_arithmetic(self):
        # (n+1)/(2 m^m) with n=15, m=2 is exactly 2, no rounding slack
        assert multivariate_query_bounds(15, 3, 2)[0] == 2
        assert multivariate_query_bounds(16, 3, 2)[0] == 3

    def test_rejects_bad_parameters(self):
        with pytest.raises(ParameterError):
            multivariate_query_bounds(0, 3, 2)
        with pytest.raises(ParameterError):
            multivariate_query_bounds(6, 3, 0)


class TestUnivariateReduction:
    def test_reference_plan(self):
        plan = univariate_reduction(3, 2)
        assert plan.exponents == (1, 3, 7)
        assert plan.reduced_degree == 14
        image = sorted(plan.monomial_image.values())
        assert image == [0, 1, 2, 3, 4, 6, 7, 8, 10, 14]
        assert plan.suggested_k == 8
        assert "even" in plan.note

    def test_single_variable_is_identity(self):
        plan = univariate_reduction(1, 4)
        assert plan.exponents == (1,)
        assert plan.reduced_degree == 4
        assert plan.monomial_image == {(0,): 0, (1,): 1, (2,): 2,
                                       (3,): 3, (4,): 4}
        assert plan.suggested_k == 3

    def test_odd_reduced_degree(self):
        plan = univariate_reduction(3, 3)
        assert plan.exponents == (1, 4, 13)
        assert plan.reduced_degree == 39
        assert plan.suggested_k == 20

    def test_top_degree_comes_from_last_exponent(self):
        for m in (1, 2, 3, 4):
            for d in (1, 2, 3):
                plan = univariate_reduction(m, d)
                assert plan.reduced_degree == d * plan.exponents[-1]

    @pytest.mark.parametrize("m", (1, 2, 3, 4))
    @pytest.mark.parametrize("d", (1, 2, 3, 4))
    def test_substitution_is_injective(self, m, d):
        plan = univariate_reduction(m, d)
        image = list(plan.monomial_image.values())
        assert len(set(image)) == len(image)
        assert max(image) == plan.reduced_degree

    def test_exponent_recurrence(self):
        plan = univariate_reduction(4, 3)
        e = plan.exponents
        assert e[0] == 1
        for i in range(1, len(e)):
            assert e[i] == 3 * e[i - 1] + 1

    def test_suggested_k_parity(self):
        for m in (1, 2, 3):
            for d in (1, 2, 3):
                plan = univariate_reduction(m, d)
                D = plan.reduced_degree
                if D % 2 == 1:
                    assert plan.suggested_k == (D + 1) // 2
                else:
                    assert plan.suggested_k == D // 2 + 1

    def test_rejects_bad_parameters(self):
        with pytest.raises(ParameterError):
            univariate_reduction(0, 2)
        with pytest.raises(ParameterError):
            univariate_reduction(2, 0)


class TestClassification:
    def test_high_match_takes_precedence(self):
        stats = stats_for(7, 3)
        got = classify_instance(stats, 3)
        assert isinstance(got, InstanceClassification)
        assert got.summary == "high-regime exact match"

    def test_low_match(self):
        stats = stats_for(5, 3)
        assert classify_instance(stats, 2).summary == "low-regime exact match"

    def test_below_low(self):
        stats = stats_for(5, 3)
        summary = classify_instance(stats, 1).summary
        assert summary == "below the bounded-error query count"

    def test_between(self):
        dom = build_monomial_domain(FieldParams(3), 2, 2)
        got = classify_instance(dom.stats(), 5)
        assert got.summary == \
            "between the bounded-error and high-probability query counts"

    def test_above_high(self):
        stats = stats_for(5, 3)
        summary = classify_instance(stats, 9).summary
        assert summary == "exceeds the high-probability query count"

    def test_carries_both_plans(self):
        stats = stats_for(5, 3)
        got = classify_instance(stats, 2)
        assert got.bounded_error.k == 2
        assert got.high_probability.k == 3

    def test_k_must_be_positive(self):
        with pytest.raises(ParameterError):
            classify_instance(stats_for(5, 3), 0)

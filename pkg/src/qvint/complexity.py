"""Query-count formulas: how many oracle rounds a given domain needs.

Two planning rules are implemented.  The bounded-error rule picks the least
k with (|V|*q)^k >= q^n, enough for the image to have positive density in
the codomain.  The high-probability rule picks the least k for which the
zero-count tail bound (see census.chebyshev_zero_bound) becomes small; its
shape depends on whether the field or the domain is larger.

All ceilings of log-ratios are evaluated as least-integer power
inequalities over exact integers.  The interesting instances sit exactly on
decision boundaries, where a floating-point log is one ulp away from the
wrong answer.
"""

import math
from dataclasses import dataclass

from .domain import monomial_exponents
from .errors import ContractError, ParameterError

# Plans beyond this are outside anything this package can enumerate anyway;
# the loop guard exists to turn a logic bug into an error instead of a hang.
_MAX_PLANNED_K = 10 ** 6

LOW_REGIME_NOTE = (
    "success probability (1/k!)(1 - O(1/min(q, |V|))) at this query count"
)
HIGH_REGIME_NOTE = "success probability 1 - O(1/min(q, |V|)) at this query count"
DEGENERATE_NOTE = (
    "no domain vector touches zero, so the tail bound vanishes for every "
    "k >= 1 and a single query already hits the full-image regime"
)


@dataclass(frozen=True)
class QueryPlan:
    """A query count together with the rule that produced it."""

    k: int
    rule: str
    note: str

    def __post_init__(self):
        if self.k < 1:
            raise ContractError(f"planned query count must be >= 1, got {self.k}")


def _least_k(ratio_num: int, ratio_den: int, target_num: int, target_den: int) -> int:
    """Least k >= 1 with (ratio_num/ratio_den)^k >= target_num/target_den.

    All arguments are positive integers and the ratio must exceed 1, which the
    callers guarantee; comparison is exact cross-multiplication.
    """
    if ratio_num <= ratio_den:
        raise ContractError("power search needs a ratio strictly above 1")
    k = 1
    lhs_num, lhs_den = ratio_num, ratio_den
    while lhs_num * target_den < target_num * lhs_den:
        k += 1
        lhs_num *= ratio_num
        lhs_den *= ratio_den
        if k > _MAX_PLANNED_K:
            raise ContractError(f"query plan exceeded {_MAX_PLANNED_K} without converging")
    return k


def _validate_counts(n, q, domain_size, zero_touching=None):
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"dimension must be a positive integer, got {n!r}")
    if not isinstance(q, int) or q < 2:
        raise ParameterError(f"field order must be an integer >= 2, got {q!r}")
    if not isinstance(domain_size, int) or domain_size < 1:
        raise ParameterError(f"domain size must be a positive integer, got {domain_size!r}")
    if zero_touching is not None:
        if not isinstance(zero_touching, int) or not 0 <= zero_touching <= domain_size:
            raise ParameterError(
                f"zero-touching count must lie in [0, {domain_size}], got {zero_touching!r}"
            )


def plan_bounded_error(n: int, q: int, domain_size: int) -> QueryPlan:
    """Least k with (|V|*q)^k >= q^n (the bounded-error query count)."""
    _validate_counts(n, q, domain_size)
    k = _least_k(domain_size * q, 1, q ** n, 1)
    return QueryPlan(k=k, rule="low-regime", note=LOW_REGIME_NOTE)


def plan_high_probability(n: int, q: int, domain_size: int,
                          zero_touching: int) -> QueryPlan:
    """Least k with (|V|/|V_0|)^(2k) >= |V|*q^n (field larger than domain)
    or >= q^(n+1) (domain larger than field); at q = |V| the two targets
    coincide and agreement is asserted rather than assumed."""
    _validate_counts(n, q, domain_size, zero_touching)
    if zero_touching == domain_size:
        raise ParameterError(
            "every domain vector touches zero; the high-probability formula "
            "is undefined at |V_0| = |V|"
        )
    if zero_touching == 0:
        return QueryPlan(k=1, rule="high-regime-degenerate", note=DEGENERATE_NOTE)
    ratio_num = domain_size * domain_size
    ratio_den = zero_touching * zero_touching
    if q > domain_size:
        k = _least_k(ratio_num, ratio_den, domain_size * q ** n, 1)
        rule = "high-regime-q-large"
    elif q < domain_size:
        k = _least_k(ratio_num, ratio_den, q ** (n + 1), 1)
        rule = "high-regime-V-large"
    else:
        k_a = _least_k(ratio_num, ratio_den, domain_size * q ** n, 1)
        k_b = _least_k(ratio_num, ratio_den, q ** (n + 1), 1)
        if k_a != k_b:
            raise ContractError(
                f"tie case q = |V| = {q} produced diverging plans {k_a} and {k_b}"
            )
        k = k_a
        rule = "high-regime-tie"
    return QueryPlan(k=k, rule=rule, note=HIGH_REGIME_NOTE)


def multivariate_query_bounds(n: int, q: int, variables: int) -> tuple:
    """Conservative bracket (ceil((n+1)/(2*m^m)), ceil((n+1)*q^m/2)) for the
    high-probability query count of an m-variable monomial domain."""
    _validate_counts(n, q, 1)
    if not isinstance(variables, int) or variables < 1:
        raise ParameterError(f"variable count must be a positive integer, got {variables!r}")
    m = variables
    lower = -((n + 1) // -(2 * m ** m))
    upper = -((n + 1) * q ** m // -2)
    return lower, upper


@dataclass(frozen=True)
class ReductionPlan:
    """Substitution collapsing m variables into powers of the first one.

    Variable i maps to x^(exponents[i-1]); a monomial with exponent tuple e
    maps to x^(sum e_i * exponents[i-1]).  The map is injective on all
    monomials of total degree <= degree (verified exhaustively), so the
    reduced problem is univariate of degree reduced_degree.
    """

    variables: int
    degree: int
    exponents: tuple
    reduced_degree: int
    monomial_image: dict  # exponent tuple -> reduced exponent
    suggested_k: int
    note: str


def univariate_reduction(variables: int, degree: int) -> ReductionPlan:
    """Exponents (1, 1+d, 1+d+d^2, ...) substituting every variable by a
    power of the first, plus the parity-based query count for the reduced
    degree D = d + d^2 + ... + d^m."""
    if not isinstance(variables, int) or variables < 1:
        raise ParameterError(f"variable count must be a positive integer, got {variables!r}")
    if not isinstance(degree, int) or degree < 1:
        raise ParameterError(f"degree must be a positive integer, got {degree!r}")
    m, d = variables, degree
    exponents = []
    acc = 1
    for _ in range(m):
        exponents.append(acc)
        acc = acc * d + 1
    exponents = tuple(exponents)
    reduced_degree = sum(d ** j for j in range(1, m + 1))

    image = {}
    for e in monomial_exponents(m, d):
        image[e] = sum(ei * xi for ei, xi in zip(e, exponents))
    if len(set(image.values())) != len(image):
        raise ContractError(
            f"reduction exponents {exponents} collide on degree <= {d} monomials"
        )
    if max(image.values()) != reduced_degree:
        raise ContractError("reduced degree does not match the largest monomial image")

    if reduced_degree % 2 == 1:
        suggested_k = (reduced_degree + 1) // 2
        note = "reduced degree is odd; bounded-error parity rule applies directly"
    else:
        suggested_k = reduced_degree // 2 + 1
        note = (
            "reduced degree is even; the direct half-degree-plus-half value is "
            "non-integral, so the even-degree rule D/2 + 1 is reported instead"
        )
    return ReductionPlan(
        variables=m,
        degree=d,
        exponents=exponents,
        reduced_degree=reduced_degree,
        monomial_image=image,
        suggested_k=suggested_k,
        note=note,
    )


@dataclass(frozen=True)
class InstanceClassification:
    """How a concrete (domain, k) choice relates to the planned counts."""

    k: int
    bounded_error: QueryPlan
    high_probability: QueryPlan | None
    high_probability_error: str | None
    meets_bounded_error: bool
    meets_high_probability: bool | None
    summary: str


def classify_instance(stats, k: int) -> InstanceClassification:
    """Compare an explicit query count against both planning rules.

    stats is a DomainStats (or anything with field_order, length, size,
    zero_touching attributes).  k must be at least 1; k = 0 never
    interpolates anything beyond the zero secret.
    """
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"query count must be an integer >= 1, got {k!r}")
    n = stats.length
    q = stats.field_order
    low = plan_bounded_error(n, q, stats.size)
    high = None
    high_error = None
    try:
        high = plan_high_probability(n, q, stats.size, stats.zero_touching)
    except ParameterError as exc:
        high_error = str(exc)

    meets_high = None if high is None else k >= high.k
    if high is not None and k == high.k:
        summary = "high-regime exact match"
    elif k == low.k:
        summary = "low-regime exact match"
    elif k < low.k:
        summary = "below the bounded-error query count"
    elif high is not None and k > high.k:
        summary = "exceeds the high-probability query count"
    else:
        summary = "between the bounded-error and high-probability query counts"
    return InstanceClassification(
        k=k,
        bounded_error=low,
        high_probability=high,
        high_probability_error=high_error,
        meets_bounded_error=k >= low.k,
        meets_high_probability=meets_high,
        summary=summary,
    )

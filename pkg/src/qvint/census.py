"""Exhaustive pre-image census of the weighted-combination map on a domain.

For a domain V in GF(q)^n and a query count k, the map sends a tuple of k
domain vectors with k field weights to the weighted sum of the vectors.
Everything downstream (success probabilities, transversals, the
second-moment identity, the zero-count tail bound) is read off the exact
per-target pre-image counts, so this module enumerates all (|V|*q)^k input
tuples and never samples.

All counts are big integers and all derived statistics are Fractions;
floating point never enters here.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .domain import Domain, VectorFq
from .errors import ContractError, ParameterError, ResourceCapError
from .field import FieldElement, FieldParams

DEFAULT_MAX_TUPLES = 10 ** 8


@dataclass(frozen=True)
class Preimage:
    """One input tuple of the combination map: k vectors with k weights."""

    vectors: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.vectors) != len(self.weights):
            raise ParameterError(
                f"{len(self.vectors)} vectors but {len(self.weights)} weights"
            )
        if self.vectors:
            params = self.vectors[0].params
            for w in self.weights:
                if not isinstance(w, FieldElement) or w.params != params:
                    raise ParameterError("weights must live in the vectors' field")

    @property
    def k(self) -> int:
        return len(self.vectors)


def linear_combination(vectors, weights, *, params: FieldParams = None,
                       n: int = None) -> VectorFq:
    """Weighted sum of vectors; the empty combination needs explicit params/n
    to know which zero vector to return."""
    vectors = tuple(vectors)
    weights = tuple(weights)
    if len(vectors) != len(weights):
        raise ParameterError(f"{len(vectors)} vectors but {len(weights)} weights")
    if not vectors:
        if params is None or n is None:
            raise ParameterError("empty combination needs explicit params and n")
        return VectorFq(tuple(params.zero() for _ in range(n)))
    acc = vectors[0].scale(weights[0])
    for v, w in zip(vectors[1:], weights[1:]):
        acc = acc + v.scale(w)
    return acc


@dataclass(eq=False)
class PreimageCensus:
    """Exact pre-image counts of every target hit by at least one input.

    counts maps the target's element-index tuple to its total pre-image
    count; good_counts holds the sub-count with pairwise-distinct vectors
    and all weights nonzero.  Targets with count zero are omitted.
    """

    domain: Domain
    k: int
    counts: dict
    good_counts: dict

    @property
    def total(self) -> int:
        return (self.domain.size * self.domain.params.q) ** self.k

    @property
    def image_size(self) -> int:
        return len(self.counts)

    @property
    def codomain_size(self) -> int:
        return self.domain.params.q ** self.domain.n

    def count_of(self, z: VectorFq) -> int:
        return self.counts.get(z.index_tuple(), 0)

    def good_count_of(self, z: VectorFq) -> int:
        return self.good_counts.get(z.index_tuple(), 0)

    def mean(self) -> Fraction:
        """Average pre-image count over the whole codomain."""
        return Fraction(self.total, self.codomain_size)

    def second_moment_sum(self) -> int:
        """Sum of squared pre-image counts, an exact integer."""
        return sum(c * c for c in self.counts.values())

    def variance(self) -> Fraction:
        mu = self.mean()
        return Fraction(self.second_moment_sum(), self.codomain_size) - mu * mu

    def zero_count_fraction(self) -> Fraction:
        """Fraction of codomain targets with no pre-image at all."""
        return Fraction(self.codomain_size - self.image_size, self.codomain_size)

    def success_probability(self) -> Fraction:
        """|image| / q^n, the algorithm's exact success probability."""
        return Fraction(self.image_size, self.codomain_size)


def _scaled_rows(domain: Domain):
    """scaled[j][y] = index tuple of weight y times domain vector j."""
    params = domain.params
    mul = params.mul_rows()
    out = []
    for v in domain.vectors:
        idx = v.index_tuple()
        out.append([tuple(mul[y][c] for c in idx) for y in range(params.q)])
    return out


def enumerate_census(domain: Domain, k: int, *,
                     max_tuples: int = DEFAULT_MAX_TUPLES,
                     partitions: int = 1) -> PreimageCensus:
    """Walk all (|V|*q)^k input tuples and tally exact pre-image counts.

    partitions splits the outermost loop into contiguous chunks whose
    partial tallies are merged by summation; the result is identical for
    every partition count.  Raises ResourceCapError (naming the tuple
    count) before starting if the walk would exceed max_tuples.
    """
    if not isinstance(k, int) or k < 0:
        raise ParameterError(f"query count must be a non-negative integer, got {k!r}")
    if partitions < 1:
        raise ParameterError("partitions must be at least 1")
    params = domain.params
    q = params.q
    total = (domain.size * q) ** k
    if total > max_tuples:
        raise ResourceCapError(
            f"census needs {total} tuples, cap is {max_tuples}"
        )
    zero_key = (0,) * domain.n
    if k == 0:
        return PreimageCensus(domain, 0, {zero_key: 1}, {zero_key: 1})

    add = params.add_rows()
    scaled = _scaled_rows(domain)
    # One entry per (vector, weight) pair: its scaled row, a bit marking the
    # vector for distinctness tracking, and whether the weight is nonzero.
    pairs = [
        (scaled[j][y], 1 << j, y != 0)
        for j in range(domain.size)
        for y in range(q)
    ]

    def tally_chunk(first_pairs):
        counts: dict = {}
        good: dict = {}

        def descend(level, acc, used, good_flag):
            if level == k:
                counts[acc] = counts.get(acc, 0) + 1
                if good_flag:
                    good[acc] = good.get(acc, 0) + 1
                return
            for row, bit, nonzero in pairs:
                descend(
                    level + 1,
                    tuple(add[a][b] for a, b in zip(acc, row)),
                    used | bit,
                    good_flag and nonzero and not (used & bit),
                )

        for row, bit, nonzero in first_pairs:
            descend(1, row, bit, nonzero)
        return counts, good

    chunk_size = math.ceil(len(pairs) / partitions)
    counts: dict = {}
    good: dict = {}
    for start in range(0, len(pairs), chunk_size):
        part_counts, part_good = tally_chunk(pairs[start:start + chunk_size])
        for key, c in part_counts.items():
            counts[key] = counts.get(key, 0) + c
        for key, c in part_good.items():
            good[key] = good.get(key, 0) + c

    if sum(counts.values()) != total:
        raise ContractError("census total does not match the tuple count")
    return PreimageCensus(domain, k, counts, good)


@dataclass(frozen=True, eq=False)
class ImageSet:
    """All targets with at least one pre-image, in canonical order."""

    params: FieldParams
    n: int
    elements: tuple  # VectorFq, canonically sorted

    @property
    def size(self) -> int:
        return len(self.elements)

    def __contains__(self, z):
        if not isinstance(z, VectorFq):
            return False
        return z.index_tuple() in self._keys()

    def _keys(self):
        # Small enough to rebuild on demand; avoids a mutable cache field.
        return {z.index_tuple() for z in self.elements}


def image_set(census: PreimageCensus) -> ImageSet:
    """Extract the census's image in canonical order."""
    params = census.domain.params
    elements = tuple(
        VectorFq.from_index_tuple(params, key) for key in sorted(census.counts)
    )
    return ImageSet(params=params, n=census.domain.n, elements=elements)


@dataclass(frozen=True, eq=False)
class Transversal:
    """One chosen pre-image per image point."""

    domain: Domain
    k: int
    pairs: dict  # z index-tuple -> Preimage

    @property
    def size(self) -> int:
        return len(self.pairs)

    def preimage_of(self, z: VectorFq) -> Preimage:
        return self.pairs[z.index_tuple()]


def build_transversal(domain: Domain, k: int, *,
                      max_tuples: int = DEFAULT_MAX_TUPLES) -> Transversal:
    """Pick, for every image point, its lexicographically smallest pre-image.

    Order on pre-images compares the vector tuple first (by canonical domain
    position), then the weight tuple (by element index), so the choice is
    deterministic and machine-independent.
    """
    if not isinstance(k, int) or k < 0:
        raise ParameterError(f"query count must be a non-negative integer, got {k!r}")
    params = domain.params
    q = params.q
    total = (domain.size * q) ** k
    if total > max_tuples:
        raise ResourceCapError(f"transversal needs {total} tuples, cap is {max_tuples}")
    zero_key = (0,) * domain.n
    if k == 0:
        return Transversal(domain, 0, {zero_key: Preimage((), ())})

    add = params.add_rows()
    scaled = _scaled_rows(domain)
    first: dict = {}
    zero_acc = zero_key
    for v_positions in itertools.product(range(domain.size), repeat=k):
        rows = [scaled[j] for j in v_positions]
        for weights in itertools.product(range(q), repeat=k):
            acc = zero_acc
            for row, y in zip(rows, weights):
                acc = tuple(add[a][b] for a, b in zip(acc, row[y]))
            if acc not in first:
                first[acc] = (v_positions, weights)

    elements = params.elements()
    pairs = {}
    for key in sorted(first):
        v_positions, weights = first[key]
        pairs[key] = Preimage(
            tuple(domain.vectors[j] for j in v_positions),
            tuple(elements[y] for y in weights),
        )
    return Transversal(domain, k, pairs)


def good_preimage_count(census: PreimageCensus, z: VectorFq) -> int:
    """Pre-images of z with pairwise-distinct vectors and nonzero weights."""
    return census.good_count_of(z)


def good_set_sizes(domain: Domain, k: int) -> tuple:
    """Exact sizes (k!*C(|V|,k), (q-1)^k) of the good input components."""
    if not isinstance(k, int) or k < 0:
        raise ParameterError(f"query count must be a non-negative integer, got {k!r}")
    v_good = math.factorial(k) * math.comb(domain.size, k)
    y_good = (domain.params.q - 1) ** k
    return v_good, y_good


def image_size_lower_bound(domain: Domain, k: int) -> int:
    """Guaranteed lower bound C(|V|,k)*(q-1)^k on the image size.

    Valid only when every small subset of the domain is independent and
    2k <= n; both hypotheses are enforced here because the bound is simply
    wrong without them.
    """
    if not isinstance(k, int) or k < 0:
        raise ParameterError(f"query count must be a non-negative integer, got {k!r}")
    if 2 * k > domain.n:
        raise ContractError(
            f"lower bound needs 2k <= n, got k={k} with n={domain.n}"
        )
    report = domain.independence()
    if report.status != "verified":
        raise ContractError(
            "lower bound needs the subset-independence hypothesis, "
            f"but it is {report.status} for this domain"
        )
    return math.comb(domain.size, k) * (domain.params.q - 1) ** k


@dataclass(frozen=True)
class SecondMomentCheck:
    """Both sides of the exact second-moment identity."""

    lhs: int
    rhs: Fraction
    equal: bool


def second_moment_identity_check(domain: Domain, k: int, *,
                                 census: PreimageCensus = None,
                                 max_tuples: int = DEFAULT_MAX_TUPLES) -> SecondMomentCheck:
    """Compare sum of squared counts against the closed-form character sum.

    The right side is (|V|q)^(2k)/q^n plus (q^(2k)/q^n) times the sum over
    nonzero t of (number of domain vectors orthogonal to t)^(2k), evaluated
    directly; equality is exact rational equality, not approximate.
    """
    if census is None:
        census = enumerate_census(domain, k, max_tuples=max_tuples)
    elif census.k != k or (census.domain is not domain
                           and census.domain.vectors != domain.vectors):
        raise ParameterError("supplied census does not match (domain, k)")
    params = domain.params
    q = params.q
    n = domain.n
    codomain = q ** n
    if codomain * domain.size > max_tuples:
        raise ResourceCapError(
            f"identity right side needs {codomain * domain.size} dot products, "
            f"cap is {max_tuples}"
        )
    add = params.add_rows()
    mul = params.mul_rows()
    vec_rows = [v.index_tuple() for v in domain.vectors]

    ortho_power_sum = 0
    two_k = 2 * k
    for t in itertools.product(range(q), repeat=n):
        if not any(t):
            continue
        hits = 0
        for row in vec_rows:
            acc = 0
            for a, b in zip(t, row):
                acc = add[acc][mul[a][b]]
            if acc == 0:
                hits += 1
        ortho_power_sum += hits ** two_k
    rhs = Fraction(
        (domain.size * q) ** two_k + q ** two_k * ortho_power_sum, codomain
    )
    lhs = census.second_moment_sum()
    return SecondMomentCheck(lhs=lhs, rhs=rhs, equal=Fraction(lhs) == rhs)


def chebyshev_zero_bound(domain: Domain, k: int) -> Fraction:
    """Tail bound q^n * (|V_0|/|V|)^(2k) on the fraction of unhit targets.

    May exceed 1, in which case it is vacuous but still valid.
    """
    if not isinstance(k, int) or k < 0:
        raise ParameterError(f"query count must be a non-negative integer, got {k!r}")
    q = domain.params.q
    return Fraction(q ** domain.n) * Fraction(
        domain.zero_touching_count(), domain.size
    ) ** (2 * k)

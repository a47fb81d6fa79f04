"""Dense state-vector simulation of the k-query interpolation procedure.

States live in C^(q^n), indexed by the canonical order on GF(q)^n (first
coordinate most significant).  The simulator follows the three algorithm
steps exactly: uniform superposition over a transversal, one phase per
query batch, in-place relabeling by the combination map.  Because the
transversal holds one pre-image per image point, the relabeling is a
permutation on the support, so a dense vector over the codomain is enough;
the (|V|*q)^k-dimensional query register is never materialized.

Measurement in the Fourier basis, sampling, and the rank of the reachable
state family are computed from the same vectors.
"""

import math
from dataclasses import dataclass

import numpy as np

from .census import ImageSet, Transversal
from .domain import Domain, VectorFq, dot
from .errors import ContractError, ParameterError, ResourceCapError
from .field import FieldParams

DEFAULT_MAX_AMPLITUDES = 1 << 20


def _flat_index(key: tuple, q: int) -> int:
    acc = 0
    for c in key:
        acc = acc * q + c
    return acc


def _check_state_size(params: FieldParams, n: int, max_amplitudes: int):
    size = params.q ** n
    if size > max_amplitudes:
        raise ResourceCapError(
            f"state over GF({params.q})^{n} needs {size} amplitudes, "
            f"cap is {max_amplitudes}"
        )
    return size


def _check_secret(params: FieldParams, n: int, secret: VectorFq):
    if not isinstance(secret, VectorFq):
        raise ParameterError(f"secret must be a VectorFq, got {type(secret).__name__}")
    if secret.params != params or secret.n != n:
        raise ParameterError(
            f"secret has length {secret.n} over GF({secret.params.q}), "
            f"state needs length {n} over GF({params.q})"
        )


@dataclass(eq=False)
class StateVector:
    """Complex amplitudes over GF(q)^n in canonical flat order."""

    params: FieldParams
    n: int
    amplitudes: np.ndarray

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude_of(self, z: VectorFq) -> complex:
        return complex(self.amplitudes[_flat_index(z.index_tuple(), self.params.q)])

    def inner(self, other: "StateVector") -> complex:
        if other.params != self.params or other.n != self.n:
            raise ParameterError("inner product needs matching field and length")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def fourier_state(params: FieldParams, n: int, secret: VectorFq,
                  max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    """The exact Fourier vector: amplitude e(s.z)/sqrt(q^n) for every z."""
    _check_secret(params, n, secret)
    _check_state_size(params, n, max_amplitudes)
    table = params.character_table()
    amps = np.ones(1, dtype=np.complex128)
    for coord in secret.entries:
        amps = np.kron(amps, table[coord.index()])
    amps /= math.sqrt(params.q ** n)
    return StateVector(params=params, n=n, amplitudes=amps)


def _dot_index(add, mul, a_key: tuple, b_key: tuple) -> int:
    """Index of the dot product of two vectors given as index tuples."""
    acc = 0
    for a, b in zip(a_key, b_key):
        acc = add[acc][mul[a][b]]
    return acc


def restricted_fourier_state(image: ImageSet, secret: VectorFq,
                             max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    """Fourier phases e(s.z)/sqrt(|image|) on the image, zero elsewhere."""
    if image.size == 0:
        raise ParameterError("cannot build a state over an empty image")
    params = image.params
    _check_secret(params, image.n, secret)
    size = _check_state_size(params, image.n, max_amplitudes)
    chars = params.character_values()
    add = params.add_rows()
    mul = params.mul_rows()
    s_key = secret.index_tuple()
    amps = np.zeros(size, dtype=np.complex128)
    scale = 1.0 / math.sqrt(image.size)
    for z in image.elements:
        z_key = z.index_tuple()
        amps[_flat_index(z_key, params.q)] = (
            chars[_dot_index(add, mul, s_key, z_key)] * scale
        )
    return StateVector(params=params, n=image.n, amplitudes=amps)


def run_algorithm(domain: Domain, k: int, transversal: Transversal,
                  secret: VectorFq,
                  max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    """Simulate the three steps on the transversal support.

    Starts from the uniform superposition over the transversal's pre-images,
    applies the k query phases e(s . sum y_i v_i), then relabels each
    pre-image by its image point.  The relabeling must be a bijection onto
    the image; any violation is a ContractError because it would make the
    step non-unitary.
    """
    if transversal.domain is not domain and transversal.domain.vectors != domain.vectors:
        raise ParameterError("transversal was built for a different domain")
    if transversal.k != k:
        raise ParameterError(f"transversal is for k={transversal.k}, asked for k={k}")
    params = domain.params
    n = domain.n
    _check_secret(params, n, secret)
    size = _check_state_size(params, n, max_amplitudes)
    chars = params.character_values()
    add = params.add_rows()
    mul = params.mul_rows()
    s_key = secret.index_tuple()
    amps = np.zeros(size, dtype=np.complex128)
    scale = 1.0 / math.sqrt(transversal.size)
    zero_key = (0,) * n
    for key, pre in transversal.pairs.items():
        z_key = zero_key
        for v, w in zip(pre.vectors, pre.weights):
            y = w.index()
            z_key = tuple(
                add[a][mul[y][b]] for a, b in zip(z_key, v.index_tuple())
            )
        if z_key != key:
            raise ContractError(f"transversal entry for {key} maps to {z_key}")
        flat = _flat_index(key, params.q)
        if amps[flat] != 0:
            raise ContractError("in-place relabeling hit the same target twice")
        amps[flat] = chars[_dot_index(add, mul, s_key, z_key)] * scale
    return StateVector(params=params, n=n, amplitudes=amps)


def success_probability(state: StateVector, secret: VectorFq) -> float:
    """|<fourier_state(secret) | state>|^2."""
    sigma = fourier_state(state.params, state.n, secret,
                          max_amplitudes=state.dimension)
    return abs(sigma.inner(state)) ** 2


@dataclass(eq=False)
class OutcomeDistribution:
    """Analytic Fourier-basis measurement probabilities over GF(q)^n."""

    params: FieldParams
    n: int
    probs: np.ndarray  # flat, canonical order

    def prob_of(self, t: VectorFq) -> float:
        return float(self.probs[_flat_index(t.index_tuple(), self.params.q)])

    def argmax(self) -> VectorFq:
        flat = int(np.argmax(self.probs))
        return self._unflatten(flat)

    def top(self, count: int = 5) -> list:
        """Heaviest outcomes as (vector, probability), ties broken by
        canonical order so the listing is deterministic."""
        order = np.lexsort((np.arange(len(self.probs)), -self.probs))
        return [(self._unflatten(int(i)), float(self.probs[i])) for i in order[:count]]

    def _unflatten(self, flat: int) -> VectorFq:
        digits = []
        for _ in range(self.n):
            flat, c = divmod(flat, self.params.q)
            digits.append(c)
        return VectorFq.from_index_tuple(self.params, tuple(reversed(digits)))


def outcome_distribution(state: StateVector, tol: float = 1e-9) -> OutcomeDistribution:
    """p(t) = |<fourier_state(t) | state>|^2 for every t, all at once.

    Computed by contracting each tensor axis with the conjugate Fourier
    kernel; identical to q^n separate inner products but one mode-product
    per coordinate instead.
    """
    params = state.params
    q = params.q
    n = state.n
    kernel = params.fourier_matrix().conj()
    arr = state.amplitudes.reshape((q,) * n)
    for axis in range(n):
        arr = np.moveaxis(np.tensordot(kernel, arr, axes=(1, axis)), 0, axis)
    probs = np.abs(arr.reshape(-1)) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > tol:
        raise ContractError(
            f"outcome probabilities sum to {total}, expected 1 within {tol}"
        )
    return OutcomeDistribution(params=params, n=n, probs=probs)


@dataclass(eq=False)
class SampleReport:
    """Empirical counts from seeded inverse-CDF sampling."""

    params: FieldParams
    n: int
    counts: dict  # index tuple -> count, only observed outcomes
    trials: int
    seed: int

    def frequency_of(self, t: VectorFq) -> float:
        return self.counts.get(t.index_tuple(), 0) / self.trials


def sample_outcomes(dist: OutcomeDistribution, trials: int, seed: int) -> SampleReport:
    """Draw trials outcomes reproducibly: same seed, same counts.

    Inverse-CDF over canonical outcome order, driven by numpy's default
    PRNG, so the result depends only on (distribution, trials, seed).
    """
    if not isinstance(trials, int) or trials < 1:
        raise ParameterError(f"trials must be a positive integer, got {trials!r}")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(dist.probs)
    draws = rng.random(trials)
    positions = np.searchsorted(cdf, draws, side="right")
    positions = np.minimum(positions, len(dist.probs) - 1)
    counts = {}
    flats, tallies = np.unique(positions, return_counts=True)
    for flat, tally in zip(flats, tallies):
        key = dist._unflatten(int(flat)).index_tuple()
        counts[key] = int(tally)
    return SampleReport(params=dist.params, n=dist.n, counts=counts,
                        trials=trials, seed=seed)


def state_family_rank(image: ImageSet, rel_tol: float = 1e-8,
                      max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> int:
    """Rank of the q^n x |image| matrix of phases e(s.z) over all secrets s.

    The row space spans every final state any algorithm supported on the
    image can reach, so this rank caps the number of distinguishable
    secrets.  Singular values below rel_tol times the largest count as zero.
    """
    params = image.params
    size = _check_state_size(params, image.n, max_amplitudes)
    if image.size == 0:
        raise ParameterError("rank of an empty state family is undefined")
    table = params.character_table()
    columns = np.empty((size, image.size), dtype=np.complex128)
    for col, z in enumerate(image.elements):
        column = np.ones(1, dtype=np.complex128)
        for coord in z.index_tuple():
            column = np.kron(column, table[:, coord])
        columns[:, col] = column
    singular = np.linalg.svd(columns, compute_uv=False)
    return int(np.sum(singular > rel_tol * singular[0]))


def phase_query_check(domain: Domain, secret: VectorFq, tol: float = 1e-12,
                      max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> bool:
    """Check the phase-query identity on every domain vector.

    For each v, conjugating the additive shift y -> y + s.v by the Fourier
    kernel on the answer register must equal the diagonal phase e(y * s.v),
    entry by entry within tol.
    """
    params = domain.params
    q = params.q
    _check_secret(params, domain.n, secret)
    if q * domain.size > max_amplitudes:
        raise ResourceCapError(
            f"phase check touches {q * domain.size} register pairs, "
            f"cap is {max_amplitudes}"
        )
    fourier = params.fourier_matrix()
    chars = np.asarray(params.character_values(), dtype=np.complex128)
    add = params.add_rows()
    mul = params.mul_rows()
    for v in domain.vectors:
        shift = dot(secret, v).index()
        permutation = np.zeros((q, q), dtype=np.complex128)
        for y in range(q):
            permutation[add[y][shift], y] = 1.0
        conjugated = fourier @ permutation @ fourier.conj().T
        diagonal = np.diag(chars[[mul[shift][y] for y in range(q)]])
        if np.max(np.abs(conjugated - diagonal)) > tol:
            return False
    return True

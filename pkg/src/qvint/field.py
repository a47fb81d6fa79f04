"""Exact arithmetic in GF(p^r): elements, trace, additive character, Fourier kernels.

Extension fields use the polynomial basis modulo a monic irreducible of
degree r over GF(p).  Every element is a coefficient tuple (c_0, ..., c_{r-1})
with c_i in [0, p); ordering and table indexing go through the canonical
integer index sum(c_i * p**i), so GF(4) enumerates as 0, 1, w, w+1.

The additive character is e(z) = exp(2*pi*i * Tr(z) / p) with the absolute
trace Tr(z) = z + z^p + ... + z^(p^(r-1)).  Dividing by p is what makes the
character non-trivial and gives the exact orthogonality relation
sum_z e(z*(x - y)) = q * delta(x, y), which the Fourier layer depends on.
"""

import cmath
import itertools
import math

import numpy as np

from .errors import ContractError, ParameterError, ResourceCapError

# Hard ceilings.  DEFAULT_MAX_Q bounds field construction outright;
# TABLE_MAX_Q additionally bounds the dense q x q operation tables that the
# enumeration layers rely on.
DEFAULT_MAX_Q = 1 << 16
TABLE_MAX_Q = 1024


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_mul(a: tuple, b: tuple, p: int) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return tuple(out)


def _poly_rem(a: tuple, m: tuple, p: int) -> tuple:
    """Remainder of a modulo the monic polynomial m, over GF(p)."""
    deg_m = len(m) - 1
    work = list(a)
    for i in range(len(work) - 1, deg_m - 1, -1):
        c = work[i]
        if c == 0:
            continue
        work[i] = 0
        for j in range(deg_m):
            work[i - deg_m + j] = (work[i - deg_m + j] - c * m[j]) % p
    return tuple(work[:deg_m])


def _is_irreducible(m: tuple, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(m)//2."""
    deg = len(m) - 1
    if deg == 1:
        return True
    if m[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = low + (1,)
            if any(_poly_rem(m, divisor, p)):
                continue
            return False
    return True


def smallest_irreducible(p: int, r: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree r over GF(p).

    Coefficients are compared low-degree first, so GF(4) gets x^2 + x + 1
    and GF(9) gets x^2 + 1.
    """
    if r == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=r):
        candidate = low + (1,)
        if _is_irreducible(candidate, p):
            return candidate
    raise ContractError(f"no irreducible of degree {r} over GF({p})")  # pragma: no cover


class FieldParams:
    """Immutable description of GF(p^r), shared by every element of the field.

    Heavy derived data (q x q add/mul tables, trace and character tables,
    the Fourier kernel) is built lazily on first use and cached.
    """

    __slots__ = (
        "p", "r", "q", "modulus",
        "_xpow", "_add_rows", "_mul_rows", "_traces", "_chars",
        "_elements", "_fourier",
    )

    def __init__(self, p: int, r: int = 1, modulus=None, max_q: int = DEFAULT_MAX_Q):
        if not isinstance(p, int) or not _is_prime(p):
            raise ParameterError(f"characteristic must be a prime integer, got {p!r}")
        if not isinstance(r, int) or r < 1:
            raise ParameterError(f"extension degree must be a positive integer, got {r!r}")
        q = p ** r
        if q > max_q:
            raise ResourceCapError(f"field order {q} exceeds cap {max_q}")
        if modulus is None:
            modulus = smallest_irreducible(p, r)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != r + 1:
                raise ParameterError(
                    f"modulus must have degree {r} ({r + 1} coefficients), got {len(modulus)}"
                )
            if modulus[-1] != 1:
                raise ParameterError("modulus must be monic")
            if r > 1 and not _is_irreducible(modulus, p):
                raise ParameterError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.r = r
        self.q = q
        self.modulus = modulus
        # Reductions of x^r .. x^(2r-2); enough to fold any degree < 2r-1
        # product back into the basis.
        xpow = []
        if r > 1:
            cur = tuple((-modulus[i]) % p for i in range(r))
            xpow.append(cur)
            for _ in range(r - 2):
                shifted = (0,) + cur[: r - 1]
                carry = cur[r - 1]
                cur = tuple((shifted[i] + carry * xpow[0][i]) % p for i in range(r))
                xpow.append(cur)
        self._xpow = tuple(xpow)
        self._add_rows = None
        self._mul_rows = None
        self._traces = None
        self._chars = None
        self._elements = None
        self._fourier = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldParams)
            and self.p == other.p
            and self.r == other.r
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.r, self.modulus))

    def __repr__(self):
        if self.r == 1:
            return f"FieldParams({self.p})"
        return f"FieldParams({self.p}, {self.r}, modulus={self.modulus})"

    # -- element construction ----------------------------------------------

    def element(self, value) -> "FieldElement":
        """Build an element from an integer (prime-subfield constant) or a
        coefficient sequence of length at most r."""
        if isinstance(value, FieldElement):
            if value.params != self:
                raise ParameterError("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.r - 1)
            return FieldElement(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.r:
            raise ParameterError(f"too many coefficients for GF({self.q}): {value!r}")
        coeffs = coeffs + (0,) * (self.r - len(coeffs))
        return FieldElement(self, coeffs)

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.r)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.r - 1))

    def from_index(self, index: int) -> "FieldElement":
        if not 0 <= index < self.q:
            raise ParameterError(f"index {index} out of range for GF({self.q})")
        coeffs = []
        for _ in range(self.r):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return FieldElement(self, tuple(coeffs))

    def elements(self) -> tuple:
        """All q elements in canonical index order."""
        if self._elements is None:
            self._elements = tuple(self.from_index(i) for i in range(self.q))
        return self._elements

    # -- dense operation tables ---------------------------------------------

    def _check_table_cap(self):
        if self.q > TABLE_MAX_Q:
            raise ResourceCapError(
                f"dense q x q tables capped at q <= {TABLE_MAX_Q}, got q = {self.q}"
            )

    def add_rows(self) -> list:
        """add_rows()[i][j] is the index of element i plus element j."""
        if self._add_rows is None:
            self._check_table_cap()
            elems = self.elements()
            self._add_rows = [
                [(a + b).index() for b in elems] for a in elems
            ]
        return self._add_rows

    def mul_rows(self) -> list:
        """mul_rows()[i][j] is the index of element i times element j."""
        if self._mul_rows is None:
            self._check_table_cap()
            elems = self.elements()
            self._mul_rows = [
                [(a * b).index() for b in elems] for a in elems
            ]
        return self._mul_rows

    def trace_values(self) -> list:
        """Absolute trace of every element, by canonical index."""
        if self._traces is None:
            self._traces = [z.trace() for z in self.elements()]
        return self._traces

    def character_values(self) -> list:
        """Additive character of every element, by canonical index."""
        if self._chars is None:
            root = cmath.exp(2j * cmath.pi / self.p)
            self._chars = [root ** t for t in self.trace_values()]
        return self._chars

    def character_table(self) -> np.ndarray:
        """q x q complex matrix with entry [a, b] = e(a * b), unnormalized."""
        if self._fourier is None:
            self._check_table_cap()
            chars = np.asarray(self.character_values(), dtype=np.complex128)
            mul = np.asarray(self.mul_rows(), dtype=np.intp)
            self._fourier = chars[mul]
        return self._fourier

    def fourier_matrix(self) -> np.ndarray:
        """Unitary Fourier kernel e(a * b) / sqrt(q)."""
        return self.character_table() / math.sqrt(self.q)


class FieldElement:
    """One element of GF(p^r) in the polynomial basis of its FieldParams."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params: FieldParams, coeffs: tuple):
        self.params = params
        self.coeffs = coeffs

    def index(self) -> int:
        """Canonical integer index sum(c_i * p**i)."""
        idx = 0
        for c in reversed(self.coeffs):
            idx = idx * self.params.p + c
        return idx

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.params == other.params
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.coeffs, self.params.p, self.params.modulus))

    def __repr__(self):
        if self.params.r == 1:
            return f"GF({self.params.q}):{self.coeffs[0]}"
        return f"GF({self.params.q}):{self.coeffs}"

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.params != self.params:
                raise ParameterError("mixed-field arithmetic is not defined")
            return other
        if isinstance(other, int):
            return self.params.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.params.p
        return FieldElement(
            self.params,
            tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)),
        )

    __radd__ = __add__

    def __neg__(self):
        p = self.params.p
        return FieldElement(self.params, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        params = self.params
        p, r = params.p, params.r
        if r == 1:
            return FieldElement(params, ((self.coeffs[0] * other.coeffs[0]) % p,))
        prod = _poly_mul(self.coeffs, other.coeffs, p)
        out = list(prod[:r]) + [0] * (r - min(r, len(prod)))
        for i in range(r, len(prod)):
            c = prod[i]
            if c == 0:
                continue
            red = params._xpow[i - r]
            for j in range(r):
                out[j] = (out[j] + c * red[j]) % p
        return FieldElement(params, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative inverse")
        # a^(q-2) = a^(-1) in the multiplicative group of order q-1.
        return self ** (self.params.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.params.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def trace(self) -> int:
        """Absolute trace into GF(p): z + z^p + ... + z^(p^(r-1))."""
        params = self.params
        acc = self
        frob = self
        for _ in range(params.r - 1):
            frob = frob ** params.p
            acc = acc + frob
        if any(acc.coeffs[1:]):
            raise ContractError(f"trace of {self!r} landed outside the prime subfield")
        return acc.coeffs[0]

    def character(self) -> complex:
        """Additive character e(z) = exp(2*pi*i * Tr(z) / p)."""
        return cmath.exp(2j * cmath.pi * self.trace() / self.params.p)


def enumerate_field(params: FieldParams) -> tuple:
    """All elements of the field in canonical index order."""
    return params.elements()


def character_orthogonality_check(params: FieldParams, tol: float = 1e-9) -> bool:
    """Verify sum_z e(z * (x - y)) = q * delta(x, y) for every pair (x, y).

    Exhaustive over all q^2 pairs; the return value is True only if every
    pair lands within tol of its exact target.
    """
    elems = params.elements()
    q = params.q
    chars = params.character_values()
    mul = params.mul_rows()
    for xi in range(q):
        for yi in range(q):
            diff = (elems[xi] - elems[yi]).index()
            total = sum(chars[mul[diff][zi]] for zi in range(q))
            target = q if xi == yi else 0
            if abs(total - target) > tol:
                return False
    return True


def parse_field_spec(text: str) -> FieldParams:
    """Parse a field order such as '7' or '9' (prime powers) into FieldParams.

    An explicit modulus can be appended after a colon as comma-separated
    coefficients, low degree first: '4:1,1,1' is GF(4) mod x^2 + x + 1.
    """
    text = text.strip()
    modulus = None
    if ":" in text:
        head, _, tail = text.partition(":")
        text = head.strip()
        try:
            modulus = tuple(int(c) for c in tail.split(","))
        except ValueError:
            raise ParameterError(f"bad modulus spec {tail!r}") from None
    try:
        q = int(text)
    except ValueError:
        raise ParameterError(f"field order must be an integer, got {text!r}") from None
    if q < 2:
        raise ParameterError(f"field order must be at least 2, got {q}")
    # Factor q as p^r with p the smallest prime factor.
    p = q
    for cand in range(2, int(math.isqrt(q)) + 1):
        if q % cand == 0:
            p = cand
            break
    r = 0
    rem = q
    while rem % p == 0:
        rem //= p
        r += 1
    if rem != 1 or not _is_prime(p):
        raise ParameterError(f"{q} is not a prime power")
    return FieldParams(p, r, modulus=modulus)

"""Arithmetic in small finite fields.

Elements of F_q, q = p^m, are integers `0..q-1`. The base-p digits of an element
(least significant first) are the coefficients of a polynomial of degree < m over F_p,
and multiplication reduces products modulo a monic irreducible polynomial of degree m.
All operations go through lookup tables of size q x q built once per field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import TYPE_CHECKING, Any, Sequence

import numpy as np

from prm_weights.exceptions import FieldError
from prm_weights.logger import get_logger

if TYPE_CHECKING:
    from collections.abc import Mapping

    from numpy.typing import NDArray

_logger = get_logger(__name__)

FieldElement = int
"""A field element, encoded as its index `0..q-1`."""

DEFAULT_MAX_Q = 27
"""Largest field order accepted unless configured otherwise."""

BUILTIN_MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 0, 1, 1),  # x^3 + x + 1
    9: (1, 0, 1),  # x^2 + 1
    16: (1, 0, 0, 1, 1),  # x^4 + x + 1
    25: (1, 1, 2),  # x^2 + x + 2
    27: (1, 0, 2, 1),  # x^3 + 2x + 1
}
"""Default moduli, coefficients listed from the highest degree down."""


def is_prime(value: int) -> bool:
    """Tell whether an integer is prime.

    Parameters:
        value: The integer to test.

    Returns:
        Whether the value is prime.
    """
    if value < 2:  # noqa: PLR2004
        return False
    return all(value % divisor for divisor in range(2, int(value**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power into its prime and exponent.

    Parameters:
        q: The integer to split.

    Raises:
        FieldError: When q is not a prime power.

    Returns:
        The pair (p, m) with q = p^m.
    """
    for p in range(2, q + 1):
        if q % p == 0:
            m, rest = 0, q
            while rest % p == 0:
                rest //= p
                m += 1
            if rest != 1:
                break
            return p, m
    raise FieldError(f"{q} is not a prime power")


def _poly_rem(dividend: list[int], divisor: list[int], p: int) -> list[int]:
    # Coefficients least significant first; divisor is monic.
    remainder = list(dividend)
    shift = len(divisor) - 1
    for degree in range(len(remainder) - 1, shift - 1, -1):
        coefficient = remainder[degree] % p
        if coefficient:
            for index, value in enumerate(divisor):
                remainder[degree - shift + index] = (remainder[degree - shift + index] - coefficient * value) % p
    return [value % p for value in remainder[:shift]]


def _has_root(low: list[int], p: int) -> bool:
    return any(sum(coef * pow(x, power, p) for power, coef in enumerate(low)) % p == 0 for x in range(p))


def _is_irreducible(low: list[int], p: int) -> bool:
    degree = len(low) - 1
    if _has_root(low, p):
        return False
    for factor_degree in range(2, degree // 2 + 1):
        for tail in product(range(p), repeat=factor_degree):
            factor = [*reversed(tail), 1]
            if not any(_poly_rem(low, factor, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A finite field F_q with q = p^m."""

    p: int
    """The prime characteristic."""
    m: int
    """The extension degree."""
    modulus: tuple[int, ...]
    """Monic irreducible polynomial of degree m over F_p, highest degree first."""

    @property
    def q(self) -> int:
        """The field order p^m."""
        return self.p**self.m

    def __str__(self) -> str:
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    @cached_property
    def digits(self) -> NDArray[np.int64]:
        """Base-p digits of every element, shape (q, m), least significant first."""
        indices = np.arange(self.q)
        return np.stack([(indices // self.p**power) % self.p for power in range(self.m)], axis=1)

    @cached_property
    def add_table(self) -> NDArray[np.int64]:
        """Addition table, shape (q, q)."""
        sums = (self.digits[:, None, :] + self.digits[None, :, :]) % self.p
        return (sums * self.p ** np.arange(self.m)).sum(axis=2)

    @cached_property
    def neg_table(self) -> NDArray[np.int64]:
        """Additive inverses, shape (q,)."""
        return (((-self.digits) % self.p) * self.p ** np.arange(self.m)).sum(axis=1)

    @cached_property
    def mul_table(self) -> NDArray[np.int64]:
        """Multiplication table, shape (q, q)."""
        low = list(reversed(self.modulus))
        table = np.zeros((self.q, self.q), dtype=np.int64)
        for a in range(1, self.q):
            digits_a = self.digits[a].tolist()
            for b in range(a, self.q):
                digits_b = self.digits[b].tolist()
                prod = [0] * (2 * self.m - 1)
                for i, x in enumerate(digits_a):
                    for j, y in enumerate(digits_b):
                        prod[i + j] += x * y
                reduced = _poly_rem(prod, low, self.p) if self.m > 1 else [prod[0] % self.p]
                value = sum(coef * self.p**power for power, coef in enumerate(reduced))
                table[a, b] = table[b, a] = value
        return table

    @cached_property
    def inv_table(self) -> NDArray[np.int64]:
        """Multiplicative inverses, shape (q,); entry 0 is 0 and must not be used."""
        table = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            table[a] = self.pow(a, self.q - 2)
        return table

    def elements(self) -> list[FieldElement]:
        """Return the elements in index order.

        Returns:
            The list `[0, 1, ..., q-1]`.
        """
        return list(range(self.q))

    def nonzero(self) -> list[FieldElement]:
        """Return the nonzero elements in index order.

        Returns:
            The list `[1, ..., q-1]`.
        """
        return list(range(1, self.q))

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        """Add two elements.

        Parameters:
            a: First element.
            b: Second element.

        Returns:
            The sum `a + b`.
        """
        return int(self.add_table[a, b])

    def neg(self, a: FieldElement) -> FieldElement:
        """Negate an element.

        Parameters:
            a: An element.

        Returns:
            The additive inverse `-a`.
        """
        return int(self.neg_table[a])

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        """Subtract two elements.

        Parameters:
            a: First element.
            b: Second element.

        Returns:
            The difference `a - b`.
        """
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        """Multiply two elements.

        Parameters:
            a: First element.
            b: Second element.

        Returns:
            The product `a * b`.
        """
        return int(self.mul_table[a, b])

    def pow(self, a: FieldElement, exponent: int) -> FieldElement:
        """Raise an element to a nonnegative power, with `0^0 = 1`.

        Parameters:
            a: An element.
            exponent: A nonnegative integer.

        Returns:
            The power `a^exponent`.
        """
        result, base = 1, a
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def inv(self, a: FieldElement) -> FieldElement:
        """Invert a nonzero element.

        Parameters:
            a: A nonzero element.

        Raises:
            FieldError: When `a` is zero.

        Returns:
            The element `b` such that `a * b = 1`.
        """
        if a == 0:
            raise FieldError("Zero has no multiplicative inverse")
        return int(self.inv_table[a])

    def check(self, a: int) -> FieldElement:
        """Validate an element index.

        Parameters:
            a: A candidate element index.

        Raises:
            FieldError: When the index is outside `0..q-1`.

        Returns:
            The same index.
        """
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of {self}")
        return a


def make_field(
    p: int,
    m: int = 1,
    modulus: Sequence[int] | None = None,
    *,
    max_q: int = DEFAULT_MAX_Q,
) -> FieldSpec:
    """Build a validated field specification.

    Parameters:
        p: The prime characteristic.
        m: The extension degree.
        modulus: Monic polynomial of degree m, highest degree first.
            Defaults to the built-in table entry for p^m.
        max_q: Largest field order accepted.

    Raises:
        FieldError: When p is not prime, m < 1, q is too large,
            or the modulus is missing, not monic of degree m, or reducible.

    Returns:
        A field specification.
    """
    if not is_prime(p):
        raise FieldError(f"Characteristic {p} is not prime")
    if m < 1:
        raise FieldError(f"Extension degree must be at least 1, got {m}")
    q = p**m
    if q > max_q:
        raise FieldError(f"Field order {q} exceeds the configured maximum {max_q}")
    if m == 1:
        return FieldSpec(p, 1, (1, 0))
    if modulus is None:
        if q not in BUILTIN_MODULI:
            raise FieldError(f"No built-in modulus for q = {q}, pass one explicitly")
        modulus = BUILTIN_MODULI[q]
    coefficients = tuple(int(coef) for coef in modulus)
    if len(coefficients) != m + 1 or coefficients[0] != 1:
        raise FieldError(f"Modulus {coefficients} is not monic of degree {m}")
    if any(not 0 <= coef < p for coef in coefficients):
        raise FieldError(f"Modulus {coefficients} has coefficients outside 0..{p - 1}")
    low = list(reversed(coefficients))
    if _has_root(low, p):
        raise FieldError(f"Modulus {coefficients} has a root in GF({p})")
    if not _is_irreducible(low, p):
        raise FieldError(f"Modulus {coefficients} is reducible over GF({p})")
    _logger.debug("Using modulus %s for GF(%s^%s)", coefficients, p, m)
    return FieldSpec(p, m, coefficients)


def field_of_order(
    q: int,
    modulus: Sequence[int] | None = None,
    *,
    moduli: Mapping[Any, Sequence[int]] | None = None,
    max_q: int = DEFAULT_MAX_Q,
) -> FieldSpec:
    """Build the field of a given order.

    Parameters:
        q: A prime power.
        modulus: Explicit modulus, highest degree first.
        moduli: Configured moduli keyed by field order, consulted when no modulus is given.
        max_q: Largest field order accepted.

    Returns:
        A field specification.
    """
    p, m = prime_power(q)
    if modulus is None and moduli:
        modulus = moduli.get(q, moduli.get(str(q)))
    return make_field(p, m, modulus, max_q=max_q)


_FIELD_OPTION_RE = re.compile(r"^\s*(?:(?P<p>\d+)\^(?P<m>\d+)|(?P<q>\d+))\s*(?::\s*(?P<modulus>[\d,\s]+))?$")


def parse_field_option(text: str, *, max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    """Parse a `--field` value such as `4`, `2^2` or `4:1,1,1`.

    The optional part after the colon lists the modulus coefficients, highest degree first.

    Parameters:
        text: The option value.
        max_q: Largest field order accepted.

    Raises:
        FieldError: When the text is malformed or describes an invalid field.

    Returns:
        A field specification.
    """
    match = _FIELD_OPTION_RE.match(text)
    if not match:
        raise FieldError(f"Cannot parse field '{text}', expected 'q', 'p^m' or 'q:c_m,...,c_0'")
    q = int(match["q"]) if match["q"] else int(match["p"]) ** int(match["m"])
    modulus = None
    if match["modulus"]:
        modulus = [int(coef) for coef in match["modulus"].split(",") if coef.strip()]
    return field_of_order(q, modulus, max_q=max_q)


def matmul(field: FieldSpec, left: NDArray[np.int64], right: NDArray[np.int64]) -> NDArray[np.int64]:
    """Multiply two matrices over the field.

    Parameters:
        field: The field.
        left: A matrix of shape (r, k).
        right: A matrix of shape (k, c).

    Returns:
        The product, shape (r, c).
    """
    result = np.zeros((left.shape[0], right.shape[1]), dtype=np.int64)
    for index in range(left.shape[1]):
        terms = field.mul_table[left[:, index, None], right[None, index, :]]
        result = field.add_table[result, terms]
    return result


def row_reduce(
    field: FieldSpec,
    matrix: NDArray[np.int64],
    pivot_columns: int | None = None,
) -> tuple[NDArray[np.int64], list[int]]:
    """Compute the reduced row-echelon form of a matrix over the field.

    Parameters:
        field: The field.
        matrix: The matrix to reduce.
        pivot_columns: Only the first columns are eligible as pivots;
            the remaining ones are carried along (e.g. an appended identity).

    Returns:
        The nonzero rows of the reduced matrix and the list of pivot columns.
    """
    reduced = np.array(matrix, dtype=np.int64, copy=True)
    rows = reduced.shape[0]
    limit = reduced.shape[1] if pivot_columns is None else pivot_columns
    pivots: list[int] = []
    row = 0
    for column in range(limit):
        if row == rows:
            break
        candidates = np.flatnonzero(reduced[row:, column])
        if candidates.size == 0:
            continue
        pivot_row = row + int(candidates[0])
        if pivot_row != row:
            reduced[[row, pivot_row]] = reduced[[pivot_row, row]]
        reduced[row] = field.mul_table[field.inv_table[reduced[row, column]], reduced[row]]
        others = np.flatnonzero(reduced[:, column])
        others = others[others != row]
        if others.size:
            factors = field.neg_table[reduced[others, column]]
            reduced[others] = field.add_table[reduced[others], field.mul_table[factors[:, None], reduced[row][None, :]]]
        pivots.append(column)
        row += 1
    return reduced[:row], pivots

"""Sparse multivariate polynomials over a finite field.

Affine polynomials use the variables `X1..Xn` (offset 1),
homogeneous polynomials use `X0..Xn` (offset 0).
The text syntax joins terms with `+`, factors with `*` and powers with `^`;
coefficients are element indices. Printing and parsing round-trip exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from prm_weights.exceptions import DegreeError, PolynomialSyntaxError
from prm_weights.gf import FieldElement, FieldSpec

if TYPE_CHECKING:
    from numpy.typing import NDArray

Monomial = tuple[int, ...]
"""Exponent vector, one entry per variable."""


@dataclass(frozen=True)
class Polynomial:
    """An immutable sparse polynomial.

    Build instances with [`Polynomial.from_terms`][prm_weights.poly.Polynomial.from_terms]
    so that terms are canonical: sorted, without zero coefficients.
    """

    field: FieldSpec
    """The coefficient field."""
    nvars: int
    """Number of variables."""
    terms: tuple[tuple[Monomial, FieldElement], ...]
    """Sorted pairs of exponent vectors and nonzero coefficients."""
    offset: int = 0
    """Index of the first variable in printed names."""

    @classmethod
    def from_terms(
        cls,
        field: FieldSpec,
        nvars: int,
        terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]],
        offset: int = 0,
    ) -> Polynomial:
        """Build a polynomial, summing coefficients of repeated monomials.

        Parameters:
            field: The coefficient field.
            nvars: Number of variables.
            terms: Monomials and their coefficients.
            offset: Index of the first variable.

        Raises:
            DegreeError: When an exponent vector has the wrong length or a negative entry.

        Returns:
            The canonical polynomial.
        """
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[Monomial, int] = {}
        for monomial, coefficient in pairs:
            key = tuple(int(exponent) for exponent in monomial)
            if len(key) != nvars or any(exponent < 0 for exponent in key):
                raise DegreeError(f"Invalid exponent vector {key} for {nvars} variables")
            collected[key] = field.add(collected.get(key, 0), field.check(int(coefficient)))
        canonical = tuple(sorted((key, value) for key, value in collected.items() if value))
        return cls(field, nvars, canonical, offset)

    @classmethod
    def zero(cls, field: FieldSpec, nvars: int, offset: int = 0) -> Polynomial:
        """Return the zero polynomial."""
        return cls(field, nvars, (), offset)

    @classmethod
    def constant(cls, field: FieldSpec, nvars: int, value: int = 1, offset: int = 0) -> Polynomial:
        """Return a constant polynomial."""
        return cls.from_terms(field, nvars, [((0,) * nvars, value)], offset)

    @classmethod
    def variable(cls, field: FieldSpec, nvars: int, name: int, offset: int = 0) -> Polynomial:
        """Return the variable `X<name>`.

        Parameters:
            field: The coefficient field.
            nvars: Number of variables.
            name: The variable index as printed, between `offset` and `offset + nvars - 1`.
            offset: Index of the first variable.

        Raises:
            DegreeError: When the index is out of range.

        Returns:
            The polynomial `X<name>`.
        """
        position = name - offset
        if not 0 <= position < nvars:
            raise DegreeError(f"No variable X{name} among X{offset}..X{offset + nvars - 1}")
        exponents = [0] * nvars
        exponents[position] = 1
        return cls(field, nvars, ((tuple(exponents), 1),), offset)

    @property
    def coefficients(self) -> dict[Monomial, FieldElement]:
        """Terms as a dictionary."""
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        """Whether this is the zero polynomial."""
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree, -1 for the zero polynomial."""
        return max((sum(monomial) for monomial, _ in self.terms), default=-1)

    def is_homogeneous(self, degree: int | None = None) -> bool:
        """Tell whether every term has the same total degree.

        The zero polynomial is homogeneous of every degree.

        Parameters:
            degree: The expected degree, or `None` for any.

        Returns:
            Whether the polynomial is homogeneous (of the given degree).
        """
        degrees = {sum(monomial) for monomial, _ in self.terms}
        if not degrees:
            return True
        if len(degrees) > 1:
            return False
        return degree is None or degrees == {degree}

    def _check_compatible(self, other: Polynomial) -> None:
        if (self.field, self.nvars, self.offset) != (other.field, other.nvars, other.offset):
            raise DegreeError("Polynomials live in different rings")

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check_compatible(other)
        return Polynomial.from_terms(self.field, self.nvars, [*self.terms, *other.terms], self.offset)

    def __neg__(self) -> Polynomial:
        return self.scale(self.field.neg(1))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial | int) -> Polynomial:
        if isinstance(other, int):
            return self.scale(other)
        self._check_compatible(other)
        products = [
            (tuple(a + b for a, b in zip(left, right)), self.field.mul(first, second))
            for left, first in self.terms
            for right, second in other.terms
        ]
        return Polynomial.from_terms(self.field, self.nvars, products, self.offset)

    __rmul__ = __mul__

    def scale(self, scalar: int) -> Polynomial:
        """Multiply every coefficient by a field element.

        Parameters:
            scalar: The field element.

        Returns:
            The scaled polynomial.
        """
        scalar = self.field.check(scalar)
        return Polynomial.from_terms(
            self.field,
            self.nvars,
            [(monomial, self.field.mul(scalar, coefficient)) for monomial, coefficient in self.terms],
            self.offset,
        )

    def __pow__(self, exponent: int) -> Polynomial:
        result = Polynomial.constant(self.field, self.nvars, 1, self.offset)
        for _ in range(exponent):
            result = result * self
        return result

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda term: (sum(term[0]), term[0]), reverse=True)
        return " + ".join(_format_term(monomial, coefficient, self.offset) for monomial, coefficient in ordered)


def _format_term(monomial: Monomial, coefficient: int, offset: int) -> str:
    factors = [
        f"X{index + offset}" if exponent == 1 else f"X{index + offset}^{exponent}"
        for index, exponent in enumerate(monomial)
        if exponent
    ]
    if coefficient != 1 or not factors:
        factors.insert(0, str(coefficient))
    return "*".join(factors)


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|X(?P<var>\d+)(?:\s*\^\s*(?P<exp>\d+))?|(?P<op>[+*]))")


def parse_polynomial(text: str, field: FieldSpec, nvars: int, *, offset: int = 0) -> Polynomial:
    """Parse a polynomial written in the text syntax, e.g. `X1*X3 + 2*X0^2 + 1`.

    Parameters:
        text: The polynomial text.
        field: The coefficient field.
        nvars: Number of variables.
        offset: Index of the first variable (0 for `X0..Xn`, 1 for `X1..Xn`).

    Raises:
        PolynomialSyntaxError: When the text is malformed, names an unknown variable,
            or uses a coefficient outside `0..q-1`.

    Returns:
        The parsed polynomial.
    """
    terms: list[tuple[Monomial, int]] = []
    exponents = [0] * nvars
    coefficient = 1
    expect_factor = True
    position = 0
    stripped = text.rstrip()
    if not stripped:
        raise PolynomialSyntaxError("Empty polynomial")
    while position < len(stripped):
        match = _TOKEN_RE.match(stripped, position)
        if not match:
            raise PolynomialSyntaxError(f"Unexpected character at position {position} in '{text}'")
        position = match.end()
        if match["op"]:
            if expect_factor:
                raise PolynomialSyntaxError(f"Missing factor before '{match['op']}' in '{text}'")
            if match["op"] == "+":
                terms.append((tuple(exponents), coefficient))
                exponents, coefficient = [0] * nvars, 1
            expect_factor = True
            continue
        if not expect_factor:
            raise PolynomialSyntaxError(f"Missing operator before position {match.start()} in '{text}'")
        expect_factor = False
        if match["int"] is not None:
            value = int(match["int"])
            if value >= field.q:
                raise PolynomialSyntaxError(f"Coefficient {value} is not an element of {field}")
            coefficient = field.mul(coefficient, value)
        else:
            index = int(match["var"]) - offset
            if not 0 <= index < nvars:
                raise PolynomialSyntaxError(f"Unknown variable X{match['var']}, expected X{offset}..X{offset + nvars - 1}")
            exponents[index] += int(match["exp"]) if match["exp"] is not None else 1
    if expect_factor:
        raise PolynomialSyntaxError(f"Polynomial '{text}' ends with an operator")
    terms.append((tuple(exponents), coefficient))
    return Polynomial.from_terms(field, nvars, terms, offset)


def reduce_exponent(exponent: int, q: int) -> int:
    """Reduce an exponent with the rule `x^q = x`.

    Parameters:
        exponent: A nonnegative exponent.
        q: The field order.

    Returns:
        The exponent in `0..q-1` giving the same function on the field.
    """
    if exponent < q:
        return exponent
    return (exponent - 1) % (q - 1) + 1


def reduce_affine(g: Polynomial) -> Polynomial:
    """Reduce every exponent below q, without changing the polynomial function on the affine space.

    Parameters:
        g: The polynomial.

    Returns:
        The reduced polynomial; coefficients of colliding monomials are summed.
    """
    q = g.field.q
    return Polynomial.from_terms(
        g.field,
        g.nvars,
        [(tuple(reduce_exponent(exponent, q) for exponent in monomial), coefficient) for monomial, coefficient in g.terms],
        g.offset,
    )


@lru_cache(maxsize=None)
def power_table(field: FieldSpec, max_exponent: int) -> NDArray[np.int64]:
    """Tabulate `x^e` for every element x and every `e <= max_exponent`, with `0^0 = 1`.

    Parameters:
        field: The field.
        max_exponent: Largest exponent.

    Returns:
        An array of shape (max_exponent + 1, q).
    """
    table = np.zeros((max_exponent + 1, field.q), dtype=np.int64)
    table[0] = 1
    for exponent in range(1, max_exponent + 1):
        table[exponent] = field.mul_table[table[exponent - 1], np.arange(field.q)]
    table.setflags(write=False)
    return table


def evaluate(poly: Polynomial, points: NDArray[np.int64]) -> NDArray[np.int64]:
    """Evaluate a polynomial at many points at once.

    Parameters:
        poly: The polynomial.
        points: Coordinates, shape (count, nvars).

    Raises:
        DegreeError: When the points do not have one coordinate per variable.

    Returns:
        The values, shape (count,).
    """
    points = np.asarray(points, dtype=np.int64)
    if points.ndim != 2 or points.shape[1] != poly.nvars:  # noqa: PLR2004
        raise DegreeError(f"Expected points with {poly.nvars} coordinates, got shape {points.shape}")
    field = poly.field
    result = np.zeros(points.shape[0], dtype=np.int64)
    if poly.is_zero:
        return result
    powers = power_table(field, max(max(monomial) for monomial, _ in poly.terms))
    for monomial, coefficient in poly.terms:
        values = np.full(points.shape[0], coefficient, dtype=np.int64)
        for index, exponent in enumerate(monomial):
            if exponent:
                values = field.mul_table[values, powers[exponent, points[:, index]]]
        result = field.add_table[result, values]
    return result


def eval_affine(g: Polynomial, point: Sequence[int]) -> FieldElement:
    """Evaluate a polynomial at one affine point.

    Parameters:
        g: The polynomial, in n variables.
        point: The n coordinates.

    Returns:
        The value `g(point)`.
    """
    return int(evaluate(g, np.array([point], dtype=np.int64))[0])


def eval_projective(f: Polynomial, point: Sequence[int]) -> FieldElement:
    """Evaluate a homogeneous polynomial at the given representative of a projective point.

    Parameters:
        f: A homogeneous polynomial in n + 1 variables.
        point: Homogeneous coordinates, normally the standard representative.

    Raises:
        DegreeError: When f is not homogeneous.

    Returns:
        The value `f(point)`.
    """
    if not f.is_homogeneous():
        raise DegreeError(f"Polynomial {f} is not homogeneous")
    return int(evaluate(f, np.array([point], dtype=np.int64))[0])


def homogenize(g: Polynomial, degree: int) -> Polynomial:
    """Homogenize an affine polynomial with respect to a new variable X0.

    Parameters:
        g: A polynomial in `X1..Xn`.
        degree: The target degree D.

    Raises:
        DegreeError: When the degree of g exceeds D.

    Returns:
        The polynomial in `X0..Xn` where each term t of degree e becomes `X0^(D-e) * t`.
    """
    if g.degree > degree:
        raise DegreeError(f"Cannot homogenize a polynomial of degree {g.degree} to degree {degree}")
    return Polynomial.from_terms(
        g.field,
        g.nvars + 1,
        [((degree - sum(monomial), *monomial), coefficient) for monomial, coefficient in g.terms],
        offset=0,
    )


def dehomogenize(f: Polynomial) -> Polynomial:
    """Set X0 = 1 in a polynomial in `X0..Xn`.

    Parameters:
        f: The polynomial.

    Returns:
        The polynomial in `X1..Xn`.
    """
    return Polynomial.from_terms(f.field, f.nvars - 1, [(monomial[1:], coefficient) for monomial, coefficient in f.terms], offset=1)


def embed_affine(g: Polynomial, degree: int) -> Polynomial:
    """Embed an affine polynomial into the degree-d homogeneous polynomials, preserving codeword weight.

    The result is `X0^(d - deg g) * g^(h)`: it vanishes on the hyperplane X0 = 0
    and agrees with g on the chart X0 = 1.

    Parameters:
        g: A polynomial in `X1..Xn`, reduced below degree d.
        degree: The target degree d.

    Raises:
        DegreeError: When the reduced degree of g is at least d.

    Returns:
        A homogeneous polynomial of degree d in `X0..Xn`.
    """
    reduced = reduce_affine(g)
    if reduced.degree >= degree:
        raise DegreeError(f"Cannot embed a polynomial of degree {reduced.degree} into degree {degree}")
    x0 = Polynomial.variable(g.field, g.nvars + 1, 0)
    return x0 * homogenize(reduced, degree - 1)


def product_of_linear_forms(
    factors: Sequence[Sequence[int]],
    field: FieldSpec,
    nvars: int | None = None,
    *,
    offset: int = 0,
) -> Polynomial:
    """Expand a product of linear forms.

    Parameters:
        factors: Coefficient vectors `(c_0, ..., c_{nvars-1})` of the forms `sum(c_i X_{i+offset})`.
        field: The field.
        nvars: Number of variables, required when there are no factors.
        offset: Index of the first variable.

    Raises:
        DegreeError: When factors have different lengths, or no length is known.

    Returns:
        The expanded product; the constant 1 for an empty list.
    """
    if nvars is None:
        if not factors:
            raise DegreeError("Number of variables unknown for an empty product")
        nvars = len(factors[0])
    result = Polynomial.constant(field, nvars, 1, offset)
    for factor in factors:
        if len(factor) != nvars:
            raise DegreeError(f"Linear form {tuple(factor)} does not have {nvars} coefficients")
        form = Polynomial.from_terms(
            field,
            nvars,
            [(tuple(int(position == index) for position in range(nvars)), coefficient) for index, coefficient in enumerate(factor)],
            offset,
        )
        result = result * form
    return result

"""Affine and projective spaces over a finite field.

Point orderings are frozen so that codeword vectors are reproducible:

- affine points are listed lexicographically, first coordinate most significant;
- projective points use their standard representative (first nonzero coordinate equal to 1),
  grouped by the position of that leading 1 (position 0 first), lexicographically within a group.

Hyperplanes are listed like points, through their normalized coefficient vectors.
Sets of points are boolean masks over the frozen point ordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import comb
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence, Union

import numpy as np

from prm_weights.exceptions import BudgetExceededError, ParameterError
from prm_weights.gf import FieldSpec, matmul, row_reduce
from prm_weights.logger import get_logger

if TYPE_CHECKING:
    from numpy.typing import NDArray

    PointsLike = Union[NDArray[np.bool_], Iterable[Sequence[int]]]

_logger = get_logger(__name__)

AffinePoint = tuple[int, ...]
"""Coordinates of a point of the affine space, length n."""

ProjectivePoint = tuple[int, ...]
"""Standard representative of a point of the projective space, length n + 1."""


def grid(q: int, length: int) -> NDArray[np.int64]:
    """List all vectors of a given length over `0..q-1` in lexicographic order.

    Parameters:
        q: The alphabet size.
        length: The vector length.

    Returns:
        An array of shape (q^length, length).
    """
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(product(range(q), repeat=length)), dtype=np.int64)


@dataclass(frozen=True)
class Hyperplane:
    """A hyperplane, given by normalized dual coordinates."""

    coeffs: tuple[int, ...]
    """Coefficients c such that a point P lies on the hyperplane iff sum(c_i P_i) = 0."""

    def contains(self, field: FieldSpec, point: Sequence[int]) -> bool:
        """Tell whether a point lies on the hyperplane.

        Parameters:
            field: The field.
            point: Homogeneous coordinates (any representative).

        Returns:
            Whether the dot product vanishes.
        """
        total = 0
        for coeff, coord in zip(self.coeffs, point):
            total = field.add(total, field.mul(coeff, coord))
        return total == 0

    def __str__(self) -> str:
        terms = [f"X{index}" if coeff == 1 else f"{coeff}*X{index}" for index, coeff in enumerate(self.coeffs) if coeff]
        return " + ".join(terms) + " = 0"


@dataclass(frozen=True)
class LinearSubspace:
    """A projective linear subspace, given by its canonical basis."""

    basis: tuple[tuple[int, ...], ...]
    """Rows of the reduced row-echelon basis."""

    @property
    def dimension(self) -> int:
        """Projective dimension (number of basis rows minus one)."""
        return len(self.basis) - 1


@dataclass(frozen=True)
class ProjectiveSpace:
    """The projective space P^n over a field, with its frozen point and hyperplane orderings."""

    field: FieldSpec
    """The base field."""
    n: int
    """The projective dimension."""

    @property
    def size(self) -> int:
        """Number of points, q^n + ... + q + 1."""
        return (self.field.q ** (self.n + 1) - 1) // (self.field.q - 1)

    @cached_property
    def points(self) -> NDArray[np.int64]:
        """Standard representatives, shape (N, n + 1)."""
        q, n = self.field.q, self.n
        blocks = []
        for lead in range(n + 1):
            tail = grid(q, n - lead)
            block = np.zeros((tail.shape[0], n + 1), dtype=np.int64)
            block[:, lead] = 1
            block[:, lead + 1 :] = tail
            blocks.append(block)
        return np.concatenate(blocks)

    @cached_property
    def lookup(self) -> NDArray[np.int64]:
        """Point index of every nonzero vector (by its base-q code), -1 for the zero vector."""
        table = np.full(self.field.q ** (self.n + 1), -1, dtype=np.int64)
        indices = np.arange(self.size)
        for scalar in self.field.nonzero():
            scaled = self.field.mul_table[scalar, self.points]
            table[self.encode(scaled)] = indices
        return table

    @cached_property
    def incidence(self) -> NDArray[np.bool_]:
        """Incidence matrix, shape (hyperplanes, points): entry is true when the point lies on the hyperplane."""
        field, coeffs = self.field, self.points
        incidence = np.zeros((self.size, self.size), dtype=np.bool_)
        for start in range(0, self.size, 256):
            block = coeffs[start : start + 256]
            dots = np.zeros((block.shape[0], self.size), dtype=np.int64)
            for index in range(self.n + 1):
                dots = field.add_table[dots, field.mul_table[block[:, index, None], self.points[None, :, index]]]
            incidence[start : start + 256] = dots == 0
        return incidence

    def encode(self, vectors: NDArray[np.int64]) -> NDArray[np.int64]:
        """Encode vectors as base-q integers, first coordinate most significant.

        Parameters:
            vectors: Array of shape (..., n + 1).

        Returns:
            The codes, shape (...).
        """
        weights = self.field.q ** np.arange(self.n, -1, -1, dtype=np.int64)
        return vectors @ weights

    def index_of(self, vectors: NDArray[np.int64]) -> NDArray[np.int64]:
        """Return the point indices of nonzero vectors, whatever their representative.

        Parameters:
            vectors: Array of shape (..., n + 1).

        Returns:
            Point indices, -1 for zero vectors.
        """
        return self.lookup[self.encode(vectors)]

    def mask(self, points: PointsLike) -> NDArray[np.bool_]:
        """Convert a collection of points into a boolean mask.

        Parameters:
            points: A mask (returned as is) or an iterable of coordinate vectors.

        Returns:
            A boolean mask over the point ordering.
        """
        if isinstance(points, np.ndarray) and points.dtype == np.bool_:
            return points
        vectors = np.array(list(points), dtype=np.int64).reshape(-1, self.n + 1)
        result = np.zeros(self.size, dtype=np.bool_)
        if vectors.shape[0]:
            indices = self.index_of(vectors)
            if (indices < 0).any():
                raise ParameterError("The zero vector is not a projective point")
            result[indices] = True
        return result

    def subspace_mask(self, basis: NDArray[np.int64]) -> NDArray[np.bool_]:
        """Return the points of the subspace spanned by the rows of a basis.

        Parameters:
            basis: A full-rank matrix of shape (r + 1, n + 1).

        Returns:
            A boolean mask over the point ordering.
        """
        coefficients = grid(self.field.q, basis.shape[0])[1:]
        vectors = matmul(self.field, coefficients, basis)
        result = np.zeros(self.size, dtype=np.bool_)
        result[self.index_of(vectors)] = True
        return result


@lru_cache(maxsize=None)
def projective_space(field: FieldSpec, n: int) -> ProjectiveSpace:
    """Return the (cached) projective space P^n over a field.

    Parameters:
        field: The field.
        n: The dimension, at least 1.

    Raises:
        ParameterError: When n < 1.

    Returns:
        The projective space.
    """
    if n < 1:
        raise ParameterError(f"Dimension must be at least 1, got {n}")
    return ProjectiveSpace(field, n)


@lru_cache(maxsize=None)
def affine_points(field: FieldSpec, n: int) -> NDArray[np.int64]:
    """Return the points of A^n as an array of shape (q^n, n), in lexicographic order.

    Parameters:
        field: The field.
        n: The dimension, at least 1.

    Raises:
        ParameterError: When n < 1.

    Returns:
        The points.
    """
    if n < 1:
        raise ParameterError(f"Dimension must be at least 1, got {n}")
    points = grid(field.q, n)
    points.setflags(write=False)
    return points


def enumerate_affine(field: FieldSpec, n: int) -> list[AffinePoint]:
    """List the points of the affine space A^n.

    Parameters:
        field: The field.
        n: The dimension.

    Returns:
        The q^n points in lexicographic order, the origin first.
    """
    return [tuple(point) for point in affine_points(field, n).tolist()]


def enumerate_projective(field: FieldSpec, n: int) -> list[ProjectivePoint]:
    """List the points of the projective space P^n.

    Parameters:
        field: The field.
        n: The dimension.

    Returns:
        The q^n + ... + q + 1 standard representatives in the frozen order.
    """
    return [tuple(point) for point in projective_space(field, n).points.tolist()]


def enumerate_hyperplanes(field: FieldSpec, n: int) -> list[Hyperplane]:
    """List the hyperplanes of P^n, in the same order as points.

    Parameters:
        field: The field.
        n: The dimension.

    Returns:
        The hyperplanes.
    """
    return [Hyperplane(point) for point in enumerate_projective(field, n)]


def normalize(raw: Sequence[int], field: FieldSpec) -> ProjectivePoint:
    """Scale a nonzero vector so that its first nonzero entry is 1.

    Parameters:
        raw: Homogeneous coordinates.
        field: The field.

    Raises:
        ParameterError: When the vector is zero.

    Returns:
        The standard representative.
    """
    for value in raw:
        if value:
            factor = field.inv(value)
            return tuple(field.mul(factor, coord) for coord in raw)
    raise ParameterError("The zero vector is not a projective point")


def find_avoiding_hyperplane(support: PointsLike, field: FieldSpec, n: int) -> Hyperplane | None:
    """Find a hyperplane disjoint from a set of points.

    Parameters:
        support: The set of points.
        field: The field.
        n: The dimension.

    Returns:
        The first hyperplane (in enumeration order) missing every point, or `None`.
    """
    space = projective_space(field, n)
    mask = space.mask(support)
    hits = space.incidence[:, mask].any(axis=1)
    free = np.flatnonzero(~hits)
    if free.size == 0:
        return None
    return Hyperplane(tuple(space.points[free[0]].tolist()))


def count_subspaces(field: FieldSpec, n: int, r: int) -> int:
    """Count the projective subspaces of dimension r in P^n.

    Parameters:
        field: The field.
        n: The ambient dimension.
        r: The subspace dimension.

    Returns:
        The Gaussian binomial coefficient [n + 1, r + 1]_q.
    """
    q, numerator, denominator = field.q, 1, 1
    for index in range(r + 1):
        numerator *= q ** (n + 1 - index) - 1
        denominator *= q ** (index + 1) - 1
    return numerator // denominator


def iter_subspace_bases(field: FieldSpec, n: int, r: int) -> Iterator[NDArray[np.int64]]:
    """Enumerate the canonical bases of all r-dimensional subspaces of P^n.

    Bases are in reduced row-echelon form, listed by pivot columns (lexicographically),
    then by free entries (lexicographically).

    Parameters:
        field: The field.
        n: The ambient dimension.
        r: The subspace dimension, `0 <= r <= n`.

    Yields:
        Basis matrices of shape (r + 1, n + 1).
    """
    width = n + 1
    for pivots in combinations(range(width), r + 1):
        free = [(row, column) for row, pivot in enumerate(pivots) for column in range(pivot + 1, width) if column not in pivots]
        for values in product(range(field.q), repeat=len(free)):
            basis = np.zeros((r + 1, width), dtype=np.int64)
            basis[np.arange(r + 1), pivots] = 1
            for (row, column), value in zip(free, values):
                basis[row, column] = value
            yield basis


def _check_dimension(n: int, r: int) -> None:
    if not 0 <= r <= n - 1:
        raise ParameterError(f"Subspace dimension must be in 0..{n - 1}, got {r}")


def subspace_masks(field: FieldSpec, n: int, r: int, *, budget: int = 10**6) -> NDArray[np.bool_]:
    """Return the point masks of every r-dimensional subspace, in canonical order.

    Parameters:
        field: The field.
        n: The ambient dimension.
        r: The subspace dimension.
        budget: Maximum number of subspaces.

    Raises:
        BudgetExceededError: When there are more subspaces than the budget allows.

    Returns:
        A boolean array of shape (subspaces, points).
    """
    _check_dimension(n, r)
    total = count_subspaces(field, n, r)
    if total > budget:
        raise BudgetExceededError(f"{total} subspaces of dimension {r} exceed the budget of {budget}")
    space = projective_space(field, n)
    return np.array([space.subspace_mask(basis) for basis in iter_subspace_bases(field, n, r)], dtype=np.bool_)


def find_avoiding_subspace(
    support: PointsLike,
    r: int,
    field: FieldSpec,
    n: int,
    *,
    budget: int = 10**6,
) -> LinearSubspace | None:
    """Find a linear subspace of a given dimension disjoint from a set of points.

    Parameters:
        support: The set of points.
        r: The subspace dimension, `0 <= r <= n - 1`.
        field: The field.
        n: The ambient dimension.
        budget: Maximum number of subspaces to enumerate.

    Raises:
        ParameterError: When r is out of range.
        BudgetExceededError: When there are more subspaces than the budget allows.

    Returns:
        The first subspace in canonical order missing every point, or `None`.
    """
    _check_dimension(n, r)
    total = count_subspaces(field, n, r)
    if total > budget:
        raise BudgetExceededError(f"{total} subspaces of dimension {r} exceed the budget of {budget}")
    space = projective_space(field, n)
    mask = space.mask(support)
    if r == n - 1:
        hyperplane = find_avoiding_hyperplane(mask, field, n)
        if hyperplane is None:
            return None
        rows = np.array([hyperplane.coeffs])
        # The hyperplane's points are the kernel of its coefficient row.
        kernel = _kernel_basis(field, rows)
        return LinearSubspace(tuple(tuple(row) for row in kernel.tolist()))
    for basis in iter_subspace_bases(field, n, r):
        if not (space.subspace_mask(basis) & mask).any():
            return LinearSubspace(tuple(tuple(row) for row in basis.tolist()))
    return None


def _kernel_basis(field: FieldSpec, rows: NDArray[np.int64]) -> NDArray[np.int64]:
    # Kernel basis in reduced row-echelon form.
    reduced, pivots = row_reduce(field, rows)
    width = rows.shape[1]
    free = [column for column in range(width) if column not in pivots]
    kernel = np.zeros((len(free), width), dtype=np.int64)
    for index, column in enumerate(free):
        kernel[index, column] = 1
        for row, pivot in enumerate(pivots):
            kernel[index, pivot] = field.neg(int(reduced[row, column]))
    basis, _ = row_reduce(field, kernel)
    return basis


def best_avoiding_subspace(
    support: PointsLike,
    field: FieldSpec,
    n: int,
    *,
    min_dimension: int = 0,
    budget: int = 10**6,
) -> LinearSubspace | None:
    """Find an avoiding subspace of the largest possible dimension.

    Parameters:
        support: The set of points.
        field: The field.
        n: The ambient dimension.
        min_dimension: Smallest dimension worth reporting.
        budget: Maximum number of subspaces to enumerate per dimension.

    Returns:
        An avoiding subspace of the largest dimension `r <= n - 1` found, or `None`.
    """
    for r in range(n - 1, min_dimension - 1, -1):
        subspace = find_avoiding_subspace(support, r, field, n, budget=budget)
        if subspace is not None:
            return subspace
    return None


def is_hyperplane_union(
    zero_set: PointsLike,
    max_planes: int,
    field: FieldSpec,
    n: int,
    *,
    budget: int = 10**6,
) -> list[Hyperplane] | None:
    """Decompose a set of points as a union of at most `max_planes` hyperplanes.

    Only hyperplanes fully contained in the set are candidates.

    Parameters:
        zero_set: The set of points.
        max_planes: Maximum number of hyperplanes, at least 1.
        field: The field.
        n: The dimension.
        budget: Maximum number of hyperplane combinations to try.

    Raises:
        ParameterError: When `max_planes < 1`.
        BudgetExceededError: When there are too many combinations of candidates.

    Returns:
        The hyperplanes of the first decomposition found (fewest hyperplanes first), or `None`.
    """
    if max_planes < 1:
        raise ParameterError(f"At least one hyperplane is needed, got {max_planes}")
    space = projective_space(field, n)
    mask = space.mask(zero_set)
    if not mask.any():
        return []
    contained = ~(space.incidence & ~mask).any(axis=1)
    candidates = np.flatnonzero(contained)
    _logger.debug("%s candidate hyperplanes inside a set of %s points", candidates.size, int(mask.sum()))
    if candidates.size == 0 or not np.array_equal(space.incidence[candidates].any(axis=0), mask):
        return None
    sizes = range(1, min(max_planes, candidates.size) + 1)
    total = sum(comb(int(candidates.size), size) for size in sizes)
    if total > budget:
        raise BudgetExceededError(f"{total} hyperplane combinations exceed the budget of {budget}")
    for size in sizes:
        for chosen in combinations(candidates.tolist(), size):
            if np.array_equal(space.incidence[list(chosen)].any(axis=0), mask):
                return [Hyperplane(tuple(space.points[index].tolist())) for index in chosen]
    return None

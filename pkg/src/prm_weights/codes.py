"""Affine and projective Reed-Muller codes as evaluation codes.

A code is the row space of the evaluations of its spanning monomials.
The dimension is the rank of that evaluation matrix, and the exhaustive oracle
enumerates every message against the reduced generator matrix.

Enumeration works over the prime field: each generator row is expanded into m rows
of base-p digits, so that adding codewords is a digit-wise addition modulo p.
Messages are split in a "low" part, whose codewords are tabulated once,
and a "high" part, added block by block with vectorized numpy operations.
"""

from __future__ import annotations

import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache, partial
from typing import TYPE_CHECKING, Iterator, Sequence

import numpy as np

from prm_weights.exceptions import BudgetExceededError, DegreeError, FieldError, ParameterError
from prm_weights.gf import FieldSpec, matmul, row_reduce
from prm_weights.logger import get_logger
from prm_weights.poly import (
    Monomial,
    Polynomial,
    dehomogenize,
    embed_affine,
    evaluate,
    power_table,
    product_of_linear_forms,
    reduce_affine,
)
from prm_weights.space import affine_points, grid, projective_space
from prm_weights.weights import decompose_affine, w1_prm, w1_rm

if TYPE_CHECKING:
    from numpy.typing import NDArray

_logger = get_logger(__name__)

LOW_TABLE_LIMIT = 1 << 21
"""Largest number of digits in the table of low-part codewords."""

BLOCK_LIMIT = 1 << 22
"""Largest number of digits materialized at once by the enumeration."""


class Family(str, Enum):
    """Code families."""

    RM = "RM"
    """Generalized (affine) Reed-Muller codes."""
    PRM = "PRM"
    """Projective Reed-Muller codes."""


@dataclass(frozen=True)
class CodeSpec:
    """Parameters of a code."""

    family: Family
    """The code family."""
    field: FieldSpec
    """The base field."""
    n: int
    """Dimension of the ambient space."""
    d: int
    """Order (RM) or degree (PRM)."""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"Dimension must be at least 1, got {self.n}")
        if self.d < 1:
            raise ParameterError(f"Degree must be at least 1, got {self.d}")

    def __str__(self) -> str:
        return f"{self.family.value}({self.n}, {self.d}) over {self.field}"

    @property
    def q(self) -> int:
        """The field order."""
        return self.field.q

    @property
    def nvars(self) -> int:
        """Number of polynomial variables."""
        return self.n if self.family is Family.RM else self.n + 1

    @property
    def offset(self) -> int:
        """Index of the first variable: `X1` for affine codes, `X0` for projective ones."""
        return 1 if self.family is Family.RM else 0

    @property
    def points(self) -> NDArray[np.int64]:
        """Evaluation points in the frozen order."""
        if self.family is Family.RM:
            return affine_points(self.field, self.n)
        return projective_space(self.field, self.n).points

    @property
    def length(self) -> int:
        """Code length."""
        return int(self.points.shape[0])


@dataclass
class Codeword:
    """An evaluation vector."""

    values: NDArray[np.int64]
    """Values over the frozen point ordering."""

    @property
    def mask(self) -> NDArray[np.bool_]:
        """Support as a boolean mask."""
        return self.values != 0

    @property
    def support(self) -> list[int]:
        """Indices of the points where the codeword does not vanish."""
        return np.flatnonzero(self.values).tolist()

    @property
    def weight(self) -> int:
        """Hamming weight."""
        return int(np.count_nonzero(self.values))


def _exponent_vectors(nvars: int, total: int, cap: int) -> Iterator[Monomial]:
    # Vectors with the given sum and entries <= cap, in lexicographic order.
    if nvars == 1:
        if total <= cap:
            yield (total,)
        return
    for head in range(min(total, cap) + 1):
        for tail in _exponent_vectors(nvars - 1, total - head, cap):
            yield (head, *tail)


def monomial_basis(cs: CodeSpec) -> list[Monomial]:
    """List the monomials spanning a code, in lexicographic order of exponent vectors.

    Affine codes use the reduced monomials of degree at most d,
    projective codes all the monomials of degree exactly d.

    Parameters:
        cs: The code.

    Returns:
        Exponent vectors.
    """
    if cs.family is Family.RM:
        cap = cs.q - 1
        monomials = [vector for total in range(cs.d + 1) for vector in _exponent_vectors(cs.n, total, cap)]
        return sorted(monomials)
    return list(_exponent_vectors(cs.n + 1, cs.d, cs.d))


def encode(cs: CodeSpec, poly: Polynomial) -> Codeword:
    """Evaluate a polynomial over the points of a code.

    Parameters:
        cs: The code.
        poly: An affine polynomial in n variables (RM),
            or a homogeneous polynomial of degree d in n + 1 variables (PRM).

    Raises:
        FieldError: When the polynomial is over another field.
        DegreeError: When the polynomial does not fit the code.

    Returns:
        The codeword.
    """
    if poly.field != cs.field:
        raise FieldError(f"Polynomial over {poly.field} cannot be evaluated in {cs}")
    if poly.nvars != cs.nvars:
        raise DegreeError(f"{cs} expects polynomials in {cs.nvars} variables, got {poly.nvars}")
    if cs.family is Family.RM:
        poly = reduce_affine(poly)
        if poly.degree > cs.d:
            raise DegreeError(f"Polynomial {poly} has degree {poly.degree} > {cs.d}")
    elif not poly.is_homogeneous(cs.d):
        raise DegreeError(f"Polynomial {poly} is not homogeneous of degree {cs.d}")
    return Codeword(evaluate(poly, cs.points))


@dataclass(frozen=True)
class EvaluationMatrix:
    """Evaluations of the spanning monomials and the generator matrix derived from them."""

    monomials: tuple[Monomial, ...]
    """Spanning monomials, one per row."""
    rows: NDArray[np.int64]
    """Evaluations, shape (monomials, length)."""
    generator: NDArray[np.int64]
    """Reduced row-echelon generator matrix, shape (dimension, length)."""
    transform: NDArray[np.int64]
    """Coefficients expressing each generator row as a combination of monomials."""

    @property
    def rank(self) -> int:
        """The code dimension."""
        return int(self.generator.shape[0])


@lru_cache(maxsize=32)
def evaluation_matrix(cs: CodeSpec) -> EvaluationMatrix:
    """Build the evaluation matrix of a code and reduce it.

    Parameters:
        cs: The code.

    Returns:
        The evaluation matrix, generator matrix and transform.
    """
    monomials = monomial_basis(cs)
    field, points = cs.field, cs.points
    powers = power_table(field, max(max(monomial) for monomial in monomials))
    rows = np.ones((len(monomials), points.shape[0]), dtype=np.int64)
    for row, monomial in enumerate(monomials):
        for index, exponent in enumerate(monomial):
            if exponent:
                rows[row] = field.mul_table[rows[row], powers[exponent, points[:, index]]]
    augmented = np.concatenate([rows, np.eye(len(monomials), dtype=np.int64)], axis=1)
    reduced, _ = row_reduce(field, augmented, pivot_columns=points.shape[0])
    length = points.shape[0]
    _logger.debug("%s: %s monomials, rank %s", cs, len(monomials), reduced.shape[0])
    for array in (rows, reduced):
        array.setflags(write=False)
    return EvaluationMatrix(tuple(monomials), rows, reduced[:, :length], reduced[:, length:])


def dimension(cs: CodeSpec) -> int:
    """Return the dimension of a code, as the rank of its evaluation matrix.

    Parameters:
        cs: The code.

    Returns:
        The dimension.
    """
    return evaluation_matrix(cs).rank


def message_polynomial(cs: CodeSpec, message: Sequence[int]) -> Polynomial:
    """Return the polynomial whose codeword is `message @ generator`.

    Parameters:
        cs: The code.
        message: One field element per generator row.

    Returns:
        The polynomial, with variables named after the code family.
    """
    matrix = evaluation_matrix(cs)
    vector = np.array([message], dtype=np.int64)
    coefficients = matmul(cs.field, vector, matrix.transform)[0]
    terms = [(monomial, int(value)) for monomial, value in zip(matrix.monomials, coefficients) if value]
    return Polynomial.from_terms(cs.field, cs.nvars, terms, cs.offset)


@dataclass(frozen=True)
class _Plan:
    # Read-only description of an enumeration, shipped to workers.
    p: int
    m: int
    length: int
    expanded: NDArray[np.int64]
    leads: NDArray[np.int64]

    @property
    def width(self) -> int:
        return self.length * self.m

    def tail(self, lead: int | None) -> NDArray[np.int64]:
        start = 0 if lead is None else (lead + 1) * self.m
        return self.expanded[start:]

    def base(self, lead: int | None) -> NDArray[np.int64]:
        if lead is None:
            return np.zeros(self.width, dtype=np.int64)
        return self.leads[lead]

    def low_width(self, lead: int | None) -> int:
        rows = self.tail(lead).shape[0]
        low = 0
        while low < rows and self.p ** (low + 1) * self.width <= LOW_TABLE_LIMIT:
            low += 1
        return low

    def high_count(self, lead: int | None) -> int:
        return self.p ** (self.tail(lead).shape[0] - self.low_width(lead))

    def block_size(self, lead: int | None) -> int:
        return max(1, BLOCK_LIMIT // (self.p ** self.low_width(lead) * self.width))


def _digits(values: NDArray[np.int64], base: int, width: int) -> NDArray[np.int64]:
    # Most significant digit first, matching the lexicographic order of `grid`.
    powers = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (values[:, None] // powers[None, :]) % base


def _make_plan(cs: CodeSpec) -> _Plan:
    field = cs.field
    generator = evaluation_matrix(cs).generator
    dim, length = generator.shape
    expanded = np.empty((dim * field.m, length * field.m), dtype=np.int64)
    for row in range(dim):
        for power in range(field.m):
            scaled = field.mul_table[field.p**power, generator[row]]
            expanded[row * field.m + power] = field.digits[scaled].reshape(-1)
    leads = field.digits[generator].reshape(dim, -1)
    return _Plan(field.p, field.m, length, expanded, leads)


def _iter_blocks(plan: _Plan, lead: int | None, start: int, stop: int) -> Iterator[tuple[int, NDArray[np.bool_]]]:
    # Yield (first high index, supports of shape (high, low, length)).
    tail = plan.tail(lead)
    low_width = plan.low_width(lead)
    low_rows, high_rows = tail[:low_width], tail[low_width:]
    low = (grid(plan.p, low_width) @ low_rows) % plan.p
    base = plan.base(lead)
    step = plan.block_size(lead)
    for block_start in range(start, stop, step):
        block_stop = min(block_start + step, stop)
        high = _digits(np.arange(block_start, block_stop, dtype=np.int64), plan.p, high_rows.shape[0])
        offsets = (base + high @ high_rows) % plan.p
        codewords = (low[None, :, :] + offsets[:, None, :]) % plan.p
        supports = codewords.reshape(block_stop - block_start, low.shape[0], plan.length, plan.m).any(axis=3)
        yield block_start, supports


@dataclass
class _TaskResult:
    histogram: NDArray[np.int64]
    firsts: dict[int, tuple[int | None, int, int]]


def _run_task(plan: _Plan, task: tuple[int | None, int, int]) -> _TaskResult:
    lead, start, stop = task
    histogram = np.zeros(plan.length + 1, dtype=np.int64)
    firsts: dict[int, tuple[int | None, int, int]] = {}
    for block_start, supports in _iter_blocks(plan, lead, start, stop):
        weights = supports.sum(axis=2)
        histogram += np.bincount(weights.ravel(), minlength=plan.length + 1)
        values, positions = np.unique(weights.ravel(), return_index=True)
        for value, position in zip(values.tolist(), positions.tolist()):
            if value not in firsts:
                high, low = divmod(position, weights.shape[1])
                firsts[value] = (lead, block_start + high, low)
    return _TaskResult(histogram, firsts)


def _tasks(plan: _Plan, dim: int, *, scalar_skip: bool, threads: int) -> list[tuple[int | None, int, int]]:
    leads: list[int | None] = list(range(dim)) if scalar_skip else [None]
    tasks: list[tuple[int | None, int, int]] = []
    for lead in leads:
        count = plan.high_count(lead)
        size = max(plan.block_size(lead), -(-count // (4 * threads)))
        tasks.extend((lead, start, min(start + size, count)) for start in range(0, count, size))
    return tasks


def _message(plan: _Plan, dim: int, position: tuple[int | None, int, int]) -> tuple[int, ...]:
    lead, high, low = position
    low_width = plan.low_width(lead)
    rows = plan.tail(lead).shape[0]
    digits = np.concatenate(
        [
            _digits(np.array([low], dtype=np.int64), plan.p, low_width)[0],
            _digits(np.array([high], dtype=np.int64), plan.p, rows - low_width)[0],
        ],
    )
    message = [0] * dim
    start = 0
    if lead is not None:
        message[lead] = 1
        start = lead + 1
    for index, digit in enumerate(digits.tolist()):
        message[start + index // plan.m] += digit * plan.p ** (index % plan.m)
    return tuple(message)


@dataclass
class LowWeights:
    """Result of an exhaustive enumeration."""

    code: CodeSpec
    """The code."""
    dimension: int
    """Code dimension."""
    w1: int
    """Minimum nonzero weight."""
    w2: int | None
    """Second smallest nonzero weight, `None` when every nonzero codeword has the same weight."""
    spectrum: dict[int, int]
    """Number of codewords of each nonzero weight."""
    witnesses: dict[int, tuple[int, ...]] = field(default_factory=dict)
    """Message vector of the first codeword found with each of the two smallest weights."""
    visited: int = 0
    """Number of codewords enumerated."""
    scalar_skip: bool = True
    """Whether one codeword per line of scalar multiples was visited."""

    def polynomial(self, weight: int) -> Polynomial:
        """Return the polynomial of the witness codeword of a weight.

        Parameters:
            weight: The weight, `w1` or `w2`.

        Returns:
            The polynomial.
        """
        return message_polynomial(self.code, self.witnesses[weight])


def _check_budget(cs: CodeSpec, dim: int, budget: int) -> None:
    count = cs.q**dim
    if count > budget:
        raise BudgetExceededError(f"{cs} has {count} codewords, more than the budget of {budget}")


def exhaustive_low_weights(
    cs: CodeSpec,
    *,
    budget: int = 2**24,
    threads: int = 1,
    scalar_skip: bool = True,
    time_limit: float | None = None,
) -> LowWeights:
    """Enumerate every codeword and return the two smallest nonzero weights.

    Parameters:
        cs: The code.
        budget: Maximum number of codewords, `q^dim`.
        threads: Number of worker processes.
        scalar_skip: Visit one codeword per line of scalar multiples
            (the one whose first nonzero message coordinate is 1).
        time_limit: Wall-clock cap in seconds.

    Raises:
        BudgetExceededError: When the code is too large or the time limit is reached.

    Returns:
        The weights, spectrum and witness messages.
    """
    dim = dimension(cs)
    _check_budget(cs, dim, budget)
    plan = _make_plan(cs)
    tasks = _tasks(plan, dim, scalar_skip=scalar_skip, threads=threads)
    _logger.debug("Enumerating %s: dimension %s, %s tasks on %s workers", cs, dim, len(tasks), threads)
    started = time.monotonic()
    histogram = np.zeros(plan.length + 1, dtype=np.int64)
    firsts: dict[int, tuple[int | None, int, int]] = {}

    def merge(results: Iterator[_TaskResult]) -> None:
        nonlocal histogram
        for result in results:
            histogram = histogram + result.histogram
            for weight, position in result.firsts.items():
                firsts.setdefault(weight, position)
            if time_limit is not None and time.monotonic() - started > time_limit:
                raise BudgetExceededError(f"Enumeration of {cs} exceeded the time limit of {time_limit}s")

    if threads > 1:
        context = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=threads, mp_context=context) as executor:
            try:
                merge(executor.map(partial(_run_task, plan), tasks))
            except BudgetExceededError:
                executor.shutdown(wait=False, cancel_futures=True)
                raise
    else:
        merge(_run_task(plan, task) for task in tasks)

    multiplier = cs.q - 1 if scalar_skip else 1
    spectrum = {weight: int(count) * multiplier for weight, count in enumerate(histogram.tolist()) if weight and count}
    present = sorted(spectrum)
    w1 = present[0]
    w2 = present[1] if len(present) > 1 else None
    witnesses = {weight: _message(plan, dim, firsts[weight]) for weight in present[:2]}
    _logger.info("%s: W1 = %s, W2 = %s", cs, w1, w2)
    return LowWeights(
        code=cs,
        dimension=dim,
        w1=w1,
        w2=w2,
        spectrum=spectrum,
        witnesses=witnesses,
        visited=int(histogram.sum()),
        scalar_skip=scalar_skip,
    )


def iter_supports(cs: CodeSpec, *, budget: int = 2**24, scalar_skip: bool = True) -> Iterator[NDArray[np.bool_]]:
    """Stream the supports of the nonzero codewords, block by block.

    Parameters:
        cs: The code.
        budget: Maximum number of codewords, `q^dim`.
        scalar_skip: Yield one support per line of scalar multiples.

    Raises:
        BudgetExceededError: When the code is too large.

    Yields:
        Boolean arrays of shape (codewords, length).
    """
    dim = dimension(cs)
    _check_budget(cs, dim, budget)
    plan = _make_plan(cs)
    for lead, start, stop in _tasks(plan, dim, scalar_skip=scalar_skip, threads=1):
        for _, supports in _iter_blocks(plan, lead, start, stop):
            flat = supports.reshape(-1, plan.length)
            if lead is None:
                flat = flat[flat.any(axis=1)]
            yield flat


STRATEGIES = ("products", "quadric", "embed", "combos")
"""Candidate generators of the randomized search."""


@dataclass
class SearchResult:
    """Best codeword found by a randomized search."""

    code: CodeSpec
    """The code."""
    floor: int
    """The minimum weight; only heavier codewords are kept."""
    weight: int | None = None
    """Smallest weight found above the floor."""
    polynomial: Polynomial | None = None
    """A polynomial of that weight."""
    strategy: str | None = None
    """The generator that produced it."""
    samples: int = 0
    """Number of candidates evaluated."""
    seed: int = 0
    """Seed of the random generator."""


class _CandidateGenerator:
    # Homogeneous candidates of degree `degree` in n + 1 variables.

    def __init__(self, field: FieldSpec, n: int, degree: int, rng: np.random.Generator) -> None:
        self.field = field
        self.n = n
        self.degree = degree
        self.rng = rng

    def form(self) -> NDArray[np.int64]:
        while True:
            vector = self.rng.integers(0, self.field.q, size=self.n + 1)
            if vector.any():
                return vector

    def products(self) -> Polynomial:
        return product_of_linear_forms([self.form() for _ in range(self.degree)], self.field, self.n + 1)

    def quadric(self) -> Polynomial:
        if self.degree < 2:  # noqa: PLR2004
            return self.products()
        quadratic = list(_exponent_vectors(self.n + 1, 2, 2))
        coefficients = self.rng.integers(0, self.field.q, size=len(quadratic))
        form = Polynomial.from_terms(self.field, self.n + 1, zip(quadratic, coefficients.tolist()))
        return form * product_of_linear_forms([self.form() for _ in range(self.degree - 2)], self.field, self.n + 1)

    @cached_property
    def affine_monomials(self) -> list[Monomial]:
        return monomial_basis(CodeSpec(Family.RM, self.field, self.n, self.degree - 1)) if self.degree > 1 else [(0,) * self.n]

    def embed(self) -> Polynomial:
        monomials = self.affine_monomials
        count = int(self.rng.integers(1, len(monomials) + 1))
        chosen = self.rng.choice(len(monomials), size=count, replace=False)
        coefficients = self.rng.integers(1, self.field.q, size=count)
        terms = [(monomials[index], int(value)) for index, value in zip(chosen.tolist(), coefficients.tolist())]
        return embed_affine(Polynomial.from_terms(self.field, self.n, terms, offset=1), self.degree)

    @cached_property
    def minimum_forms(self) -> NDArray[np.int64]:
        return np.array(minimum_weight_forms(self.field, self.n, self.degree - 1, pad_to=self.degree), dtype=np.int64)

    def invertible(self) -> NDArray[np.int64]:
        while True:
            matrix = self.rng.integers(0, self.field.q, size=(self.n + 1, self.n + 1))
            if row_reduce(self.field, matrix)[0].shape[0] == self.n + 1:
                return matrix

    def combos(self) -> Polynomial:
        if self.degree < 2:  # noqa: PLR2004
            return self.products()
        result = Polynomial.zero(self.field, self.n + 1)
        for _ in range(int(self.rng.integers(2, 4))):
            forms = matmul(self.field, self.minimum_forms, self.invertible())
            scalar = int(self.rng.integers(1, self.field.q))
            result = result + product_of_linear_forms(forms.tolist(), self.field, self.n + 1).scale(scalar)
        return result


def minimum_weight_forms(field: FieldSpec, n: int, degree: int, *, pad_to: int | None = None) -> list[list[int]]:
    """Return linear forms in `X0..Xn` whose product, at X0 = 1, is a minimum-weight polynomial.

    The forms are `Xj - g X0` for j <= a and every nonzero g,
    then `X(a+1) - g X0` for the first b field elements g, where `degree = a(q-1) + b`.

    Parameters:
        field: The field.
        n: The dimension.
        degree: The affine degree; 0 gives no form, degrees above n(q-1) are clamped.
        pad_to: Append factors `X0` until this many forms.

    Returns:
        Coefficient vectors of length n + 1.
    """
    forms: list[list[int]] = []
    if degree >= 1:
        params = decompose_affine(field.q, n, degree)
        for variable in range(1, params.a + 1):
            for value in field.nonzero():
                forms.append(_shifted_variable(field, n, variable, value))
        forms.extend(_shifted_variable(field, n, params.a + 1, value) for value in field.elements()[: params.b])
    while pad_to is not None and len(forms) < pad_to:
        forms.append([1] + [0] * n)
    return forms


def _shifted_variable(field: FieldSpec, n: int, variable: int, value: int) -> list[int]:
    form = [0] * (n + 1)
    form[0] = field.neg(value)
    form[variable] = 1
    return form


def randomized_low_weight_search(
    cs: CodeSpec,
    strategies: Sequence[str] = STRATEGIES,
    *,
    samples: int = 2000,
    seed: int = 0,
    initial: Sequence[Polynomial] = (),
) -> SearchResult:
    """Sample structured codewords and keep the lightest one above the minimum weight.

    The result is an upper bound on the next-to-minimal weight, never a proof.

    Parameters:
        cs: The code. Projective codes need d >= 2.
        strategies: Candidate generators, among `products` (products of random linear forms),
            `quadric` (a random quadratic form times linear forms),
            `embed` (embedded random affine polynomials of degree d - 1),
            and `combos` (sums of transformed minimum-weight codewords).
        samples: Number of random candidates.
        seed: Seed of the random generator.
        initial: Polynomials evaluated before sampling, in the code's own variables.

    Raises:
        ParameterError: When a strategy is unknown.

    Returns:
        The best candidate found.
    """
    unknown = sorted(set(strategies) - set(STRATEGIES))
    if unknown or not strategies:
        raise ParameterError(f"Unknown strategies {unknown}, expected some of {', '.join(STRATEGIES)}")
    floor = w1_rm(cs.q, cs.n, cs.d) if cs.family is Family.RM else w1_prm(cs.q, cs.n, cs.d)
    result = SearchResult(cs, floor, samples=samples, seed=seed)
    generator = _CandidateGenerator(cs.field, cs.n, cs.d, np.random.default_rng(seed))

    def consider(poly: Polynomial, strategy: str) -> None:
        weight = encode(cs, poly).weight
        if weight > floor and (result.weight is None or weight < result.weight):
            result.weight, result.polynomial, result.strategy = weight, poly, strategy

    for poly in initial:
        consider(poly, "initial")
    for index in range(samples):
        strategy = strategies[index % len(strategies)]
        candidate = getattr(generator, strategy)()
        consider(dehomogenize(candidate) if cs.family is Family.RM else candidate, strategy)
    _logger.info("Randomized search on %s: best weight %s above %s (%s)", cs, result.weight, floor, result.strategy)
    return result

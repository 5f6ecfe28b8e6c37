"""Closed-form minimum and next-to-minimal weights.

Affine codes RM(n, d) use the writing `d = a(q-1) + b` with `0 < b <= q-1`,
projective codes PRM(n, d) use `d - 1 = k(q-1) + l` with `0 < l <= q-1`.
Every projective prediction carries a status and a source tag;
cells where the next-to-minimal weight is not known are reported with bounds, never with a guessed value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Any

import numpy as np

from prm_weights.exceptions import FieldError, ParameterError
from prm_weights.gf import prime_power
from prm_weights.logger import get_logger

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

_logger = get_logger(__name__)


class PredictionStatus(str, Enum):
    """How much is known about a predicted weight."""

    EXACT = "exact"
    """The value is proved."""
    UPPER_BOUND_ONLY = "upper_bound_only"
    """The value is attained by a codeword, but smaller weights are not excluded."""
    UNKNOWN = "unknown"
    """Only bounds are known."""


class Source(str, Enum):
    """Tags naming where a weight value comes from."""

    AFFINE_MINIMUM_DISTANCE = "affine-minimum-distance"
    AFFINE_SECOND_WEIGHT = "affine-second-weight"
    PROJECTIVE_MINIMUM_DISTANCE = "projective-minimum-distance"
    TOP_LAYER = "top-layer"
    AFFINE_COINCIDENCE = "affine-coincidence"
    QUADRIC_WITNESS = "quadric-witness"
    PLANE_CONIC = "plane-conic"
    BINARY_CLASSIFICATION = "binary-classification"
    OPEN_CASE = "open-case"
    HOMOGENIZED_EMBEDDING = "homogenized-embedding"


@dataclass(frozen=True)
class AffineParams:
    """The writing `d = a(q-1) + b` of an affine degree."""

    a: int
    """Number of full blocks of q - 1."""
    b: int
    """Remainder, `0 < b <= q-1`."""
    clamped: bool = False
    """Whether d exceeded n(q-1) and was clamped."""


@dataclass(frozen=True)
class ProjParams:
    """The writing `d - 1 = k(q-1) + l` of a projective degree."""

    k: int
    """Number of full blocks of q - 1, `0 <= k <= n-1`."""
    l: int  # noqa: E741
    """Remainder, `0 < l <= q-1`."""


@dataclass(frozen=True)
class WeightPrediction:
    """A predicted weight."""

    value: int
    """The weight, or the best known upper bound when the status is not exact."""
    status: PredictionStatus
    """How much is known."""
    source: Source
    """Where the value comes from."""
    bounds: tuple[int, int] | None = None
    """Inclusive (lower, upper) bounds, only when the status is not exact."""
    flags: tuple[str, ...] = field(default=())
    """Range remarks, like `top-of-range`."""

    def __post_init__(self) -> None:
        if (self.status is PredictionStatus.EXACT) != (self.bounds is None):
            raise ParameterError("Exact predictions have no bounds, other predictions need them")

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-serializable view.

        Returns:
            A dictionary.
        """
        return {
            "value": self.value,
            "status": self.status.value,
            "source": self.source.value,
            "bounds": list(self.bounds) if self.bounds else None,
            "flags": list(self.flags),
        }


def _check(q: int, n: int) -> None:
    try:
        prime_power(q)
    except FieldError as error:
        raise ParameterError(str(error)) from error
    if n < 1:
        raise ParameterError(f"Dimension must be at least 1, got {n}")


def decompose_affine(q: int, n: int, d: int) -> AffineParams:
    """Write an affine degree as `d = a(q-1) + b` with `0 < b <= q-1`.

    Degrees above n(q-1) are clamped to n(q-1): the code is then the whole space.

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree.

    Raises:
        ParameterError: When d < 1 or q, n are invalid.

    Returns:
        The pair (a, b).
    """
    _check(q, n)
    if d < 1:
        raise ParameterError(f"Degree must be at least 1, got {d}")
    clamped = d > n * (q - 1)
    if clamped:
        _logger.warning("Degree %s exceeds n(q-1) = %s for q = %s, n = %s: clamping", d, n * (q - 1), q, n)
        d = n * (q - 1)
    a = (d - 1) // (q - 1)
    return AffineParams(a, d - a * (q - 1), clamped)


def decompose_projective(q: int, n: int, d: int) -> ProjParams:
    """Write a projective degree as `d - 1 = k(q-1) + l` with `0 < l <= q-1`.

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree, `2 <= d <= n(q-1) + 1`.

    Raises:
        ParameterError: When d is outside its range.

    Returns:
        The pair (k, l).
    """
    _check(q, n)
    if not 2 <= d <= n * (q - 1) + 1:  # noqa: PLR2004
        raise ParameterError(f"Projective degree must be in 2..{n * (q - 1) + 1}, got {d}")
    k = (d - 2) // (q - 1)
    return ProjParams(k, d - 1 - k * (q - 1))


def w1_rm(q: int, n: int, d: int) -> int:
    """Return the minimum distance `(q-b)q^(n-a-1)` of RM(n, d).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree.

    Returns:
        The minimum weight.
    """
    params = decompose_affine(q, n, d)
    return (q - params.b) * q ** (n - params.a - 1)


def second_weight_increment(q: int, n: int, d: int) -> tuple[int, int]:
    """Return the pair (c, e) such that W2 = W1 + c * q^e for RM(n, d).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree.

    Returns:
        The coefficient c and exponent e; `(1, 0)` when a = n - 1.
    """
    params = decompose_affine(q, n, d)
    a, b = params.a, params.b
    if a == n - 1:
        return 1, 0
    exponent = n - a - 2
    if b > 1:
        return b - 1, exponent
    if a == 0 or q >= 4:  # noqa: PLR2004
        return q, exponent
    if q == 3:  # noqa: PLR2004
        return 2, exponent
    # q = 2
    return (q if a == n - 2 else 1), exponent


def w2_rm(q: int, n: int, d: int) -> int:
    """Return the next-to-minimal weight of RM(n, d).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree; degrees above n(q-1) are clamped.

    Returns:
        The next-to-minimal weight.
    """
    coefficient, exponent = second_weight_increment(q, n, d)
    return w1_rm(q, n, d) + coefficient * q**exponent


def w1_prm(q: int, n: int, d: int) -> int:
    """Return the minimum distance of PRM(n, d), equal to the one of RM(n, d - 1).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree, at least 2.

    Raises:
        ParameterError: When d < 2.

    Returns:
        The minimum weight.
    """
    if d < 2:  # noqa: PLR2004
        raise ParameterError(f"Projective degree must be at least 2, got {d}")
    return w1_rm(q, n, d - 1)


def w2_prm(q: int, n: int, d: int) -> WeightPrediction:
    """Predict the next-to-minimal weight of PRM(n, d).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree, `2 <= d <= n(q-1) + 1`.

    Returns:
        The prediction, exact or bounded.
    """
    params = decompose_projective(q, n, d)
    k, l = params.k, params.l  # noqa: E741
    flags = ("top-of-range",) if d == n * (q - 1) + 1 else ()
    if flags:
        _logger.warning("Degree %s is past the usual code range for q = %s, n = %s", d, q, n)

    def exact(value: int, source: Source) -> WeightPrediction:
        return WeightPrediction(value, PredictionStatus.EXACT, source, flags=flags)

    if k == n - 1:
        return exact(q - l + 1, Source.TOP_LAYER)
    if q == 2:  # noqa: PLR2004
        if k == n - 2:
            return exact(4, Source.BINARY_CLASSIFICATION)
        return exact(3 * 2 ** (n - k - 2), Source.BINARY_CLASSIFICATION)
    if l == 1:
        if n == 2:  # noqa: PLR2004
            return exact(q**2, Source.PLANE_CONIC)
        if k < n - 2:
            if q == 3 and k > 0:  # noqa: PLR2004
                return exact(8 * 3 ** (n - k - 2), Source.AFFINE_COINCIDENCE)
            return exact((q**2 - 1) * q ** (n - k - 2), Source.QUADRIC_WITNESS)
        if q == 3:  # noqa: PLR2004
            return exact(8, Source.AFFINE_COINCIDENCE)
        return _open_case(q, n, d, flags)
    if 2 * l <= q + 1:
        return exact((q - 1) * (q - l + 1) * q ** (n - k - 2), Source.AFFINE_COINCIDENCE)
    return _open_case(q, n, d, flags)


def _open_case(q: int, n: int, d: int, flags: tuple[str, ...]) -> WeightPrediction:
    upper = w2_rm(q, n, d - 1)
    return WeightPrediction(upper, PredictionStatus.UNKNOWN, Source.OPEN_CASE, (w1_prm(q, n, d) + 1, upper), flags)


@dataclass(frozen=True)
class TableClass:
    """A row of the summary table of next-to-minimal weights for one family of field orders."""

    key: str
    """Stable identifier of the row."""
    n_range: str
    """Condition on n."""
    k_range: str
    """Condition on k."""
    l_range: str
    """Condition on l."""
    rm_formula: str
    """Next-to-minimal weight of RM(n, d - 1)."""
    prm_formula: str
    """Next-to-minimal weight of PRM(n, d), `???` when unknown."""

    @property
    def known(self) -> bool:
        """Whether the projective value is known."""
        return "???" not in self.prm_formula


BINARY_CLASSES = (
    TableClass("k0", "n >= 3", "k = 0", "l = 1", "2^n", "3 * 2^(n-2)"),
    TableClass("k-low", "n >= 4", "1 <= k < n-2", "l = 1", "3 * 2^(n-k-2)", "3 * 2^(n-k-2)"),
    TableClass("k-n-2", "n >= 2", "k = n-2", "l = 1", "4", "4"),
    TableClass("top", "n >= 2", "k = n-1", "l = 1", "2", "2"),
)
"""Rows for q = 2."""

TERNARY_CLASSES = (
    TableClass("plane-conic", "n = 2", "k = 0", "l = 1", "3^2", "3^2"),
    TableClass("quadric", "n >= 3", "k = 0", "l = 1", "3^n", "8 * 3^(n-2)"),
    TableClass("l1", "n >= 3", "1 <= k <= n-2", "l = 1", "8 * 3^(n-k-2)", "8 * 3^(n-k-2)"),
    TableClass("l2", "n >= 2", "0 <= k <= n-2", "l = 2", "4 * 3^(n-k-2)", "4 * 3^(n-k-2)"),
    TableClass("top", "n >= 1", "k = n-1", "l = 1, 2", "4 - l", "4 - l"),
)
"""Rows for q = 3."""

GENERAL_CLASSES = (
    TableClass("plane-conic", "n = 2", "k = 0", "l = 1", "q^2", "q^2"),
    TableClass("quadric", "n >= 3", "k < n-2", "l = 1", "q^(n-k)", "q^(n-k) - q^(n-k-2)"),
    TableClass("open-l1", "n >= 3", "k = n-2", "l = 1", "q^2", "???"),
    TableClass("small-l", "n >= 2", "k <= n-2", "1 < l <= (q+1)/2", "(q-1)(q-l+1)q^(n-k-2)", "(q-1)(q-l+1)q^(n-k-2)"),
    TableClass("open-large-l", "n >= 2", "k <= n-2", "(q+1)/2 < l <= q-1", "(q-1)(q-l+1)q^(n-k-2)", "???"),
    TableClass("top", "n >= 1", "k = n-1", "1 <= l <= q-1", "q - l + 1", "q - l + 1"),
)
"""Rows for q >= 4."""


def table_classes(q: int) -> tuple[TableClass, ...]:
    """Return the summary table rows for a field order.

    Parameters:
        q: The field order.

    Returns:
        The rows, in table order.
    """
    if q == 2:  # noqa: PLR2004
        return BINARY_CLASSES
    if q == 3:  # noqa: PLR2004
        return TERNARY_CLASSES
    return GENERAL_CLASSES


def table_class(q: int, n: int, d: int) -> TableClass:
    """Return the summary table row covering PRM(n, d).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree.

    Raises:
        ParameterError: When no row covers the parameters (q = 2, n = 1 apart from the top layer).

    Returns:
        The row.
    """
    params = decompose_projective(q, n, d)
    k, l = params.k, params.l  # noqa: E741
    rows = {row.key: row for row in table_classes(q)}
    if k == n - 1:
        return rows["top"]
    if q == 2:  # noqa: PLR2004
        if k == n - 2:
            return rows["k-n-2"]
        return rows["k0"] if k == 0 else rows["k-low"]
    if q == 3:  # noqa: PLR2004
        if l == 2:  # noqa: PLR2004
            return rows["l2"]
        if n == 2:  # noqa: PLR2004
            return rows["plane-conic"]
        return rows["quadric"] if k == 0 else rows["l1"]
    if l == 1:
        if n == 2:  # noqa: PLR2004
            return rows["plane-conic"]
        return rows["quadric"] if k < n - 2 else rows["open-l1"]
    return rows["small-l"] if 2 * l <= q + 1 else rows["open-large-l"]


def avoiding_hyperplane_threshold(q: int, n: int, d: int) -> Fraction:
    """Support size below which a hyperplane avoiding the support must exist.

    Parameters:
        q: The field order.
        n: The dimension.
        d: The projective degree.

    Returns:
        The bound `(1 + 1/q)(q-l)q^(n-k-1)`, as an exact rational.
    """
    params = decompose_projective(q, n, d)
    k, l = params.k, params.l  # noqa: E741
    return Fraction(q + 1, q) * (q - l) * q ** (n - k - 1)


def avoiding_subspace_threshold(q: int, n: int, d: int) -> int:
    """Support size up to which a subspace of dimension at least k avoiding the support must exist.

    Parameters:
        q: The field order.
        n: The dimension.
        d: The projective degree.

    Returns:
        The bound `(q-l+1)q^(n-k-1)`.
    """
    params = decompose_projective(q, n, d)
    k, l = params.k, params.l  # noqa: E741
    return (q - l + 1) * q ** (n - k - 1)


def hyperplane_gap_holds(
    q: int,
    n: int,
    d: int,
    weights: ArrayLike,
    *,
    avoids_hyperplane: ArrayLike,
) -> NDArray[np.bool_]:
    """Check the weight gap for codewords whose support misses a hyperplane.

    A codeword of PRM(n, d) missing a hyperplane has either the minimum weight
    or a weight at least the next-to-minimal weight of RM(n, d - 1).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The projective degree.
        weights: Codeword weights, a scalar or an array.
        avoids_hyperplane: Whether some hyperplane misses each support, broadcast against `weights`.

    Returns:
        Whether each codeword satisfies the gap.
    """
    weights = np.asarray(weights)
    avoids = np.asarray(avoids_hyperplane, dtype=bool)
    return ~avoids | (weights <= w1_prm(q, n, d)) | (weights >= w2_rm(q, n, d - 1))

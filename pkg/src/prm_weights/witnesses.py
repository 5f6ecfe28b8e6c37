"""Explicit polynomials attaining low weights.

Every constructor verifies its witness by evaluating it over the whole code,
so a returned witness always has the weight it claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

from prm_weights.codes import (
    CodeSpec,
    Family,
    encode,
    exhaustive_low_weights,
    minimum_weight_forms,
)
from prm_weights.exceptions import ParameterError, WitnessMismatchError
from prm_weights.gf import FieldSpec
from prm_weights.logger import get_logger
from prm_weights.poly import Polynomial, dehomogenize, embed_affine, product_of_linear_forms
from prm_weights.weights import Source, decompose_affine, w1_rm, w2_rm

_logger = get_logger(__name__)


@dataclass
class Witness:
    """A polynomial together with the weight its codeword is claimed to have."""

    poly: Polynomial
    """The polynomial."""
    claimed_weight: int
    """The claimed codeword weight."""
    source: Source
    """Where the construction comes from."""
    code: CodeSpec
    """The code the codeword belongs to."""
    verified: bool = False
    """Whether the weight was checked by evaluation."""

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-serializable view.

        Returns:
            A dictionary.
        """
        return {
            "code": str(self.code),
            "polynomial": str(self.poly),
            "claimed_weight": self.claimed_weight,
            "source": self.source.value,
            "verified": self.verified,
        }


def verify_witness(witness: Witness, cs: CodeSpec | None = None) -> Witness:
    """Evaluate a witness and check its claimed weight.

    Parameters:
        witness: The witness.
        cs: The code to evaluate in, defaults to the witness code.

    Raises:
        WitnessMismatchError: When the actual weight differs from the claim.

    Returns:
        The same witness, marked as verified.
    """
    code = cs or witness.code
    weight = encode(code, witness.poly).weight
    if weight != witness.claimed_weight:
        raise WitnessMismatchError(
            f"Polynomial {witness.poly} has weight {weight} in {code}, not {witness.claimed_weight} ({witness.source.value})",
        )
    witness.verified = True
    _logger.debug("Verified %s: weight %s in %s", witness.poly, weight, code)
    return witness


def _check_affine_degree(field: FieldSpec, n: int, d: int) -> None:
    if n < 1 or not 1 <= d <= n * (field.q - 1):
        raise ParameterError(f"Affine degree must be in 1..{n * (field.q - 1)}, got {d}")


def min_weight_affine(field: FieldSpec, n: int, d: int) -> Witness:
    """Build a minimum-weight polynomial of RM(n, d).

    The polynomial is `prod_{j <= a} prod_{g != 0} (Xj - g) * prod_{t <= b} (X(a+1) - g_t)`
    where the g_t are the first b field elements.

    Parameters:
        field: The field.
        n: The dimension.
        d: The degree, `1 <= d <= n(q-1)`.

    Raises:
        ParameterError: When d is out of range.

    Returns:
        A verified witness of weight `(q-b)q^(n-a-1)`.
    """
    _check_affine_degree(field, n, d)
    forms = minimum_weight_forms(field, n, d)
    poly = dehomogenize(product_of_linear_forms(forms, field, n + 1))
    code = CodeSpec(Family.RM, field, n, d)
    return verify_witness(Witness(poly, w1_rm(field.q, n, d), Source.AFFINE_MINIMUM_DISTANCE, code))


def _indicator(field: FieldSpec, n: int, variable: int) -> Polynomial:
    # 1 - Xj^(q-1): equal to 1 where Xj = 0, else 0.
    one = Polynomial.constant(field, n, 1, offset=1)
    return one - Polynomial.variable(field, n, variable, offset=1) ** (field.q - 1)


def _shifted(field: FieldSpec, n: int, variable: int, value: int) -> Polynomial:
    return Polynomial.variable(field, n, variable, offset=1) - Polynomial.constant(field, n, value, offset=1)


def _second_weight_construction(field: FieldSpec, n: int, d: int) -> Polynomial:
    q = field.q
    params = decompose_affine(q, n, d)
    a, b = params.a, params.b
    one = Polynomial.constant(field, n, 1, offset=1)

    def variable(index: int) -> Polynomial:
        return Polynomial.variable(field, n, index, offset=1)

    def indicators(count: int) -> Polynomial:
        result = one
        for index in range(1, count + 1):
            result = result * _indicator(field, n, index)
        return result

    def shifts(index: int, count: int) -> Polynomial:
        result = one
        for value in field.elements()[:count]:
            result = result * _shifted(field, n, index, value)
        return result

    if a == n - 1:
        return indicators(n - 1) * shifts(n, b - 1)
    if b > 1:
        return indicators(a) * shifts(a + 1, b - 1) * variable(a + 2)
    if a == 0 or q >= 4 or (q == 2 and a == n - 2):  # noqa: PLR2004
        return indicators(a)
    if q == 3:  # noqa: PLR2004
        return indicators(a - 1) * variable(a) * variable(a + 1) * variable(a + 2)
    return indicators(a - 1) * (variable(a) * variable(a + 1) + variable(a + 2) * variable(a + 3))


def second_weight_affine_candidate(
    field: FieldSpec,
    n: int,
    d: int,
    *,
    method: Literal["construction", "search"] = "construction",
    budget: int = 2**24,
    threads: int = 1,
) -> Witness:
    """Build a polynomial of RM(n, d) with the next-to-minimal weight.

    Constructions combine indicators `1 - Xj^(q-1)` of the hyperplanes `Xj = 0`
    with linear factors; for q = 2 and `0 < a < n-2` the quadric
    `Xa X(a+1) + X(a+2) X(a+3)` is used. The `search` method takes the first
    next-to-minimal codeword of the exhaustive enumeration instead.

    Parameters:
        field: The field.
        n: The dimension.
        d: The degree, `1 <= d <= n(q-1)`.
        method: `construction` or `search`.
        budget: Enumeration budget of the search method.
        threads: Worker processes of the search method.

    Raises:
        ParameterError: When d is out of range, the method is unknown, or the code has a single nonzero weight.

    Returns:
        A verified witness of weight `w2_rm(q, n, d)`.
    """
    _check_affine_degree(field, n, d)
    code = CodeSpec(Family.RM, field, n, d)
    if method == "construction":
        poly = _second_weight_construction(field, n, d)
    elif method == "search":
        result = exhaustive_low_weights(code, budget=budget, threads=threads)
        if result.w2 is None:
            raise ParameterError(f"{code} has a single nonzero weight")
        poly = result.polynomial(result.w2)
    else:
        raise ParameterError(f"Unknown method '{method}'")
    return verify_witness(Witness(poly, w2_rm(field.q, n, d), Source.AFFINE_SECOND_WEIGHT, code))


def quadric_witness(field: FieldSpec, n: int, k: int) -> Witness:
    """Build the quadric-based next-to-minimal codeword of PRM(n, k(q-1) + 2).

    The polynomial is `X1 X(k+3) g + X0 X(k+2) h` with
    `g = prod_{i=2}^{k+1} (Xi^(q-1) - X1^(q-1))` and `h = prod_{i=2}^{k+1} (Xi^(q-1) - X0^(q-1))`,
    which is `X1 X3 + X0 X2` when k = 0.

    Parameters:
        field: The field.
        n: The dimension, at least 3.
        k: The layer, `0 <= k < n-2`.

    Raises:
        ParameterError: When n or k are out of range.

    Returns:
        A verified witness of weight `(q^2 - 1) q^(n-k-2)`.
    """
    if n < 3 or not 0 <= k < n - 2:  # noqa: PLR2004
        raise ParameterError(f"Need n >= 3 and 0 <= k < n-2, got n = {n}, k = {k}")
    q = field.q
    nvars = n + 1

    def variable(index: int) -> Polynomial:
        return Polynomial.variable(field, nvars, index)

    g = h = Polynomial.constant(field, nvars, 1)
    for index in range(2, k + 2):
        g = g * (variable(index) ** (q - 1) - variable(1) ** (q - 1))
        h = h * (variable(index) ** (q - 1) - variable(0) ** (q - 1))
    poly = variable(1) * variable(k + 3) * g + variable(0) * variable(k + 2) * h
    code = CodeSpec(Family.PRM, field, n, k * (q - 1) + 2)
    return verify_witness(Witness(poly, (q**2 - 1) * q ** (n - k - 2), Source.QUADRIC_WITNESS, code))


def quadric_support_split(witness: Witness) -> tuple[int, int]:
    """Count the support points of a projective witness on each side of the hyperplane X0 = 0.

    Parameters:
        witness: A witness of a projective code.

    Raises:
        ParameterError: When the witness belongs to an affine code.

    Returns:
        The number of support points with first coordinate 0, then with first coordinate 1.
    """
    if witness.code.family is not Family.PRM:
        raise ParameterError("Support split is defined for projective codes only")
    mask = encode(witness.code, witness.poly).mask
    at_infinity = witness.code.points[:, 0] == 0
    return int((mask & at_infinity).sum()), int((mask & ~at_infinity).sum())


def prm_embedded_witness(affine: Witness, d: int | None = None) -> Witness:
    """Embed an affine witness into a projective code, keeping its weight.

    Parameters:
        affine: A witness of RM(n, d_a).
        d: The projective degree, defaults to `d_a + 1`.

    Raises:
        ParameterError: When the witness belongs to a projective code.

    Returns:
        A verified witness of PRM(n, d) with the same claimed weight.
    """
    if affine.code.family is not Family.RM:
        raise ParameterError("Only affine witnesses can be embedded")
    degree = affine.code.d + 1 if d is None else d
    poly = embed_affine(affine.poly, degree)
    code = CodeSpec(Family.PRM, affine.code.field, affine.code.n, degree)
    return verify_witness(Witness(poly, affine.claimed_weight, Source.HOMOGENIZED_EMBEDDING, code))

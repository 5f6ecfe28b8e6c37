"""Experiments: predictions, oracle runs, table reproduction, exploration and geometry reports.

Every experiment returns an [`ExperimentRecord`][prm_weights.harness.ExperimentRecord].
Disagreements between an exact prediction and the oracle are collected
in the record instead of being raised, so that the full record can still be written out.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Iterator, Literal, Sequence

import numpy as np

from prm_weights.codes import (
    STRATEGIES,
    CodeSpec,
    Family,
    dimension,
    encode,
    exhaustive_low_weights,
    iter_supports,
    randomized_low_weight_search,
)
from prm_weights.config import WorkbenchConfig, load_config
from prm_weights.exceptions import BudgetExceededError, DegreeError, DiscrepancyError, ParameterError
from prm_weights.logger import get_logger
from prm_weights.poly import parse_polynomial
from prm_weights.space import (
    best_avoiding_subspace,
    find_avoiding_hyperplane,
    is_hyperplane_union,
    projective_space,
    subspace_masks,
)
from prm_weights.weights import (
    PredictionStatus,
    Source,
    TableClass,
    avoiding_hyperplane_threshold,
    avoiding_subspace_threshold,
    decompose_affine,
    decompose_projective,
    hyperplane_gap_holds,
    table_class,
    table_classes,
    w1_prm,
    w1_rm,
    w2_prm,
    w2_rm,
)
from prm_weights.witnesses import (
    Witness,
    min_weight_affine,
    prm_embedded_witness,
    quadric_witness,
    quadric_support_split,
    second_weight_affine_candidate,
)

if TYPE_CHECKING:
    from prm_weights.gf import FieldSpec

_logger = get_logger(__name__)


@dataclass
class ExperimentRecord:
    """Result of one experiment."""

    command: str
    """The experiment kind (`predict`, `verify`, ...)."""
    family: str
    """The code family."""
    field: str
    """The field, like `GF(2^2)`."""
    q: int
    """The field order."""
    n: int
    """The dimension."""
    d: int
    """The degree."""
    prediction: dict[str, Any] = field(default_factory=dict)
    """Closed-form values."""
    oracle: dict[str, Any] | None = None
    """Exhaustive enumeration results."""
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    """Verified witnesses."""
    search: dict[str, Any] | None = None
    """Randomized search report."""
    geometry: dict[str, Any] | None = None
    """Support geometry report."""
    method: str | None = None
    """How the weights were obtained."""
    seed: int | None = None
    """Seed of randomized steps."""
    elapsed: float | None = None
    """Wall-clock seconds, only when timing is enabled."""
    notes: list[str] = field(default_factory=list)
    """Remarks, like skipped steps."""
    discrepancies: list[str] = field(default_factory=list)
    """Disagreements between predictions and observations."""

    @property
    def ok(self) -> bool:
        """Whether no discrepancy was found."""
        return not self.discrepancies

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-serializable view.

        Returns:
            A dictionary.
        """
        return {
            "command": self.command,
            "family": self.family,
            "field": self.field,
            "q": self.q,
            "n": self.n,
            "d": self.d,
            "prediction": self.prediction,
            "oracle": self.oracle,
            "witnesses": self.witnesses,
            "search": self.search,
            "geometry": self.geometry,
            "method": self.method,
            "seed": self.seed,
            "elapsed": self.elapsed,
            "notes": self.notes,
            "discrepancies": self.discrepancies,
            "status": "ok" if self.ok else "DISCREPANCY",
        }

    def raise_for_discrepancies(self) -> None:
        """Raise when the record holds discrepancies.

        Raises:
            DiscrepancyError: When a discrepancy was found.
        """
        if self.discrepancies:
            raise DiscrepancyError("; ".join(self.discrepancies))


@contextmanager
def _timed(record: ExperimentRecord, config: WorkbenchConfig) -> Iterator[None]:
    started = time.monotonic()
    yield
    if config.timing:
        record.elapsed = round(time.monotonic() - started, 3)


def _new_record(command: str, family: Family, field_spec: FieldSpec, n: int, d: int) -> ExperimentRecord:
    return ExperimentRecord(command, family.value, str(field_spec), field_spec.q, n, d)


def predictions(q: int, n: int, d: int) -> dict[str, Any]:
    """Collect the closed-form weights of RM(n, d) and PRM(n, d).

    Parameters:
        q: The field order.
        n: The dimension.
        d: The degree.

    Returns:
        The parameters `a, b, k, l`, the weights `W1_RM, W2_RM` of RM(n, d),
        `W2_RM_prev` of RM(n, d - 1), `W1_PRM, W2_PRM` of PRM(n, d) with the source of `W1_PRM`,
        and the status, source, bounds and flags of the projective prediction.
        Projective entries are `None` when d is outside `2..n(q-1)+1`.
    """
    affine = decompose_affine(q, n, d)
    values: dict[str, Any] = {
        "a": affine.a,
        "b": affine.b,
        "clamped": affine.clamped,
        "W1_RM": w1_rm(q, n, d),
        "W2_RM": w2_rm(q, n, d),
        "k": None,
        "l": None,
        "W2_RM_prev": None,
        "W1_PRM": None,
        "W1_PRM_source": None,
        "W2_PRM": None,
        "status": None,
        "source": None,
        "bounds": None,
        "flags": [],
    }
    if 2 <= d <= n * (q - 1) + 1:  # noqa: PLR2004
        projective = decompose_projective(q, n, d)
        prediction = w2_prm(q, n, d)
        values.update(
            k=projective.k,
            l=projective.l,
            W2_RM_prev=w2_rm(q, n, d - 1),
            W1_PRM=w1_prm(q, n, d),
            W1_PRM_source=Source.PROJECTIVE_MINIMUM_DISTANCE.value,
            W2_PRM=prediction.value,
            status=prediction.status.value,
            source=prediction.source.value,
            bounds=list(prediction.bounds) if prediction.bounds else None,
            flags=list(prediction.flags),
        )
    return values


def run_predict(field_spec: FieldSpec, n: int, d: int) -> ExperimentRecord:
    """Report the closed-form weights.

    Parameters:
        field_spec: The field.
        n: The dimension.
        d: The degree.

    Returns:
        The record.
    """
    record = _new_record("predict", Family.PRM, field_spec, n, d)
    record.prediction = predictions(field_spec.q, n, d)
    record.method = "formula"
    return record


@dataclass
class TableDocument:
    """Summary of next-to-minimal weights for one field order."""

    q: int
    """The field order."""
    n_max: int
    """Largest dimension listed."""
    classes: tuple[TableClass, ...]
    """Rows of the summary table."""
    rows: list[dict[str, Any]]
    """One entry per (n, d) instance."""
    discrepancies: list[str] = field(default_factory=list)
    """Disagreements with the oracle, when it was run."""

    def as_dict(self) -> dict[str, Any]:
        """Return a JSON-serializable view.

        Returns:
            A dictionary.
        """
        return {
            "q": self.q,
            "n_max": self.n_max,
            "classes": [
                {
                    "key": row.key,
                    "n": row.n_range,
                    "k": row.k_range,
                    "l": row.l_range,
                    "W2_RM_prev": row.rm_formula,
                    "W2_PRM": row.prm_formula,
                    "known": row.known,
                }
                for row in self.classes
            ],
            "rows": self.rows,
            "discrepancies": self.discrepancies,
        }


def run_tables(
    q: int,
    n_max: int,
    *,
    field_spec: FieldSpec | None = None,
    config: WorkbenchConfig | None = None,
    oracle_dimension: int | None = None,
) -> TableDocument:
    """Regenerate the summary table of next-to-minimal weights for a field order.

    Parameters:
        q: The field order.
        n_max: Largest dimension.
        field_spec: The field, needed when the oracle runs.
        config: The configuration, for the oracle budget and workers.
        oracle_dimension: Run the exhaustive oracle on every instance whose code
            has at most this dimension (and fits the budget).

    Raises:
        ParameterError: When n_max < 1.

    Returns:
        The table document.
    """
    if n_max < 1:
        raise ParameterError(f"Largest dimension must be at least 1, got {n_max}")
    config = config or load_config()
    document = TableDocument(q, n_max, table_classes(q), [])
    for n in range(1, n_max + 1):
        for d in range(2, n * (q - 1) + 2):
            values = predictions(q, n, d)
            row = {
                "n": n,
                "d": d,
                "k": values["k"],
                "l": values["l"],
                "class": table_class(q, n, d).key,
                "W2_RM_prev": values["W2_RM_prev"],
                "W2_PRM": values["W2_PRM"],
                "status": values["status"],
                "bounds": values["bounds"],
                "oracle_W2": None,
            }
            if oracle_dimension is not None and field_spec is not None:
                _table_oracle(document, row, CodeSpec(Family.PRM, field_spec, n, d), config, oracle_dimension)
            document.rows.append(row)
    return document


def _table_oracle(
    document: TableDocument,
    row: dict[str, Any],
    code: CodeSpec,
    config: WorkbenchConfig,
    max_dimension: int,
) -> None:
    if dimension(code) > max_dimension:
        return
    try:
        result = exhaustive_low_weights(code, budget=config.budget, threads=config.threads)
    except BudgetExceededError:
        return
    row["oracle_W2"] = result.w2
    if row["status"] == PredictionStatus.EXACT.value and result.w2 != row["W2_PRM"]:
        document.discrepancies.append(f"{code}: predicted W2 = {row['W2_PRM']}, oracle found {result.w2}")


def _oracle(code: CodeSpec, config: WorkbenchConfig, record: ExperimentRecord) -> dict[str, Any] | None:
    try:
        result = exhaustive_low_weights(
            code,
            budget=config.budget,
            threads=config.threads,
            scalar_skip=config.scalar_skip,
            time_limit=config.time_limit,
        )
    except BudgetExceededError as error:
        _logger.warning("Oracle skipped: %s", error)
        record.notes.append(f"oracle skipped: {error}")
        return None
    oracle: dict[str, Any] = {
        "dim": result.dimension,
        "length": code.length,
        "W1": result.w1,
        "W2": result.w2,
        "W1_polynomial": str(result.polynomial(result.w1)),
        "W2_polynomial": str(result.polynomial(result.w2)) if result.w2 is not None else None,
        "visited": result.visited,
    }
    return oracle


def _compare(record: ExperimentRecord, label: str, predicted: int, observed: int | None) -> None:
    if observed != predicted:
        record.discrepancies.append(f"{label}: predicted {predicted}, oracle found {observed}")


def run_verify(
    field_spec: FieldSpec,
    n: int,
    d: int,
    *,
    family: Family = Family.PRM,
    config: WorkbenchConfig | None = None,
) -> ExperimentRecord:
    """Check predictions against the exhaustive oracle and verify the witnesses.

    When the code does not fit the budget, the oracle is skipped and only witnesses are verified.

    Parameters:
        field_spec: The field.
        n: The dimension.
        d: The degree (at least 2 for projective codes).
        family: The code family.
        config: The configuration.

    Raises:
        ParameterError: When the parameters are out of range.

    Returns:
        The record, holding discrepancies if any.
    """
    config = config or load_config()
    q = field_spec.q
    record = _new_record("verify", family, field_spec, n, d)
    record.method = "exhaustive"
    with _timed(record, config):
        record.prediction = predictions(q, n, d)
        code = CodeSpec(family, field_spec, n, d)
        if family is Family.RM:
            witnesses = _affine_witnesses(field_spec, n, d)
            oracle = _oracle(code, config, record)
            if oracle is not None:
                _compare(record, "W1_RM", record.prediction["W1_RM"], oracle["W1"])
                _compare(record, "W2_RM", record.prediction["W2_RM"], oracle["W2"])
        else:
            if d < 2:  # noqa: PLR2004
                raise ParameterError(f"Projective degree must be at least 2, got {d}")
            witnesses = _projective_witnesses(field_spec, n, d)
            oracle = _oracle(code, config, record)
            if oracle is not None:
                _check_projective(record, oracle)
        record.oracle = oracle
        record.witnesses = [witness.as_dict() for witness in witnesses]
    for message in record.discrepancies:
        _logger.error("DISCREPANCY %s: %s", code, message)
    return record


def _check_projective(record: ExperimentRecord, oracle: dict[str, Any]) -> None:
    prediction = record.prediction
    _compare(record, "W1_PRM", prediction["W1_PRM"], oracle["W1"])
    if prediction["status"] == PredictionStatus.EXACT.value:
        _compare(record, "W2_PRM", prediction["W2_PRM"], oracle["W2"])
        return
    lower, upper = prediction["bounds"]
    if oracle["W2"] is None or not lower <= oracle["W2"] <= upper:
        record.discrepancies.append(f"W2_PRM: oracle found {oracle['W2']}, outside bounds {lower}..{upper}")


def _affine_witnesses(field_spec: FieldSpec, n: int, d: int) -> list[Witness]:
    degree = min(d, n * (field_spec.q - 1))
    return [min_weight_affine(field_spec, n, degree), second_weight_affine_candidate(field_spec, n, degree)]


def _projective_witnesses(field_spec: FieldSpec, n: int, d: int) -> list[Witness]:
    q = field_spec.q
    degree = d - 1
    witnesses = [
        prm_embedded_witness(min_weight_affine(field_spec, n, degree), d),
        prm_embedded_witness(second_weight_affine_candidate(field_spec, n, degree), d),
    ]
    params = decompose_projective(q, n, d)
    if params.l == 1 and n >= 3 and params.k < n - 2:  # noqa: PLR2004
        witnesses.append(quadric_witness(field_spec, n, params.k))
    return witnesses


WITNESS_KINDS = ("minimum", "second", "embedded-minimum", "embedded-second", "quadric")
"""Witness constructions available to [`run_witness`][prm_weights.harness.run_witness]."""


def run_witness(
    field_spec: FieldSpec,
    n: int,
    d: int,
    kind: str = "second",
    *,
    method: Literal["construction", "search"] = "construction",
    config: WorkbenchConfig | None = None,
) -> ExperimentRecord:
    """Build and verify one witness codeword.

    Affine kinds (`minimum`, `second`) build a codeword of RM(n, d). Embedded kinds
    build the affine witness of degree d - 1 and embed it in PRM(n, d).
    The `quadric` kind needs `d = k(q-1) + 2` with `0 <= k < n-2`.

    Parameters:
        field_spec: The field.
        n: The dimension.
        d: The degree of the target code.
        kind: One of `WITNESS_KINDS`.
        method: How the affine next-to-minimal codeword is obtained.
        config: The configuration (budget and workers of the search method).

    Raises:
        ParameterError: When the kind is unknown or does not apply to the parameters.

    Returns:
        The record, holding the verified witness.
    """
    config = config or load_config()
    q = field_spec.q
    family = Family.RM if kind in {"minimum", "second"} else Family.PRM
    record = _new_record("witness", family, field_spec, n, d)
    record.method = method if kind.endswith("second") else "construction"
    with _timed(record, config):
        if kind == "minimum":
            witness = min_weight_affine(field_spec, n, d)
        elif kind == "second":
            witness = second_weight_affine_candidate(
                field_spec,
                n,
                d,
                method=method,
                budget=config.budget,
                threads=config.threads,
            )
        elif kind == "embedded-minimum":
            witness = prm_embedded_witness(min_weight_affine(field_spec, n, d - 1), d)
        elif kind == "embedded-second":
            affine = second_weight_affine_candidate(
                field_spec,
                n,
                d - 1,
                method=method,
                budget=config.budget,
                threads=config.threads,
            )
            witness = prm_embedded_witness(affine, d)
        elif kind == "quadric":
            k, rest = divmod(d - 2, q - 1)
            if d < 2 or rest:  # noqa: PLR2004
                raise ParameterError(f"Quadric witnesses live in degrees k(q-1) + 2, got d = {d}")
            witness = quadric_witness(field_spec, n, k)
            at_infinity, affine_part = quadric_support_split(witness)
            record.geometry = {"support_at_infinity": at_infinity, "support_affine": affine_part}
        else:
            raise ParameterError(f"Unknown witness kind '{kind}', expected one of {', '.join(WITNESS_KINDS)}")
        record.witnesses = [witness.as_dict()]
        record.prediction = predictions(q, n, d)
    return record


def run_explore(
    field_spec: FieldSpec,
    n: int,
    d: int,
    strategies: Sequence[str] = STRATEGIES,
    *,
    config: WorkbenchConfig | None = None,
) -> ExperimentRecord:
    """Probe the next-to-minimal weight of PRM(n, d) by randomized search.

    When the `embed` strategy is enabled, the embedded next-to-minimal affine codeword
    of degree d - 1 is evaluated first, so the result never exceeds W2 of RM(n, d - 1).

    Parameters:
        field_spec: The field.
        n: The dimension.
        d: The degree, `2 <= d <= n(q-1) + 1`.
        strategies: Candidate generators.
        config: The configuration (seed and sample count).

    Raises:
        ParameterError: When d is outside `2..n(q-1)+1`.

    Returns:
        The record; the search weight is an upper bound only.
    """
    config = config or load_config()
    q = field_spec.q
    decompose_projective(q, n, d)
    record = _new_record("explore", Family.PRM, field_spec, n, d)
    record.method = "randomized"
    record.seed = config.seed
    with _timed(record, config):
        record.prediction = predictions(q, n, d)
        if record.prediction["status"] == PredictionStatus.EXACT.value:
            _logger.warning("W2 of PRM(%s, %s) over %s is already known exactly", n, d, field_spec)
        code = CodeSpec(Family.PRM, field_spec, n, d)
        initial = []
        if "embed" in strategies:
            initial.append(prm_embedded_witness(second_weight_affine_candidate(field_spec, n, d - 1), d).poly)
        result = randomized_low_weight_search(
            code,
            strategies,
            samples=config.samples,
            seed=config.seed,
            initial=initial,
        )
        upper = record.prediction["W2_RM_prev"]
        record.search = {
            "weight": result.weight,
            "polynomial": str(result.polynomial) if result.polynomial is not None else None,
            "strategy": result.strategy,
            "strategies": list(strategies),
            "samples": result.samples,
            "status": PredictionStatus.UPPER_BOUND_ONLY.value,
            "bounds": [record.prediction["W1_PRM"] + 1, upper],
        }
        if result.weight is not None and result.weight > upper and "embed" in strategies:
            record.discrepancies.append(f"search weight {result.weight} exceeds W2 of RM(n, d-1) = {upper}")
    return record


def run_geometry(
    field_spec: FieldSpec,
    n: int,
    d: int,
    poly_text: str,
    *,
    config: WorkbenchConfig | None = None,
) -> ExperimentRecord:
    """Describe the support of a homogeneous polynomial.

    Parameters:
        field_spec: The field.
        n: The dimension.
        d: The degree of the polynomial.
        poly_text: The polynomial, in `X0..Xn`.
        config: The configuration (search budgets).

    Raises:
        DegreeError: When the polynomial is not homogeneous of degree d.

    Returns:
        The record with the support size, an avoiding hyperplane, the best avoiding subspace
        and the decomposition of the zero set into at most d hyperplanes.
    """
    config = config or load_config()
    poly = parse_polynomial(poly_text, field_spec, n + 1)
    if poly.is_zero or not poly.is_homogeneous(d):
        raise DegreeError(f"Polynomial {poly} is not a nonzero homogeneous polynomial of degree {d}")
    record = _new_record("geometry", Family.PRM, field_spec, n, d)
    record.method = "geometry"
    with _timed(record, config):
        code = CodeSpec(Family.PRM, field_spec, n, d)
        support = encode(code, poly).mask
        hyperplane = find_avoiding_hyperplane(support, field_spec, n)
        subspace = best_avoiding_subspace(support, field_spec, n, budget=config.subspace_budget)
        union = is_hyperplane_union(~support, d, field_spec, n, budget=config.union_budget)
        at_infinity = code.points[:, 0] == 0
        record.geometry = {
            "polynomial": str(poly),
            "support_size": int(support.sum()),
            "zero_set_size": int((~support).sum()),
            "support_at_infinity": int((support & at_infinity).sum()),
            "support_affine": int((support & ~at_infinity).sum()),
            "avoiding_hyperplane": str(hyperplane) if hyperplane is not None else None,
            "avoiding_subspace_dimension": subspace.dimension if subspace is not None else None,
            "avoiding_subspace": [list(row) for row in subspace.basis] if subspace is not None else None,
            "zero_set_union": [str(plane) for plane in union] if union is not None else None,
        }
        if d >= 2:  # noqa: PLR2004
            record.prediction = predictions(field_spec.q, n, d)
    return record


def run_support_check(
    field_spec: FieldSpec,
    n: int,
    d: int,
    *,
    config: WorkbenchConfig | None = None,
) -> ExperimentRecord:
    """Check the support properties of every codeword of PRM(n, d), up to scalars.

    Three properties are checked, with `d - 1 = k(q-1) + l`:

    - a support missing a hyperplane has the minimum weight or at least W2 of RM(n, d - 1);
    - a support smaller than `(1 + 1/q)(q-l)q^(n-k-1)` misses a hyperplane;
    - a support of size at most `(q-l+1)q^(n-k-1)` misses a subspace of dimension k.

    Parameters:
        field_spec: The field, of order at least 3.
        n: The dimension.
        d: The degree.
        config: The configuration (budgets).

    Raises:
        ParameterError: When q = 2.

    Returns:
        The record; every violation is a discrepancy.
    """
    config = config or load_config()
    q = field_spec.q
    if q < 3:  # noqa: PLR2004
        raise ParameterError("Support properties are stated for q >= 3")
    record = _new_record("support", Family.PRM, field_spec, n, d)
    record.method = "exhaustive"
    with _timed(record, config):
        record.prediction = predictions(q, n, d)
        params = decompose_projective(q, n, d)
        hyperplane_bound = avoiding_hyperplane_threshold(q, n, d)
        subspace_bound = avoiding_subspace_threshold(q, n, d)
        incidence = projective_space(field_spec, n).incidence.T.astype(np.int64)
        subspaces = subspace_masks(field_spec, n, params.k, budget=config.subspace_budget).T.astype(np.int64)
        counts = {"codewords": 0, "gap": 0, "hyperplane": 0, "subspace": 0}
        code = CodeSpec(Family.PRM, field_spec, n, d)
        for supports in iter_supports(code, budget=config.budget, scalar_skip=config.scalar_skip):
            as_int = supports.astype(np.int64)
            weights = as_int.sum(axis=1)
            avoids_hyperplane = ((as_int @ incidence) == 0).any(axis=1)
            avoids_subspace = ((as_int @ subspaces) == 0).any(axis=1)
            counts["codewords"] += int(weights.size)
            counts["gap"] += int((~hyperplane_gap_holds(q, n, d, weights, avoids_hyperplane=avoids_hyperplane)).sum())
            small = weights * hyperplane_bound.denominator < hyperplane_bound.numerator
            counts["hyperplane"] += int((small & ~avoids_hyperplane).sum())
            counts["subspace"] += int(((weights <= subspace_bound) & ~avoids_subspace).sum())
        record.geometry = {
            "codewords": counts["codewords"],
            "hyperplane_threshold": str(hyperplane_bound),
            "subspace_threshold": subspace_bound,
            "subspace_dimension": params.k,
            "violations": {key: counts[key] for key in ("gap", "hyperplane", "subspace")},
        }
    for key in ("gap", "hyperplane", "subspace"):
        if counts[key]:
            record.discrepancies.append(f"{counts[key]} codewords violate the {key} property")
    return record

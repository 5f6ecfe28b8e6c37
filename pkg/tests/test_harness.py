"""Tests for the experiments."""

from __future__ import annotations

import pytest

from prm_weights.codes import Family
from prm_weights.config import WorkbenchConfig, load_config
from prm_weights.exceptions import DegreeError, DiscrepancyError, ParameterError
from prm_weights.gf import FieldSpec, field_of_order
from prm_weights.harness import (
    ExperimentRecord,
    predictions,
    run_explore,
    run_geometry,
    run_predict,
    run_support_check,
    run_tables,
    run_verify,
    run_witness,
)


@pytest.mark.parametrize(("q", "n", "d", "bounds"), [(4, 3, 5, [13, 16]), (4, 2, 4, [5, 6])])
def test_predict_unknown_cells(q: int, n: int, d: int, bounds: list[int]) -> None:
    """Report bounds where the next-to-minimal weight is open."""
    record = run_predict(field_of_order(q), n, d)
    assert record.method == "formula"
    assert record.prediction["status"] == "unknown"
    assert record.prediction["bounds"] == bounds
    assert record.prediction["source"] == "open-case"
    assert record.as_dict()["status"] == "ok"


def test_predictions_outside_projective_range() -> None:
    """Leave projective entries empty for degree 1."""
    values = predictions(3, 2, 1)
    assert (values["W1_RM"], values["W2_RM"]) == (6, 9)
    assert values["W1_PRM"] is None
    assert values["W1_PRM_source"] is None
    assert values["status"] is None


def test_verify_projective(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Agree with the oracle on PRM(2, 2) over GF(3)."""
    record = run_verify(gf3, 2, 2, config=config)
    assert record.ok
    assert record.oracle == {
        "dim": 6,
        "length": 13,
        "W1": 6,
        "W2": 9,
        "W1_polynomial": record.oracle["W1_polynomial"],
        "W2_polynomial": record.oracle["W2_polynomial"],
        "visited": 364,
    }
    assert [witness["claimed_weight"] for witness in record.witnesses] == [6, 9]
    assert all(witness["verified"] for witness in record.witnesses)
    assert record.elapsed is None


def test_verify_affine(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Agree with the oracle on RM(2, 3) over GF(3)."""
    record = run_verify(gf3, 2, 3, family=Family.RM, config=config)
    assert record.ok
    assert record.family == "RM"
    assert (record.oracle["W1"], record.oracle["W2"]) == (2, 3)


@pytest.mark.slow
def test_verify_quadric(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Verify the quadric witness in P^3."""
    record = run_verify(gf3, 3, 2, config=config)
    assert record.ok
    assert record.oracle["W2"] == 24
    assert [witness["source"] for witness in record.witnesses][-1] == "quadric-witness"


def test_verify_skips_oracle_over_budget(gf3: FieldSpec) -> None:
    """Keep witnesses and note the skipped oracle."""
    record = run_verify(gf3, 2, 2, config=load_config(budget=100))
    assert record.oracle is None
    assert record.ok
    assert record.notes[0].startswith("oracle skipped")
    assert len(record.witnesses) == 2


def test_verify_degree(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Refuse projective degree 1."""
    with pytest.raises(ParameterError):
        run_verify(gf3, 2, 1, config=config)


def test_verify_is_deterministic(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Produce identical records on repeated runs."""
    assert run_verify(gf3, 2, 3, config=config).as_dict() == run_verify(gf3, 2, 3, config=config).as_dict()


def test_timing(gf3: FieldSpec) -> None:
    """Record elapsed time only when asked to."""
    record = run_verify(gf3, 2, 2, config=load_config(timing=True))
    assert record.elapsed is not None


def test_discrepancies_raise() -> None:
    """Turn recorded discrepancies into an error on demand."""
    record = ExperimentRecord("verify", "PRM", "GF(3)", 3, 2, 2)
    record.raise_for_discrepancies()
    record.discrepancies.append("W2_PRM: predicted 9, oracle found 8")
    assert record.as_dict()["status"] == "DISCREPANCY"
    with pytest.raises(DiscrepancyError):
        record.raise_for_discrepancies()


def test_tables_binary(gf2: FieldSpec, config: WorkbenchConfig) -> None:
    """List every (n, d) and check small instances against the oracle."""
    document = run_tables(2, 3, field_spec=gf2, config=config, oracle_dimension=10)
    assert [(row["n"], row["d"]) for row in document.rows] == [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (3, 4)]
    assert not document.discrepancies
    assert {row["class"] for row in document.rows} <= {row.key for row in document.classes}
    assert document.rows[0]["oracle_W2"] == 2
    assert document.rows[3]["oracle_W2"] == 6
    assert document.as_dict()["classes"][0]["key"] == "k0"


def test_tables_without_oracle() -> None:
    """Fill rows from the formulas alone."""
    document = run_tables(4, 2)
    assert all(row["oracle_W2"] is None for row in document.rows)
    unknown = [row for row in document.rows if row["status"] == "unknown"]
    assert [(row["n"], row["d"], row["bounds"]) for row in unknown] == [(2, 4, [5, 6])]
    with pytest.raises(ParameterError):
        run_tables(4, 0)


@pytest.mark.parametrize(
    ("kind", "n", "d", "family", "weight"),
    [
        ("minimum", 2, 2, "RM", 3),
        ("second", 2, 2, "RM", 4),
        ("embedded-minimum", 2, 2, "PRM", 6),
        ("embedded-second", 2, 2, "PRM", 9),
        ("quadric", 3, 2, "PRM", 24),
    ],
)
def test_witness_kinds(gf3: FieldSpec, kind: str, n: int, d: int, family: str, weight: int) -> None:
    """Build one verified witness per kind."""
    record = run_witness(gf3, n, d, kind)
    assert record.family == family
    assert record.witnesses[0]["claimed_weight"] == weight
    assert record.witnesses[0]["verified"]


def test_quadric_witness_geometry(gf3: FieldSpec) -> None:
    """Split the quadric support at the hyperplane X0 = 0."""
    record = run_witness(gf3, 3, 2, "quadric")
    assert record.geometry == {"support_at_infinity": 6, "support_affine": 18}
    assert record.method == "construction"


def test_witness_errors(gf3: FieldSpec) -> None:
    """Reject unknown kinds and degrees without a quadric witness."""
    with pytest.raises(ParameterError):
        run_witness(gf3, 3, 3, "quadric")
    with pytest.raises(ParameterError):
        run_witness(gf3, 2, 2, "cubic")


def test_witness_by_search(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Take the affine witness from the oracle."""
    record = run_witness(gf3, 2, 3, "embedded-second", method="search", config=config)
    assert record.method == "search"
    assert record.witnesses[0]["claimed_weight"] == 4


def test_explore_open_cell(gf4: FieldSpec) -> None:
    """Stay within the bounds of an open case."""
    record = run_explore(gf4, 2, 4, config=load_config(samples=100, seed=3))
    assert record.ok
    assert record.seed == 3
    assert record.search is not None
    assert 5 <= record.search["weight"] <= 6
    assert record.search["status"] == "upper_bound_only"
    assert record.search["bounds"] == [5, 6]


def test_explore_known_cell(gf3: FieldSpec) -> None:
    """Find the embedded next-to-minimal codeword."""
    record = run_explore(gf3, 2, 3, config=load_config(samples=50))
    assert record.search is not None
    assert record.search["weight"] == 4
    assert record.ok


def test_geometry_quadric(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Describe the support of a hyperbolic quadric."""
    record = run_geometry(gf3, 3, 2, "X1*X3 + X0*X2", config=config)
    geometry = record.geometry
    assert geometry is not None
    assert geometry["polynomial"] == "X0*X2 + X1*X3"
    assert (geometry["support_size"], geometry["zero_set_size"]) == (24, 16)
    assert (geometry["support_at_infinity"], geometry["support_affine"]) == (6, 18)
    assert geometry["avoiding_hyperplane"] is None
    assert geometry["avoiding_subspace_dimension"] == 1
    assert geometry["zero_set_union"] is None


def test_geometry_square(gf3: FieldSpec, config: WorkbenchConfig) -> None:
    """Find the line at infinity outside the support of X0^2."""
    record = run_geometry(gf3, 2, 2, "X0^2", config=config)
    geometry = record.geometry
    assert geometry is not None
    assert geometry["support_size"] == 9
    assert geometry["avoiding_hyperplane"] == "X0 = 0"
    assert geometry["avoiding_subspace_dimension"] == 1
    assert geometry["zero_set_union"] == ["X0 = 0"]


@pytest.mark.parametrize("text", ["X0 + X1", "X0*X1 + X2", "0"])
def test_geometry_degree(gf3: FieldSpec, text: str) -> None:
    """Require a nonzero homogeneous polynomial of the given degree."""
    with pytest.raises(DegreeError):
        run_geometry(gf3, 2, 2, text)


@pytest.mark.parametrize(("q", "d", "codewords"), [(3, 2, 364), (4, 2, 1365), (3, 3, 29524)])
def test_support_check(q: int, d: int, codewords: int, config: WorkbenchConfig) -> None:
    """Find no codeword of PRM(2, d) violating the support properties."""
    record = run_support_check(field_of_order(q), 2, d, config=config)
    assert record.ok
    assert record.geometry is not None
    assert record.geometry["violations"] == {"gap": 0, "hyperplane": 0, "subspace": 0}
    assert record.geometry["codewords"] == codewords
    assert record.geometry["subspace_dimension"] == 0


def test_support_check_needs_odd_sized_field(gf2: FieldSpec) -> None:
    """Refuse the binary field."""
    with pytest.raises(ParameterError):
        run_support_check(gf2, 2, 2)


def test_predictions_minimum_distance_source() -> None:
    """Tag the projective minimum distance with its source."""
    values = predictions(3, 2, 2)
    assert values["W1_PRM"] == 6
    assert values["W1_PRM_source"] == "projective-minimum-distance"


@pytest.mark.parametrize("d", [1, 6])
def test_explore_degree_range(gf3: FieldSpec, d: int) -> None:
    """Reject degrees outside the projective range, with or without embedding."""
    with pytest.raises(ParameterError):
        run_explore(gf3, 2, d, ["products"], config=load_config(samples=10))

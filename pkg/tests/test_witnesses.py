"""Tests for the witness constructions."""

from __future__ import annotations

import pytest

from prm_weights.codes import CodeSpec, Family
from prm_weights.exceptions import ParameterError, WitnessMismatchError
from prm_weights.gf import FieldSpec, field_of_order
from prm_weights.poly import parse_polynomial
from prm_weights.weights import Source, w1_rm, w2_rm
from prm_weights.witnesses import (
    Witness,
    min_weight_affine,
    prm_embedded_witness,
    quadric_support_split,
    quadric_witness,
    second_weight_affine_candidate,
    verify_witness,
)

_AFFINE_GRID = [(q, n, d) for q in (2, 3, 4, 5) for n in (1, 2, 3) for d in range(1, n * (q - 1) + 1)]


@pytest.mark.parametrize(("q", "n", "d"), _AFFINE_GRID)
def test_min_weight_affine(q: int, n: int, d: int) -> None:
    """Attain the minimum distance of RM(n, d)."""
    witness = min_weight_affine(field_of_order(q), n, d)
    assert witness.verified
    assert witness.claimed_weight == w1_rm(q, n, d)
    assert witness.source is Source.AFFINE_MINIMUM_DISTANCE


@pytest.mark.parametrize(("q", "n", "d"), [*_AFFINE_GRID, (2, 4, 2), (2, 5, 2), (2, 5, 3), (3, 4, 3)])
def test_second_weight_affine(q: int, n: int, d: int) -> None:
    """Attain the next-to-minimal weight of RM(n, d) with explicit constructions."""
    witness = second_weight_affine_candidate(field_of_order(q), n, d)
    assert witness.verified
    assert witness.claimed_weight == w2_rm(q, n, d)
    assert witness.poly.degree <= d


def test_second_weight_by_search(gf3: FieldSpec) -> None:
    """Take the next-to-minimal codeword from the oracle."""
    witness = second_weight_affine_candidate(gf3, 2, 2, method="search")
    assert witness.claimed_weight == 4
    assert witness.verified


def test_affine_degree_range(gf3: FieldSpec) -> None:
    """Reject affine degrees outside 1..n(q-1) and unknown methods."""
    with pytest.raises(ParameterError):
        min_weight_affine(gf3, 2, 5)
    with pytest.raises(ParameterError):
        second_weight_affine_candidate(gf3, 2, 0)
    with pytest.raises(ParameterError):
        second_weight_affine_candidate(gf3, 2, 2, method="guess")  # type: ignore[arg-type]


@pytest.mark.parametrize(
    ("q", "n", "k"),
    [(q, n, k) for q in (2, 3, 4, 5) for n in (3, 4, 5) for k in range(n - 2)],
)
def test_quadric_witness(q: int, n: int, k: int) -> None:
    """Attain (q^2 - 1)q^(n-k-2) on PRM(n, k(q-1) + 2)."""
    witness = quadric_witness(field_of_order(q), n, k)
    assert witness.verified
    assert witness.claimed_weight == (q**2 - 1) * q ** (n - k - 2)
    assert witness.code == CodeSpec(Family.PRM, field_of_order(q), n, k * (q - 1) + 2)
    if q >= 4:
        assert witness.claimed_weight < q ** (n - k)


def test_quadric_witness_plane_count(gf3: FieldSpec, gf4: FieldSpec) -> None:
    """Weigh X1 X3 + X0 X2 in P^3."""
    witness = quadric_witness(gf3, 3, 0)
    assert str(witness.poly) == "X0*X2 + X1*X3"
    assert witness.claimed_weight == 24
    assert quadric_support_split(witness) == (6, 18)
    assert quadric_witness(gf4, 3, 0).claimed_weight == 60


def test_quadric_witness_range(gf3: FieldSpec) -> None:
    """Need n >= 3 and k < n - 2."""
    with pytest.raises(ParameterError):
        quadric_witness(gf3, 2, 0)
    with pytest.raises(ParameterError):
        quadric_witness(gf3, 3, 1)


def test_support_split_needs_projective_code(gf3: FieldSpec) -> None:
    """Split supports of projective witnesses only."""
    with pytest.raises(ParameterError):
        quadric_support_split(min_weight_affine(gf3, 2, 1))


@pytest.mark.parametrize(("q", "n", "d"), [(3, 2, 2), (3, 2, 3), (3, 3, 2), (4, 2, 3), (2, 3, 2)])
def test_embedded_witness(q: int, n: int, d: int) -> None:
    """Keep the weight of affine witnesses in PRM(n, d)."""
    field = field_of_order(q)
    for affine in (min_weight_affine(field, n, d - 1), second_weight_affine_candidate(field, n, d - 1)):
        embedded = prm_embedded_witness(affine)
        assert embedded.code == CodeSpec(Family.PRM, field, n, d)
        assert embedded.claimed_weight == affine.claimed_weight
        assert embedded.source is Source.HOMOGENIZED_EMBEDDING
        assert embedded.verified


def test_embedding_needs_affine_witness(gf3: FieldSpec) -> None:
    """Refuse to embed projective witnesses."""
    with pytest.raises(ParameterError):
        prm_embedded_witness(quadric_witness(gf3, 3, 0))


def test_verify_witness_mismatch(gf3: FieldSpec) -> None:
    """Treat a wrong claim as fatal."""
    code = CodeSpec(Family.PRM, gf3, 2, 2)
    witness = Witness(parse_polynomial("X0^2", gf3, 3), 6, Source.PLANE_CONIC, code)
    with pytest.raises(WitnessMismatchError):
        verify_witness(witness)
    assert not witness.verified
    witness.claimed_weight = 9
    assert verify_witness(witness).verified
    assert witness.as_dict() == {
        "code": "PRM(2, 2) over GF(3)",
        "polynomial": "X0^2",
        "claimed_weight": 9,
        "source": "plane-conic",
        "verified": True,
    }

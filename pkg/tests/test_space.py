"""Tests for the space module."""

from __future__ import annotations

import numpy as np
import pytest

from prm_weights.exceptions import BudgetExceededError, ParameterError
from prm_weights.gf import FieldSpec, field_of_order
from prm_weights.space import (
    Hyperplane,
    best_avoiding_subspace,
    count_subspaces,
    enumerate_affine,
    enumerate_hyperplanes,
    enumerate_projective,
    find_avoiding_hyperplane,
    find_avoiding_subspace,
    is_hyperplane_union,
    iter_subspace_bases,
    normalize,
    projective_space,
    subspace_masks,
)


@pytest.mark.parametrize(("q", "n"), [(2, 1), (2, 3), (3, 2), (4, 2), (5, 1)])
def test_projective_point_count(q: int, n: int) -> None:
    """Count q^n + ... + q + 1 distinct normalized points."""
    field = field_of_order(q)
    points = enumerate_projective(field, n)
    assert len(points) == sum(q**i for i in range(n + 1))
    assert len(set(points)) == len(points)
    assert all(normalize(point, field) == point for point in points)


def test_projective_order(gf3: FieldSpec) -> None:
    """Group points by their leading one, then sort lexicographically."""
    points = enumerate_projective(gf3, 2)
    assert points[:4] == [(1, 0, 0), (1, 0, 1), (1, 0, 2), (1, 1, 0)]
    assert points[9:] == [(0, 1, 0), (0, 1, 1), (0, 1, 2), (0, 0, 1)]


def test_affine_order(gf3: FieldSpec) -> None:
    """List affine points lexicographically, the origin first."""
    points = enumerate_affine(gf3, 2)
    assert len(points) == 9
    assert points[:3] == [(0, 0), (0, 1), (0, 2)]
    assert points[-1] == (2, 2)


def test_hyperplanes_follow_points(gf3: FieldSpec) -> None:
    """List hyperplanes through the point ordering."""
    hyperplanes = enumerate_hyperplanes(gf3, 2)
    assert [plane.coeffs for plane in hyperplanes] == enumerate_projective(gf3, 2)
    assert str(hyperplanes[1]) == "X0 + X2 = 0"
    assert str(Hyperplane((0, 1, 2))) == "X1 + 2*X2 = 0"


def test_normalize(gf3: FieldSpec) -> None:
    """Scale vectors so that the first nonzero entry is one."""
    assert normalize((0, 2, 1), gf3) == (0, 1, 2)
    with pytest.raises(ParameterError):
        normalize((0, 0, 0), gf3)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_incidence(q: int) -> None:
    """Put q + 1 points on every line of the plane, and q + 1 lines through every point."""
    space = projective_space(field_of_order(q), 2)
    incidence = space.incidence
    assert (incidence.sum(axis=1) == q + 1).all()
    assert (incidence.sum(axis=0) == q + 1).all()
    plane = Hyperplane(tuple(space.points[5].tolist()))
    assert incidence[5].tolist() == [plane.contains(space.field, point) for point in space.points.tolist()]


def test_index_of_any_representative(gf3: FieldSpec) -> None:
    """Find point indices whatever the scalar multiple."""
    space = projective_space(gf3, 2)
    assert space.index_of(np.array([[2, 0, 0], [0, 2, 1], [0, 0, 0]])).tolist() == [0, 11, -1]
    mask = space.mask([(2, 0, 0), (1, 0, 0)])
    assert mask.sum() == 1
    assert mask[0]
    with pytest.raises(ParameterError):
        space.mask([(0, 0, 0)])


@pytest.mark.parametrize(("q", "n", "r", "expected"), [(3, 2, 0, 13), (3, 2, 1, 13), (2, 3, 1, 35), (4, 3, 1, 357)])
def test_count_subspaces(q: int, n: int, r: int, expected: int) -> None:
    """Count subspaces with Gaussian binomials."""
    field = field_of_order(q)
    assert count_subspaces(field, n, r) == expected


def test_canonical_bases(gf2: FieldSpec) -> None:
    """Enumerate each line of P^3 once."""
    bases = list(iter_subspace_bases(gf2, 3, 1))
    assert len(bases) == 35
    space = projective_space(gf2, 3)
    masks = {tuple(space.subspace_mask(basis).tolist()) for basis in bases}
    assert len(masks) == 35
    assert all(sum(mask) == 3 for mask in masks)


def test_subspace_mask_matches_hyperplane(gf3: FieldSpec) -> None:
    """Span the line X2 = 0 by two points."""
    space = projective_space(gf3, 2)
    line = space.subspace_mask(np.array([[1, 0, 0], [0, 1, 0]]))
    assert line.tolist() == space.incidence[12].tolist()


def test_subspace_masks_budget(gf3: FieldSpec) -> None:
    """Refuse to enumerate more subspaces than the budget allows."""
    assert subspace_masks(gf3, 2, 0).shape == (13, 13)
    with pytest.raises(BudgetExceededError):
        subspace_masks(gf3, 2, 1, budget=5)
    with pytest.raises(ParameterError):
        subspace_masks(gf3, 2, 2)


def test_avoiding_hyperplane(gf3: FieldSpec) -> None:
    """Find the line at infinity outside the affine chart."""
    space = projective_space(gf3, 2)
    chart = space.points[:, 0] == 1
    assert find_avoiding_hyperplane(chart, gf3, 2) == Hyperplane((1, 0, 0))
    assert find_avoiding_hyperplane(np.ones(space.size, dtype=bool), gf3, 2) is None


def test_avoiding_subspace(gf3: FieldSpec) -> None:
    """Return canonical bases of avoiding subspaces."""
    space = projective_space(gf3, 2)
    chart = space.points[:, 0] == 1
    line = find_avoiding_subspace(chart, 1, gf3, 2)
    assert line is not None
    assert line.basis == ((0, 1, 0), (0, 0, 1))
    assert line.dimension == 1
    point = find_avoiding_subspace(chart, 0, gf3, 2)
    assert point is not None
    assert point.basis == ((0, 1, 0),)
    with pytest.raises(ParameterError):
        find_avoiding_subspace(chart, 2, gf3, 2)


def test_best_avoiding_subspace(gf3: FieldSpec) -> None:
    """Prefer the largest dimension."""
    space = projective_space(gf3, 2)
    everything_but_one = np.ones(space.size, dtype=bool)
    everything_but_one[4] = False
    best = best_avoiding_subspace(everything_but_one, gf3, 2)
    assert best is not None
    assert best.dimension == 0
    assert best_avoiding_subspace(np.ones(space.size, dtype=bool), gf3, 2) is None


def test_hyperplane_union(gf3: FieldSpec) -> None:
    """Decompose two lines, but not with a single one."""
    space = projective_space(gf3, 2)
    zero_set = (space.points[:, 0] == 0) | (space.points[:, 1] == 0)
    planes = is_hyperplane_union(zero_set, 2, gf3, 2)
    assert planes == [Hyperplane((1, 0, 0)), Hyperplane((0, 1, 0))]
    assert is_hyperplane_union(zero_set, 1, gf3, 2) is None
    assert is_hyperplane_union(np.zeros(space.size, dtype=bool), 1, gf3, 2) == []


def test_hyperplane_union_rejects_other_sets(gf3: FieldSpec) -> None:
    """Reject a set containing no line, and sets with points off the candidate lines."""
    space = projective_space(gf3, 2)
    assert is_hyperplane_union(space.points[:, 0] == 1, 3, gf3, 2) is None
    line_and_point = space.points[:, 0] == 0
    line_and_point[0] = True
    assert is_hyperplane_union(line_and_point, 3, gf3, 2) is None
    with pytest.raises(ParameterError):
        is_hyperplane_union(line_and_point, 0, gf3, 2)

"""
Tests for Nielsen transformations and the height-decreasing reduction
"""
import itertools
import random

import pytest

from app.core.exceptions import PreconditionError
from app.services.nielsen import (
    generates_weyl_group,
    nielsen_reduce,
    nielsen_transform,
    subsystem_base,
    to_result,
)
from app.services.weyl import generate_subgroup, reflection_element, weyl_group_order
from conftest import rootsystem


def closure(rs, axes):
    return generate_subgroup([reflection_element(rs, axis).element for axis in axes], rs=rs)


def assert_reduced(rs, axes):
    reduction = nielsen_reduce(rs, axes)
    heights = reduction.heights
    assert len(heights) == len(reduction.trace) + 1
    assert all(b < a for a, b in zip(heights, heights[1:]))
    base = reduction.base
    for a, b in itertools.combinations(base, 2):
        assert rs.inner(a, b) <= 0
    return reduction


def test_transform_commuting(b2):
    # (0,1) and (1,1) are orthogonal short roots
    result, collision = nielsen_transform(b2, [(0, 1), (1, 1)], 1, 2)
    assert [t.axis for t in result] == [(0, 1), (1, 1)]
    assert not collision


def test_transform_a2(a2):
    result, collision = nielsen_transform(a2, [(1, 1), (0, 1)], 2, 1)
    assert [t.axis for t in result] == [(1, 0), (0, 1)]
    assert not collision


def test_transform_reports_collision(a2):
    _, collision = nielsen_transform(a2, [(1, 1), (0, 1), (1, 0)], 2, 1)
    assert collision


def test_transform_self_index(a2):
    with pytest.raises(PreconditionError):
        nielsen_transform(a2, [(1, 0), (0, 1)], 1, 1)


def test_reduce_already_simple(g2):
    reduction = nielsen_reduce(g2, [(1, 0), (0, 1)])
    assert reduction.trace == []
    assert reduction.base == [(0, 1), (1, 0)]


def test_reduce_single_step(a2):
    reduction = nielsen_reduce(a2, [(1, 1), (0, 1)])
    assert reduction.trace == [(2, 1)]
    assert reduction.heights == [3, 2]
    assert set(reduction.axes) == {(1, 0), (0, 1)}


def test_reduce_three_reflections(a2):
    reduction = assert_reduced(a2, [(1, 0), (0, 1), (1, 1)])
    assert set(reduction.base) == set(a2.simple_roots)
    assert reduction.collisions


@pytest.mark.parametrize("label", ["A2", "B2", "G2"])
def test_every_generating_subset_reduces_to_simple_system(label):
    rs = rootsystem(label)
    order = weyl_group_order(rs)
    for size in range(1, len(rs.positive_roots) + 1):
        for subset in itertools.combinations(rs.positive_roots, size):
            reduction = assert_reduced(rs, list(subset))
            generating = len(closure(rs, subset)) == order
            assert generating == (set(reduction.base) == set(rs.simple_roots))
            assert generating == generates_weyl_group(rs, list(subset))


@pytest.mark.parametrize("label", ["A3", "B3"])
def test_random_multisets(label):
    rs = rootsystem(label)
    order = weyl_group_order(rs)
    rng = random.Random(label)
    generating = drawn = 0
    while generating < 500:
        axes = [rng.choice(rs.positive_roots) for _ in range(rng.randrange(3, 7))]
        reduction = assert_reduced(rs, axes)
        drawn += 1
        if len(closure(rs, axes)) == order:
            assert set(reduction.base) == set(rs.simple_roots)
            generating += 1
        else:
            assert set(reduction.base) != set(rs.simple_roots)
    assert drawn > generating


def test_each_step_preserves_subgroup(b2):
    axes = [(1, 2), (1, 1), (1, 2)]
    reduction = nielsen_reduce(b2, axes)
    current = axes
    expected = closure(b2, axes)
    for i, j in reduction.trace:
        reflections, _ = nielsen_transform(b2, current, i, j)
        current = [t.axis for t in reflections]
        assert closure(b2, current) == expected
    assert current == reduction.axes


def test_subsystem_base_of_proper_subgroup(b2, g2):
    assert sorted(subsystem_base(b2, [(0, 1), (1, 1)])) == [(0, 1), (1, 1)]
    assert not generates_weyl_group(b2, [(0, 1), (1, 1)])
    base = subsystem_base(g2, [(0, 1), (3, 1), (3, 2)])
    assert len(base) == 2
    assert not generates_weyl_group(g2, [(0, 1), (3, 1), (3, 2)])


def test_result_payload(b2):
    result = to_result(b2, nielsen_reduce(b2, [(0, 1), (1, 1)]))
    assert result.subsystem == "A1+A1"
    assert result.trace == []
    assert result.rootsystem == "B2"

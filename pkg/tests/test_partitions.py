import itertools

import numpy as np
import pytest

from hofa import (
    GroupFunction,
    Partition,
    conditional_expectation,
    coset_projection,
    independence_check,
    join,
    linear_character,
    make_group,
    relative_orthonormal_check,
    weak_orthogonality_check,
)
from hofa.groups import all_subgroups

from conftest import random_function


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1 :]


def test_canonical_labels():
    g = make_group([4])
    P = Partition(g, np.array([5, 5, 2, 7]))
    assert P.labels.tolist() == [0, 0, 1, 2]
    assert P == Partition.from_cells(g, [[2], [0, 1], [3]])
    assert P.measures().tolist() == [0.5, 0.25, 0.25]


def test_from_cells_rejects_overlap():
    g = make_group([3])
    with pytest.raises(ValueError):
        Partition.from_cells(g, [[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        Partition.from_cells(g, [[0, 1]])


def test_conditional_expectation_properties(rng):
    g = make_group([6])
    P = Partition.from_cells(g, [[0, 3], [1, 2, 5], [4]])
    f = random_function(g, rng)
    e = conditional_expectation(f, P)
    assert P.is_measurable(e)
    assert conditional_expectation(e, P).allclose(e, atol=1e-12)
    assert abs(e.mean() - f.mean()) < 1e-12
    assert conditional_expectation(f, Partition.discrete(g)).allclose(f)
    assert conditional_expectation(f, Partition.trivial(g)).allclose(GroupFunction.constant(g, f.mean()))


def test_coset_projection_equals_conditional_expectation_z12(rng):
    g = make_group([12])
    f = random_function(g, rng)
    subs = all_subgroups(g)
    assert len(subs) == 6
    for H in subs:
        T = coset_projection(f, H)
        E = conditional_expectation(f, Partition.cosets(g, H))
        assert np.max(np.abs(T.values - E.values)) <= 1e-12


def test_join_refines_both():
    g = make_group([6])
    P1 = Partition.cosets(g, [0, 2, 4])
    P2 = Partition.cosets(g, [0, 3])
    J = join(P1, P2)
    assert J.refines(P1) and J.refines(P2)
    assert J == Partition.discrete(g)


def test_weak_orthogonality_z4_example():
    g = make_group([4])
    P1 = Partition.from_cells(g, [[0], [1, 2, 3]])
    P2 = Partition.from_cells(g, [[0, 1], [2, 3]])
    assert not weak_orthogonality_check(P1, P2)
    assert not weak_orthogonality_check(P2, P1)


@pytest.mark.parametrize("order", range(1, 7))
def test_weak_orthogonality_symmetric_exhaustive(order):
    g = make_group([order])
    parts = [Partition.from_cells(g, c) for c in set_partitions(list(range(order)))]
    for P1, P2 in itertools.product(parts, repeat=2):
        assert weak_orthogonality_check(P1, P2) == weak_orthogonality_check(P2, P1)


def test_coset_partitions_are_weakly_orthogonal():
    g = make_group([2, 4])
    subs = all_subgroups(g)
    for H1, H2 in itertools.product(subs, repeat=2):
        assert weak_orthogonality_check(Partition.cosets(g, H1), Partition.cosets(g, H2))


def test_independence():
    g = make_group([2, 3])
    P1 = Partition.cosets(g, [0, g.index((0, 1)), g.index((0, 2))])
    P2 = Partition.cosets(g, [0, g.index((1, 0))])
    assert independence_check(P1, P2)
    assert not independence_check(P1, P1)


@pytest.mark.parametrize("factors", [(5,), (2, 3), (2, 2, 2)])
def test_full_character_system_is_relatively_orthonormal(factors):
    g = make_group(factors)
    chars = [linear_character(g, xi) for xi in g.elements()]
    assert relative_orthonormal_check(chars, Partition.trivial(g))
    # the discrete partition only sees pointwise products, which are unimodular
    assert not relative_orthonormal_check(chars[:2], Partition.discrete(g))

"""Finite sigma-algebras as partitions of a group.

On a finite group every sigma-algebra is generated by a partition, so joins,
conditional expectations, independence and weak orthogonality all reduce to
exact bookkeeping on cell labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .functions import GroupFunction, conditional_expectation
from .groups import FiniteAbelianGroup, GroupMismatchError, cosets_of, is_subgroup

STRUCT_TOL = 1e-12
FUNC_TOL = 1e-9


def _canonical(labels) -> tuple[np.ndarray, int]:
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    # renumber cells by first occurrence
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.reshape(-1)], len(first)


@dataclass(frozen=True, eq=False)
class Partition:
    group: FiniteAbelianGroup
    labels: np.ndarray
    cell_count: int = field(init=False)
    cell_sizes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        labels = np.asarray(self.labels).reshape(-1)
        if labels.size != self.group.order:
            raise ValueError(f"expected {self.group.order} labels, got {labels.size}")
        labels, count = _canonical(labels)
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "cell_count", count)
        object.__setattr__(self, "cell_sizes", np.bincount(labels, minlength=count))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Partition)
            and other.group == self.group
            and np.array_equal(other.labels, self.labels)
        )

    def __hash__(self):
        return hash((self.group, self.labels.tobytes()))

    @classmethod
    def trivial(cls, g: FiniteAbelianGroup) -> "Partition":
        return cls(g, np.zeros(g.order, dtype=np.int64))

    @classmethod
    def discrete(cls, g: FiniteAbelianGroup) -> "Partition":
        return cls(g, np.arange(g.order))

    @classmethod
    def from_cells(cls, g: FiniteAbelianGroup, cells: Sequence[Sequence[int]]) -> "Partition":
        labels = np.full(g.order, -1, dtype=np.int64)
        for c, cell in enumerate(cells):
            cell = list(cell)
            if (labels[cell] >= 0).any():
                raise ValueError("cells overlap")
            labels[cell] = c
        if (labels < 0).any():
            raise ValueError("cells do not cover the group")
        return cls(g, labels)

    @classmethod
    def cosets(cls, g: FiniteAbelianGroup, subgroup: Sequence[int]) -> "Partition":
        return cls.from_cells(g, [c.members for c in cosets_of(g, subgroup)])

    def cells(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.labels == c) for c in range(self.cell_count)]

    def indicator(self, cell: int) -> GroupFunction:
        return GroupFunction(self.group, (self.labels == cell).astype(float))

    def measures(self) -> np.ndarray:
        return self.cell_sizes / self.group.order

    def is_measurable(self, f: GroupFunction, tol: float = FUNC_TOL) -> bool:
        return conditional_expectation(f, self).allclose(f, tol)

    def refines(self, other: "Partition") -> bool:
        """Every cell of self lies inside a cell of other."""
        _same(self, other)
        return all(len(np.unique(other.labels[cell])) == 1 for cell in self.cells())


def _same(P1: Partition, P2: Partition) -> None:
    if P1.group != P2.group:
        raise GroupMismatchError(f"{P1.group!r} vs {P2.group!r}")


def join(P1: Partition, P2: Partition) -> Partition:
    """Common refinement."""
    _same(P1, P2)
    return Partition(P1.group, P1.labels * P2.cell_count + P2.labels)


def coset_projection(f: GroupFunction, H: Sequence[int]) -> GroupFunction:
    """T(f)(x) = (1/|H|) sum_{h in H} f(x + h), H given as element indices."""
    g = f.group
    H = np.array(sorted(set(int(h) for h in H)))
    if not is_subgroup(g, H):
        raise ValueError(f"{H.tolist()} is not a subgroup of {g!r}")
    idx = g.add_indices(np.arange(g.order)[:, None], H[None, :])
    return GroupFunction(g, f.values[idx].mean(axis=1))


def weak_orthogonality_check(P1: Partition, P2: Partition, tol: float = STRUCT_TOL) -> bool:
    """Does conditioning on P2 keep every P1-measurable function P1-measurable?"""
    _same(P1, P2)
    for c in range(P1.cell_count):
        e = conditional_expectation(P1.indicator(c), P2)
        if not P1.is_measurable(e, tol):
            return False
    return True


def independence_check(P1: Partition, P2: Partition, tol: float = STRUCT_TOL) -> bool:
    _same(P1, P2)
    n = P1.group.order
    joint = np.zeros((P1.cell_count, P2.cell_count))
    np.add.at(joint, (P1.labels, P2.labels), 1.0 / n)
    return bool(np.all(np.abs(joint - np.outer(P1.measures(), P2.measures())) <= tol))


def relative_orthonormal_check(
    fs: Sequence[GroupFunction], P: Partition, tol: float = FUNC_TOL
) -> bool:
    """E(f_i conj f_j | P) is the constant delta_ij for every pair."""
    for i, fi in enumerate(fs):
        for j, fj in enumerate(fs):
            e = conditional_expectation(fi * fj.conj(), P).values
            target = 1.0 if i == j else 0.0
            if np.max(np.abs(e - target)) > tol:
                return False
    return True

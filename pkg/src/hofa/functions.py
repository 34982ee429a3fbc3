"""Complex-valued functions on a finite abelian group."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from ._reduce import det_mean
from .groups import FiniteAbelianGroup, GroupMismatchError, character_table

if TYPE_CHECKING:
    from .partitions import Partition

UNIMODULAR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GroupFunction:
    group: FiniteAbelianGroup
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).reshape(-1)
        if v.size != self.group.order:
            raise ValueError(f"expected {self.group.order} values, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, g: FiniteAbelianGroup, c: complex = 1.0) -> "GroupFunction":
        return cls(g, np.full(g.order, c, dtype=np.complex128))

    @classmethod
    def indicator(cls, g: FiniteAbelianGroup, indices) -> "GroupFunction":
        v = np.zeros(g.order)
        v[list(indices)] = 1.0
        return cls(g, v)

    def __call__(self, x: Sequence[int]) -> complex:
        return complex(self.values[self.group.index(x)])

    def _same(self, other: "GroupFunction") -> None:
        if other.group != self.group:
            raise GroupMismatchError(f"{self.group!r} vs {other.group!r}")

    def _lift(self, other) -> np.ndarray:
        if isinstance(other, GroupFunction):
            self._same(other)
            return other.values
        return other

    def __add__(self, other):
        return GroupFunction(self.group, self.values + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GroupFunction(self.group, self.values - self._lift(other))

    def __mul__(self, other):
        return GroupFunction(self.group, self.values * self._lift(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GroupFunction(self.group, -self.values)

    def conj(self) -> "GroupFunction":
        return GroupFunction(self.group, self.values.conj())

    def is_unimodular(self, tol: float = UNIMODULAR_TOL) -> bool:
        return bool(np.all(np.abs(np.abs(self.values) - 1.0) <= tol))

    def allclose(self, other: "GroupFunction", atol: float = 1e-9) -> bool:
        self._same(other)
        return bool(np.max(np.abs(self.values - other.values), initial=0.0) <= atol)

    def mean(self) -> complex:
        return complex(det_mean(self.values))

    def norm(self) -> float:
        return float(np.sqrt(max(inner(self, self).real, 0.0)))


def inner(f: GroupFunction, g: GroupFunction) -> complex:
    """Normalised pairing (1/|A|) sum_x f(x) conj(g(x))."""
    f._same(g)
    return complex(det_mean(f.values * g.values.conj()))


def norm(f: GroupFunction) -> float:
    return f.norm()


def shift(f: GroupFunction, t: Sequence[int]) -> GroupFunction:
    """x -> f(x + t)."""
    return GroupFunction(f.group, f.values[f.group.translate_indices(t)])


def delta(f: GroupFunction, t: Sequence[int]) -> GroupFunction:
    """Multiplicative derivative x -> f(x + t) conj(f(x)).

    Conjugation stands in for inversion, so this is the group-valued
    derivative only when ``f`` is unimodular; otherwise it is still computed.
    """
    return GroupFunction(f.group, shift(f, t).values * f.values.conj())


def fourier(f: GroupFunction) -> np.ndarray:
    """Coefficients ``<f, chi_xi>`` indexed by the element index of xi.

    Direct character sum, O(|A|^2).
    """
    g = f.group
    out = np.empty(g.order, dtype=np.complex128)
    for i in range(g.order):
        out[i] = det_mean(f.values * character_table(g, g.element(i)).conj())
    return out


def inverse_fourier(g: FiniteAbelianGroup, coeffs: np.ndarray) -> GroupFunction:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.size != g.order:
        raise ValueError(f"expected {g.order} coefficients, got {coeffs.size}")
    # sum over xi of coeff(xi) chi_xi(x), accumulated row-wise then reduced per x
    table = np.stack([character_table(g, g.element(i)) for i in range(g.order)])
    return GroupFunction(g, np.array([(coeffs * table[:, x]).sum() for x in range(g.order)]))


def conditional_expectation(f: GroupFunction, P: "Partition") -> GroupFunction:
    """Replace f by its average on each cell of the partition."""
    if P.group != f.group:
        raise GroupMismatchError(f"partition on {P.group!r}, function on {f.group!r}")
    sums = np.zeros(P.cell_count, dtype=np.complex128)
    np.add.at(sums, P.labels, f.values)
    means = sums / P.cell_sizes
    return GroupFunction(f.group, means[P.labels])

"""Finite abelian groups presented as products of cyclic groups.

Elements are plain tuples of residues; they carry no reference to their group.
Every element has an index in ``[0, order)`` given by mixed-radix order with
the last factor varying fastest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_SIZE_CAP = 10**7

GroupElement = tuple[int, ...]


class GroupMismatchError(ValueError):
    pass


class SizeCapError(ValueError):
    """A requested table would exceed a configured size cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what} = {size} exceeds size cap {cap}")


def check_cap(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise SizeCapError(what, size, cap)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factors: tuple[int, ...]
    order: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))
        object.__setattr__(self, "order", math.prod(self.factors))

    def __repr__(self) -> str:
        return "Z_" + "xZ_".join(str(n) for n in self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    # -- element <-> index ------------------------------------------------

    def check(self, x: Sequence[int]) -> GroupElement:
        if len(x) != len(self.factors):
            raise GroupMismatchError(
                f"element {tuple(x)} has arity {len(x)}, group {self!r} has {len(self.factors)} factors"
            )
        for r, n in zip(x, self.factors):
            if not 0 <= r < n:
                raise GroupMismatchError(f"residue {r} out of range for factor {n}")
        return tuple(int(r) for r in x)

    def element(self, index: int) -> GroupElement:
        if not 0 <= index < self.order:
            raise IndexError(f"index {index} out of range for order {self.order}")
        out = []
        for n in reversed(self.factors):
            index, r = divmod(index, n)
            out.append(r)
        return tuple(reversed(out))

    def index(self, x: Sequence[int]) -> int:
        x = self.check(x)
        i = 0
        for r, n in zip(x, self.factors):
            i = i * n + r
        return i

    def elements(self) -> Iterator[GroupElement]:
        for i in range(self.order):
            yield self.element(i)

    def reduce(self, x: Sequence[int]) -> GroupElement:
        """Reduce arbitrary integers into an element (arity is still checked)."""
        if len(x) != len(self.factors):
            raise GroupMismatchError(f"arity {len(x)} != {len(self.factors)}")
        return tuple(int(r) % n for r, n in zip(x, self.factors))

    # -- group law --------------------------------------------------------

    def zero(self) -> GroupElement:
        return (0,) * len(self.factors)

    def add(self, x: Sequence[int], y: Sequence[int]) -> GroupElement:
        x, y = self.check(x), self.check(y)
        return tuple((a + b) % n for a, b, n in zip(x, y, self.factors))

    def neg(self, x: Sequence[int]) -> GroupElement:
        x = self.check(x)
        return tuple((-a) % n for a, n in zip(x, self.factors))

    def sub(self, x: Sequence[int], y: Sequence[int]) -> GroupElement:
        return self.add(x, self.neg(y))

    # -- vectorised index arithmetic ---------------------------------------

    @cached_property
    def coords(self) -> np.ndarray:
        """``(order, rank)`` array of residues for every element index."""
        c = np.indices(self.factors).reshape(len(self.factors), -1).T
        c.setflags(write=False)
        return c

    @cached_property
    def _radix(self) -> np.ndarray:
        w = np.ones(len(self.factors), dtype=np.int64)
        for j in range(len(self.factors) - 2, -1, -1):
            w[j] = w[j + 1] * self.factors[j + 1]
        return w

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return self._ravel((-self.coords) % np.array(self.factors))

    def _ravel(self, c: np.ndarray) -> np.ndarray:
        return (c * self._radix).sum(axis=-1)

    def add_indices(self, i, j) -> np.ndarray:
        """Index of ``x + y`` for broadcastable index arrays ``i``, ``j``."""
        i = np.asarray(i)
        j = np.asarray(j)
        if len(self.factors) == 1:
            return (i + j) % self.order
        c = (self.coords[i] + self.coords[j]) % np.array(self.factors)
        return self._ravel(c)

    def neg_indices(self, i) -> np.ndarray:
        return self._neg_table[np.asarray(i)]

    def sub_indices(self, i, j) -> np.ndarray:
        return self.add_indices(i, self.neg_indices(j))

    def translate_indices(self, t: Sequence[int]) -> np.ndarray:
        """``out[i]`` is the index of ``element(i) + t``."""
        return self.add_indices(np.arange(self.order), self.index(t))


def make_group(factors: Iterable[int], size_cap: int = DEFAULT_SIZE_CAP) -> FiniteAbelianGroup:
    factors = list(factors)
    if not factors:
        raise ValueError("a group needs at least one cyclic factor")
    for n in factors:
        if int(n) != n or n < 1:
            raise ValueError(f"cyclic factors must be integers >= 1, got {n!r}")
    check_cap("group order", math.prod(factors), size_cap)
    return FiniteAbelianGroup(tuple(factors))


def parse_group(text: str, size_cap: int = DEFAULT_SIZE_CAP) -> FiniteAbelianGroup:
    """Parse a group literal such as ``"5"`` or ``"3,3,2"``."""
    try:
        factors = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ValueError(f"malformed group literal {text!r}") from None
    return make_group(factors, size_cap)


def sum_map(g: FiniteAbelianGroup, xs: Sequence[Sequence[int]]) -> GroupElement:
    """x_1 + ... + x_k.  A tuple lies on the zero-sum set exactly when this is zero."""
    if not xs:
        raise ValueError("sum_map needs at least one element")
    total = g.zero()
    for x in xs:
        total = g.add(total, x)
    return total


def in_zero_sum_set(g: FiniteAbelianGroup, xs: Sequence[Sequence[int]]) -> bool:
    return sum_map(g, xs) == g.zero()


@dataclass(frozen=True)
class Coset:
    subgroup: tuple[int, ...]
    representative: GroupElement
    members: tuple[int, ...]


def generated_subgroup(g: FiniteAbelianGroup, generators: Iterable[Sequence[int]]) -> list[int]:
    """Sorted element indices of the subgroup generated by ``generators``."""
    members = {0}
    frontier = [0]
    gens = [g.index(x) for x in generators]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = int(g.add_indices(a, s))
                if b not in members:
                    members.add(b)
                    nxt.append(b)
        frontier = nxt
    # finite group: closure under addition already contains inverses
    return sorted(members)


def is_subgroup(g: FiniteAbelianGroup, indices: Iterable[int]) -> bool:
    h = set(int(i) for i in indices)
    if 0 not in h:
        return False
    arr = np.array(sorted(h))
    sums = g.add_indices(arr[:, None], arr[None, :])
    return set(np.unique(sums).tolist()) <= h


def cosets_of(g: FiniteAbelianGroup, subgroup: Sequence[int]) -> list[Coset]:
    sub = np.array(sorted(set(int(i) for i in subgroup)))
    if not is_subgroup(g, sub):
        raise ValueError(f"{sub.tolist()} is not a subgroup of {g!r}")
    seen = np.zeros(g.order, dtype=bool)
    out = []
    for i in range(g.order):
        if seen[i]:
            continue
        members = np.sort(g.add_indices(i, sub))
        seen[members] = True
        out.append(Coset(tuple(sub.tolist()), g.element(int(members[0])), tuple(members.tolist())))
    return out


def subgroup_cosets(g: FiniteAbelianGroup, generators: Iterable[Sequence[int]]) -> list[Coset]:
    return cosets_of(g, generated_subgroup(g, generators))


def all_subgroups(g: FiniteAbelianGroup) -> list[tuple[int, ...]]:
    """Every subgroup, as sorted index tuples.  Brute force; small groups only."""
    found = {(0,)}
    frontier = [(0,)]
    while frontier:
        nxt = []
        for h in frontier:
            for x in range(g.order):
                if x in h:
                    continue
                sub = tuple(generated_subgroup(g, [g.element(i) for i in h] + [g.element(x)]))
                if sub not in found:
                    found.add(sub)
                    nxt.append(sub)
        frontier = nxt
    return sorted(found, key=lambda h: (len(h), h))


def character_table(g: FiniteAbelianGroup, xi: Sequence[int]) -> np.ndarray:
    xi = np.array(g.check(xi))
    n = np.array(g.factors)
    phase = ((g.coords * xi) % n / n).sum(axis=1)
    return np.exp(2j * np.pi * phase)


@dataclass(frozen=True)
class Character:
    """The linear character indexed by ``xi``; used as a decomposition atom."""

    group: FiniteAbelianGroup
    xi: GroupElement

    def table(self) -> np.ndarray:
        return character_table(self.group, self.xi)

    def sort_key(self) -> tuple:
        return (1,) + tuple(self.xi)

    def to_json(self) -> dict:
        return {"character": list(self.xi)}


def linear_character(g: FiniteAbelianGroup, xi: Sequence[int]):
    """x -> exp(2 pi i sum_j xi_j x_j / n_j) as a GroupFunction."""
    from .functions import GroupFunction

    return GroupFunction(g, character_table(g, xi))

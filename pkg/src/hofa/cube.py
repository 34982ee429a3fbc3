"""The cube group B_k, its spider parameterisation, the form U~_k and face actions.

Vertices of the k-cube are bit masks ``0 .. 2**k - 1``; bit ``i`` stands for
direction ``i + 1``.  Vertex tuples are always laid out in mask order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._reduce import parallel_map, tree_sum
from .functions import GroupFunction
from .groups import FiniteAbelianGroup, GroupMismatchError, check_cap

CUBE_CAP = 10**8


def popcount(v: int) -> int:
    return bin(v).count("1")


def gray_walk(k: int) -> list[tuple[int, int, int]]:
    """Steps ``(vertex, bit, +1/-1)`` visiting every vertex but 0 in Gray-code order."""
    steps = []
    prev = 0
    for j in range(1, 2**k):
        v = j ^ (j >> 1)
        bit = (v ^ prev).bit_length() - 1
        steps.append((v, bit, 1 if v & (1 << bit) else -1))
        prev = v
    return steps


def faces2(k: int) -> list[tuple[int, int, int, int]]:
    """All 2-faces as ``(p, q, s, r)``: q, r flip one direction each, s flips both."""
    out = []
    for i, j in itertools.combinations(range(k), 2):
        bi, bj = 1 << i, 1 << j
        for v in range(2**k):
            if v & (bi | bj) == 0:
                out.append((v, v | bi, v | bi | bj, v | bj))
    return out


def edges(k: int) -> list[tuple[int, int]]:
    return [(v, v | (1 << i)) for i in range(k) for v in range(2**k) if not v & (1 << i)]


def spider_map(g: FiniteAbelianGroup, k: int, coords: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Vertex values a_0 + sum_{i in v} a_i of the cube point with spider coordinates ``coords``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(coords) != k + 1:
        raise ValueError(f"need {k + 1} spider coordinates, got {len(coords)}")
    coords = [g.check(a) for a in coords]
    out = []
    for v in range(2**k):
        x = coords[0]
        for i in range(k):
            if v >> i & 1:
                x = g.add(x, coords[i + 1])
        out.append(x)
    return out


def cube_membership(g: FiniteAbelianGroup, k: int, vertices: Sequence[Sequence[int]]) -> bool:
    if len(vertices) != 2**k:
        raise ValueError(f"a {k}-cube tuple has {2**k} entries, got {len(vertices)}")
    idx = np.array([g.index(x) for x in vertices])
    return bool(np.all(_face_residuals(g, k, idx[None, :]) == 0))


def _face_residuals(g: FiniteAbelianGroup, k: int, idx: np.ndarray) -> np.ndarray:
    """Alternating face sums for a batch ``(m, 2**k)`` of vertex index tuples."""
    res = [np.zeros(len(idx), dtype=np.int64)]
    for p, q, s, r in faces2(k):
        t = g.add_indices(g.sub_indices(idx[:, p], idx[:, q]), g.sub_indices(idx[:, s], idx[:, r]))
        res.append(t)
    return np.stack(res, axis=1)


def spider_image(g: FiniteAbelianGroup, k: int) -> np.ndarray:
    """All |A|^(k+1) cube points as rows of vertex indices, in spider-coordinate order."""
    check_cap("|A|^(k+1) * 2^k", g.order ** (k + 1) * 2**k, CUBE_CAP)
    a = np.indices((g.order,) * (k + 1)).reshape(k + 1, -1)
    cols = []
    for v in range(2**k):
        x = a[0]
        for i in range(k):
            if v >> i & 1:
                x = g.add_indices(x, a[i + 1])
        cols.append(x)
    return np.stack(cols, axis=1)


def face_equation_kernel(g: FiniteAbelianGroup, k: int) -> np.ndarray:
    """Brute-force enumeration of every vertex tuple satisfying all 2-face equations."""
    check_cap("|A|^(2^k)", g.order ** (2**k), CUBE_CAP)
    allv = np.indices((g.order,) * 2**k).reshape(2**k, -1).T
    ok = np.all(_face_residuals(g, k, allv) == 0, axis=1)
    return allv[ok]


def _slot_tables(fs, k: int) -> tuple[FiniteAbelianGroup, list[np.ndarray]]:
    if len(fs) != 2**k:
        raise ValueError(f"need {2**k} functions, got {len(fs)}")
    g = fs[0].group
    for f in fs:
        if f.group != g:
            raise GroupMismatchError("all slot functions must share a group")
    return g, [f.values for f in fs]


def tilde_U(fs: Sequence[GroupFunction], k: int, cap: int = CUBE_CAP) -> complex:
    """Average over spider coordinates of prod_v f_v(delta_k(a)_v).

    One a_0 slice at a time; inside a slice the vertex indices are updated
    along a Gray-code walk so each vertex costs a single group addition.
    """
    g, tables = _slot_tables(fs, k)
    n = g.order
    check_cap("|A|^(k+1)", n ** (k + 1), cap)
    shape = (n,) * k
    axes = [np.arange(n).reshape([n if j == i else 1 for j in range(k)]) for i in range(k)]
    walk = gray_walk(k)

    def slice_sum(a0: int) -> complex:
        idx = np.full(shape, a0, dtype=np.int64)
        prod = np.broadcast_to(tables[0][a0], shape).astype(np.complex128)
        for v, bit, sign in walk:
            step = axes[bit] if sign > 0 else g.neg_indices(axes[bit])
            idx = g.add_indices(idx, step)
            prod = prod * tables[v][idx]
        return prod.reshape(-1).sum()

    return complex(tree_sum(parallel_map(slice_sum, range(n)))) / n ** (k + 1)


def alternating_slots(f: GroupFunction, k: int) -> list[GroupFunction]:
    """f at even vertices, conj(f) at odd ones."""
    fc = f.conj()
    return [fc if popcount(v) % 2 else f for v in range(2**k)]


# -- face actions ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Automorphism:
    """A permutation sigma of the element indices, acting on functions by f -> f o sigma^-1."""

    perm: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.perm, dtype=np.int64)
        if sorted(p.tolist()) != list(range(len(p))):
            raise ValueError("automorphism table is not a permutation")
        p.setflags(write=False)
        object.__setattr__(self, "perm", p)

    @classmethod
    def identity(cls, g: FiniteAbelianGroup) -> "Automorphism":
        return cls(np.arange(g.order))

    @classmethod
    def translation(cls, g: FiniteAbelianGroup, c: Sequence[int]) -> "Automorphism":
        """The action f -> shift(f, c), i.e. sigma(x) = x - c."""
        return cls(g.sub_indices(np.arange(g.order), g.index(c)))

    def __matmul__(self, other: "Automorphism") -> "Automorphism":
        # (self @ other)(x) = self(other(x))
        return Automorphism(self.perm[other.perm])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(len(self.perm))
        return Automorphism(inv)

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and np.array_equal(self.perm, other.perm)

    def act(self, f: GroupFunction) -> GroupFunction:
        return GroupFunction(f.group, f.values[self.inverse().perm])


def commutator(s1: Automorphism, s2: Automorphism) -> Automorphism:
    return s1 @ s2 @ s1.inverse() @ s2.inverse()


@dataclass(frozen=True)
class FaceAction:
    T: frozenset[int]
    sigma: Automorphism

    def __post_init__(self):
        object.__setattr__(self, "T", frozenset(self.T))

    def inverse(self) -> "FaceAction":
        return FaceAction(self.T, self.sigma.inverse())


def apply_face_action(act: FaceAction, fs: Sequence[GroupFunction], k: int) -> list[GroupFunction]:
    """Apply sigma to the slots indexed by T; ``k`` is the cube dimension of ``fs``."""
    if len(fs) != 2**k:
        raise ValueError(f"need {2**k} functions, got {len(fs)}")
    if any(not 0 <= v < 2**k for v in act.T):
        raise ValueError("face action mentions a vertex outside the cube")
    return [act.sigma.act(f) if v in act.T else f for v, f in enumerate(fs)]


def _check_edge(e: tuple[int, int]) -> None:
    a, b = e
    if popcount(a ^ b) != 1:
        raise ValueError(f"{e} is not an edge")


def commutator_check(
    g: FiniteAbelianGroup,
    k: int,
    e1: tuple[int, int],
    e2: tuple[int, int],
    s1: Automorphism,
    s2: Automorphism,
) -> bool:
    """Does [l(e1,s1), l(e2,s2)] act as l(w, [s1,s2]) at the shared vertex w?

    Checked by applying both sides to tuples of point indicators, which span
    every slot.
    """
    _check_edge(e1)
    _check_edge(e2)
    shared = set(e1) & set(e2)
    if len(shared) != 1:
        raise ValueError(f"edges {e1} and {e2} must meet in exactly one vertex")
    (w,) = shared
    l1 = FaceAction(frozenset(e1), s1)
    l2 = FaceAction(frozenset(e2), s2)
    target = FaceAction(frozenset([w]), commutator(s1, s2))
    for j in range(g.order):
        fs = [GroupFunction.indicator(g, [j])] * 2**k
        lhs = fs
        for act in (l2.inverse(), l1.inverse(), l2, l1):
            lhs = apply_face_action(act, lhs, k)
        rhs = apply_face_action(target, fs, k)
        if not all(np.array_equal(a.values, b.values) for a, b in zip(lhs, rhs)):
            return False
    return True

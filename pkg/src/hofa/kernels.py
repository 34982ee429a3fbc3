"""Hilbert-Schmidt kernels on A x A with normalised composition.

Composition averages over the middle variable, so the identity kernel is
|A| on the diagonal and a kernel acts on functions by
(K f)(x) = (1/|A|) sum_y K(x, y) f(y).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._reduce import det_mean, parallel_map
from .functions import GroupFunction
from .groups import FiniteAbelianGroup, GroupMismatchError, check_cap
from .phases import (
    DICTIONARY_CAP,
    PolynomialPhase,
    _level_check,
    best_match,
    dictionary_correlations,
    monomials,
    phase_dictionary,
    zpn_prime,
)

SELF_ADJOINT_TOL = 1e-9
EIG_ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Kernel:
    group: FiniteAbelianGroup
    values: np.ndarray

    def __post_init__(self):
        n = self.group.order
        v = np.array(self.values, dtype=np.complex128).reshape(n, n)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def identity(cls, g: FiniteAbelianGroup) -> "Kernel":
        return cls(g, g.order * np.eye(g.order))

    @classmethod
    def outer(cls, f: GroupFunction, h: GroupFunction) -> "Kernel":
        """(x, y) -> f(x) conj(h(y))."""
        return cls(f.group, np.outer(f.values, h.values.conj()))

    @classmethod
    def shift_invariant(cls, g: GroupFunction) -> "Kernel":
        """(x, y) -> g(y - x)."""
        G = g.group
        n = G.order
        idx = G.sub_indices(np.arange(n)[None, :], np.arange(n)[:, None])
        return cls(G, g.values[idx])

    def __add__(self, other: "Kernel") -> "Kernel":
        _same(self, other)
        return Kernel(self.group, self.values + other.values)

    def __mul__(self, c: complex) -> "Kernel":
        return Kernel(self.group, self.values * c)

    __rmul__ = __mul__

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.values - self.values.conj().T)) <= tol)

    def apply(self, f: GroupFunction) -> GroupFunction:
        return GroupFunction(self.group, (self.values * f.values[None, :]).mean(axis=1))


def _same(K1: Kernel, K2: Kernel) -> None:
    if K1.group != K2.group:
        raise GroupMismatchError(f"{K1.group!r} vs {K2.group!r}")


def compose(K1: Kernel, K2: Kernel) -> Kernel:
    """(K1 o K2)(x, y) = (1/|A|) sum_z K1(x, z) K2(z, y)."""
    _same(K1, K2)
    rows = parallel_map(lambda x: (K1.values[x][:, None] * K2.values).mean(axis=0), range(K1.group.order))
    return Kernel(K1.group, np.stack(rows))


def adjoint(K: Kernel) -> Kernel:
    return Kernel(K.group, K.values.conj().T)


def hs_inner(K1: Kernel, K2: Kernel) -> complex:
    _same(K1, K2)
    return complex(det_mean(K1.values * K2.values.conj()))


# -- diagonal-shift structure ------------------------------------------------


@lru_cache(maxsize=32)
def _span_basis(p: int, n: int, degree: int) -> np.ndarray:
    """Orthonormal (Euclidean) basis of the span of phases of degree <= degree, as columns."""
    d = phase_dictionary(p, n, degree)
    # constants are always present; higher phases add the rest
    M = np.concatenate([np.ones((1, p**n)), d.tables]).T
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    basis = u[:, s > 1e-9 * s[0]]
    basis.setflags(write=False)
    return basis


def diagonal_orbits(K: Kernel) -> np.ndarray:
    """``out[x, y, t] = K(x + t, y + t)``."""
    g = K.group
    n = g.order
    xt = g.add_indices(np.arange(n)[:, None], np.arange(n)[None, :])  # (x, t)
    return K.values[xt[:, None, :], xt[None, :, :]]


def project_lower(h: np.ndarray, g: FiniteAbelianGroup, k: int) -> np.ndarray:
    """Orthogonal projection of functions in the last axis onto the degree <= k-1 phase span."""
    p = _level_check(g, k)
    B = _span_basis(p, g.rank, k - 1)
    return (h @ B.conj()) @ B.T


@dataclass(frozen=True)
class Membership:
    member: bool
    max_residual: float

    def __bool__(self) -> bool:
        return self.member


def ck_membership(K: Kernel, k: int, tol: float = 1e-9) -> Membership:
    """Is every diagonal orbit t -> K(x+t, y+t) in the degree <= k-1 phase span?

    Residuals are normalised L2 distances ||h - proj h||_2.
    """
    h = diagonal_orbits(K)
    r = h - project_lower(h, K.group, k)
    worst = float(np.sqrt(np.max(np.mean(np.abs(r) ** 2, axis=-1))))
    return Membership(worst <= tol, worst)


def pair_kernel(f: GroupFunction, g: GroupFunction, k: int, hermitian: bool = False) -> Kernel:
    """e(x, y): value at t = 0 of the projection of t -> f(x+t) g(y+t).

    With ``hermitian=True`` the second factor is conjugated, which is the
    variant whose output is self-adjoint when f = g.
    """
    if f.group != g.group:
        raise GroupMismatchError(f"{f.group!r} vs {g.group!r}")
    G = f.group
    n = G.order
    _level_check(G, k)
    gv = g.values.conj() if hermitian else g.values
    xt = G.add_indices(np.arange(n)[:, None], np.arange(n)[None, :])
    h = f.values[xt][:, None, :] * gv[xt][None, :, :]
    proj = project_lower(h, G, k)
    return Kernel(G, proj[:, :, 0])


# -- spectra -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Eigenspace:
    eigenvalue: float
    functions: list[GroupFunction]


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    j = int(np.flatnonzero(np.abs(v) > 1e-8 * np.abs(v).max())[0])
    return v * (abs(v[j]) / v[j])


def spectral_decomposition(K: Kernel, cluster_tol: float = 1e-9) -> list[Eigenspace]:
    """Nonzero eigenspaces of a self-adjoint kernel as an operator on L2(A).

    Ordered by descending |eigenvalue| (positive first on ties); each
    eigenspace gets an orthonormal basis under the normalised inner product.
    Bases of repeated eigenvalues are not unique.
    """
    if not K.is_self_adjoint(SELF_ADJOINT_TOL):
        raise ValueError("spectral_decomposition needs a self-adjoint kernel")
    g = K.group
    n = g.order
    H = (K.values + K.values.conj().T) / (2 * n)
    lam, U = np.linalg.eigh(H)
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    keep = np.abs(lam) > EIG_ZERO_TOL * scale
    lam, U = lam[keep], U[:, keep]
    order = sorted(range(len(lam)), key=lambda i: (-abs(lam[i]), -lam[i]))
    spaces: list[Eigenspace] = []
    for i in order:
        v = _canonical_phase(U[:, i]) * np.sqrt(n)
        fn = GroupFunction(g, v)
        if spaces and abs(spaces[-1].eigenvalue - lam[i]) <= cluster_tol * scale:
            spaces[-1].functions.append(fn)
        else:
            spaces.append(Eigenspace(float(lam[i]), [fn]))
    for sp in spaces:
        sp.functions.sort(key=lambda f: tuple(np.round(f.values, 9).view(float)))
    return spaces


def reconstruct(spaces: list[Eigenspace], g: FiniteAbelianGroup) -> Kernel:
    out = np.zeros((g.order, g.order), dtype=np.complex128)
    for sp in spaces:
        for f in sp.functions:
            out += sp.eigenvalue * np.outer(f.values, f.values.conj())
    return Kernel(g, out)


def planted_phase_recovery(K: Kernel, k: int, cap: int = DICTIONARY_CAP) -> list[PolynomialPhase]:
    """Match each eigenfunction of K against the phases of degree <= k.

    Phases are returned without constant term (a global unit factor is not
    recoverable from an eigenfunction), in eigenvalue order, without repeats.
    """
    g = K.group
    p = zpn_prime(g)
    if not 1 <= k <= p - 1:
        raise ValueError(f"k must lie in [1, {p - 1}]")
    check_cap("dictionary size", p ** len(monomials(p, g.rank, k, min_degree=1)), cap)
    d = phase_dictionary(p, g.rank, k)
    found: list[PolynomialPhase] = []
    for sp in spectral_decomposition(K):
        for f in sp.functions:
            phi = d.phases[best_match(dictionary_correlations(f, d))]
            if phi not in found:
                found.append(phi)
    return found


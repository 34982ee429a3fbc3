"""Structured-plus-uniform decompositions f = sum c_i phi_i + residual."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .functions import GroupFunction, fourier, shift
from .gowers import gowers_U
from .groups import Character, GroupMismatchError
from .partitions import Partition
from .phases import (
    DICTIONARY_CAP,
    PolynomialPhase,
    best_match,
    dictionary_correlations,
    phase_dictionary,
    zpn_prime,
)

Atom = Union[PolynomialPhase, Character]


@dataclass
class DecompositionResult:
    terms: list[tuple[Atom, complex]]
    residual: GroupFunction
    residual_gowers: float
    iterations: int
    exhausted: bool = False
    selection_correlations: list[float] = field(default_factory=list)
    residual_norms: list[float] = field(default_factory=list)

    def structured(self) -> GroupFunction:
        g = self.residual.group
        v = np.zeros(g.order, dtype=np.complex128)
        for atom, c in self.terms:
            v = v + c * atom.table()
        return GroupFunction(g, v)

    def reconstruct(self) -> GroupFunction:
        return self.structured() + self.residual


def _sorted_terms(terms):
    return sorted(terms, key=lambda t: (-round(abs(t[1]), 12), t[0].sort_key()))


def fourier_truncate(f: GroupFunction, delta: float, k: int = 2) -> DecompositionResult:
    """Keep the characters with |f^(xi)| >= delta; the rest is the residual.

    The residual's U_k norm (default U_2) is reported.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    g = f.group
    coeffs = fourier(f)
    terms = [
        (Character(g, g.element(i)), complex(coeffs[i]))
        for i in range(g.order)
        if abs(coeffs[i]) >= delta
    ]
    structured = np.zeros(g.order, dtype=np.complex128)
    for atom, c in terms:
        structured = structured + c * atom.table()
    residual = GroupFunction(g, f.values - structured)
    return DecompositionResult(
        terms=_sorted_terms(terms),
        residual=residual,
        residual_gowers=gowers_U(residual, k),
        iterations=len(terms),
    )


def matching_pursuit(
    f: GroupFunction,
    k: int,
    delta: float,
    max_iter: int = 100,
    cap: int = DICTIONARY_CAP,
) -> DecompositionResult:
    """Greedy pursuit over the phases of degree <= k-1 on Z_p^n.

    Each step subtracts <r, phi> phi for the best-correlated phase phi; the
    dictionary is unit-norm, so the residual energy drops by |<r, phi>|^2.
    Stops once the best correlation is below ``delta`` or after ``max_iter``
    steps (then ``exhausted`` is set).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    g = f.group
    p = zpn_prime(g)
    if not 1 <= k <= p:
        raise ValueError(f"k must lie in [1, {p}] so that the dictionary degree k-1 is below p")
    d = phase_dictionary(p, g.rank, k - 1, cap)
    r = f.values.copy()
    terms: list[tuple[Atom, complex]] = []
    picks: list[float] = []
    norms = [float(np.sqrt(np.mean(np.abs(r) ** 2)))]
    exhausted = False
    while True:
        corr = dictionary_correlations(GroupFunction(g, r), d)
        j = best_match(corr)
        if abs(corr[j]) < delta:
            break
        if len(terms) >= max_iter:
            exhausted = True
            break
        c = complex(corr[j])
        r = r - c * d.tables[j]
        terms.append((d.phases[j], c))
        picks.append(abs(c))
        norms.append(float(np.sqrt(np.mean(np.abs(r) ** 2))))
    residual = GroupFunction(g, r)
    return DecompositionResult(
        terms=_sorted_terms(terms),
        residual=residual,
        residual_gowers=gowers_U(residual, k),
        iterations=len(terms),
        exhausted=exhausted,
        selection_correlations=picks,
        residual_norms=norms,
    )


@dataclass
class RelativeGramSchmidt:
    domain: np.ndarray  # element indices where the cell Gram matrix is nonsingular
    coefficients: np.ndarray  # (d, d, |A|), constant on cells, lower triangular
    outputs: list[GroupFunction]
    gram_det: np.ndarray  # |det W| per element


def relative_gram_schmidt(
    fs: Sequence[GroupFunction],
    shifts: Sequence[Sequence[int]],
    P: Partition,
    det_tol: float = 1e-9,
) -> RelativeGramSchmidt:
    """Gram-Schmidt with coefficients that are constant on the cells of P.

    The Gram matrix at x is W_ij(x) = E(g_i conj g_j | P)(x) for the shifted
    inputs g_i = shift(f_i, s_i).  On cells with |det W| > det_tol the outputs
    o_i = sum_j lambda_ij g_j satisfy E(o_i conj o_j | P) = delta_ij; outside
    the domain the outputs are zero.
    """
    d = len(fs)
    if d == 0:
        raise ValueError("need at least one function")
    if len(shifts) != d:
        raise ValueError("fs and shifts must have the same length")
    grp = P.group
    for f in fs:
        if f.group != grp:
            raise GroupMismatchError("functions and partition live on different groups")
    gs = np.stack([shift(f, s).values for f, s in zip(fs, shifts)])  # (d, |A|)
    m = P.cell_count
    W = np.zeros((m, d, d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            np.add.at(W[:, i, j], P.labels, gs[i] * gs[j].conj())
    W /= P.cell_sizes[:, None, None]
    dets = np.abs(np.linalg.det(W))
    L = np.zeros((m, d, d), dtype=np.complex128)
    ok = dets > det_tol
    for c in np.flatnonzero(ok):
        # W = C C^*, lambda = C^{-1} is lower triangular
        C = np.linalg.cholesky((W[c] + W[c].conj().T) / 2)
        L[c] = np.linalg.inv(C)
    coeff = np.moveaxis(L[P.labels], 0, -1)  # (d, d, |A|)
    out = np.einsum("ijx,jx->ix", coeff, gs)
    return RelativeGramSchmidt(
        domain=np.flatnonzero(ok[P.labels]),
        coefficients=coeff,
        outputs=[GroupFunction(grp, o) for o in out],
        gram_det=dets[P.labels],
    )

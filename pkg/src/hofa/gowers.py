"""Octahedral norms of k-variable functions and Gowers norms.

Two independent routes to U_k(f):

* ``definition``: brute-force octahedral norm of the sum-lift f(x_1 + ... + x_k),
  O(|A|^(2k)), kept as an oracle.
* ``cube``: alternating-conjugation average over the cube group via spider
  coordinates, O(|A|^(k+1)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._reduce import det_sum, parallel_map, tree_sum
from .cube import CUBE_CAP, alternating_slots, tilde_U
from .functions import GroupFunction
from .groups import DEFAULT_SIZE_CAP, FiniteAbelianGroup, check_cap

DEFINITION_CAP = 10**8
NEG_CLAMP = 1e-12


class NormConsistencyError(ArithmeticError):
    """A norm power came out negative beyond rounding error."""


@dataclass(frozen=True, eq=False)
class MultiFunction:
    group: FiniteAbelianGroup
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128)
        n = self.group.order
        if v.ndim < 1 or any(d != n for d in v.shape):
            raise ValueError(f"values of shape {v.shape} do not form a table over A^k")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_flat(cls, g: FiniteAbelianGroup, arity: int, values) -> "MultiFunction":
        """Build from a row-major table over A^arity."""
        return cls(g, np.asarray(values).reshape((g.order,) * arity))

    @property
    def arity(self) -> int:
        return self.values.ndim

    def __call__(self, *xs) -> complex:
        return complex(self.values[tuple(self.group.index(x) for x in xs)])


def sum_lift(f: GroupFunction, k: int, cap: int = DEFAULT_SIZE_CAP) -> MultiFunction:
    """The k-variable function (x_1, ..., x_k) -> f(x_1 + ... + x_k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = f.group
    n = g.order
    check_cap("|A|^k", n**k, cap)
    idx = np.zeros((1,) * k, dtype=np.int64)
    for i in range(k):
        idx = g.add_indices(idx, np.arange(n).reshape([n if j == i else 1 for j in range(k)]))
    return MultiFunction(g, f.values[idx])


def _root(power: complex, k: int) -> float:
    re = float(np.real(power))
    if re < 0:
        if re < -NEG_CLAMP:
            raise NormConsistencyError(f"norm power {re} is negative")
        re = 0.0
    return re ** (1.0 / 2**k)


def octahedral_power_brute(F: MultiFunction, cap: int = DEFINITION_CAP) -> complex:
    """Integral of prod_c F(x_{1,c_1}, ..., x_{k,c_k})^{q(c)} over all 2k variables."""
    v = F.values
    k = v.ndim
    n = v.shape[0]
    check_cap("|A|^(2k)", n ** (2 * k), cap)
    vc = v.conj()
    if k == 1:
        return det_sum(v[:, None] * vc[None, :]) / n**2
    rest = k - 1
    terms = []
    for c in itertools.product((0, 1), repeat=k):
        # remaining variables x_{i,j}, i >= 2, occupy axis 2*(i-2) + j
        shape = [1] * (2 * rest)
        for i in range(rest):
            shape[2 * i + c[i + 1]] = n
        src = vc if sum(c) % 2 else v
        terms.append((c[0], src, shape))

    def block(pair: tuple[int, int]) -> complex:
        x = pair
        prod = np.ones((1,) * (2 * rest), dtype=np.complex128)
        for c0, src, shape in terms:
            prod = prod * src[x[c0]].reshape(shape)
        return det_sum(prod)

    pairs = list(itertools.product(range(n), repeat=2))
    return tree_sum(parallel_map(block, pairs)) / n ** (2 * k)


def octahedral_power_fold(F: MultiFunction, cap: int = DEFINITION_CAP) -> complex:
    """Same integral, folding out one direction at a time.

    With the first pair (x_{1,0}, x_{1,1}) = (a, b) fixed the integrand is the
    (k-1)-fold integral for H_ab(y) = F(a, y) conj F(b, y); iterating leaves a
    batch of one-variable functions h whose contribution is |mean h|^2.
    """
    v = F.values
    k = v.ndim
    n = v.shape[0]
    check_cap("|A|^(2k-1)", n ** (2 * k - 1), cap)
    H = v.reshape(1, *v.shape)
    for _ in range(k - 1):
        tail = H.shape[2:]
        H = (H[:, :, None] * H[:, None, :].conj()).reshape(-1, *tail)
    means = H.mean(axis=1)
    return det_sum((means * means.conj()).real) / len(means)


def octahedral_norm(F: MultiFunction, method: str = "fold", cap: int = DEFINITION_CAP) -> float:
    if method == "fold":
        power = octahedral_power_fold(F, cap)
    elif method == "brute":
        power = octahedral_power_brute(F, cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _root(power, F.arity)


def gowers_power_cube(f: GroupFunction, k: int, cap: int = CUBE_CAP) -> complex:
    return tilde_U(alternating_slots(f, k), k, cap)


def gowers_U(f: GroupFunction, k: int, method: str = "cube", cap: int | None = None) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    if method == "cube":
        return _root(gowers_power_cube(f, k, CUBE_CAP if cap is None else cap), k)
    if method == "definition":
        cap = DEFINITION_CAP if cap is None else cap
        check_cap("|A|^(2k)", f.group.order ** (2 * k), cap)
        return octahedral_norm(sum_lift(f, k, cap=cap), "brute", cap)
    raise ValueError(f"unknown method {method!r}")


def quasirandom_test(F: MultiFunction, eps: float) -> bool:
    if eps <= 0:
        raise ValueError("eps must be positive")
    return octahedral_norm(F) <= eps


def slice_at(F: MultiFunction, x) -> MultiFunction:
    """Fix the last coordinate: (x_1..x_{k-1}) -> F(x_1..x_{k-1}, x)."""
    if F.arity < 2:
        raise ValueError("slices need arity >= 2")
    return MultiFunction(F.group, F.values[..., F.group.index(x)])


def slice_span_dim(F: MultiFunction, tol: float = 1e-9) -> int:
    """Dimension of the span of all |A| slices of F."""
    if F.arity < 2:
        raise ValueError("slices need arity >= 2")
    n = F.group.order
    M = np.moveaxis(F.values, -1, 0).reshape(n, -1)
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol))

"""Polynomial phases x -> e(P(x)/p) on Z_p^n.

These are the concrete higher-order characters of this package: a phase of
degree d is unimodular and each multiplicative derivative lowers the degree
by one, as long as d < p.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .functions import GroupFunction, delta
from .groups import FiniteAbelianGroup, GroupMismatchError, check_cap, make_group

DICTIONARY_CAP = 10**6

Exponent = tuple[int, ...]


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def _check_p(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


@dataclass(frozen=True)
class PolynomialPhase:
    p: int
    n: int
    coeffs: tuple[tuple[Exponent, int], ...]

    def __post_init__(self):
        _check_p(self.p)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        clean: dict[Exponent, int] = {}
        for e, c in dict(self.coeffs).items():
            e = tuple(int(x) for x in e)
            if len(e) != self.n or any(not 0 <= x <= self.p - 1 for x in e):
                raise ValueError(f"bad exponent {e} for n={self.n}, p={self.p}")
            c = int(c) % self.p
            if c:
                clean[e] = c
        object.__setattr__(self, "coeffs", tuple(sorted(clean.items())))

    @classmethod
    def make(cls, p: int, n: int, coeffs: Mapping) -> "PolynomialPhase":
        """``coeffs`` maps exponent tuples (or bare ints when n == 1) to residues."""
        items = {}
        for e, c in coeffs.items():
            if isinstance(e, int):
                e = (e,)
            items[tuple(e)] = c
        return cls(p, n, tuple(items.items()))

    @classmethod
    def univariate(cls, p: int, coeffs: Sequence[int]) -> "PolynomialPhase":
        """``coeffs[j]`` is the coefficient of x^j."""
        return cls.make(p, 1, {j: c for j, c in enumerate(coeffs)})

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.coeffs), default=0)

    @property
    def group(self) -> FiniteAbelianGroup:
        return _group(self.p, self.n)

    def coeff(self, e) -> int:
        if isinstance(e, int):
            e = (e,)
        return dict(self.coeffs).get(tuple(e), 0)

    def __mul__(self, other: "PolynomialPhase") -> "PolynomialPhase":
        if (self.p, self.n) != (other.p, other.n):
            raise GroupMismatchError("phases live on different groups")
        out = dict(self.coeffs)
        for e, c in other.coeffs:
            out[e] = out.get(e, 0) + c
        return PolynomialPhase(self.p, self.n, tuple(out.items()))

    def conj(self) -> "PolynomialPhase":
        return PolynomialPhase(self.p, self.n, tuple((e, -c) for e, c in self.coeffs))

    def exponents(self) -> np.ndarray:
        """P(x) mod p for every element index of Z_p^n."""
        mono = _monomial_values(self.p, self.n, tuple(e for e, _ in self.coeffs))
        c = np.array([c for _, c in self.coeffs], dtype=np.int64)
        if not len(c):
            return np.zeros(self.p**self.n, dtype=np.int64)
        return (c @ mono) % self.p

    def table(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.exponents() / self.p)

    def sort_key(self) -> tuple:
        """Dense coefficient vector in graded monomial order, for lexicographic tie-breaks."""
        pos = _monomial_positions(self.p, self.n)
        vec = [0] * len(pos)
        for e, c in self.coeffs:
            vec[pos[e]] = c
        return (0,) + tuple(vec)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "coeffs": {_exp_key(e): c for e, c in self.coeffs},
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "PolynomialPhase":
        return cls.make(int(d["p"]), int(d.get("n", 1)), {_parse_exp_key(k): v for k, v in d["coeffs"].items()})

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for e, c in sorted(self.coeffs, key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(
                (f"x{j + 1}" if self.n > 1 else "x") + (f"^{a}" if a > 1 else "")
                for j, a in enumerate(e)
                if a
            )
            terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms) + f" (mod {self.p})"


def _exp_key(e: Exponent) -> str:
    return ",".join(str(a) for a in e)


def _parse_exp_key(k: str) -> Exponent:
    return tuple(int(a) for a in str(k).split(","))


@lru_cache(maxsize=None)
def _group(p: int, n: int) -> FiniteAbelianGroup:
    return make_group([p] * n)


@lru_cache(maxsize=None)
def _monomial_positions(p: int, n: int) -> dict[Exponent, int]:
    return {e: i for i, e in enumerate(monomials(p, n, n * (p - 1)))}


@lru_cache(maxsize=256)
def _monomial_values(p: int, n: int, exps: tuple[Exponent, ...]) -> np.ndarray:
    """``(len(exps), p**n)`` table of x^e mod p."""
    coords = _group(p, n).coords
    out = np.ones((len(exps), p**n), dtype=np.int64)
    for r, e in enumerate(exps):
        for j, a in enumerate(e):
            if a:
                out[r] = out[r] * pow_mod(coords[:, j], a, p) % p
    out.setflags(write=False)
    return out


def pow_mod(x: np.ndarray, a: int, p: int) -> np.ndarray:
    out = np.ones_like(x)
    for _ in range(a):
        out = out * x % p
    return out


def _check_group(phi: PolynomialPhase, g: FiniteAbelianGroup) -> None:
    if g.factors != (phi.p,) * phi.n:
        raise GroupMismatchError(f"phase lives on Z_{phi.p}^{phi.n}, not {g!r}")


def phase_eval(phi: PolynomialPhase) -> GroupFunction:
    return GroupFunction(phi.group, phi.table())


def phase_delta(phi: PolynomialPhase, t: Sequence[int]) -> PolynomialPhase:
    """The phase of P(x + t) - P(x), expanded exactly mod p."""
    t = phi.group.check(t)
    p = phi.p
    out: dict[Exponent, int] = {}
    for e, c in phi.coeffs:
        # (x + t)^e = prod_j sum_{m_j <= e_j} C(e_j, m_j) x_j^{m_j} t_j^{e_j - m_j}
        for ms in itertools.product(*(range(a + 1) for a in e)):
            w = c
            for a, m, tj in zip(e, ms, t):
                w = w * math.comb(a, m) * pow(tj, a - m, p) % p
            out[ms] = (out.get(ms, 0) + w) % p
        out[e] = (out.get(e, 0) - c) % p
    return PolynomialPhase(p, phi.n, tuple(out.items()))


# -- enumeration -------------------------------------------------------------


def monomials(p: int, n: int, max_degree: int, min_degree: int = 0) -> list[Exponent]:
    """Exponent tuples with entries <= p-1 and min_degree <= total <= max_degree, graded order."""
    out = [
        e
        for e in itertools.product(range(min(p - 1, max_degree) + 1), repeat=n)
        if min_degree <= sum(e) <= max_degree
    ]
    return sorted(out, key=lambda e: (sum(e), e))


def _from_vector(p: int, n: int, monos: Sequence[Exponent], vec: Iterable[int]) -> PolynomialPhase:
    return PolynomialPhase(p, n, tuple(zip(monos, vec)))


def _enumerate(p: int, n: int, monos: list[Exponent], cap: int) -> list[PolynomialPhase]:
    check_cap("number of phases", p ** len(monos), cap)
    return [_from_vector(p, n, monos, v) for v in itertools.product(range(p), repeat=len(monos))]


def enumerate_phases(p: int, n: int, max_degree: int, cap: int = DICTIONARY_CAP) -> list[PolynomialPhase]:
    """Every polynomial phase with total degree <= max_degree, constant term included."""
    _check_p(p)
    if not 0 <= max_degree <= p - 1:
        raise ValueError(f"max_degree must lie in [0, {p - 1}]")
    return _enumerate(p, n, monomials(p, n, max_degree), cap)


def dual_representatives(p: int, n: int, k: int, cap: int = DICTIONARY_CAP) -> list[PolynomialPhase]:
    """One phase per class of {deg <= k} modulo {deg <= k-1}: pure degree-k forms."""
    _check_p(p)
    if not 0 <= k <= p - 1:
        raise ValueError(f"k must lie in [0, {p - 1}]")
    return _enumerate(p, n, monomials(p, n, k, min_degree=k), cap)


@dataclass(frozen=True, eq=False)
class PhaseDictionary:
    """Phases of degree 1..max_degree with zero constant term, plus their value tables.

    Constant terms only rotate a phase by a global unit scalar, so they are
    dropped; correlations are insensitive to them up to that rotation.
    """

    p: int
    n: int
    max_degree: int
    phases: list[PolynomialPhase]
    tables: np.ndarray  # (len(phases), p**n)

    def __len__(self) -> int:
        return len(self.phases)


@lru_cache(maxsize=32)
def phase_dictionary(p: int, n: int, max_degree: int, cap: int = DICTIONARY_CAP) -> PhaseDictionary:
    _check_p(p)
    if not 0 <= max_degree <= p - 1:
        raise ValueError(f"max_degree must lie in [0, {p - 1}]")
    monos = monomials(p, n, max_degree, min_degree=1)
    check_cap("dictionary size", p ** len(monos), cap)
    vecs = np.array(list(itertools.product(range(p), repeat=len(monos))), dtype=np.int64)
    if monos:
        expo = (vecs @ _monomial_values(p, n, tuple(monos))) % p
    else:
        expo = np.zeros((1, p**n), dtype=np.int64)
    tables = np.exp(2j * np.pi * expo / p)
    tables.setflags(write=False)
    phases = [_from_vector(p, n, monos, v) for v in vecs.tolist()]
    return PhaseDictionary(p, n, max_degree, phases, tables)


def dictionary_correlations(f: GroupFunction, d: PhaseDictionary) -> np.ndarray:
    """<f, phi> for every dictionary phase."""
    _check_group(d.phases[0], f.group)
    return (d.tables.conj() * f.values[None, :]).mean(axis=1)


def best_match(corr: np.ndarray, tie_tol: float = 1e-12) -> int:
    """Index of the largest |corr|; near-ties go to the earliest (lexicographic) entry."""
    mag = np.abs(corr)
    return int(np.flatnonzero(mag >= mag.max() - tie_tol)[0])


def correlation_spectrum(
    f: GroupFunction, family: Sequence[PolynomialPhase]
) -> list[tuple[PolynomialPhase, complex]]:
    """(phase, <f, phase>) sorted by descending magnitude, ties by coefficients."""
    out = []
    for phi in family:
        _check_group(phi, f.group)
        out.append((phi, complex(np.mean(f.values * phi.table().conj()))))
    out.sort(key=lambda t: (-round(abs(t[1]), 12), t[0].sort_key()))
    return out


# -- pre-cocycles --------------------------------------------------------------


def zpn_prime(g: FiniteAbelianGroup) -> int:
    """p for a group of the form Z_p^n, p an odd prime."""
    p = g.factors[0]
    if len(set(g.factors)) != 1:
        raise GroupMismatchError(f"{g!r} is not of the form Z_p^n")
    _check_p(p)
    return p


def _level_check(g: FiniteAbelianGroup, k: int) -> int:
    p = zpn_prime(g)
    if not 1 <= k <= p - 1:
        raise ValueError(f"k must lie in [1, {p - 1}]")
    return p


def precocycle_residual(f: GroupFunction, k: int) -> float:
    """Worst distance, over shifts t, of delta(f, t) from a single phase of degree <= k-1.

    The distance of ``h`` from the line through the best-matching dictionary
    phase ``phi`` is ||h - <h, phi> phi||_2.
    """
    g = f.group
    p = _level_check(g, k)
    d = phase_dictionary(p, g.rank, k - 1)
    worst = 0.0
    for i in range(g.order):
        h = delta(f, g.element(i))
        corr = dictionary_correlations(h, d)
        j = best_match(corr)
        r = h.values - corr[j] * d.tables[j]
        worst = max(worst, float(np.sqrt(np.mean(np.abs(r) ** 2))))
    return worst


def precocycle_check(f: GroupFunction, k: int, tol: float = 1e-9) -> bool:
    """Is f unimodular with every derivative delta(f, t) a phase of degree <= k-1?"""
    _level_check(f.group, k)
    if not f.is_unimodular():
        return False
    return precocycle_residual(f, k) <= tol

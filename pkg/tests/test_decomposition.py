import numpy as np
import pytest

from hofa import (
    GroupFunction,
    Partition,
    PolynomialPhase,
    fourier,
    fourier_truncate,
    linear_character,
    make_group,
    matching_pursuit,
    relative_gram_schmidt,
)
from hofa.functions import conditional_expectation
from hofa.groups import Character

from conftest import random_function


def planted_signal(noise=0.01, seed=0):
    g = make_group([7])
    p1 = PolynomialPhase.univariate(7, [0, 0, 1])
    p2 = PolynomialPhase.univariate(7, [0, 1, 1])
    rng = np.random.default_rng(seed)
    eta = rng.uniform(-1, 1, 7) + 1j * rng.uniform(-1, 1, 7)
    eta = noise * eta / np.max(np.abs(eta))
    f = GroupFunction(g, p1.table() + 0.3 * p2.table() + eta)
    return f, p1, p2


def test_fourier_truncate_keeps_large_coefficients(rng):
    g = make_group([8])
    f = linear_character(g, (3,)) * 0.8 + linear_character(g, (5,)) * 0.1
    res = fourier_truncate(f, 0.5)
    assert [(a.xi, pytest.approx(c)) for a, c in res.terms] == [((3,), pytest.approx(0.8))]
    assert res.reconstruct().allclose(f, atol=1e-12)
    assert res.residual_gowers == pytest.approx(0.1, abs=1e-12)
    h = random_function(g, rng)
    res = fourier_truncate(h, 0.3)
    kept = {g.index(a.xi) for a, _ in res.terms}
    assert kept == {i for i, c in enumerate(fourier(h)) if abs(c) >= 0.3}
    assert res.reconstruct().allclose(h, atol=1e-12)


def test_pursuit_recovers_planted_pair():
    f, p1, p2 = planted_signal()
    res = matching_pursuit(f, 3, 0.15)
    got = {phi: c for phi, c in res.terms}
    assert set(got) == {p1, p2}
    assert abs(got[p1] - 1) <= 0.05 and abs(got[p2] - 0.3) <= 0.05
    assert res.terms[0][0] == p1
    assert res.reconstruct().allclose(f, atol=1e-9)


def test_pursuit_energy_identity_and_bound(rng):
    g = make_group([7])
    for _ in range(10):
        f = random_function(g, rng)
        delta = 0.2
        res = matching_pursuit(f, 3, delta)
        e0 = f.norm() ** 2
        picks = np.array(res.selection_correlations)
        assert res.residual.norm() ** 2 == pytest.approx(e0 - np.sum(picks**2), abs=1e-9)
        assert res.iterations <= e0 / delta**2 + 1
        assert np.all(np.diff(res.residual_norms) <= 1e-12)
        assert res.reconstruct().allclose(f, atol=1e-9)


def test_pursuit_stops_and_flags_exhaustion():
    f, _, _ = planted_signal()
    res = matching_pursuit(f, 3, 0.001, max_iter=1)
    assert res.exhausted and res.iterations == 1
    g = make_group([11])
    u = GroupFunction(g, np.exp(2j * np.pi * np.random.default_rng(2).random(11)))
    assert matching_pursuit(u, 2, 0.9).iterations == 0


def test_pursuit_arguments():
    f, _, _ = planted_signal()
    with pytest.raises(ValueError):
        matching_pursuit(f, 2, 0)
    with pytest.raises(ValueError):
        matching_pursuit(f, 8, 0.1)


def test_gram_schmidt_characters_trivial_partition():
    g = make_group([5])
    chars = [linear_character(g, (xi,)) for xi in range(3)]
    P = Partition.trivial(g)
    res = relative_gram_schmidt(chars, [(0,)] * 3, P)
    assert len(res.domain) == 5
    # already orthonormal: lambda is the identity on every cell
    for x in range(5):
        assert np.allclose(res.coefficients[:, :, x], np.eye(3), atol=1e-12)
    for o, c in zip(res.outputs, chars):
        assert o.allclose(c, atol=1e-12)


def test_gram_schmidt_general(rng):
    g = make_group([2, 4])
    P = Partition.cosets(g, [0, g.index((0, 2))])
    fs = [random_function(g, rng) for _ in range(2)]
    shifts = [(0, 0), (1, 3)]
    res = relative_gram_schmidt(fs, shifts, P)
    for x in range(g.order):
        L = res.coefficients[:, :, x]
        assert np.allclose(np.triu(L, 1), 0)
        # coefficients are constant on cells
        for y in range(g.order):
            if P.labels[x] == P.labels[y]:
                assert np.allclose(L, res.coefficients[:, :, y])
    on = np.zeros(g.order)
    on[res.domain] = 1
    on = GroupFunction(g, on)
    for i, oi in enumerate(res.outputs):
        for j, oj in enumerate(res.outputs):
            e = conditional_expectation(oi * oj.conj(), P)
            assert e.allclose(on * (1.0 if i == j else 0.0), atol=1e-9)


def test_gram_schmidt_degenerate_cells():
    g = make_group([4])
    P = Partition.cosets(g, [0, 2])
    f = GroupFunction(g, np.array([1.0, 0, 1.0, 0]))
    res = relative_gram_schmidt([f], [(0,)], P)
    assert res.domain.tolist() == [0, 2]
    assert res.outputs[0].values.tolist() == [1, 0, 1, 0]


def test_character_atoms_sort_after_phases():
    g = make_group([5])
    assert Character(g, (1,)).sort_key() > PolynomialPhase.univariate(5, [0, 4]).sort_key()

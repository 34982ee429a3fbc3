import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hofa import (
    GroupFunction,
    MultiFunction,
    SizeCapError,
    fourier,
    gowers_U,
    linear_character,
    make_group,
    octahedral_norm,
    quasirandom_test,
    shift,
    slice_at,
    slice_span_dim,
    sum_lift,
)
from hofa.gowers import NormConsistencyError, _root, octahedral_power_brute, octahedral_power_fold
from hofa.phases import PolynomialPhase, phase_eval

from conftest import random_function
from oracles import gowers_power_loops, phase_values


@pytest.mark.parametrize("factors,k", [((3,), 1), ((3,), 2), ((2, 2), 2), ((5,), 2), ((3,), 3), ((4,), 3)])
def test_all_paths_match_loop_oracle(factors, k, rng):
    g = make_group(factors)
    f = random_function(g, rng)
    ref = gowers_power_loops(factors, f.values.tolist(), k).real ** (1 / 2**k)
    assert gowers_U(f, k, "cube") == pytest.approx(ref, abs=1e-12)
    assert gowers_U(f, k, "definition") == pytest.approx(ref, abs=1e-12)
    assert octahedral_norm(sum_lift(f, k), "fold") == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fold_matches_brute_on_general_tables(k, rng):
    g = make_group([4])
    F = MultiFunction(g, rng.standard_normal((4,) * k) + 1j * rng.standard_normal((4,) * k))
    assert abs(octahedral_power_fold(F) - octahedral_power_brute(F)) < 1e-12


def test_u1_is_modulus_of_mean(rng):
    g = make_group([7])
    f = random_function(g, rng)
    assert gowers_U(f, 1) == pytest.approx(abs(f.mean()), abs=1e-12)


@pytest.mark.parametrize("factors", [(8,), (2, 4), (32,)])
def test_u2_fourth_power_is_fourier_l4(factors, rng):
    g = make_group(factors)
    for _ in range(3):
        f = random_function(g, rng)
        assert gowers_U(f, 2) ** 4 == pytest.approx(np.sum(np.abs(fourier(f)) ** 4), abs=1e-12)


def test_z5_quadratic_phase():
    f = GroupFunction(make_group([5]), phase_values([0, 0, 1], 5))
    assert gowers_U(f, 2) == pytest.approx(5 ** -0.25, abs=1e-12)
    assert gowers_U(f, 3) == pytest.approx(1.0, abs=1e-12)
    assert gowers_U(f, 2, "definition") == pytest.approx(5 ** -0.25, abs=1e-12)


def test_monotone_in_k(rng):
    g = make_group([5])
    for _ in range(5):
        f = random_function(g, rng)
        vals = [gowers_U(f, k) for k in (1, 2, 3, 4)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= np.max(np.abs(f.values)) + 1e-12


@given(st.integers(0, 6), st.integers(0, 6))
def test_shift_and_modulation_invariance(t, xi):
    g = make_group([7])
    f = random_function(g, np.random.default_rng(t * 7 + xi))
    u = gowers_U(f, 2)
    assert gowers_U(shift(f, (t,)), 2) == pytest.approx(u, abs=1e-12)
    assert gowers_U(f * linear_character(g, (xi,)), 2) == pytest.approx(u, abs=1e-12)
    assert gowers_U(f.conj(), 2) == pytest.approx(u, abs=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_phase_order_detection(d):
    phi = phase_eval(PolynomialPhase.univariate(7, [0] * d + [1]))
    assert gowers_U(phi, d + 1) == pytest.approx(1.0, abs=1e-12)
    assert gowers_U(phi, d) < 1 - 1e-3


def test_sum_lift_values():
    g = make_group([5])
    f = GroupFunction(g, np.arange(5.0))
    F = sum_lift(f, 2)
    assert F((2,), (4,)) == 1.0
    assert F.values.shape == (5, 5)


def test_slices():
    g = make_group([3])
    F = MultiFunction(g, np.arange(9.0).reshape(3, 3))
    assert slice_at(F, (1,)).values.real.tolist() == [1, 4, 7]
    assert slice_span_dim(F) == 2
    chi = linear_character(g, (1,))
    assert slice_span_dim(sum_lift(chi, 2)) == 1
    with pytest.raises(ValueError):
        slice_span_dim(MultiFunction(g, np.ones(3)))


def test_quasirandom_threshold_matches_fourier_oracle():
    # sum-lift of a +/-1 function: O_2^4 = sum |f^|^4, with no seed cherry-picking
    g = make_group([31])
    rng = np.random.default_rng(0)
    f = GroupFunction(g, rng.choice([-1.0, 1.0], size=31))
    oracle = np.sum(np.abs(fourier(f)) ** 4) ** 0.25
    F = sum_lift(f, 2)
    assert octahedral_norm(F) == pytest.approx(oracle, abs=1e-12)
    assert quasirandom_test(F, 0.5) == (oracle <= 0.5)
    assert quasirandom_test(F, 0.6)
    assert not quasirandom_test(sum_lift(linear_character(g, (3,)), 2), 0.5)


def test_root_clamps_rounding_noise():
    assert _root(-1e-14, 2) == 0.0
    with pytest.raises(NormConsistencyError):
        _root(-1e-6, 2)


def test_caps():
    g = make_group([9])
    f = GroupFunction.constant(g)
    with pytest.raises(SizeCapError):
        gowers_U(f, 9, "definition")
    with pytest.raises(SizeCapError):
        gowers_U(f, 3, "cube", cap=100)
    with pytest.raises(ValueError):
        gowers_U(f, 0)


def test_octahedral_examples():
    g2 = make_group([2])
    assert octahedral_norm(MultiFunction(g2, np.array([1.0, 0.0]))) == pytest.approx(0.5)
    assert octahedral_norm(MultiFunction(g2, np.ones((2, 2)))) == pytest.approx(1.0)
    g = make_group([5])
    rng = np.random.default_rng(4)
    f, h = np.exp(2j * np.pi * rng.random(5)), np.exp(2j * np.pi * rng.random(5))
    F = MultiFunction(g, np.outer(f, h))
    assert octahedral_norm(F, "fold") == pytest.approx(1.0, abs=1e-12)
    assert octahedral_norm(F, "brute") == pytest.approx(1.0, abs=1e-12)
    assert gowers_U(GroupFunction.indicator(g2, [0]), 1) == pytest.approx(0.5)

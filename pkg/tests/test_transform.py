import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chrestenson.radix import ResolutionError
from chrestenson.transform import Spectrum, fwt, forward, ifwt, inverse, naive_forward, naive_fwt
from chrestenson.walsh import StepFunction, sample_walsh

from oracles import synthesize

CASES = [(2, 1), (2, 6), (3, 1), (3, 4), (4, 3), (5, 3), (7, 2)]


def rel_err(x, y):
    return np.linalg.norm(x - y) / np.linalg.norm(y)


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.mark.parametrize("a, N", CASES)
def test_constant_has_single_coefficient(a, N):
    c = forward(StepFunction.constant(1.0, N, a)).coefficients
    expected = np.zeros(a**N)
    expected[0] = 1
    np.testing.assert_allclose(c, expected, atol=1e-15)


@pytest.mark.parametrize("a, N", CASES)
def test_walsh_function_is_unit_vector(a, N):
    for n in {0, 1, a**N - 1, a**N // 2}:
        c = forward(sample_walsh(n, N, a)).coefficients
        expected = np.zeros(a**N)
        expected[n] = 1
        assert np.abs(c - expected).max() < 1e-13


@pytest.mark.parametrize("a, N", CASES)
def test_inverse_of_unit_vector_is_walsh_function(a, N):
    for n in {0, 1, a**N - 1}:
        e = np.zeros(n + 1)
        e[n] = 1
        np.testing.assert_allclose(inverse(Spectrum(a, e), N).values, sample_walsh(n, N, a).values, atol=1e-14)


def test_synthesis_example():
    # coefficients at indices 2 and 3 (the k = 2 block of the counterexample)
    f = inverse(Spectrum(2, [0, 0, 0.5, 0.375]), 2)
    np.testing.assert_allclose(f.values, [0.875, -0.875, 0.125, -0.125], atol=1e-15)
    g = inverse(Spectrum(2, [0, 0.5, 0.375]), 2)
    np.testing.assert_allclose(g.values, synthesize([0, 0.5, 0.375], 2, 2), atol=1e-15)
    np.testing.assert_allclose(g.values, [0.875, 0.125, -0.125, -0.875], atol=1e-15)


@pytest.mark.parametrize("a, N", [(3, 2), (5, 2), (2, 4), (4, 2)])
def test_synthesis_matches_literal_evaluation(a, N, rng):
    c = random_complex(rng, a**N)
    np.testing.assert_allclose(ifwt(c, a, N), synthesize(c, N, a), atol=1e-12)


@pytest.mark.parametrize("a, N", CASES)
def test_fast_matches_naive(a, N, rng):
    x = random_complex(rng, (20, a**N))
    fast, slow = fwt(x, a), naive_fwt(x, a)
    for u, v in zip(fast, slow):
        assert rel_err(u, v) < 1e-12


def test_round_trip_example(rng):
    f = StepFunction(3, 4, random_complex(rng, 81))
    back = inverse(forward(f), 4)
    assert rel_err(back.values, f.values) < 1e-12


@pytest.mark.parametrize("a, N", CASES)
def test_parseval(a, N, rng):
    x = random_complex(rng, a**N)
    assert abs(np.sum(np.abs(fwt(x, a)) ** 2) - np.mean(np.abs(x) ** 2)) < 1e-10


@given(
    a=st.integers(2, 5),
    N=st.integers(1, 3),
    alpha=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    beta=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    seed=st.integers(0, 2**32 - 1),
)
@settings(max_examples=50, deadline=None)
def test_linearity(a, N, alpha, beta, seed):
    rng = np.random.default_rng(seed)
    f, g = random_complex(rng, a**N), random_complex(rng, a**N)
    lhs = fwt(alpha * f + beta * g, a)
    rhs = alpha * fwt(f, a) + beta * fwt(g, a)
    assert np.abs(lhs - rhs).max() < 1e-12 * (1 + abs(alpha) + abs(beta)) * np.abs(f).max() * 4


def test_naive_forward_constant():
    c = naive_forward(StepFunction.constant(1.0, 3, 3)).coefficients
    assert abs(c[0] - 1) < 1e-15 and np.abs(c[1:]).max() < 1e-15


def test_bit_reproducible(rng):
    x = random_complex(rng, 3**6)
    assert np.array_equal(fwt(x, 3), fwt(x.copy(), 3))
    batch = np.stack([x, x])
    assert np.array_equal(fwt(batch, 3)[1], fwt(x, 3))


def test_size_errors():
    with pytest.raises(ValueError):
        fwt(np.ones(6), 2)
    with pytest.raises(ValueError):
        naive_fwt(np.ones(10), 3)
    with pytest.raises(ResolutionError):
        inverse(Spectrum(2, np.ones(5)), 2)


def test_inverse_pads_short_spectra():
    f = inverse(Spectrum(3, [1.0]), 2)
    np.testing.assert_array_equal(f.values, np.ones(9))

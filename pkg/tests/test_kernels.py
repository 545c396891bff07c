import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chrestenson.kernels import (
    dirichlet,
    kernel_integrals,
    lebesgue_constant,
    lemma_sequence,
    max_feasible_k,
    verify_lemma,
)
from chrestenson.radix import MemoryGuardError, ResolutionError, resolution_for
from chrestenson.walsh import sample_walsh

from oracles import brute_tallies


def test_dirichlet_five_order_two():
    t = dirichlet(5, 3, 2)
    np.testing.assert_array_equal(t.values(), [5, 3, 1, -1, 1, -1, 1, -1])


def test_dirichlet_one_is_constant():
    for a in (2, 3, 7):
        t = dirichlet(1, 2, a)
        assert (t.counts[:, 0] == 1).all() and (t.counts[:, 1:] == 0).all()


@pytest.mark.parametrize("a", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_power_kernel(a, r):
    for N in (r, r + 1):
        v = dirichlet(a**r, N, a).values()
        head = a ** (N - r)
        assert (v[:head] == a**r).all()
        assert (v[head:] == 0).all()


def test_power_kernel_counts_split_over_subgroups():
    # a = 4, cells with x_1 = 2 see only the classes {0, 2}
    t = dirichlet(4, 1, 4)
    np.testing.assert_array_equal(t.counts, [[4, 0, 0, 0], [1, 1, 1, 1], [2, 0, 2, 0], [1, 1, 1, 1]])


@pytest.mark.parametrize("a", [2, 3, 4, 6])
def test_recursion_matches_brute_force(a):
    n_max = 300
    N = resolution_for(n_max, a)
    for n, counts in brute_tallies(n_max, N, a):
        assert np.array_equal(dirichlet(n, N, a).counts, counts), n


@given(a=st.integers(2, 7), data=st.data())
@settings(max_examples=60, deadline=None)
def test_tally_mass_and_pointwise_bound(a, data):
    N = data.draw(st.integers(1, 4))
    n = data.draw(st.integers(1, a**N))
    t = dirichlet(n, N, a)
    assert (t.counts.sum(axis=1) == n).all()
    assert (t.counts >= 0).all()
    assert (np.abs(t.values()) <= n * (1 + 1e-12)).all()


@given(a=st.integers(2, 7), data=st.data())
@settings(max_examples=30, deadline=None)
def test_kernel_equals_sum_of_walsh_functions(a, data):
    N = data.draw(st.integers(1, 3))
    n = data.draw(st.integers(1, a**N))
    direct = sum(sample_walsh(j, N, a).values for j in range(n))
    np.testing.assert_allclose(dirichlet(n, N, a).values(), direct, atol=1e-9)


def test_dirichlet_errors():
    with pytest.raises(ResolutionError):
        dirichlet(9, 1, 2)
    with pytest.raises(ValueError):
        dirichlet(0, 1, 2)
    with pytest.raises(MemoryGuardError):
        dirichlet(3, 5, 2, cell_cap=16)


def test_lebesgue_examples():
    assert lebesgue_constant(1, 2) == 1
    assert lebesgue_constant(5, 2) == 1.75
    assert lebesgue_constant(2, 2) == 1.0
    for a in (2, 3, 5):
        for r in range(5):
            assert lebesgue_constant(a**r, a) == 1


@given(a=st.integers(2, 6), n=st.integers(1, 3000))
@settings(max_examples=60, deadline=None)
def test_lebesgue_at_least_one(a, n):
    ki = kernel_integrals(n, a)
    assert ki.total >= 1 - ki.error_bound


def test_lebesgue_matches_brute_force():
    a, N = 3, 4
    for n, counts in brute_tallies(81, N, a):
        w = np.exp(2j * np.pi * np.arange(a) / a)
        L = np.mean(np.abs(counts @ w))
        assert abs(lebesgue_constant(n, a) - L) < 1e-12


def test_lebesgue_memory_guard():
    with pytest.raises(MemoryGuardError):
        lebesgue_constant(2**10 + 1, 2, cell_cap=2**10)


def test_chunked_integral_matches_single_pass():
    n, a = 2**19 + 12345, 2
    ki = kernel_integrals(n, a, heads=(3, 25))
    v = np.abs(dirichlet(n, resolution_for(n, a), a).values())
    assert abs(ki.total - v.mean()) < 1e-12
    assert abs(ki.heads[3] - v[: 2 ** (20 - 3)].sum() / 2**20) < 1e-12
    assert ki.heads[25] == v[0] * 2.0**-25


def test_lemma_sequence_examples():
    assert lemma_sequence(4, 2) == [1, 2, 5, 10, 21]
    seq = lemma_sequence(3, 3)
    assert seq[2] == 10 and seq[3] == 30


@pytest.mark.parametrize("a", [2, 3, 5, 16])
def test_lemma_sequence_bounds(a):
    k_max = 0
    while a ** (k_max + 2) <= 2**62:
        k_max += 1
    seq = lemma_sequence(k_max, a)
    for k, n in enumerate(seq):
        assert a**k <= n < a ** (k + 1)
        assert n * (a * a - 1) < a * a * a**k
        if k >= 2:
            assert n == a**k + seq[k - 2]


def test_lemma_sequence_overflow():
    with pytest.raises(OverflowError):
        lemma_sequence(70, 2)


def test_verify_lemma_examples():
    rows = verify_lemma(4, 2).rows
    assert rows[0].partial_integral == 0.75 and rows[0].bound_half_k == 0.5
    assert rows[1].lebesgue == 1.0 and rows[1].bound_half_k == 0.75
    assert rows[2].lebesgue == 1.75 and rows[2].bound_half_k == 1.0
    # the k = 1 partial integral meets its bound with equality for a = 2
    assert rows[1].partial_integral == 0.75
    assert all(r.pass_ for r in rows)


def test_verify_lemma_head_integrals():
    for row in verify_lemma(10, 3).rows[2:]:
        assert row.head_integral > row.head_bound
        assert abs(row.tail_step) <= 4 * row.error_bound


def test_verify_lemma_detects_tampered_bound(monkeypatch):
    from chrestenson import kernels

    monkeypatch.setattr(kernels, "half_k_bound", lambda k, a: (k / 2 + 1) / a + 10)
    assert not verify_lemma(3, 2).passed


def test_max_feasible_k():
    assert max_feasible_k(2) == 25
    assert max_feasible_k(3) == 15
    assert max_feasible_k(5) == 10
    with pytest.raises(ValueError):
        verify_lemma(5, 2, cell_cap=2**5)


def test_log_bound_matches_formula():
    row = verify_lemma(6, 3).rows[6]
    assert row.bound_log == pytest.approx(math.log(row.n_k, 3) / 6, rel=1e-15)

import pytest
from hypothesis import given, strategies as st

from chrestenson.radix import (
    AdicCell,
    MemoryGuardError,
    adic_digits,
    check_cells,
    digits,
    grid_size,
    resolution_for,
    value,
)

orders = st.integers(min_value=2, max_value=16)


@pytest.mark.parametrize("n, a, expected", [(5, 2, [1, 0, 1]), (0, 3, []), (5, 3, [2, 1])])
def test_digits_examples(n, a, expected):
    assert digits(n, a) == expected


@pytest.mark.parametrize(
    "N, m, a, expected", [(2, 7, 3, [2, 1]), (1, 1, 2, [1]), (3, 0, 5, [0, 0, 0])]
)
def test_adic_digits_examples(N, m, a, expected):
    assert adic_digits(AdicCell(N, m, a)) == expected


@given(a=orders, data=st.data())
def test_digits_round_trip(a, data):
    n = data.draw(st.integers(min_value=0, max_value=min(a**20 - 1, 2**62)))
    ds = digits(n, a)
    assert value(ds, a) == n
    assert not ds or ds[-1] != 0


@given(a=st.integers(2, 7), N=st.integers(0, 6), data=st.data())
def test_adic_digits_are_padded_reversed_digits(a, N, data):
    m = data.draw(st.integers(0, a**N - 1))
    ds = digits(m, a)
    padded = ds + [0] * (N - len(ds))
    assert adic_digits(AdicCell(N, m, a)) == padded[::-1]


@given(a=st.integers(2, 7), N=st.integers(0, 4), extra=st.integers(1, 3), data=st.data())
def test_refinement_prefix(a, N, extra, data):
    m = data.draw(st.integers(0, a**N - 1))
    coarse = AdicCell(N, m, a)
    sub = data.draw(st.integers(0, a**extra - 1))
    fine = AdicCell(N + extra, m * a**extra + sub, a)
    assert coarse.contains(fine)
    assert adic_digits(fine)[:N] == adic_digits(coarse)


def test_cell_bounds_half_open():
    c = AdicCell(2, 8, 3)
    assert (c.left, c.right) == (8 / 9, 1.0)
    with pytest.raises(ValueError):
        AdicCell(2, 9, 3)


@pytest.mark.parametrize("a", [1, 17, 0])
def test_order_range(a):
    with pytest.raises(ValueError):
        digits(3, a)


def test_sixty_two_bit_guard():
    with pytest.raises(OverflowError):
        grid_size(63, 2)
    assert grid_size(62, 2) == 2**62
    with pytest.raises(OverflowError):
        digits(2**62 + 1, 2)


def test_memory_guard():
    assert check_cells(4, 2, 16) == 16
    with pytest.raises(MemoryGuardError):
        check_cells(5, 2, 16)


@pytest.mark.parametrize("n, a, N", [(1, 2, 0), (2, 2, 1), (5, 2, 3), (8, 2, 3), (9, 3, 2), (10, 3, 3)])
def test_resolution_for(n, a, N):
    assert resolution_for(n, a) == N

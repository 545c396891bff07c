"""Rademacher and generalized Walsh (Chrestenson) functions of order ``a``.

Values are roots of unity ``w**e`` with ``w = exp(2*pi*i/a)``; all evaluation
is carried out on the integer exponent ``e`` modulo ``a`` and only converted
to complex numbers at the boundary (:func:`roots_of_unity`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .radix import (
    AdicCell,
    ResolutionError,
    adic_digits,
    check_order,
    digits,
    grid_size,
)

_QUARTER_TURNS = (1.0 + 0.0j, 1j, -1.0 + 0.0j, -1j)


@lru_cache(maxsize=None)
def _roots(a: int) -> np.ndarray:
    out = np.empty(a, dtype=np.complex128)
    for e in range(a):
        if (4 * e) % a == 0:
            out[e] = _QUARTER_TURNS[4 * e // a]
        else:
            angle = 2.0 * math.pi * e / a
            out[e] = complex(math.cos(angle), math.sin(angle))
    out.flags.writeable = False
    return out


def roots_of_unity(a: int) -> np.ndarray:
    """Table ``[w**0, ..., w**(a-1)]``; quarter-turn multiples are exact."""
    return _roots(check_order(a))


def unit(e: int, a: int) -> complex:
    return complex(roots_of_unity(a)[e % a])


def rademacher_exponent(j: int, cell: AdicCell) -> int:
    """Exponent of ``phi_j`` on ``cell``: the ``(j+1)``-th a-adic digit of the cell."""
    if j < 0:
        raise ValueError(f"Rademacher index must be >= 0, got {j}")
    if j + 1 > cell.resolution:
        raise ResolutionError(
            f"phi_{j} is not constant on cells of resolution {cell.resolution}"
        )
    return adic_digits(cell)[j]


def walsh_exponent(n: int, cell: AdicCell) -> int:
    """Exponent of ``psi_n`` on ``cell``.

    With ``n = sum d_j a**j`` the product of Rademacher powers collapses to
    ``sum d_j * x_{j+1} (mod a)`` where ``x_s`` are the a-adic digits of the cell.
    """
    a = cell.order
    nd = digits(n, a)
    if len(nd) > cell.resolution:
        raise ResolutionError(
            f"psi_{n} is not constant on cells of resolution {cell.resolution}"
        )
    xs = adic_digits(cell)
    return sum(d * x for d, x in zip(nd, xs)) % a


def cell_digit(s: int, N: int, a: int, cells: np.ndarray) -> np.ndarray:
    """Vectorized ``x_s`` (1-based, most significant first) for an array of cell indices."""
    return (cells // a ** (N - s)) % a


def walsh_exponents(n: int, N: int, a: int, cells: np.ndarray | None = None) -> np.ndarray:
    """Exponents of ``psi_n`` on every cell of resolution ``N`` (or on ``cells``)."""
    size = grid_size(N, a)
    if not 0 <= n < size:
        raise ResolutionError(f"psi_{n} needs resolution > {N} for order {a}")
    if cells is None:
        cells = np.arange(size, dtype=np.int64)
    out = np.zeros(cells.shape, dtype=np.int64)
    for j, d in enumerate(digits(n, a)):
        if d:
            out += d * cell_digit(j + 1, N, a, cells)
    return out % a


def tree_sum(x) -> float | complex:
    """Sum with a fixed pairwise tree: adjacent pairs, zero padded to a power of two.

    The association order depends only on the length, so results are
    reproducible, and any aligned power-of-two chunk sums to a subtree.
    """
    buf = np.asarray(x)
    n = buf.shape[0]
    if n == 0:
        return buf.dtype.type(0)
    size = 1 << (n - 1).bit_length()
    if size != n:
        padded = np.zeros(size, dtype=buf.dtype)
        padded[:n] = buf
        buf = padded
    while buf.shape[0] > 1:
        buf = buf[0::2] + buf[1::2]
    return buf[0]


def tree_sum_error(n: int, magnitude: float) -> float:
    """First-order bound on the rounding error of :func:`tree_sum` over ``n`` terms
    whose absolute values sum to ``magnitude``."""
    depth = max(1, (n - 1).bit_length())
    return 1.01 * depth * np.finfo(float).eps / 2 * magnitude


@dataclass
class StepFunction:
    """Complex function constant on each cell of resolution ``resolution``."""

    order: int
    resolution: int
    values: np.ndarray

    def __post_init__(self):
        check_order(self.order)
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128)
        size = grid_size(self.resolution, self.order)
        if self.values.shape != (size,):
            raise ValueError(
                f"expected {size} values for {self.order}**{self.resolution} cells, "
                f"got shape {self.values.shape}"
            )

    @classmethod
    def zeros(cls, N: int, a: int) -> StepFunction:
        return cls(a, N, np.zeros(grid_size(N, a), dtype=np.complex128))

    @classmethod
    def constant(cls, c: complex, N: int, a: int) -> StepFunction:
        return cls(a, N, np.full(grid_size(N, a), c, dtype=np.complex128))

    def __len__(self):
        return self.values.shape[0]

    def integral(self) -> complex:
        return complex(tree_sum(self.values)) / len(self)

    def refine(self, N: int) -> StepFunction:
        """Same function on the finer grid of resolution ``N``."""
        if N < self.resolution:
            raise ResolutionError("refine() cannot coarsen a grid")
        rep = self.order ** (N - self.resolution)
        return StepFunction(self.order, N, np.repeat(self.values, rep))

    def _check_same_grid(self, other):
        if (self.order, self.resolution) != (other.order, other.resolution):
            raise ValueError("step functions live on different grids")

    def __add__(self, other):
        self._check_same_grid(other)
        return StepFunction(self.order, self.resolution, self.values + other.values)

    def __sub__(self, other):
        self._check_same_grid(other)
        return StepFunction(self.order, self.resolution, self.values - other.values)

    def __mul__(self, c):
        if isinstance(c, StepFunction):
            self._check_same_grid(c)
            return StepFunction(self.order, self.resolution, self.values * c.values)
        return StepFunction(self.order, self.resolution, self.values * c)

    __rmul__ = __mul__


def sample_walsh(n: int, N: int, a: int) -> StepFunction:
    """``psi_n`` on the grid of resolution ``N``."""
    e = walsh_exponents(n, N, a)
    return StepFunction(a, N, roots_of_unity(a)[e])

"""Base-a digit arithmetic and the a-adic cell model.

Every function handled by this package is constant on the half-open cells
``[m / a**N, (m + 1) / a**N)`` of some resolution ``N``.  Cells are identified
by ``(N, m)``; the point ``x = 1`` is never represented.
"""
from __future__ import annotations

from dataclasses import dataclass

MAX_ORDER = 16
INDEX_LIMIT = 2**62


class ResolutionError(ValueError):
    """A grid is too coarse for the requested function or index."""


class MemoryGuardError(ValueError):
    """A requested grid exceeds the configured cell cap."""


def check_order(a: int) -> int:
    if not isinstance(a, (int,)) or isinstance(a, bool):
        raise TypeError(f"order must be an int, got {type(a).__name__}")
    if not 2 <= a <= MAX_ORDER:
        raise ValueError(f"order must satisfy 2 <= a <= {MAX_ORDER}, got {a}")
    return a


def grid_size(N: int, a: int) -> int:
    """Number of cells ``a**N``; rejects grids beyond the 62-bit index range."""
    check_order(a)
    if N < 0:
        raise ValueError(f"resolution must be >= 0, got {N}")
    size = a**N
    if size > INDEX_LIMIT:
        raise OverflowError(f"a**N = {a}**{N} exceeds 2**62")
    return size


def check_cells(N: int, a: int, cell_cap: int) -> int:
    size = grid_size(N, a)
    if size > cell_cap:
        raise MemoryGuardError(
            f"grid of {a}**{N} = {size} cells exceeds the cap of {cell_cap} cells"
        )
    return size


def digits(n: int, a: int) -> list[int]:
    """Little-endian base-``a`` digits of ``n``; ``digits(0, a) == []``.

    >>> digits(5, 2)
    [1, 0, 1]
    >>> digits(5, 3)
    [2, 1]
    """
    check_order(a)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n > INDEX_LIMIT:
        raise OverflowError(f"{n} exceeds 2**62")
    out = []
    while n:
        n, d = divmod(n, a)
        out.append(d)
    return out


def value(ds, a: int) -> int:
    """Inverse of :func:`digits`."""
    total = 0
    for d in reversed(ds):
        if not 0 <= d < a:
            raise ValueError(f"digit {d} out of range for base {a}")
        total = total * a + d
    return total


def resolution_for(n: int, a: int) -> int:
    """Smallest ``N`` with ``a**N >= n``."""
    check_order(a)
    N, size = 0, 1
    while size < n:
        size *= a
        N += 1
    return N


@dataclass(frozen=True)
class AdicCell:
    """The interval ``[index / a**resolution, (index + 1) / a**resolution)``."""

    resolution: int
    index: int
    order: int

    def __post_init__(self):
        size = grid_size(self.resolution, self.order)
        if not 0 <= self.index < size:
            raise ValueError(
                f"cell index {self.index} out of range [0, {size}) "
                f"at resolution {self.resolution}"
            )

    @property
    def left(self) -> float:
        return self.index / self.order**self.resolution

    @property
    def right(self) -> float:
        return (self.index + 1) / self.order**self.resolution

    def digits(self) -> list[int]:
        return adic_digits(self)

    def contains(self, other: AdicCell) -> bool:
        """True if ``other`` is a (non-strict) refinement lying inside this cell."""
        if other.order != self.order or other.resolution < self.resolution:
            return False
        return other.index // self.order ** (other.resolution - self.resolution) == self.index


def adic_digits(cell: AdicCell) -> list[int]:
    """Digits ``x_1 .. x_N`` (most significant first) shared by every point of the cell."""
    a, N, m = cell.order, cell.resolution, cell.index
    out = [0] * N
    for s in range(N - 1, -1, -1):
        m, out[s] = divmod(m, a)
    return out

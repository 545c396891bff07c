"""Greedy m-term approximants and thresholding sums.

``greedy_select`` keeps the ``m`` coefficients of largest magnitude, breaking
ties towards the smaller index; ``thresholding_sum`` synthesizes the kept
terms on a grid.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable

import numpy as np

from .radix import ResolutionError, grid_size
from .transform import Spectrum, ifwt
from .walsh import StepFunction, tree_sum


@dataclass(frozen=True)
class GreedySelection:
    """Selected indices in ascending order."""

    indices: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return i in self.indices

    def __len__(self):
        return len(self.indices)


def _pairs(S) -> tuple[list[int], list[Any]]:
    if isinstance(S, Spectrum):
        return list(range(len(S))), list(S.coefficients)
    idx, coeffs = [], []
    for i, c in S:
        idx.append(int(i))
        coeffs.append(c)
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate coefficient index")
    return idx, coeffs


def greedy_select(S, m: int, key: Callable[[int], Any] | None = None) -> GreedySelection:
    """Indices of the ``m`` largest coefficients.

    ``S`` is a :class:`Spectrum` or an iterable of ``(index, coefficient)``
    pairs in any order.  Coefficients are compared by ``key(index)`` when a
    key is given (or carried by the spectrum), else by ``abs(coefficient)``.
    """
    if key is None and isinstance(S, Spectrum):
        key = S.key
    if key is None and isinstance(S, Spectrum):
        mags = np.abs(S.coefficients)
        if not 0 <= m <= mags.shape[0]:
            raise ValueError(f"m = {m} out of range [0, {mags.shape[0]}]")
        order = np.lexsort((np.arange(mags.shape[0]), -mags))
        return GreedySelection(tuple(sorted(int(i) for i in order[:m])))

    idx, coeffs = _pairs(S)
    if not 0 <= m <= len(idx):
        raise ValueError(f"m = {m} out of range [0, {len(idx)}]")
    rank = key if key is not None else dict(zip(idx, (abs(c) for c in coeffs))).__getitem__
    # stable sorts: ascending index first, then descending key keeps index order on ties
    by_index = sorted(idx)
    chosen = sorted(by_index, key=rank, reverse=True)[:m]
    return GreedySelection(tuple(sorted(chosen)))


def is_greedy(S, selection: Iterable[int], key=None) -> bool:
    """Whether every selected coefficient dominates every omitted one."""
    if key is None and isinstance(S, Spectrum):
        key = S.key
    idx, coeffs = _pairs(S)
    rank = key if key is not None else dict(zip(idx, (abs(c) for c in coeffs))).__getitem__
    chosen = set(selection)
    inside = [rank(i) for i in idx if i in chosen]
    outside = [rank(i) for i in idx if i not in chosen]
    if not inside or not outside:
        return True
    return not min(inside) < max(outside)


def thresholding_sum(S: Spectrum, selection: Iterable[int], N: int) -> StepFunction:
    """``sum_{n in selection} c[n] psi_n`` on the grid of resolution ``N``."""
    size = grid_size(N, S.order)
    chosen = np.fromiter(selection, dtype=np.int64)
    if chosen.size and chosen.max() >= size:
        raise ResolutionError(f"index {chosen.max()} needs more than {S.order}**{N} cells")
    c = np.zeros(size, dtype=np.complex128)
    c[chosen] = S.coefficients[chosen]
    return StepFunction(S.order, N, ifwt(c, S.order, N))


def greedy_approximant(S: Spectrum, m: int, N: int, key=None) -> StepFunction:
    return thresholding_sum(S, greedy_select(S, m, key), N)


def l1_norm(f: StepFunction) -> float:
    return float(tree_sum(np.abs(f.values))) / len(f)


def approximant_gap(S: Spectrum, m: int, M: int, N: int, key=None) -> float:
    """L1 distance between the ``M``-term and ``m``-term greedy approximants."""
    if not 0 <= m <= M <= len(S):
        raise ValueError(f"need 0 <= m <= M <= {len(S)}, got m={m}, M={M}")
    big = greedy_select(S, M, key)
    small = greedy_select(S, m, key)
    return l1_norm(thresholding_sum(S, big, N) - thresholding_sum(S, small, N))

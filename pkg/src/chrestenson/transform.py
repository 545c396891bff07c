"""Generalized Walsh (Chrestenson) spectral transform in Paley order.

``fwt`` and ``ifwt`` act on the last axis of an array of length ``a**N``.
The forward direction carries the ``1/a**N`` factor, so its output is the
vector of Fourier coefficients ``<f, psi_n>`` of the step function.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from .radix import ResolutionError, check_order, grid_size
from .walsh import StepFunction, cell_digit, roots_of_unity

_NAIVE_CHUNK = 256


def _log_exact(size: int, a: int) -> int:
    N, p = 0, 1
    while p < size:
        p *= a
        N += 1
    if p != size:
        raise ValueError(f"length {size} is not a power of {a}")
    return N


@lru_cache(maxsize=32)
def _digit_reversal(N: int, a: int) -> np.ndarray:
    idx = np.arange(a**N, dtype=np.int64)
    rev = np.zeros_like(idx)
    rest = idx.copy()
    for _ in range(N):
        rest, d = np.divmod(rest, a)
        rev = rev * a + d
    rev.flags.writeable = False
    return rev


def _butterflies(y: np.ndarray, N: int, a: int, twiddle: np.ndarray) -> np.ndarray:
    # stage s mixes the cell digit x_{s+1}; each output accumulates inputs in
    # ascending order, so the result does not depend on any scheduling.
    batch = y.shape[:-1]
    for s in range(N):
        v = y.reshape(batch + (a**s, a, a ** (N - s - 1)))
        out = np.empty_like(v)
        for d in range(a):
            acc = v[..., 0, :].copy()
            for x in range(1, a):
                acc += twiddle[(d * x) % a] * v[..., x, :]
            out[..., d, :] = acc
        y = out.reshape(batch + (a**N,))
    return y


def fwt(x, a: int) -> np.ndarray:
    """Fast forward transform along the last axis, ``O(N a**(N+1))``."""
    check_order(a)
    y = np.array(x, dtype=np.complex128)
    N = _log_exact(y.shape[-1], a)
    y = _butterflies(y, N, a, np.conj(roots_of_unity(a)))
    return y[..., _digit_reversal(N, a)] / a**N


def ifwt(c, a: int, N: int | None = None) -> np.ndarray:
    """Synthesis ``sum_n c[n] psi_n`` on the grid of resolution ``N``.

    Shorter coefficient vectors are zero padded; ``N`` defaults to the
    smallest resolution holding every index.
    """
    check_order(a)
    c = np.asarray(c, dtype=np.complex128)
    length = c.shape[-1]
    if N is None:
        N = 0
        while a**N < length:
            N += 1
    size = grid_size(N, a)
    if length > size:
        raise ResolutionError(
            f"{length} coefficients do not fit on {a}**{N} = {size} cells"
        )
    if length < size:
        padded = np.zeros(c.shape[:-1] + (size,), dtype=np.complex128)
        padded[..., :length] = c
        c = padded
    y = c[..., _digit_reversal(N, a)]
    return _butterflies(y, N, a, roots_of_unity(a))


def naive_fwt(x, a: int) -> np.ndarray:
    """Literal double sum ``(1/a**N) sum_m x[m] conj(psi_n(cell m))``; ``O(a**(2N))``."""
    check_order(a)
    x = np.asarray(x, dtype=np.complex128)
    size = x.shape[-1]
    N = _log_exact(size, a)
    conj_roots = np.conj(roots_of_unity(a))
    cells = np.arange(size, dtype=np.int64)
    xs = [cell_digit(s + 1, N, a, cells) for s in range(N)]
    out = np.empty(x.shape, dtype=np.complex128)
    for start in range(0, size, _NAIVE_CHUNK):
        rows = np.arange(start, min(start + _NAIVE_CHUNK, size), dtype=np.int64)
        expo = np.zeros((rows.shape[0], size), dtype=np.int64)
        rest = rows.copy()
        for j in range(N):
            rest, d = np.divmod(rest, a)
            expo += d[:, None] * xs[j][None, :]
        kernel = conj_roots[expo % a]
        out[..., rows] = x @ kernel.T
    return out / size


@dataclass
class Spectrum:
    """Coefficients ``c[n]`` of ``sum_n c[n] psi_n`` in Paley order.

    ``key``, when set, maps an index to an exactly comparable stand-in for
    ``|c[n]|``; greedy selection prefers it over the float magnitudes.
    """

    order: int
    coefficients: np.ndarray
    key: Callable[[int], Any] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        check_order(self.order)
        self.coefficients = np.ascontiguousarray(self.coefficients, dtype=np.complex128)
        if self.coefficients.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")

    def __len__(self):
        return self.coefficients.shape[0]


def forward(f: StepFunction) -> Spectrum:
    return Spectrum(f.order, fwt(f.values, f.order))


def inverse(S: Spectrum, N: int) -> StepFunction:
    return StepFunction(S.order, N, ifwt(S.coefficients, S.order, N))


def naive_forward(f: StepFunction) -> Spectrum:
    return Spectrum(f.order, naive_fwt(f.values, f.order))

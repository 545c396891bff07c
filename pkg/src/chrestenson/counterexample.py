"""An integrable function whose greedy approximants do not converge in L1.

The coefficients are ``C_i = 1/k**2 + 2**-i`` on the blocks
``a**((k-1)**2) <= i < a**(k**2)``.  They strictly decrease, so every greedy
approximant is a partial sum, yet the block sums starting at
``a**((k-1)**2)`` behave like ``D_m / k**2`` and keep an L1 norm above
``1/(4a)``.

Note on indexing: the gap measured here is the explicit block
``sum_{i=s}^{s+m-1} C_i psi_i`` with ``s = a**((k-1)**2)``.  As a difference
of greedy approximants this is ``G_{s+m-1} - G_{s-1}`` (the expansion has no
``psi_0`` term); it is computed from the block directly.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import total_ordering

import numpy as np

from .greedy import l1_norm
from .kernels import DEFAULT_CELL_CAP, kernel_integrals, lemma_sequence, tally_cells
from .radix import INDEX_LIMIT, check_cells, check_order, grid_size, resolution_for
from .transform import Spectrum, ifwt
from .walsh import StepFunction, walsh_exponents

# 2**-i is below the smallest positive double past this index
DYADIC_CUTOFF = 1060
_EPS = np.finfo(float).eps
_CHUNK = 2**18


def block_of(i: int, a: int) -> int:
    """The block ``k`` with ``a**((k-1)**2) <= i < a**(k**2)``."""
    check_order(a)
    if i < 1:
        raise ValueError(f"coefficient index must be >= 1, got {i}")
    if i > INDEX_LIMIT:
        raise OverflowError(f"index {i} exceeds 2**62")
    k = 1
    while i >= a ** (k * k):
        k += 1
    return k


def block_start(k: int, a: int) -> int:
    return a ** ((k - 1) ** 2)


def dyadic(i: int) -> float:
    return math.ldexp(1.0, -i) if i <= DYADIC_CUTOFF else 0.0


@total_ordering
@dataclass(frozen=True, eq=False)
class CoefficientKey:
    """Exact stand-in for ``C_i``; compares as the coefficient value.

    ``block == 0`` encodes the zero coefficient at index 0.
    """

    index: int
    block: int
    order: int

    @property
    def rank(self) -> tuple:
        if self.block == 0:
            return (0, 0, 0)
        return (1, -self.block, -self.index)

    @property
    def value(self) -> float:
        """``1/k**2 + 2**-i`` rounded to a double."""
        if self.block == 0:
            return 0.0
        return 1.0 / self.block**2 + dyadic(self.index)

    @property
    def dyadic_log2(self) -> int | None:
        return None if self.block == 0 else -self.index

    def __eq__(self, other):
        if not isinstance(other, CoefficientKey):
            return NotImplemented
        return self.rank == other.rank

    def __lt__(self, other):
        if not isinstance(other, CoefficientKey):
            return NotImplemented
        return self.rank < other.rank

    def __hash__(self):
        return hash(self.rank)


def coefficient(i: int, a: int) -> CoefficientKey:
    return CoefficientKey(i, block_of(i, a), a)


def exact_rank(i: int, a: int) -> tuple:
    """Sortable key of ``C_i`` (index 0 carries the zero coefficient)."""
    if i == 0:
        return (0, 0, 0)
    return (1, -block_of(i, a), -i)


def coefficient_values(length: int, a: int) -> np.ndarray:
    """Float values ``C_i`` for ``0 <= i < length`` with ``C_0 = 0``."""
    i = np.arange(length, dtype=np.int64)
    blocks = np.zeros(length, dtype=np.int64)
    k = 1
    while block_start(k, a) < length:
        blocks[block_start(k, a) : min(a ** (k * k), length)] = k
        k += 1
    out = np.zeros(length)
    nz = blocks > 0
    out[nz] = 1.0 / blocks[nz].astype(float) ** 2
    small = nz & (i <= DYADIC_CUTOFF)
    out[small] += np.ldexp(1.0, -i[small].astype(np.int32))
    return out


def partial_spectrum(K: int, a: int, cell_cap: int = DEFAULT_CELL_CAP) -> Spectrum:
    """Coefficients of ``f_1 + ... + f_K``, indices ``0 <= i < a**(K*K)``."""
    check_order(a)
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    length = check_cells(K * K, a, cell_cap)
    return Spectrum(a, coefficient_values(length, a), key=lambda i: exact_rank(i, a))


@dataclass
class DecompositionReport:
    order: int
    blocks: int
    resolution: int
    g_norm: float
    h_norm: float
    f_norm: float
    g_bound: float
    h_bound: float
    f_bound: float
    split_residual: float
    passed: bool

    def as_dict(self):
        return asdict(self)


def power_kernel(r: int, N: int, a: int) -> np.ndarray:
    """``D_{a**r}`` on the grid of resolution ``N``: ``a**r`` on ``[0, a**-r)``, else 0."""
    size = grid_size(N, a)
    out = np.zeros(size)
    out[: a ** (N - r)] = float(a**r)
    return out


def decomposition_norms(K: int, a: int, cell_cap: int = DEFAULT_CELL_CAP, slack: float = 1e-10) -> DecompositionReport:
    """L1 norms of the truncations ``g_K``, ``h_K`` and ``f_K = g_K + h_K``.

    ``g_K = sum_{k<=K} (D_{a^(k^2)} - D_{a^((k-1)^2)}) / k^2`` is assembled
    from the closed form of ``D_{a^r}``; ``h_K`` and ``f_K`` are synthesized
    from their coefficients.
    """
    N = K * K
    spec = partial_spectrum(K, a, cell_cap)
    g = np.zeros(grid_size(N, a))
    for k in range(1, K + 1):
        g += (power_kernel(k * k, N, a) - power_kernel((k - 1) ** 2, N, a)) / (k * k)
    h_coeffs = np.zeros(len(spec))
    idx = np.arange(1, min(len(spec), DYADIC_CUTOFF + 1))
    h_coeffs[idx] = np.ldexp(1.0, -idx.astype(np.int32))
    h = StepFunction(a, N, ifwt(h_coeffs, a, N))
    f = StepFunction(a, N, ifwt(spec.coefficients, a, N))
    g_fn = StepFunction(a, N, g)
    g_norm, h_norm, f_norm = l1_norm(g_fn), l1_norm(h), l1_norm(f)
    g_bound = 2 * sum(1 / (k * k) for k in range(1, K + 1))
    f_bound = math.pi**2 / 3 + 1
    residual = float(np.max(np.abs(f.values - g - h.values)))
    passed = g_norm <= g_bound + slack and h_norm <= 1 + slack and f_norm <= f_bound + slack
    return DecompositionReport(a, K, N, g_norm, h_norm, f_norm, g_bound, 1.0, f_bound, residual, bool(passed))


@dataclass
class GapReport:
    order: int
    k: int
    block_start: int
    m_k: int
    block_end: int
    resolution: int
    gap: float
    lebesgue_m: float
    j2_bound: float
    j2_bound_log2: int
    dirichlet_bound: float
    final_bound: float | None
    error_bound: float
    window_ok: bool
    chain_ok: bool | None
    j1_identity: bool | None
    pass_dirichlet: bool
    pass_final: bool | None

    @property
    def passed(self) -> bool:
        flags = [self.window_ok, self.pass_dirichlet]
        if self.k >= 4:
            flags += [self.chain_ok, self.pass_final]
        return all(flags)

    def as_dict(self):
        d = asdict(self)
        d["pass"] = self.passed
        return d


def gap_window(k: int, a: int) -> tuple[int, int]:
    """Block start ``a**((k-1)**2)`` and length ``m_k = n_{(k-1)**2}``."""
    return block_start(k, a), lemma_sequence((k - 1) ** 2, a)[-1]


def j1_identity(k: int, a: int, cell_cap: int = DEFAULT_CELL_CAP) -> bool:
    """Exact check of ``sum_{i<m} psi_{s+i} = psi_s D_m`` on every cell.

    The left side is tallied as ``D_{s+m} - D_s``; the right side is the
    tally of ``D_m`` rotated by the exponent of ``psi_s``.
    """
    s, m = gap_window(k, a)
    N = resolution_for(s + m, a)
    size = check_cells(N, a, cell_cap)
    cls = np.arange(a)
    for start in range(0, size, _CHUNK):
        cells = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        block = tally_cells(s + m, N, a, cells) - tally_cells(s, N, a, cells)
        dm = tally_cells(m, N, a, cells)
        rot = walsh_exponents(s, N, a, cells)
        shifted = dm[np.arange(cells.shape[0])[:, None], (cls[None, :] - rot[:, None]) % a]
        if not np.array_equal(block, shifted):
            return False
    return True


def final_bound(k: int, a: int) -> float:
    return 1 / (4 * a) - math.ldexp(1.0, 1 - block_start(k, a))


def block_gap(k: int, a: int, cell_cap: int = DEFAULT_CELL_CAP, check_identity: bool = True) -> GapReport:
    """Measure ``|| sum_{i=s}^{s+m_k-1} C_i psi_i ||_1`` for block ``k`` and
    compare it with ``L_{m_k}/k**2 - 2**(1-s)`` and, for ``k >= 4``, with
    ``1/(4a) - 2**(1-s)``.

    ``j1_identity`` records whether the block of Walsh functions factors as
    ``psi_s D_{m_k}``.  It does whenever ``s + i`` never carries into a new
    digit, which holds for ``a >= 3``; for ``a = 2`` and ``k >= 3`` it fails
    and is reported, not enforced.
    """
    check_order(a)
    if k < 2:
        raise ValueError(f"block index must be >= 2, got {k}")
    s, m = gap_window(k, a)
    last = s + m - 1
    N = resolution_for(last + 1, a)
    check_cells(N, a, cell_cap)
    window_ok = s + m < a ** (k * k) and s <= m < a * s

    coeffs = coefficient_values(last + 1, a)
    coeffs[:s] = 0.0
    block = StepFunction(a, N, ifwt(coeffs, a, N))
    gap = l1_norm(block)
    mass = float(np.sum(coeffs))
    err = float(8 * (N + 1) * a * _EPS * mass)

    ki = kernel_integrals(m, a, cell_cap=cell_cap)
    j2_log2 = 1 - s
    j2 = math.ldexp(1.0, j2_log2)
    d_bound = ki.total / k**2 - j2
    pass_d = bool(gap - d_bound >= -(err + ki.error_bound / k**2))

    f_bound = chain = pass_f = None
    if k >= 4:
        f_bound = final_bound(k, a)
        chain = 2 * (k - 1) ** 2 >= k * k
        pass_f = bool(gap - f_bound >= -err)
    return GapReport(
        a, k, s, m, last, N, gap, ki.total, j2, j2_log2, d_bound, f_bound, err,
        bool(window_ok), chain, j1_identity(k, a, cell_cap) if check_identity else None,
        pass_d, pass_f,
    )

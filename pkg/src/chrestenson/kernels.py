"""Dirichlet kernels ``D_n = psi_0 + ... + psi_{n-1}``, Lebesgue constants and
the lower bound on ``L_{n_k}`` along the sequence ``n_k``.

A kernel is stored as an :class:`ExponentTally`: for every cell, the number of
summands ``psi_j`` (``j < n``) taking the value ``w**e``.  The tally is exact;
complex values only appear when the magnitude ``|D_n|`` is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .radix import (
    INDEX_LIMIT,
    ResolutionError,
    check_cells,
    check_order,
    digits,
    grid_size,
    resolution_for,
)
from .walsh import StepFunction, cell_digit, roots_of_unity, tree_sum, tree_sum_error

DEFAULT_CELL_CAP = 2**26
_CHUNK = 2**18
_EPS = np.finfo(float).eps


@dataclass
class ExponentTally:
    order: int
    resolution: int
    n: int
    counts: np.ndarray  # shape (a**N, a)

    def values(self) -> np.ndarray:
        return _tally_values(self.counts, self.order)

    def step_function(self) -> StepFunction:
        return StepFunction(self.order, self.resolution, self.values())

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values())


def _tally_values(counts: np.ndarray, a: int) -> np.ndarray:
    # the roots in any coset {r, r+g, r+2g, ...} of a subgroup sum to zero, so
    # removing a common count from a coset keeps the value; balanced cells
    # then come out exactly 0
    roots = roots_of_unity(a)
    reduced = counts.copy()
    for g in range(1, a):
        if a % g:
            continue
        for r in range(g):
            reduced[:, r::g] -= reduced[:, r::g].min(axis=1, keepdims=True)
    out = reduced[:, 0].astype(np.complex128)
    for e in range(1, a):
        out += reduced[:, e] * roots[e]
    return out


def tally_cells(n: int, N: int, a: int, cells: np.ndarray) -> np.ndarray:
    """Tally of ``D_n`` on the given cells by the leading-digit recursion

        D_{d a^k + m} = (sum_{b<d} phi_k^b) D_{a^k} + phi_k^d D_m,

    unrolled from the top digit down; ``shift`` accumulates the Rademacher
    factors ``phi_k^d``.  The indices ``j < a^k`` split evenly over the
    classes divisible by ``g = gcd(a, x_1, ..., x_k)``, ``a^k g / a`` each:
    on ``[0, a^-k)`` that is ``a^k`` counts in class 0, elsewhere the classes
    cancel to ``D_{a^k} = 0``.
    """
    m = cells.shape[0]
    counts = np.zeros((m, a), dtype=np.int64)
    shift = np.zeros(m, dtype=np.int64)
    rows = np.arange(m)
    nd = digits(n, a)
    if not nd:
        return counts
    top = len(nd) - 1
    # gcds[k] = gcd(a, x_1, ..., x_k) for k = 0 .. top
    gcds = [np.full(m, a, dtype=np.int64)]
    for k in range(1, top + 1):
        gcds.append(np.gcd(gcds[-1], cell_digit(k, N, a, cells)))
    for k in range(top, -1, -1):
        d = nd[k]
        if d == 0:
            continue
        g = gcds[k]
        per_class = a**k * g // a
        # phi_k is the (k+1)-th cell digit; only k = N (n = a^N) lacks one, with d = 1
        xk = cell_digit(k + 1, N, a, cells) if k < N else np.zeros_like(cells)
        for b in range(d):
            base = shift + b * xk
            for t in range(a):
                sel = t * g < a
                counts[rows[sel], (base[sel] + t * g[sel]) % a] += per_class[sel]
        shift += d * xk
    return counts


def dirichlet(n: int, N: int, a: int, cell_cap: int = DEFAULT_CELL_CAP) -> ExponentTally:
    """Exact tally of ``D_n`` on the grid of resolution ``N``."""
    check_order(a)
    if n < 1:
        raise ValueError(f"kernel index must be >= 1, got {n}")
    size = check_cells(N, a, cell_cap)
    if n > size:
        raise ResolutionError(f"D_{n} is not constant on {a}**{N} cells")
    counts = tally_cells(n, N, a, np.arange(size, dtype=np.int64))
    return ExponentTally(a, N, n, counts)


def _abs_chunks(n: int, N: int, a: int):
    size = a**N
    for start in range(0, size, _CHUNK):
        cells = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        yield start, np.abs(_tally_values(tally_cells(n, N, a, cells), a))


@dataclass
class KernelIntegrals:
    """``|D_n|`` integrated over ``[0, 1)`` and over the heads ``[0, a^-r)``."""

    n: int
    order: int
    resolution: int
    total: float
    heads: dict[int, float] = field(default_factory=dict)
    error_bound: float = 0.0

    def tail(self, r: int) -> float:
        """Integral of ``|D_n|`` over ``[a^-r, 1)``."""
        return self.total - self.heads[r]

    def between(self, r_hi: int, r_lo: int) -> float:
        """Integral over ``[a^-r_hi, a^-r_lo)`` for ``r_hi > r_lo``."""
        return self.heads[r_lo] - self.heads[r_hi]


def kernel_integrals(n: int, a: int, heads=(), cell_cap: int = DEFAULT_CELL_CAP) -> KernelIntegrals:
    """L1 norm of ``D_n`` plus head integrals, streaming over cell chunks.

    The grid has resolution ``N = ceil(log_a n)``; a head ``[0, a^-r)`` with
    ``r > N`` lies inside cell 0 and is integrated exactly as ``|D_n(0)| a^-r``.
    """
    check_order(a)
    if n < 1:
        raise ValueError(f"kernel index must be >= 1, got {n}")
    N = resolution_for(n, a)
    size = check_cells(N, a, cell_cap)
    heads = sorted(set(heads))
    partial_sums = []
    head_sums = {r: 0.0 for r in heads if r <= N}
    first = None
    for start, mags in _abs_chunks(n, N, a):
        if first is None:
            first = float(mags[0])
        partial_sums.append(tree_sum(mags))
        for r in head_sums:
            stop = a ** (N - r) - start
            if stop > 0:
                head_sums[r] += float(tree_sum(mags[:stop]))
    # chunks are aligned powers of two, so this completes the same fixed tree
    total = float(tree_sum(np.array(partial_sums))) / size
    out = KernelIntegrals(n, a, N, total)
    for r in heads:
        out.heads[r] = head_sums[r] / size if r <= N else first * float(a) ** -r
    # per cell: a products and a sums of magnitude <= n, then |.|; plus the tree
    cell_err = (2 * a + 4) * _EPS / 2 * n
    out.error_bound = tree_sum_error(size, total) + cell_err
    return out


def lebesgue_constant(n: int, a: int, cell_cap: int = DEFAULT_CELL_CAP) -> float:
    """``L_n``, the integral of ``|D_n|`` over ``[0, 1)``."""
    return kernel_integrals(n, a, cell_cap=cell_cap).total


def lemma_sequence(k_max: int, a: int) -> list[int]:
    """``n_0 .. n_{k_max}``: ``n_{2s} = sum_{i<=s} a^{2i}``, ``n_{2s+1} = a n_{2s}``."""
    check_order(a)
    if k_max < 0:
        raise ValueError(f"k_max must be >= 0, got {k_max}")
    out = []
    even = 0
    for k in range(k_max + 1):
        if k % 2 == 0:
            even += a**k
            n = even
        else:
            n = a * even
        if n > INDEX_LIMIT:
            raise OverflowError(f"n_{k} for order {a} exceeds 2**62")
        if not (a**k <= n < a ** (k + 1)):
            raise AssertionError(f"n_{k} = {n} escapes [a^k, a^(k+1))")
        if not n * (a * a - 1) < a ** (k + 2):
            raise AssertionError(f"n_{k} = {n} violates n_k < a^2/(a^2-1) a^k")
        out.append(n)
    return out


def half_k_bound(k: int, a: int) -> float:
    return (k / 2 + 1) / a


def log_bound(n: int, a: int) -> float:
    return math.log(n, a) / (2 * a)


def head_bound(a: int) -> float:
    return (a * a - 2) / (a * a)


@dataclass
class LemmaRow:
    k: int
    n_k: int
    resolution: int
    lebesgue: float
    bound_half_k: float
    bound_log: float
    partial_integral: float
    head_integral: float | None
    head_bound: float | None
    tail_step: float | None
    error_bound: float
    pass_: bool

    def as_dict(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "pass_"}
        d["pass"] = self.pass_
        return d


@dataclass
class LemmaReport:
    order: int
    rows: list[LemmaRow]

    @property
    def passed(self) -> bool:
        return all(r.pass_ for r in self.rows)

    def max_feasible_k(self) -> int:
        return self.rows[-1].k if self.rows else -1


def max_feasible_k(a: int, cell_cap: int = DEFAULT_CELL_CAP) -> int:
    """Largest ``k`` whose kernel grid ``a^(k+1)`` fits under ``cell_cap``."""
    k = 0
    while grid_size(k + 2, a) <= cell_cap:
        k += 1
    return k


def verify_lemma(k_max: int, a: int, cell_cap: int = DEFAULT_CELL_CAP) -> LemmaReport:
    """Check ``L_{n_k} > (k/2 + 1)/a`` and ``L_{n_k} > log_a(n_k)/(2a)`` for
    ``k = 0 .. k_max`` together with the intermediate integrals of the proof:

    * ``partial_integral``: ``|D_{n_k}|`` over ``[a^-(k+2), 1)`` against ``(k/2 + 1)/a``;
      non-strict at ``k = 1``, where ``a = 2`` gives equality;
    * ``head_integral`` (``k >= 2``): over ``[a^-(k+2), a^-k)`` against ``(a^2 - 2)/a^2``;
    * ``tail_step`` (``k >= 2``): the integrals of ``|D_{n_k}|`` and
      ``|D_{n_{k-2}}|`` over ``[a^-k, 1)`` coincide, since
      ``D_{n_k} = phi_k D_{n_{k-2}}`` there.
    """
    limit = max_feasible_k(a, cell_cap)
    if k_max > limit:
        raise ValueError(
            f"k_max = {k_max} needs more than {cell_cap} cells for order {a}; "
            f"largest feasible k is {limit}"
        )
    seq = lemma_sequence(k_max, a)
    rows = []
    prev = {}
    for k, n in enumerate(seq):
        ki = kernel_integrals(n, a, heads=(k, k + 2), cell_cap=cell_cap)
        err = ki.error_bound
        L = ki.total
        b_half, b_log = half_k_bound(k, a), log_bound(n, a)
        partial = ki.tail(k + 2)
        ok = L - b_half > err and L - b_log > err
        if k == 1:
            ok &= partial - b_half >= -err
        else:
            ok &= partial - b_half > err
        head = hb = step = None
        if k >= 2:
            head, hb = ki.between(k + 2, k), head_bound(a)
            ok &= head - hb > err
            step = ki.tail(k) - prev[k - 2].tail(k)
            ok &= abs(step) <= err + prev[k - 2].error_bound
        prev[k] = ki
        prev.pop(k - 2, None)
        rows.append(
            LemmaRow(k, n, ki.resolution, L, b_half, b_log, partial, head, hb, step, err, bool(ok))
        )
    return LemmaReport(a, rows)

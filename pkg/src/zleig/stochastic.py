"""Direct generator for the guaranteed-stochastic disjoint-block subclass.

The matrix dimension is specified as a product of Fibonacci factors; each
factor f selects a local transposition chain of m nodes with fib(m+1) = f.
Rows and columns are indexed directly by tuples of non-adjacent swap masks
(the epsilon-filtration), never by enumerating permutations of {1..n}.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import CapExceeded, NotFibonacci, NotRowBalanced
from .mx import SymbolicMatrix, _intern_strings, ascent_descent
from .posets import fib

DEFAULT_DIMENSION_CAP = 10**6


def _block_size_for_factor(f: int) -> int:
    """The m with fib(m+1) == f; rejects non-Fibonacci and degenerate factors."""
    if f < 2:
        raise NotFibonacci(f"factor {f} is degenerate; factors must be Fibonacci >= 2")
    m = 1
    while fib(m + 1) < f:
        m += 1
    if fib(m + 1) != f:
        raise NotFibonacci(f"{f} is not a Fibonacci number; you cannot select that value")
    return m


@dataclass(frozen=True)
class FibFactorization:
    factors: tuple[int, ...]
    block_sizes: tuple[int, ...]

    @property
    def n(self) -> int:
        out = 1
        for f in self.factors:
            out *= f
        return out


def parse_dfac(factors) -> FibFactorization:
    factors = tuple(int(f) for f in factors)
    if not factors:
        raise NotFibonacci("factor list must be non-empty")
    return FibFactorization(
        factors=factors,
        block_sizes=tuple(_block_size_for_factor(f) for f in factors),
    )


def _block_masks(m: int) -> list[tuple[int, ...]]:
    """All length m-1 binary masks with no two adjacent 1s, in binary counting order.

    The leftmost position is most significant, which makes the induced
    involutions come out in lexicographic one-line order.
    """
    if m == 1:
        return [()]
    masks = []
    for code in range(2 ** (m - 1)):
        bits = tuple((code >> (m - 2 - p)) & 1 for p in range(m - 1))
        if all(not (bits[p] and bits[p + 1]) for p in range(m - 2)):
            masks.append(bits)
    return masks


def epsilon_filtration(block_sizes, cap: int = DEFAULT_DIMENSION_CAP) -> list[tuple[tuple[int, ...], ...]]:
    """Cartesian product of per-block swap masks, blocks nested left-to-right."""
    per_block = [_block_masks(m) for m in block_sizes]
    total = 1
    for masks in per_block:
        total *= len(masks)
    if total > cap:
        raise CapExceeded(f"filtration size {total} exceeds cap {cap}")
    return list(product(*per_block))


def _mask_to_block_perm(mask, m: int) -> tuple[int, ...]:
    """The involution on {1..m} swapping the pairs marked in ``mask``."""
    perm = list(range(1, m + 1))
    for p, bit in enumerate(mask):
        if bit:
            perm[p], perm[p + 1] = perm[p + 1], perm[p]
    return tuple(perm)


def generate_stochastic_mx(f: FibFactorization, cap: int = DEFAULT_DIMENSION_CAP) -> SymbolicMatrix:
    """Build the block-poset symbolic matrix straight from the filtration.

    Extensions are involutions, so phi^{-1} = phi and the entry permutation is
    the plain blockwise composition phi_i . phi_j. Ascent-descent strings are
    computed per block and joined with '1': consecutive blocks occupy
    increasing value ranges, so every block boundary is an ascent.
    """
    sizes = f.block_sizes
    tuples = epsilon_filtration(sizes, cap=cap)
    # Per-block involutions and composition-string cache, reused across entries.
    block_perms = [
        {mask: _mask_to_block_perm(mask, m) for mask in _block_masks(m)} for m in sizes
    ]

    def entry_string(masks_i, masks_j) -> str:
        parts = []
        for b, m in enumerate(sizes):
            pi = block_perms[b][masks_i[b]]
            pj = block_perms[b][masks_j[b]]
            composed = tuple(pi[pj[x] - 1] for x in range(m))
            parts.append(ascent_descent(composed))
        return "1".join(parts)

    strings = [[entry_string(ti, tj) for tj in tuples] for ti in tuples]
    return _intern_strings(len(tuples), strings)


def substitute_and_check_stochastic(m: SymbolicMatrix, values: dict) -> np.ndarray:
    """Numeric substitution that must come out row-stochastic.

    ``values`` maps symbol names to nonnegative reals normalized so one row
    sums to 1; rows all share the same symbol multiset for block posets, so
    every row then sums to 1.
    """
    multisets = {tuple(sorted(row)) for row in m.entries}
    if len(multisets) != 1:
        raise NotRowBalanced("rows carry different symbol multisets; matrix is not block-stochastic")
    vals = [float(values[s]) for s in m.symbols]
    if any(v < 0 for v in vals):
        raise ValueError("symbol values must be nonnegative")
    a = np.array([[vals[e - 1] for e in row] for row in m.entries], dtype=float)
    row_sums = a.sum(axis=1)
    if not np.allclose(row_sums, 1.0, rtol=0, atol=1e-12):
        raise ValueError(f"row sums are {row_sums[0]!r}, expected 1 within 1e-12")
    return a


__all__ = [
    "FibFactorization",
    "parse_dfac",
    "epsilon_filtration",
    "generate_stochastic_mx",
    "substitute_and_check_stochastic",
    "DEFAULT_DIMENSION_CAP",
]

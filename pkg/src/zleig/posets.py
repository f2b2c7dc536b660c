"""Finite strict partial orders and their linear extensions.

Elements are the integers 1..n. A relation (u, v) means "u precedes v": in
every linear extension, the value u appears before the value v in one-line
notation. Extensions are enumerated ground-up: a partial word is only ever
extended by values whose predecessors are all already placed, so no filtering
over all n! permutations happens.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CapExceeded, CycleDetected, OutOfRange

DEFAULT_EXTENSION_CAP = 10**6


def _transitive_closure(n: int, relations: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    succ = {u: set() for u in range(1, n + 1)}
    for u, v in relations:
        succ[u].add(v)
    # Floyd-Warshall style closure; n stays small in practice.
    for k in range(1, n + 1):
        for u in range(1, n + 1):
            if k in succ[u]:
                succ[u] |= succ[k]
    return frozenset((u, v) for u in succ for v in succ[u])


@dataclass(frozen=True)
class Poset:
    """A strict partial order on {1..n}; ``closure`` is transitively closed."""

    n: int
    closure: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @property
    def relations(self) -> frozenset[tuple[int, int]]:
        return self.closure

    def to_json_dict(self) -> dict:
        return {"n": self.n, "relations": [list(p) for p in sorted(self.closure)]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(d: dict) -> "Poset":
        return validate_poset({(int(u), int(v)) for u, v in d["relations"]}, int(d["n"]))

    @staticmethod
    def from_json(s: str) -> "Poset":
        return Poset.from_json_dict(json.loads(s))


def validate_poset(relations, n: int) -> Poset:
    """Build a Poset from raw relation pairs, rejecting cyclic or out-of-range input."""
    if n < 1:
        raise OutOfRange(f"element count must be positive, got {n}")
    rels = frozenset((int(u), int(v)) for u, v in relations)
    for u, v in rels:
        if not (1 <= u <= n and 1 <= v <= n):
            raise OutOfRange(f"relation endpoint ({u}, {v}) outside 1..{n}")
    closure = _transitive_closure(n, rels)
    for u, v in closure:
        if u == v or (v, u) in closure:
            raise CycleDetected(f"relations are cyclic through ({u}, {v})")
    return Poset(n=n, closure=closure)


def linear_extensions(p: Poset, cap: int = DEFAULT_EXTENSION_CAP) -> list[tuple[int, ...]]:
    """All linear extensions of ``p`` in lexicographic order.

    Depth-first over candidate values in increasing order, so the output is
    lexicographically sorted without a final sort. Raises CapExceeded once
    more than ``cap`` extensions would be produced.
    """
    n = p.n
    preds = {v: set() for v in range(1, n + 1)}
    for u, v in p.closure:
        preds[v].add(u)

    out: list[tuple[int, ...]] = []
    placed = [0] * n  # current partial word
    placed_set: set[int] = set()

    def extend(depth: int) -> None:
        if depth == n:
            if len(out) >= cap:
                raise CapExceeded(f"more than {cap} linear extensions")
            out.append(tuple(placed))
            return
        for v in range(1, n + 1):
            if v in placed_set:
                continue
            if preds[v] <= placed_set:
                placed[depth] = v
                placed_set.add(v)
                extend(depth + 1)
                placed_set.remove(v)

    extend(0)
    return out


def is_linear_extension(perm, p: Poset) -> bool:
    pos = {v: i for i, v in enumerate(perm)}
    return len(pos) == p.n and all(pos[u] < pos[v] for u, v in p.closure)


@lru_cache(maxsize=None)
def fib(k: int) -> int:
    """Fibonacci with fib(1) = fib(2) = 1."""
    if k <= 0:
        raise ValueError("fib is defined for k >= 1")
    a, b = 1, 1
    for _ in range(k - 2):
        a, b = b, a + b
    return b if k >= 2 else a


def chain_block_poset(block_sizes) -> Poset:
    """Disjoint local-transposition chains on consecutive index blocks.

    Within a block only adjacent values are unordered; every other pair of
    values (including pairs from different blocks) keeps its numeric order.
    A single block of size m therefore has exactly fib(m+1) extensions: the
    involutions made of non-overlapping adjacent transpositions.
    """
    sizes = [int(m) for m in block_sizes]
    if not sizes or any(m < 1 for m in sizes):
        raise OutOfRange(f"block sizes must be positive, got {block_sizes}")
    n = sum(sizes)
    block_of = {}
    start = 1
    for b, m in enumerate(sizes):
        for v in range(start, start + m):
            block_of[v] = b
        start += m
    rels = {
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if not (v == u + 1 and block_of[u] == block_of[v])
    }
    return validate_poset(rels, n)


def all_permutations(n: int):
    """Brute-force iterator over S_n in lexicographic order (test oracle)."""
    from itertools import permutations

    return permutations(range(1, n + 1))


__all__ = [
    "Poset",
    "validate_poset",
    "linear_extensions",
    "is_linear_extension",
    "chain_block_poset",
    "fib",
    "all_permutations",
    "DEFAULT_EXTENSION_CAP",
]

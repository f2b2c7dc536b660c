"""Symbolic matrices indexed by linear extensions.

Entry (i, j) is the ascent-descent string of the composition
x -> phi_i^{-1}(phi_j(x)); distinct strings are numbered a1, a2, ... in
row-major first-appearance order, so a1 is always the all-ascents diagonal
symbol.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DimensionMismatch
from .posets import Poset, linear_extensions


def ascent_descent(perm) -> str:
    """Binary string of adjacent comparisons: bit p is '1' iff perm[p] < perm[p+1]."""
    return "".join("1" if perm[p] < perm[p + 1] else "0" for p in range(len(perm) - 1))


def invert(perm) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for i, v in enumerate(perm):
        inv[v - 1] = i + 1
    return tuple(inv)


def compose_entry(phi_i, phi_j) -> tuple[int, ...]:
    """The permutation x -> phi_i^{-1}(phi_j(x)) in one-line notation."""
    if len(phi_i) != len(phi_j):
        raise DimensionMismatch("extensions have different sizes")
    inv_i = invert(phi_i)
    return tuple(inv_i[phi_j[x] - 1] for x in range(len(phi_j)))


@dataclass(frozen=True)
class SymbolicMatrix:
    """Square matrix of 1-based indices into an ordered symbol table."""

    n: int
    symbols: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]
    row_labels: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        assert len(self.entries) == self.n
        assert all(len(row) == self.n for row in self.entries)
        assert all(1 <= e <= len(self.symbols) for row in self.entries for e in row)

    def entry_symbol(self, i: int, j: int) -> str:
        return self.symbols[self.entries[i][j] - 1]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "symbols": list(self.symbols),
            "entries": [list(row) for row in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(d: dict) -> "SymbolicMatrix":
        return SymbolicMatrix(
            n=int(d["n"]),
            symbols=tuple(d["symbols"]),
            entries=tuple(tuple(int(e) for e in row) for row in d["entries"]),
        )

    @staticmethod
    def from_json(s: str) -> "SymbolicMatrix":
        return SymbolicMatrix.from_json_dict(json.loads(s))

    @staticmethod
    def from_labels(rows) -> "SymbolicMatrix":
        """Build from explicit symbol-name entries, e.g. [["a","b"],["b","a"]]."""
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("entry rows must form a square matrix")
        table: dict[str, int] = {}
        entries = []
        for row in rows:
            out_row = []
            for name in row:
                if name not in table:
                    table[name] = len(table) + 1
                out_row.append(table[name])
            entries.append(tuple(out_row))
        return SymbolicMatrix(n=n, symbols=tuple(table), entries=tuple(entries))


def _intern_strings(n: int, strings, row_labels=None) -> SymbolicMatrix:
    """Number distinct entry strings by row-major first appearance."""
    table: dict[str, int] = {}
    entries = []
    for row in strings:
        out_row = []
        for s in row:
            if s not in table:
                table[s] = len(table) + 1
            out_row.append(table[s])
        entries.append(tuple(out_row))
    return SymbolicMatrix(
        n=n, symbols=tuple(table), entries=tuple(entries), row_labels=row_labels
    )


def generate_mx(p: Poset, cap=None) -> SymbolicMatrix:
    """The symbolic matrix of poset ``p``, rows/columns in lexicographic extension order."""
    from .posets import DEFAULT_EXTENSION_CAP

    exts = linear_extensions(p, cap=cap if cap is not None else DEFAULT_EXTENSION_CAP)
    inverses = [invert(e) for e in exts]
    strings = [
        [
            ascent_descent(tuple(inv_i[ej[x] - 1] for x in range(p.n)))
            for ej in exts
        ]
        for inv_i in inverses
    ]
    return _intern_strings(len(exts), strings, row_labels=tuple(exts))


__all__ = [
    "ascent_descent",
    "invert",
    "compose_entry",
    "SymbolicMatrix",
    "generate_mx",
]

"""Integer linear forms over a symbol table.

The solver and the Kronecker layer both work with matrices whose entries are
integer combinations of named symbols; a monomial SymbolicMatrix is the
special case with a single unit coefficient per entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .mx import SymbolicMatrix


class FormMatrix:
    """Square matrix whose (i, j) entry is an integer coefficient vector."""

    def __init__(self, symbols, coeffs):
        self.symbols = tuple(symbols)
        self.coeffs = np.asarray(coeffs, dtype=np.int64)
        n = self.coeffs.shape[0]
        if self.coeffs.shape != (n, n, len(self.symbols)):
            raise DimensionMismatch(
                f"coefficient array shape {self.coeffs.shape} does not match "
                f"{n}x{n} entries over {len(self.symbols)} symbols"
            )
        self.coeffs.setflags(write=False)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, FormMatrix)
            and self.symbols == other.symbols
            and np.array_equal(self.coeffs, other.coeffs)
        )

    @staticmethod
    def from_symbolic(m: SymbolicMatrix) -> "FormMatrix":
        n, k = m.n, len(m.symbols)
        coeffs = np.zeros((n, n, k), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                coeffs[i, j, m.entries[i][j] - 1] = 1
        return FormMatrix(m.symbols, coeffs)

    def substitute(self, values) -> np.ndarray:
        """Numeric matrix for the given per-symbol values.

        With integer values the result is exact (object dtype, Python ints),
        so arbitrarily large power-term encodings do not overflow.
        """
        vals = list(values)
        if len(vals) != len(self.symbols):
            raise DimensionMismatch("one value per symbol required")
        exact = all(isinstance(v, int) for v in vals)
        n = self.n
        out = np.empty((n, n), dtype=object if exact else float)
        for i in range(n):
            for j in range(n):
                vec = self.coeffs[i, j]
                acc = 0
                for k in np.nonzero(vec)[0]:
                    acc += int(vec[k]) * vals[k]
                out[i, j] = acc
        return out

    def trace_coeffs(self) -> np.ndarray:
        return self.coeffs.trace(axis1=0, axis2=1)

    def row_sum_coeffs(self) -> np.ndarray:
        """Per-row coefficient vectors of the row sums, shape (n, m)."""
        return self.coeffs.sum(axis=1)


def as_form_matrix(m) -> FormMatrix:
    if isinstance(m, FormMatrix):
        return m
    if isinstance(m, SymbolicMatrix):
        return FormMatrix.from_symbolic(m)
    raise TypeError(f"expected SymbolicMatrix or FormMatrix, got {type(m).__name__}")


@dataclass(frozen=True)
class Spectrum:
    """Multiset of eigenvalues, each an integer coefficient vector over ``symbols``."""

    symbols: tuple[str, ...]
    forms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        assert all(len(f) == len(self.symbols) for f in self.forms)

    @staticmethod
    def sorted_forms(symbols, forms) -> "Spectrum":
        return Spectrum(tuple(symbols), tuple(sorted(tuple(int(c) for c in f) for f in forms)))

    def evaluate(self, values) -> list:
        vals = list(values)
        return [sum(c * v for c, v in zip(f, vals)) for f in self.forms]

    def pretty(self) -> list[str]:
        out = []
        for f in self.forms:
            terms = []
            for c, s in zip(f, self.symbols):
                if c == 0:
                    continue
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                terms.append(("- " if c < 0 else "+ " if terms else "") + mag + s)
            out.append(" ".join(terms) if terms else "0")
        return out

    def to_json_dict(self) -> dict:
        return {"symbols": list(self.symbols), "forms": [list(f) for f in self.forms]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(d: dict) -> "Spectrum":
        return Spectrum(
            tuple(d["symbols"]), tuple(tuple(int(c) for c in f) for f in d["forms"])
        )

    @staticmethod
    def from_json(s: str) -> "Spectrum":
        return Spectrum.from_json_dict(json.loads(s))


__all__ = ["FormMatrix", "as_form_matrix", "Spectrum"]

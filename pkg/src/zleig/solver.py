"""Exact symbolic eigenvalues via staggered power-term encoding.

Each symbol a_k is assigned the numeric value B^k for a power-of-two radix B
large enough that balanced base-B digits cannot spill into each other. The
encoded matrix is handed to a high-precision dense eigensolver (Hessenberg
reduction + shifted QR, via mpmath) and every numeric eigenvalue is decoded
back into an integer coefficient vector by signed nearest-integer digit
extraction from the highest power down.
"""
from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp

from .errors import (
    DimensionMismatch,
    MismatchDetected,
    NoConvergence,
    NotSimultaneouslyDiagonalizable,
    NotZLinear,
)
from .forms import FormMatrix, Spectrum, as_form_matrix

DEFAULT_GUARD_BITS = 32

# mpmath's working precision is process-global; batches therefore take this
# lock around their numeric section. Merging stays deterministic either way.
_MP_LOCK = threading.RLock()


@dataclass(frozen=True)
class Encoding:
    """Power-term values for (a subset of) the symbol table."""

    base: int
    values: tuple[int, ...]  # per global symbol; 0 when masked out
    coeff_bound: int
    precision_bits: int
    batch: tuple[int, ...]  # global symbol indices carrying powers, ascending

    def power_of(self, local_k: int) -> int:
        """B^local_k for the local_k-th batched symbol (1-based)."""
        return self.base**local_k


def build_encoding(
    m: int,
    n: int,
    batch=None,
    coeff_bound: int | None = None,
    guard_bits: int = DEFAULT_GUARD_BITS,
    precision_bits: int | None = None,
) -> Encoding:
    """Choose radix, per-symbol values and precision for ``m`` symbols of an n x n matrix.

    B is the smallest power of two with B >= 2*C + 2 (C defaults to n), so
    balanced digits up to |c| <= C decode without spillover. When ``batch`` is
    given, only those symbols receive powers (others map to 0) and the
    precision budget is sized to the batch, not to m.
    """
    if m < 1:
        raise DimensionMismatch("need at least one symbol")
    c = int(coeff_bound) if coeff_bound is not None else max(1, n)
    base = 1 << max(1, (2 * c + 1).bit_length())
    batch = tuple(sorted(range(m) if batch is None else batch))
    if any(not 0 <= k < m for k in batch):
        raise DimensionMismatch("batch indices outside symbol table")
    values = [0] * m
    for local, k in enumerate(batch, start=1):
        values[k] = base**local
    s = len(batch)
    bits = precision_bits
    if bits is None:
        bits = (s + 1) * base.bit_length() + guard_bits + (n + 1).bit_length()
    return Encoding(
        base=base,
        values=tuple(values),
        coeff_bound=c,
        precision_bits=int(bits),
        batch=batch,
    )


def hp_eigenvalues(a, b: int) -> list:
    """All eigenvalues of a dense square matrix at ``b`` mantissa bits.

    Hessenberg reduction followed by shifted QR (mpmath's eig). Below 54 bits
    the native float path is used when entries fit. Deterministic for
    identical inputs and b.
    """
    rows = [list(r) for r in a]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("matrix must be square")
    if b <= 53:
        try:
            return [complex(x) for x in np.linalg.eigvals(np.array(rows, dtype=float))]
        except (OverflowError, np.linalg.LinAlgError):
            pass  # fall through to the arbitrary-precision path
    # mpmath's sweep cap grows with the working precision, so a stubborn
    # deflation is retried at doubled precision before giving up.
    last = None
    for attempt in range(3):
        with _MP_LOCK, mp.workprec(b << attempt):
            try:
                return list(mp.eig(mp.matrix(rows), left=False, right=False))
            except (RuntimeError, ZeroDivisionError) as exc:
                last = exc
    raise NoConvergence(f"QR iteration failed at {b}..{b << 2} bits: {last}") from last


def decode_form(lambda_num, e: Encoding, m: int | None = None):
    """Balanced-digit extraction of one numeric eigenvalue.

    Digits are taken from the highest power down with nearest-integer
    rounding (the midpoint-centering mitigation); the final remainder must
    stay below B/4 and every digit within the coefficient bound, otherwise
    the value is not a Z-linear combination at this precision.
    """
    m = len(e.values) if m is None else m
    base, c_max = e.base, e.coeff_bound
    with _MP_LOCK, mp.workprec(max(e.precision_bits, 53)):
        lam = mp.mpmathify(lambda_num)
        if abs(mp.im(lam)) >= base / 4:
            raise NotZLinear(f"imaginary part {mp.nstr(mp.im(lam))} exceeds decode tolerance")
        lam = mp.re(lam)
        coeffs = [0] * m
        r = lam
        for local in range(len(e.batch), 0, -1):
            p = e.power_of(local)
            c = int(mp.nint(r / p))
            if abs(c) > c_max:
                raise NotZLinear(f"digit {c} exceeds coefficient bound {c_max}")
            coeffs[e.batch[local - 1]] = c
            r -= c * p
        if abs(r) >= base / 4:
            raise NotZLinear(f"remainder {mp.nstr(r)} exceeds B/4 = {base / 4}")
    return tuple(coeffs)


def _check_trace(fm: FormMatrix, forms) -> None:
    total = np.sum(np.array(forms, dtype=np.int64), axis=0)
    if not np.array_equal(total, fm.trace_coeffs()):
        raise NotZLinear(
            f"spectrum sums to {total.tolist()} but the symbolic trace is "
            f"{fm.trace_coeffs().tolist()}"
        )


def solve(
    matrix,
    coeff_bound: int | None = None,
    guard_bits: int = DEFAULT_GUARD_BITS,
    precision_bits: int | None = None,
) -> Spectrum:
    """Encode, eigensolve at high precision, and decode every eigenvalue."""
    fm = as_form_matrix(matrix)
    m = len(fm.symbols)
    enc = build_encoding(
        m, fm.n, coeff_bound=coeff_bound, guard_bits=guard_bits, precision_bits=precision_bits
    )
    numeric = fm.substitute(list(enc.values))
    eigs = hp_eigenvalues(numeric, enc.precision_bits)
    forms = [decode_form(lam, enc) for lam in eigs]
    _check_trace(fm, forms)
    return Spectrum.sorted_forms(fm.symbols, forms)


@dataclass
class ReferenceEigenbasis:
    """Eigenvector matrix of a generic substitution, shared across batches."""

    basis: object  # mp.matrix
    inverse: object  # mp.matrix
    precision_bits: int
    residual: float = 0.0
    condition: float = field(default=float("nan"))


def _first_primes(count: int) -> list[int]:
    primes, cand = [], 2
    while len(primes) < count:
        if all(cand % p for p in primes):
            primes.append(cand)
        cand += 1
    return primes


def generic_substitution(m: int) -> list[float]:
    """The first m primes scaled into [1, 2): p / 2^floor(log2 p). Dyadic, hence exact."""
    return [p / (1 << (p.bit_length() - 1)) for p in _first_primes(m)]


def build_reference_eigenbasis(
    fm: FormMatrix, precision_bits: int, residual_tol: float = 1e-6
) -> ReferenceEigenbasis:
    values = generic_substitution(len(fm.symbols))
    rows = fm.substitute(values)
    with _MP_LOCK, mp.workprec(precision_bits):
        a = mp.matrix([list(r) for r in rows])
        try:
            e, er = mp.eig(a, left=False, right=True)
        except (RuntimeError, ZeroDivisionError) as exc:
            raise NoConvergence(f"reference eigenbasis failed: {exc}") from exc
        inv = er**-1
        recon = er * mp.diag(e) * inv
        scale = max(mp.mnorm(a, 1), mp.mpf(1))
        residual = float(mp.mnorm(recon - a, 1) / scale)
        cond = float(mp.mnorm(er, 1) * mp.mnorm(inv, 1))
    if residual > residual_tol:
        raise NoConvergence(
            f"reference eigenbasis reconstruction residual {residual:g} exceeds {residual_tol:g}"
        )
    return ReferenceEigenbasis(
        basis=er, inverse=inv, precision_bits=precision_bits, residual=residual, condition=cond
    )


def _normalize_batches(symbols, batches) -> list[list[int]]:
    m = len(symbols)
    if isinstance(batches, int):
        k = max(1, min(batches, m))
        bounds = [round(i * m / k) for i in range(k + 1)]
        parts = [list(range(bounds[i], bounds[i + 1])) for i in range(k)]
        return [p for p in parts if p]
    index = {s: i for i, s in enumerate(symbols)}
    parts = []
    for batch in batches:
        parts.append(sorted(index[s] if isinstance(s, str) else int(s) for s in batch))
    seen = sorted(k for p in parts for k in p)
    if seen != list(range(m)):
        raise DimensionMismatch("batches must partition the symbol set")
    return parts


def solve_batched(
    matrix,
    batches,
    workers: int = 1,
    coeff_bound: int | None = None,
    guard_bits: int = DEFAULT_GUARD_BITS,
    offdiag_tol: float | None = None,
    fallback: bool = True,
) -> Spectrum:
    """Per-batch masked solves paired through a shared reference eigenbasis.

    Each batch encodes only its own symbols (the rest map to 0), so its
    precision is sized to the batch. Partial eigenvalues are read off the
    diagonal of basis^-1 . A_p . basis; a large off-diagonal entry means the
    masked family is not simultaneously diagonalizable. With ``fallback``
    (the default) that case silently degrades to the unbatched solve, whose
    result the batched path must match anyway; pass fallback=False to surface
    NotSimultaneouslyDiagonalizable instead.
    """
    fm = as_form_matrix(matrix)
    m = len(fm.symbols)
    parts = _normalize_batches(fm.symbols, batches)
    encodings = [
        build_encoding(m, fm.n, batch=p, coeff_bound=coeff_bound, guard_bits=guard_bits)
        for p in parts
    ]
    work_bits = max(e.precision_bits for e in encodings) + guard_bits
    ref = build_reference_eigenbasis(fm, work_bits)
    tol = encodings[0].base / 8 if offdiag_tol is None else offdiag_tol

    def run_batch(idx: int):
        enc = encodings[idx]
        numeric = fm.substitute(list(enc.values))
        with _MP_LOCK, mp.workprec(enc.precision_bits):
            a_p = mp.matrix([list(r) for r in numeric])
            m_p = ref.inverse * a_p * ref.basis
            off = max(
                (abs(m_p[i, j]) for i in range(fm.n) for j in range(fm.n) if i != j),
                default=mp.mpf(0),
            )
            if off > tol:
                raise NotSimultaneouslyDiagonalizable(
                    f"batch {idx}: off-diagonal magnitude {mp.nstr(off)} exceeds {tol}"
                )
            diag = [m_p[i, i] for i in range(fm.n)]
        return [decode_form(d, enc) for d in diag]

    try:
        if workers > 1 and len(parts) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                partials = list(pool.map(run_batch, range(len(parts))))
        else:
            partials = [run_batch(i) for i in range(len(parts))]
    except NotSimultaneouslyDiagonalizable:
        if not fallback:
            raise
        return solve(fm, coeff_bound=coeff_bound, guard_bits=guard_bits)

    forms = [
        tuple(int(sum(p[pos][k] for p in partials)) for k in range(m)) for pos in range(fm.n)
    ]
    _check_trace(fm, forms)
    return Spectrum.sorted_forms(fm.symbols, forms)


@dataclass(frozen=True)
class SubstitutionReport:
    trials: int
    max_discrepancy: float


def verify_by_substitution(
    matrix, spectrum: Spectrum, trials: int = 10, seed: int = 0, rtol: float = 1e-6
) -> SubstitutionReport:
    """Independent numeric oracle: random integer substitutions vs. evaluated forms.

    Each trial draws integers in [1, 97] for every symbol, computes machine
    precision eigenvalues of the substituted matrix, and greedily matches
    them against the evaluated forms within ``rtol`` relative tolerance.
    """
    fm = as_form_matrix(matrix)
    if len(spectrum.forms) != fm.n:
        raise DimensionMismatch(f"spectrum has {len(spectrum.forms)} forms for an n={fm.n} matrix")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        values = [int(v) for v in rng.integers(1, 98, size=len(fm.symbols))]
        a = np.array([[float(x) for x in row] for row in fm.substitute(values)])
        computed = list(np.linalg.eigvals(a))
        expected = [complex(v) for v in spectrum.evaluate(values)]
        scale = max(1.0, max(abs(z) for z in computed + expected))
        remaining = computed[:]
        for want in expected:
            best = min(range(len(remaining)), key=lambda i: abs(remaining[i] - want))
            err = abs(remaining.pop(best) - want) / scale
            worst = max(worst, err)
            if err > rtol:
                raise MismatchDetected(
                    f"substitution {values} gives eigenvalue mismatch {err:g} > {rtol:g} "
                    f"near expected value {want}"
                )
    return SubstitutionReport(trials=trials, max_discrepancy=worst)


__all__ = [
    "Encoding",
    "build_encoding",
    "hp_eigenvalues",
    "decode_form",
    "solve",
    "solve_batched",
    "ReferenceEigenbasis",
    "build_reference_eigenbasis",
    "generic_substitution",
    "verify_by_substitution",
    "SubstitutionReport",
]

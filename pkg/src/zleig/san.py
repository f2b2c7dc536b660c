"""Kronecker composition of Markov generators from stochastic building blocks.

Local transitions enter through Kronecker sums, synchronized ones through
Kronecker products; the diagonal correction -diag(Q0 e) turns any nonnegative
rate matrix into a generator. Spectra compose as pairwise sums or products,
which the symbolic layer mirrors coefficient-wise.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import (
    DimensionMismatch,
    NotSymmetric,
    NotUnitRowSum,
    NumericError,
    ToleranceExceeded,
)
from .forms import FormMatrix, Spectrum, as_form_matrix
from .mx import SymbolicMatrix

PRODUCT_SEP = "*"


def _is_symbolic(x) -> bool:
    return isinstance(x, (FormMatrix, SymbolicMatrix))


def _kron_sum_numeric(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


def _union_symbols(a: FormMatrix, b: FormMatrix):
    symbols = list(a.symbols)
    for s in b.symbols:
        if s not in symbols:
            symbols.append(s)
    index = {s: k for k, s in enumerate(symbols)}
    a_map = [index[s] for s in a.symbols]
    b_map = [index[s] for s in b.symbols]
    return symbols, a_map, b_map


def kron_sum(a, b):
    """Kronecker sum a (+) b = a (x) I + I (x) b; rows ordered (a-state, b-state)."""
    if _is_symbolic(a) != _is_symbolic(b):
        raise TypeError("cannot mix symbolic and numeric Kronecker operands")
    if not _is_symbolic(a):
        a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        _require_square(a), _require_square(b)
        return _kron_sum_numeric(a, b)
    fa, fb = as_form_matrix(a), as_form_matrix(b)
    symbols, a_map, b_map = _union_symbols(fa, fb)
    na, nb, m = fa.n, fb.n, len(symbols)
    coeffs = np.zeros((na * nb, na * nb, m), dtype=np.int64)
    for i in range(na):
        for j in range(na):
            for k in range(nb):
                coeffs[i * nb + k, j * nb + k][a_map] += fa.coeffs[i, j]
    for i in range(na):
        for k in range(nb):
            for l in range(nb):
                coeffs[i * nb + k, i * nb + l][b_map] += fb.coeffs[k, l]
    return FormMatrix(symbols, coeffs)


def kron_prod(a, b):
    """Kronecker product; symbolic entry products become fresh "x*y" symbols."""
    if _is_symbolic(a) != _is_symbolic(b):
        raise TypeError("cannot mix symbolic and numeric Kronecker operands")
    if not _is_symbolic(a):
        a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
        _require_square(a), _require_square(b)
        return np.kron(a, b)
    fa, fb = as_form_matrix(a), as_form_matrix(b)
    symbols = [x + PRODUCT_SEP + y for x in fa.symbols for y in fb.symbols]
    na, nb = fa.n, fb.n
    mb = len(fb.symbols)
    coeffs = np.zeros((na * nb, na * nb, len(symbols)), dtype=np.int64)
    for i in range(na):
        for j in range(na):
            for k in range(nb):
                for l in range(nb):
                    outer = np.outer(fa.coeffs[i, j], fb.coeffs[k, l]).reshape(-1)
                    coeffs[i * nb + k, j * nb + l] = outer
    return FormMatrix(symbols, coeffs)


def _require_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")


def kron_sum_all(factors):
    return reduce(kron_sum, factors)


def kron_prod_all(factors):
    return reduce(kron_prod, factors)


@dataclass
class GeneratorMatrix:
    """q = q0 + qd with qd = -diag(q0 . 1), so every row of q sums to zero."""

    q0: object
    qd: object
    q: object


def make_generator(q0) -> GeneratorMatrix:
    if _is_symbolic(q0):
        fm = as_form_matrix(q0)
        row_sums = fm.row_sum_coeffs()
        coeffs = fm.coeffs.copy()
        for i in range(fm.n):
            coeffs[i, i] -= row_sums[i]
        qd = np.zeros_like(fm.coeffs)
        for i in range(fm.n):
            qd[i, i] = -row_sums[i]
        return GeneratorMatrix(q0=fm, qd=FormMatrix(fm.symbols, qd), q=FormMatrix(fm.symbols, coeffs))
    a = np.asarray(q0, dtype=float)
    _require_square(a)
    qd = -np.diag(a.sum(axis=1))
    return GeneratorMatrix(q0=a, qd=qd, q=a + qd)


@dataclass(frozen=True)
class SpectralMap:
    mode: str  # "sum" | "product"
    shift: object = 0  # scalar for numeric spectra, {symbol: coeff} for symbolic

    def __post_init__(self):
        if self.mode not in ("sum", "product"):
            raise ValueError(f"mode must be 'sum' or 'product', got {self.mode!r}")


def _shift_vector(symbols, shift) -> np.ndarray:
    vec = np.zeros(len(symbols), dtype=np.int64)
    if not shift:
        return vec
    index = {s: k for k, s in enumerate(symbols)}
    for name, c in shift.items():
        if name not in index:
            raise DimensionMismatch(f"shift symbol {name!r} not in composed table")
        vec[index[name]] = int(c)
    return vec


def compose_spectrum(sa, sb, spectral_map: SpectralMap):
    """Cartesian pairing of two spectra, minus the row-sum shift k.

    Symbolic sum mode adds coefficient vectors over the union table; product
    mode expands bilinearly into the fresh "x*y" product table. Numeric
    spectra (plain sequences) pair arithmetically with a scalar shift.
    """
    symbolic = isinstance(sa, Spectrum)
    if symbolic != isinstance(sb, Spectrum):
        raise TypeError("cannot mix symbolic and numeric spectra")
    if not symbolic:
        shift = spectral_map.shift or 0
        if spectral_map.mode == "sum":
            return sorted(x + y - shift for x in sa for y in sb)
        return sorted(x * y - shift for x in sa for y in sb)

    if spectral_map.mode == "sum":
        fa = FormMatrix(sa.symbols, np.zeros((1, 1, len(sa.symbols)), dtype=np.int64))
        fb = FormMatrix(sb.symbols, np.zeros((1, 1, len(sb.symbols)), dtype=np.int64))
        symbols, a_map, b_map = _union_symbols(fa, fb)
        shift = _shift_vector(symbols, spectral_map.shift)
        forms = []
        for x in sa.forms:
            for y in sb.forms:
                vec = -shift.copy()
                vec[a_map] += np.asarray(x, dtype=np.int64)
                vec[b_map] += np.asarray(y, dtype=np.int64)
                forms.append(tuple(vec.tolist()))
        return Spectrum.sorted_forms(symbols, forms)

    symbols = [x + PRODUCT_SEP + y for x in sa.symbols for y in sb.symbols]
    shift = _shift_vector(symbols, spectral_map.shift)
    forms = []
    for x in sa.forms:
        for y in sb.forms:
            vec = np.outer(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
            forms.append(tuple((vec.reshape(-1) - shift).tolist()))
    return Spectrum.sorted_forms(symbols, forms)


@dataclass(frozen=True)
class ExpIdentityReport:
    max_deviation: float
    stochastic_deviation: float
    dimension: int


def check_exponential_identity(factors, t: float = 1.0, tol: float = 1e-10) -> ExpIdentityReport:
    """exp(sum-side) versus product-of-exponentials for generator factors.

    Both sides use scaling-and-squaring Pade exponentials and are computed
    independently; the combined matrix must also be row-stochastic.
    """
    from scipy.linalg import expm

    mats = [np.asarray(f, dtype=float) for f in factors]
    for a in mats:
        _require_square(a)
    lhs = expm(kron_sum_all(mats) * t)
    rhs = reduce(np.kron, [expm(a * t) for a in mats])
    deviation = float(np.abs(lhs - rhs).max())
    stoch = float(max(np.abs(rhs.sum(axis=1) - 1.0).max(), max(0.0, -rhs.min())))
    if deviation > tol:
        raise ToleranceExceeded(f"exp identity deviates by {deviation:g} > {tol:g}")
    if stoch > tol:
        raise ToleranceExceeded(f"exp of generator is not row-stochastic (deviation {stoch:g})")
    return ExpIdentityReport(
        max_deviation=deviation, stochastic_deviation=stoch, dimension=lhs.shape[0]
    )


@dataclass(frozen=True)
class OrbitMatrix:
    x: tuple
    phis: tuple
    d: np.ndarray


def build_orbit_matrix(x, phis) -> OrbitMatrix:
    """Doubly stochastic symmetric matrix whose row i is phi_i applied to x."""
    x = np.asarray(x, dtype=float)
    if abs(x.sum() - 1.0) > 1e-12:
        raise NotUnitRowSum(f"entries of x sum to {x.sum()!r}, expected 1")
    n = len(x)
    if len(phis) != n:
        raise DimensionMismatch(f"need {n} permutations, got {len(phis)}")
    d = np.empty((n, n))
    for i, phi in enumerate(phis):
        if sorted(phi) != list(range(1, n + 1)):
            raise DimensionMismatch(f"row {i}: {phi} is not a permutation of 1..{n}")
        d[i] = x[np.asarray(phi) - 1]
    if np.abs(d - d.T).max() > 1e-12:
        raise NotSymmetric("row arrangement does not produce a symmetric matrix")
    return OrbitMatrix(x=tuple(x.tolist()), phis=tuple(tuple(p) for p in phis), d=d)


@dataclass(frozen=True)
class RLinearityReport:
    verdict: str  # "pass" | "fail" | "inapplicable"
    offdiag_max: float
    multiset_distance: float


def _sorted_eigs(a: np.ndarray) -> np.ndarray:
    e = np.linalg.eigvals(a)
    return e[np.lexsort((e.imag, e.real))]


def check_r_linearity(a, d: OrbitMatrix, tol: float = 1e-9) -> RLinearityReport:
    """Compare the spectrum of D.A.D^T against the transformed eigenvalue matrix.

    Report-only: computes D.Lambda_A.D^T, measures how diagonal it is, and the
    multiset distance between its diagonal and the spectrum of D.A.D^T. If the
    transform is not diagonal the claim is inapplicable as an eigenvalue
    statement; no global assertion is made.
    """
    a = np.asarray(a, dtype=float)
    dm = d.d
    if a.shape != dm.shape:
        raise DimensionMismatch(f"matrix shape {a.shape} vs orbit shape {dm.shape}")
    lam = np.diag(_sorted_eigs(a))
    transformed = dm @ lam @ dm.T
    offdiag = float(np.abs(transformed - np.diag(np.diag(transformed))).max())
    lhs = _sorted_eigs(dm @ a @ dm.T)
    rhs = np.sort_complex(np.diag(transformed))
    scale = max(1.0, float(np.abs(lhs).max()), float(np.abs(rhs).max()))
    distance = float(np.abs(lhs - rhs).max()) / scale
    if offdiag > tol * scale:
        verdict = "inapplicable"
    elif distance <= tol:
        verdict = "pass"
    else:
        verdict = "fail"
    return RLinearityReport(verdict=verdict, offdiag_max=offdiag, multiset_distance=distance)


@dataclass(frozen=True)
class SweepConfig:
    s: float
    dims: tuple[int, ...]
    grid: tuple[float, ...]

    def __post_init__(self):
        if not 0.0 <= self.s <= 1.0:
            raise ValueError(f"scale parameter s must lie in [0, 1], got {self.s}")

    @property
    def dimension(self) -> int:
        out = 1
        for d in self.dims:
            out *= d
        return out


def assemble_f(s: float, factors) -> np.ndarray:
    """F = s * kron-sum + (1-s) * kron-product, plus the zero-row-sum correction."""
    mats = [np.asarray(f, dtype=float) for f in factors]
    q0 = s * kron_sum_all(mats) + (1.0 - s) * kron_prod_all(mats)
    return make_generator(q0).q


def sweep_F(cfg: SweepConfig, entry_functions, imag_tol: float = 1e-8):
    """Rows (t, sorted real eigenvalues of F(t)) over the time grid."""
    rows = []
    for t in cfg.grid:
        mats = [np.asarray(f(t), dtype=float) for f in entry_functions]
        shapes = tuple(m.shape[0] for m in mats)
        if shapes != tuple(cfg.dims):
            raise DimensionMismatch(f"factor dims {shapes} do not match configured {cfg.dims}")
        f_t = assemble_f(cfg.s, mats)
        eigs = _sorted_eigs(f_t)
        scale = max(1.0, float(np.abs(eigs).max()))
        if np.abs(eigs.imag).max() > imag_tol * scale:
            raise NumericError(f"complex spectrum at t={t}: max imag {np.abs(eigs.imag).max():g}")
        rows.append((float(t), [float(v) for v in eigs.real]))
    return rows


__all__ = [
    "kron_sum",
    "kron_prod",
    "kron_sum_all",
    "kron_prod_all",
    "GeneratorMatrix",
    "make_generator",
    "SpectralMap",
    "compose_spectrum",
    "ExpIdentityReport",
    "check_exponential_identity",
    "OrbitMatrix",
    "build_orbit_matrix",
    "RLinearityReport",
    "check_r_linearity",
    "SweepConfig",
    "assemble_f",
    "sweep_F",
]

"""zleig: Z-linear-eigenvalue matrices from partial orders, solved exactly.

Generate symbolic matrices indexed by the linear extensions of a poset
(including a guaranteed-stochastic Fibonacci-block subclass), compute their
eigenvalues as exact integer combinations of the entry symbols via staggered
power-term encoding, and compose multidimensional Markov models through
Kronecker sums and products.
"""

from .errors import (
    CapExceeded,
    CycleDetected,
    DimensionMismatch,
    MismatchDetected,
    NoConvergence,
    NotFibonacci,
    NotRowBalanced,
    NotSimultaneouslyDiagonalizable,
    NotSymmetric,
    NotUnitRowSum,
    NotZLinear,
    OutOfRange,
    ToleranceExceeded,
    ZleigError,
)
from .forms import FormMatrix, Spectrum
from .mx import SymbolicMatrix, ascent_descent, compose_entry, generate_mx
from .posets import Poset, chain_block_poset, fib, linear_extensions, validate_poset
from .solver import (
    Encoding,
    build_encoding,
    decode_form,
    hp_eigenvalues,
    solve,
    solve_batched,
    verify_by_substitution,
)
from .stochastic import (
    FibFactorization,
    epsilon_filtration,
    generate_stochastic_mx,
    parse_dfac,
    substitute_and_check_stochastic,
)

__version__ = "0.1.0"

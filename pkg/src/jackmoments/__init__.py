"""Jack polynomials, matrix-argument hypergeometric series and Stiefel-manifold
trace moments over the real, complex, quaternion and octonion algebras."""

from .algebra import (
    AlgebraTag,
    MatrixF,
    conj_transpose,
    gaussian_matrix,
    hermitian_eigenvalues,
    orthonormalize,
    trace_inner,
)
from .hyper import SeriesResult, hyper_0F1, hyper_pFq, stiefel_log_volume
from .jack import JackTable, build_jack_table, gen_pochhammer, jack_C, mv_log_gamma, rising_factorial
from .montecarlo import MomentEstimate, RandomStream, etr_estimate, haar_sample, moment_estimate
from .partitions import conjugate, dominance_leq, partitions_of
from .verify import (
    VerificationReport,
    bessel_consistency,
    odd_moment_check,
    theorem_rhs,
    verify_moment_identity,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraTag",
    "JackTable",
    "MatrixF",
    "MomentEstimate",
    "RandomStream",
    "SeriesResult",
    "VerificationReport",
    "bessel_consistency",
    "build_jack_table",
    "conj_transpose",
    "conjugate",
    "dominance_leq",
    "etr_estimate",
    "gaussian_matrix",
    "gen_pochhammer",
    "haar_sample",
    "hermitian_eigenvalues",
    "hyper_0F1",
    "hyper_pFq",
    "jack_C",
    "moment_estimate",
    "mv_log_gamma",
    "odd_moment_check",
    "orthonormalize",
    "partitions_of",
    "rising_factorial",
    "stiefel_log_volume",
    "theorem_rhs",
    "trace_inner",
    "verify_moment_identity",
]

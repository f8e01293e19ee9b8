"""zetamoll: mollified twisted second moments of the Riemann zeta function.

Subpackages:
    arith       -- sieves and Dirichlet convolution tables
    mollifier   -- mollifier coefficient families
    series      -- truncated-series / bivariate-jet algebra
    special     -- zeta, log-gamma, AFE kernels, bump, dyadic partition
    kloosterman -- exponential sums, Heath-Brown identities, range splits
    moments     -- main-term evaluators, quadrature oracle, kappa pipeline
    cli         -- command-line front end
"""

from ._backend import NUMBA_ENABLED, backend_name, get_threads, set_threads

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "backend_name",
    "set_threads",
    "get_threads",
    "__version__",
]

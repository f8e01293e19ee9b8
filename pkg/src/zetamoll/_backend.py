"""Backend selection: numba-jitted kernels with a pure-numpy fallback.

The hot numeric kernels exist in two implementations:

* ``_kernels_nb``  -- numba ``@njit`` loops (default when numba imports),
* ``_kernels_np``  -- vectorized numpy (always available).

Setting the environment variable ``ZETAMOLL_NO_NUMBA=1`` before import
forces the numpy path.  Parallel numba kernels reduce over a fixed number
of chunks (``PAIR_CHUNKS``) whose per-chunk summation order never depends
on the thread count, so results are bit-identical across 1..N threads.
"""

import os

# Number of independent work chunks used by parallel pair-sum kernels.
# Fixed (not tied to the thread count) so reductions are deterministic.
PAIR_CHUNKS = 64

_flag = os.environ.get("ZETAMOLL_NO_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

if not _disabled:
    try:
        import numba

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


def set_threads(n: int) -> int:
    """Set the numba thread count; returns the count actually in effect.

    A no-op (returns 1) on the numpy backend, which is single-threaded.
    Counts above the launched pool size are clamped; launch with
    NUMBA_NUM_THREADS set to go higher.
    """
    if not NUMBA_ENABLED:
        return 1
    import numba

    n = max(1, int(n))
    limit = numba.config.NUMBA_NUM_THREADS
    n = min(n, limit)
    numba.set_num_threads(n)
    return n


def get_threads() -> int:
    if not NUMBA_ENABLED:
        return 1
    import numba

    return numba.get_num_threads()

"""Numba acceleration shim.

Hot kernels across the package are decorated with :func:`njit`.  Setting the
environment variable ``DPCIDX_NO_NUMBA=1`` (or running without numba
installed) turns the decorator into a no-op, so the same kernels run as
plain Python and callers that have a vectorized numpy alternative switch to
it.  ``benchmarks/compare_accel.py`` measures both paths.
"""

import os


def _disabled_by_env() -> bool:
    return os.environ.get("DPCIDX_NO_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
        "on",
    )


NUMBA_ENABLED = not _disabled_by_env()

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

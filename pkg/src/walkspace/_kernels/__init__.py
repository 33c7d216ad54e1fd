"""Backend selection for the numeric kernels.

Set WALKSPACE_BACKEND=numpy or WALKSPACE_BACKEND=numba to pin a backend;
unset, numba is used when importable and the pure-numpy fallback otherwise.
"""

import os

from ..errors import ConfigError

_active = None


def get_backend():
    """Return the active kernel module (cached after first resolution)."""
    global _active
    if _active is None:
        _active = _resolve(os.environ.get("WALKSPACE_BACKEND"))
    return _active


def _resolve(name):
    if name is None or name == "":
        try:
            from . import numba_impl
            return numba_impl
        except ImportError:
            from . import numpy_impl
            return numpy_impl
    if name == "numba":
        from . import numba_impl
        return numba_impl
    if name == "numpy":
        from . import numpy_impl
        return numpy_impl
    raise ConfigError(f"WALKSPACE_BACKEND must be 'numba' or 'numpy', got {name!r}")


def backend_name():
    return get_backend().NAME


def set_backend(name):
    """Force a backend programmatically (mainly for tests and benchmarks)."""
    global _active
    _active = _resolve(name)
    return _active

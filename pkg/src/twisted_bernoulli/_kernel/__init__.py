"""Backend selection for the arithmetic kernels.

The compiled extension is used when it importable; setting
``TWISTED_BERNOULLI_PURE=1`` in the environment forces the pure-Python
backend.  ``set_backend`` rebinds the exported functions at runtime, which the
benchmark and the parity tests use to compare the two implementations; both
backends produce identical values.
"""

import os

from . import _pykernel

_BACKENDS = {"pure": _pykernel}
try:
    from . import _ckernel

    _BACKENDS["compiled"] = _ckernel
except ImportError:
    pass

BACKEND = ""


def set_backend(name):
    """Select the active kernel backend ("pure" or "compiled")."""
    global BACKEND, normalize, vadd, vscale, vmulmod, cauchy_coeff
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown kernel backend {name!r}; available: {available_backends()}")
    BACKEND = name
    normalize = mod.normalize
    vadd = mod.vadd
    vscale = mod.vscale
    vmulmod = mod.vmulmod
    cauchy_coeff = mod.cauchy_coeff


def available_backends():
    return tuple(sorted(_BACKENDS))


def _default_backend():
    if os.environ.get("TWISTED_BERNOULLI_PURE"):
        return "pure"
    return "compiled" if "compiled" in _BACKENDS else "pure"


set_backend(_default_backend())

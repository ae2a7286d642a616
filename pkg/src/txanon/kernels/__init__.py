"""Hot kernels with two interchangeable backends.

``numba`` compiles scalar loops with ``@njit``; ``numpy`` is a vectorized
level-by-level formulation with no compiler dependency.  Both return the
same results bit for bit.  The default is picked from the ``TXANON_BACKEND``
environment variable, falling back to numpy when numba is not importable.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

BACKEND_ENV = "TXANON_BACKEND"
BACKENDS = ("numba", "numpy")

_loaded: dict[str, ModuleType] = {}


def available() -> list[str]:
    out = []
    for name in BACKENDS:
        try:
            get(name)
        except ImportError:
            continue
        out.append(name)
    return out


def default_backend() -> str:
    name = os.environ.get(BACKEND_ENV, "").strip().lower()
    if name:
        if name not in BACKENDS:
            raise ValueError(f"{BACKEND_ENV}={name!r}; expected one of {BACKENDS}")
        return name
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def get(name: str | None = None) -> ModuleType:
    name = name or default_backend()
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    mod = _loaded.get(name)
    if mod is None:
        mod = importlib.import_module(f"{__name__}._{name}")
        _loaded[name] = mod
    return mod

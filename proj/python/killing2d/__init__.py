"""Killing vector fields of diagonal metrics on R^2.

Thin Python layer over the C++ core: expression jets, Killing residuals in
frame and coordinate form, dependence classification, closed-form Killing
families, and the grid/flow verification oracles.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
    from ._core import __version__  # noqa: F401
except ImportError:  # pragma: no cover - in-tree layout with _core on sys.path
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401

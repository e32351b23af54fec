"""Lambda-system Raman spin dynamics simulator."""

try:
    from ._lambdasim import *  # noqa: F401,F403  (installed layout)
except ImportError:  # build-tree layout: extension next to this package
    from _lambdasim import *  # noqa: F401,F403

"""One-phase Stefan solver for the nonlinear conduction equation.

Thin package wrapper around the compiled extension; everything useful lives
in ``stefan._core`` and is re-exported here.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

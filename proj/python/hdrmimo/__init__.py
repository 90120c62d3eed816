"""Python bindings for the hdrmimo simulator core."""

from ._hdrmimo import *  # noqa: F401,F403
from ._hdrmimo import __doc__  # noqa: F401

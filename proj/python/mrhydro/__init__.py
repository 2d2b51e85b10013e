"""Models, frequency-domain analysis and simulation of an MR-clutch hydrostatic actuation line."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

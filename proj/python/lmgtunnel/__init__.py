"""LMG model spectra, collective potentials and discrete phase-space dynamics."""

from ._lmgtunnel import *  # noqa: F401,F403
from ._lmgtunnel import InvalidArgument, NumericalError, __version__  # noqa: F401

"""Python interface to the zeropi numerical core.

Everything of substance lives in the compiled extension ``zeropi._zeropi``;
this package just re-exports it under a flat namespace.
"""

from ._zeropi import *  # noqa: F401,F403
from ._zeropi import __version__  # noqa: F401

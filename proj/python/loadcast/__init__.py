"""Multi-factor electricity consumption forecasting toolkit."""

from ._loadcast import *  # noqa: F401,F403
from ._loadcast import __doc__  # noqa: F401

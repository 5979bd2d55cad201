"""Symbol classification, fractal measures and trace-inequality checks.

Reports and certificates come back as plain dicts in the same layout as the
JSON files written by the command-line tool.
"""

from ._ltrace import *  # noqa: F401,F403
from ._ltrace import __version__  # noqa: F401

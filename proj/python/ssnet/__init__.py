from ._ssnet import *  # noqa: F401,F403
from ._ssnet import __doc__  # noqa: F401

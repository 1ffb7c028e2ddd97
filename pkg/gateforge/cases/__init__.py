from .direct import *  # noqa: F401, F403
from .doubling import *  # noqa: F401, F403
from .pi4 import *  # noqa: F401, F403

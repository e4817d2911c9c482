from ._predrl import *  # noqa: F401,F403
from ._predrl import harness, oracle  # noqa: F401

from ._steinerlab import *  # noqa: F401,F403

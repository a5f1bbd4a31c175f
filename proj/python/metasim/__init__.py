"""Python bindings for the metasim identity and metaverse simulator core."""

from ._metasim import *  # noqa: F401,F403
from ._metasim import Error

Error.code = property(lambda self: self.args[0])

__all__ = [name for name in dir() if not name.startswith("_")]

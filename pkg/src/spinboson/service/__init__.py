"""Request/response schemas, command handlers, and the FastAPI application.

The handlers are the single implementation of every command; the HTTP app and
the command line are both thin clients over them.
"""

from . import handlers, schemas  # noqa: F401

"""``python -m jcpot`` dispatches to the CLI."""

from .cli import entry_point

entry_point()

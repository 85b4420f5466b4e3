"""Python access to the virialbound library."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import run_command as _run_command


def run(command, config=None):
    """Run a CLI command in-process. Returns (exit_code, report, diagnostics)."""
    return _run_command(command, _json.dumps(config or {}))

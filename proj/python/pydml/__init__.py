"""Python access to the dml core: problem files in, report dicts out."""

import json

from ._dml import DmlError, __version__, brute_force, degrees, run_json

__all__ = ["DmlError", "__version__", "brute_force", "degrees", "run", "run_file"]


def run(problem, overrides=()):
    """Run a problem (dict or JSON text) and return the report as a dict."""
    text = problem if isinstance(problem, str) else json.dumps(problem)
    return json.loads(run_json(text, list(overrides)))


def run_file(path, overrides=()):
    with open(path, encoding="utf-8") as fh:
        return run(fh.read(), overrides)

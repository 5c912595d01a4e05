"""Python front end for the ergokit engine.

`run` takes a workspace (a dict or JSON text) and returns the parsed report.
A nonzero exit raises `CommandError`, which carries the exit code and the report.
"""

import json
import os

from ._ergokit import Error, Scalar, exit_code_for, field, run_file as _run_file, run_text as _run_text, set_field

__all__ = ["CommandError", "Error", "Scalar", "exit_code_for", "field", "run", "run_raw", "set_field"]


class CommandError(Exception):
    def __init__(self, exit_code, report, stderr):
        err = (report or {}).get("error", {})
        super().__init__(stderr.strip() or f"exit {exit_code}")
        self.exit_code = exit_code
        self.code = err.get("code")
        self.report = report
        self.stderr = stderr


def run_raw(workspace, command, op="", *args, budget=None, eps=None, trunc=None, plot=False, out="json"):
    """Returns (exit_code, stdout, stderr) exactly as the command line tool would."""
    if isinstance(workspace, (str, os.PathLike)) and os.path.exists(workspace):
        return _run_file(os.fspath(workspace), command, op, list(args), budget, eps, trunc, plot, out)
    text = workspace if isinstance(workspace, str) else json.dumps(workspace)
    return _run_text(text, command, op, list(args), budget, eps, trunc, plot, out)


def run(workspace, command, op="", *args, budget=None, eps=None, trunc=None):
    code, out, err = run_raw(workspace, command, op, *args, budget=budget, eps=eps, trunc=trunc)
    try:
        report = json.loads(out) if out else None
    except ValueError:
        report = None
    if code != 0:
        raise CommandError(code, report, err)
    return report

"""Fuzzy group decision-making: affect scoring, fuzzy inference, consensus."""

import json
import os

from ._core import (
    Engine as _Engine,
    GdmError,
    RuleBase,
    classify,
    compute_iqr,
    membership,
    raw_preference,
    render_table,
    scale_preference,
)

__all__ = [
    "DATA_DIR",
    "Engine",
    "GdmError",
    "RuleBase",
    "classify",
    "compute_iqr",
    "membership",
    "raw_preference",
    "render_table",
    "run_session",
    "scale_preference",
]

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")

# args are (message, kind)
GdmError.kind = property(lambda self: self.args[1] if len(self.args) > 1 else None)
GdmError.__str__ = lambda self: str(self.args[0]) if self.args else ""


class Engine(_Engine):
    """Lexicons plus both rule bases. Defaults to the bundled data."""

    def __init__(self, data_dir=None, preference_fis="", feedback_fis=""):
        super().__init__(os.fspath(data_dir or DATA_DIR), os.fspath(preference_fis), os.fspath(feedback_fis))

    def run_session(self, session, affect=None):
        """Report dict for a session given as a path, JSON text or dict."""
        if isinstance(session, dict):
            text = json.dumps(session)
        elif isinstance(session, os.PathLike) or (isinstance(session, str) and not session.lstrip().startswith("{")):
            with open(session, encoding="utf-8") as f:
                text = f.read()
        else:
            text = session
        return json.loads(self.run(text, affect))


_default = None


def run_session(session, affect=None):
    global _default
    if _default is None:
        _default = Engine()
    return _default.run_session(session, affect)

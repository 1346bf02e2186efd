"""Python access to the STPA/SOTIF analysis core."""

try:
    from . import _stpa
except ImportError:  # in-tree build: the extension sits next to this package
    import _stpa

Model = _stpa.Model
ModelError = _stpa.ModelError
load = _stpa.load
loads = _stpa.loads
from_json = _stpa.from_json
run_cli = _stpa.run_cli


def errors(diagnostics):
    return [d for d in diagnostics if d["severity"] == "error"]


__all__ = ["Model", "ModelError", "load", "loads", "from_json", "run_cli", "errors"]

from importlib import util

_OPTIONAL_VISUALIZATION_ENABLED = False


def _check_opt_deps():
    """Look matplotlib up without importing it."""
    global _OPTIONAL_VISUALIZATION_ENABLED

    _OPTIONAL_VISUALIZATION_ENABLED = util.find_spec("matplotlib") is not None


_check_opt_deps()

import logging
import os

_ROOT = "tridc"
_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"


def _configure_root() -> logging.Logger:
    root = logging.getLogger(_ROOT)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
        root.setLevel(os.environ.get("TRIDC_LOG_LEVEL", "WARNING").upper())
        root.propagate = False
    return root


def init_logger(name: str) -> logging.Logger:
    """Return a child of the package logger, attaching the stderr handler once."""
    _configure_root()
    if name != _ROOT and not name.startswith(_ROOT + "."):
        name = f"{_ROOT}.{name}"
    return logging.getLogger(name)

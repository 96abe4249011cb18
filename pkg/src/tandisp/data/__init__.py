"""Bundled presentation files."""

from importlib import resources
from pathlib import Path
from typing import List


def data_path(name: str) -> Path:
    """Path of a bundled file; ``name`` may omit the ``.cat`` suffix."""
    if not name.endswith(".cat"):
        name += ".cat"
    return Path(str(resources.files(__name__) / name))


def bundled_files(malformed: bool = False) -> List[Path]:
    """Well-formed bundled files, or with ``malformed`` the ones meant to be rejected."""
    root = Path(str(resources.files(__name__)))
    files = sorted(root.glob("*.cat"))
    return [f for f in files if f.name.startswith("bad_") == malformed]

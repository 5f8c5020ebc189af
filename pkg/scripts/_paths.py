"""Make the netrelay source tree importable when running scripts from a checkout."""

from __future__ import annotations

import sys
from pathlib import Path


def add_project_src_to_path() -> None:
    """Prepend the repository's src directory to sys.path if needed."""

    src = Path(__file__).resolve().parents[1] / "src"
    if src.exists() and str(src) not in sys.path:
        sys.path.insert(0, str(src))

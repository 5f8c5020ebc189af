import os
import pathlib
import sys

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch: pytest.MonkeyPatch, tmp_path: pathlib.Path) -> None:
    """Every test starts from default settings, one worker thread and no stray .env file."""

    for name in list(os.environ):
        if name.startswith("NETRELAY_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("NETRELAY_THREADS", "1")
    monkeypatch.chdir(tmp_path)

    from netrelay.config import reload_settings

    reload_settings()

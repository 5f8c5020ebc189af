from .harness.cli import run
from .logger import get_logger


if __name__ == "__main__":  # pragma: no cover - entry point
    get_logger(__name__).debug("netrelay module executed as a script")
    run()

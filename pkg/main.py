"""Command-line entry point for the influence graph learner."""

import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from apps.harness.cli import cli, run_cli  # noqa: E402

__all__ = ["cli"]


if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))

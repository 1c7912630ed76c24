"""CLI entry point for the coxinv command."""

from __future__ import annotations

import sys

from coxeter_involutions.cli import main


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python
"""
Startup script for the F-polynomial toolkit.
Run: python run_cli.py <subcommand> [options]
"""

import sys
import logging
from pathlib import Path

# Add project root to path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from config import LOG_LEVEL

# Configure logging; stdout is reserved for artifacts
logging.basicConfig(
    level=LOG_LEVEL,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)


def main():
    """Run one toolkit subcommand."""
    try:
        from cli.main import main as cli_main

        sys.exit(cli_main())

    except KeyboardInterrupt:
        logger.info("Run stopped by user")
        sys.exit(130)


if __name__ == "__main__":
    main()

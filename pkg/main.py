"""CLI entry point for running hybridflow from a source checkout"""

import sys

from hybridflow.cli import main

if __name__ == "__main__":
    sys.exit(main())

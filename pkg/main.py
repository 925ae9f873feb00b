"""
Root-level entry point for the tagger command line
"""

import sys

from tagger_app.cli import main

if __name__ == "__main__":
    sys.exit(main())

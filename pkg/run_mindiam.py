#!/usr/bin/env python3
"""
Command-line entry point; run from a checkout without installing.

    python run_mindiam.py approx --mode half graph.txt
    python run_mindiam.py gen gadget --kind bichrom-dag --t 2 --n 16 --planted | python run_mindiam.py exact
"""

import sys

from src.main import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

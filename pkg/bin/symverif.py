#!/usr/bin/env python
"""
Verify symmetry properties of the programs in .sym files, synthesize
preconditions and run the benchmark corpus.

Run ``symverif.py --help`` for the list of commands.
"""
import sys

from symverif.cli import main

if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
QuasiSample
Golden-ratio quasicrystal sampling and sampling-pattern evaluation
"""

import sys

from modules.cli import main

if __name__ == "__main__":
    sys.exit(main())

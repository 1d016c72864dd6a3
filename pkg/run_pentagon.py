#!/usr/bin/env python3
"""
Five-context Kirkwood-Dirac toolkit.

Usage:
    python run_pentagon.py contexts --frame canonical
    python run_pentagon.py kd --state named:T1f --table
    python run_pentagon.py simulate --state named:Nx --experiment inequality --shots 1000000 --seed 7
"""

import sys

from modules.cli import main

if __name__ == "__main__":
    sys.exit(main())

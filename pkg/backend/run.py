#!/usr/bin/env python3
"""
Command runner for the neutral inclusions toolkit

Usage:
  python run.py pt --input disk_k2.json --output disk_k2_pt.json
  python run.py field --input coated.json --output field.json --grid field.csv
"""

import os
import sys

BACKEND_DIR = os.path.dirname(os.path.abspath(__file__))
if BACKEND_DIR not in sys.path:
    sys.path.insert(0, BACKEND_DIR)

from neutral_inclusions.cli import main

if __name__ == '__main__':
    main()

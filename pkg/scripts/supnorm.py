"""
Runs the pysupnorm command line without installing the package entry point,
e.g. python scripts/supnorm.py verify --seed 7
"""

import sys

from pysupnorm.cli import main

sys.exit(main())

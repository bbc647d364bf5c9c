"""
A program that tabulates normalized cusp form sup-norms against every
available bound for the one-dimensional weights
"""

import argparse
from functools import partial

import pandas as pd

from pysupnorm.bounds import BOUND_NAMES, cusp_form_report, sweep_reports
from pysupnorm.numerics import PeterssonQuadrature, SearchConfig
from pysupnorm.qseries import ONE_DIMENSIONAL_WEIGHTS
from pysupnorm.io import reports_frame, write_table

parser = argparse.ArgumentParser()
parser.add_argument('--out', required=True, help='Output CSV or JSON file')
parser.add_argument('--grid', type=int, default=48,
                    help='Search grid size per coordinate')
parser.add_argument('--jobs', type=int, default=1)
args = parser.parse_args()

quad = PeterssonQuadrature()
policy = SearchConfig(grid=(args.grid, args.grid))

frames = []
for bound in BOUND_NAMES:
    func = partial(cusp_form_report, bound=bound, quad=quad, policy=policy)
    frames.append(reports_frame(sweep_reports(func, ONE_DIMENSIONAL_WEIGHTS,
                                              args.jobs)))

write_table(pd.concat(frames, ignore_index=True), args.out)

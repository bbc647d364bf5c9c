"""
Tabular output of bound reports and scaling studies. Files are written
deterministically: CSV with 17 significant digits, JSON with a fixed key
order.
"""

import json

import pandas as pd

from pysupnorm.exceptions import FileFormatError
from pysupnorm.io.base import open_artifact, strip_compression

REPORT_COLUMNS = ['name', 'k', 'm', 'lhs', 'rhs', 'margin', 'config_digest']
FORMATS = ('csv', 'json')
FLOAT_FORMAT = '%.17g'


def format_of(filename, default='csv'):
    "Output format implied by a filename suffix"
    base = strip_compression(filename)
    for fmt in FORMATS:
        if base.endswith('.' + fmt):
            return fmt
    return default


def reports_frame(reports):
    """
    One row per report, columns in REPORT_COLUMNS order

    :rtype: pandas.DataFrame
    """
    return pd.DataFrame.from_records([r.as_dict() for r in reports],
                                     columns=REPORT_COLUMNS)


def write_table(frame, filename, fmt=None):
    """
    Writes a DataFrame as CSV or as a JSON list of row objects

    :param fmt: 'csv' or 'json'; taken from the suffix if None
    """
    fmt = fmt or format_of(filename)
    if fmt not in FORMATS:
        raise ValueError('Unknown output format: {}'.format(fmt))
    with open_artifact(filename, 'w') as f:
        if fmt == 'csv':
            frame.to_csv(f, index=False, float_format=FLOAT_FORMAT,
                         lineterminator='\n')
        else:
            rows = [{col: _plain(row[col]) for col in frame.columns}
                    for _, row in frame.iterrows()]
            json.dump(rows, f, indent=1)
            f.write('\n')


def _plain(value):
    "numpy scalars to Python values for json"
    return value.item() if hasattr(value, 'item') else value


def write_reports(reports, filename, fmt=None):
    write_table(reports_frame(reports), filename, fmt)


def read_table(filename, fmt=None):
    """
    Reads a table written by write_table

    :rtype: pandas.DataFrame
    """
    fmt = fmt or format_of(filename)
    with open_artifact(filename) as f:
        if fmt == 'csv':
            return pd.read_csv(f)
        try:
            return pd.DataFrame.from_records(json.load(f))
        except ValueError as e:
            raise FileFormatError('{}: not valid JSON ({})'.format(filename, e))


def read_reports(filename, fmt=None):
    """
    Reads back a report table, checking its columns and margins

    :rtype: pandas.DataFrame
    """
    frame = read_table(filename, fmt)
    if list(frame.columns) != REPORT_COLUMNS:
        raise FileFormatError('{}: unexpected columns {}'
                              .format(filename, list(frame.columns)))
    recomputed = frame['rhs'] - frame['lhs']
    if not ((recomputed - frame['margin']).abs() <=
            1e-12 * frame['rhs'].abs().clip(lower=1.0)).all():
        raise FileFormatError('{}: margin column does not equal rhs - lhs'
                              .format(filename))
    return frame

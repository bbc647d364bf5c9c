"""
JSON formats for truncated q-expansions and Jacobi form coefficients

QSeries:  {"weight", "level", "denom", "trunc", "coeffs": [[num, re, im]]}
Jacobi:   {"weight", "index", "trunc_n", "coeffs": [[n, r, re, im]]}
"""

import json
from fractions import Fraction
from numbers import Integral

from pysupnorm.common import as_fraction
from pysupnorm.exceptions import FileFormatError
from pysupnorm.io.base import open_artifact
from pysupnorm.qseries import QSeries
from pysupnorm.thetajacobi import JacobiFormCoeffs


def _encode_number(x):
    "Exact ints stay ints; other rationals become 'p/q' strings"
    x = as_fraction(x) if not isinstance(x, float) else x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


def _encode_coef(c):
    if isinstance(c, Integral):
        return [int(c), 0]
    c = complex(c)
    return [c.real, c.imag]


def _decode_coef(re, im):
    if isinstance(re, int) and im == 0:
        return re
    return complex(re, im)


def _checked(record, keys, what):
    if not isinstance(record, dict):
        raise FileFormatError('{} record must be a JSON object'.format(what))
    missing = [k for k in keys if k not in record]
    if missing:
        raise FileFormatError('{} record lacks {}'.format(what,
                                                         ', '.join(missing)))
    return record


def qseries_to_dict(f):
    return {'weight': _encode_number(f.weight), 'level': f.level,
            'denom': f.denom, 'trunc': _encode_number(f.trunc_order),
            'coeffs': [[n] + _encode_coef(f.coeffs[n])
                       for n in f.numerators()]}


def qseries_from_dict(record):
    """
    Builds a QSeries from its JSON record

    :raises FileFormatError: on missing fields or unsorted numerators
    :rtype: QSeries
    """
    _checked(record, ('weight', 'level', 'denom', 'trunc', 'coeffs'),
             'QSeries')
    coeffs = {}
    previous = None
    try:
        for num, re, im in record['coeffs']:
            if previous is not None and num <= previous:
                raise FileFormatError('Numerators must strictly increase '
                                      '({} after {})'.format(num, previous))
            coeffs[int(num)] = _decode_coef(re, im)
            previous = num
        return QSeries(coeffs, record['denom'], as_fraction(record['trunc']),
                       as_fraction(record['weight']), record['level'])
    except (TypeError, ValueError) as e:
        raise FileFormatError('Malformed QSeries record: {}'.format(e))


def jacobi_to_dict(phi):
    return {'weight': _encode_number(phi.weight), 'index': phi.index,
            'trunc_n': phi.trunc_n,
            'coeffs': [[n, r] + _encode_coef(phi.coeffs[(n, r)])
                       for n, r in phi.keys()]}


def jacobi_from_dict(record):
    """
    Builds JacobiFormCoeffs from its JSON record

    :raises FileFormatError: on missing fields or unsorted (n, r)
    :rtype: JacobiFormCoeffs
    """
    _checked(record, ('weight', 'index', 'trunc_n', 'coeffs'), 'Jacobi form')
    coeffs = {}
    previous = None
    try:
        for n, r, re, im in record['coeffs']:
            key = (int(n), int(r))
            if previous is not None and key <= previous:
                raise FileFormatError('(n, r) pairs must be sorted: {} after '
                                      '{}'.format(key, previous))
            coeffs[key] = _decode_coef(re, im)
            previous = key
        weight = record['weight']
        if not isinstance(weight, int):
            weight = as_fraction(weight)
        return JacobiFormCoeffs(weight, record['index'], record['trunc_n'],
                                coeffs)
    except (TypeError, ValueError) as e:
        raise FileFormatError('Malformed Jacobi form record: {}'.format(e))


def _write_json(record, filename):
    with open_artifact(filename, 'w') as f:
        json.dump(record, f, indent=1)
        f.write('\n')


def _read_json(filename):
    with open_artifact(filename) as f:
        try:
            return json.load(f)
        except ValueError as e:
            raise FileFormatError('{}: not valid JSON ({})'.format(filename, e))


def write_qseries(f, filename):
    _write_json(qseries_to_dict(f), filename)


def read_qseries(filename):
    return qseries_from_dict(_read_json(filename))


def write_jacobi(phi, filename):
    _write_json(jacobi_to_dict(phi), filename)


def read_jacobi(filename):
    return jacobi_from_dict(_read_json(filename))

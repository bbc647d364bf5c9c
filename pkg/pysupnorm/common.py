"Small helpers shared by the numerical modules"

import math
import json
import hashlib
from fractions import Fraction
from functools import reduce

import numpy as np


def compensated_sum(values):
    """
    Exactly rounded sum of real or complex values.

    The result does not depend on the order or chunking of the inputs, so
    parallel partial results merge to bit-identical totals.

    :param values: numbers to add
    :type values: iterable or ndarray
    :rtype: float or complex
    """
    arr = np.asarray(values).ravel()
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real), math.fsum(arr.imag))
    return math.fsum(arr)


def lcm(*args):
    "Least common multiple of positive integers"
    return reduce(lambda a, b: a * b // math.gcd(a, b), args, 1)


def as_fraction(x):
    """
    Converts ints, floats, strings ('p/q') and Fractions to a Fraction

    :rtype: Fraction
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    return Fraction(str(x))


def chunks(n, size):
    """
    Yields (start, stop) slices covering range(n) in pieces of at most size

    :param n: total length
    :param size: chunk length
    """
    for start in range(0, n, size):
        yield start, min(start + size, n)


def parse_complex(text):
    """
    Parses a complex literal in the form 're+imi' (e.g. 0.5+1.2i, 2i, i).

    :param text: the literal
    :type text: str
    :rtype: complex
    """
    s = text.strip().replace(' ', '').lower()
    if not s:
        raise ValueError('Empty complex literal')
    if not s.endswith('i'):
        return complex(float(s), 0.0)

    body = s[:-1]
    split = 0
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in '+-' and body[pos - 1] != 'e':
            split = pos
            break

    real_part, imag_part = body[:split], body[split:]
    if imag_part in ('', '+'):
        imag = 1.0
    elif imag_part == '-':
        imag = -1.0
    else:
        imag = float(imag_part)
    real = float(real_part) if real_part else 0.0
    return complex(real, imag)


def format_complex(z):
    "Formats a complex number in the 're+imi' literal style"
    z = complex(z)
    sign = '-' if z.imag < 0 else '+'
    return '{!r}{}{!r}i'.format(z.real, sign, abs(z.imag))


def config_digest(*configs):
    """
    Short stable digest of one or more configuration objects.

    Each config either has an ``as_dict`` method or is a plain mapping.

    :rtype: str
    """
    payload = []
    for cfg in configs:
        if cfg is None:
            continue
        if hasattr(cfg, 'as_dict'):
            cfg = cfg.as_dict()
        payload.append(cfg)
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode('utf8')).hexdigest()[:16]

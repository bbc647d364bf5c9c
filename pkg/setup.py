"Package management script"

import sys
import os.path

if sys.version_info[0:2] < (3, 8):
    print("pysupnorm requires Python 3.8 or higher", file=sys.stderr)
    exit(1)

from setuptools import setup, find_packages

pysupnorm_dir = os.path.dirname(__file__)

with open(os.path.join(pysupnorm_dir, 'classifiers.txt')) as f:
    lib_class = [x.strip() for x in f if x.strip()]

lib_requirements = ['numpy>=1.17', 'scipy>=1.3', 'pandas>=1.5']

test_requirements = ['pytest', 'pytest-cov', 'mpmath']

lib_keywords = ['modular forms', 'jacobi forms', 'sup-norm', 'bergman kernel',
                'petersson norm', 'automorphic forms']


setup(
    name='pysupnorm',
    version='0.1.0',
    description='Explicit and numerical sup-norm bounds for cusp forms and '
                'Jacobi forms',
    keywords=lib_keywords,
    license="Apache 2.0",
    packages=find_packages(exclude=['tests', 'examples', 'examples.*']),
    install_requires=lib_requirements,
    extras_require={'test': test_requirements},
    entry_points={'console_scripts': ['pysupnorm=pysupnorm.cli:main']},
    classifiers=lib_class)

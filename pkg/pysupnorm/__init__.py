#!/usr/bin/env python

import sys
if sys.version_info < (3, 8):
    raise ImportError('pysupnorm requires Python 3.8 or higher')

__version__ = '0.1.0'

import pysupnorm.common
from pysupnorm.rand import set_seed

# Geometry and group arithmetic
from pysupnorm.hyperbolic import (UpperHalfPoint, GroupElement,
                                  DomainTruncation, mobius_apply,
                                  displacement, hyp_distance,
                                  reduce_to_fundamental_domain)
from pysupnorm.arithmetic import (GroupData, EnumerationBudget,
                                  enumerate_elements, counting_function,
                                  sl2z_group_data, index_gamma01)

# Modular and Jacobi forms
from pysupnorm.qseries import (QSeries, eisenstein_series, delta_series,
                               cusp_form, eval_qseries, petersson_inner,
                               supnorm_search)
from pysupnorm.thetajacobi import (JacobiPoint, JacobiFormCoeffs,
                                   ThetaComponentVector, phi_10_1,
                                   extract_h_mu, jacobi_inner_4d,
                                   jacobi_inner_theta, jacobi_supnorm_search)

# Numerical rules
from pysupnorm.numerics import PeterssonQuadrature, JacobiQuadrature
from pysupnorm.numerics import SearchConfig

# Bounds and reports
from pysupnorm.bounds import (BoundReport, BergmanConfig,
                              bergman_diag_series, prop3_rhs)

# Reading and writing files
import pysupnorm.io

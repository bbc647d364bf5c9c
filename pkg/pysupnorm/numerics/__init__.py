from pysupnorm.numerics.quadrature import PeterssonQuadrature, JacobiQuadrature
from pysupnorm.numerics.search import SearchConfig

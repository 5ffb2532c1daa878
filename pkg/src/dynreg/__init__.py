"""Exact symbolic computation of singular vectors, dynamical Weyl group
operators A_w(lambda) and regularizing operators N(lambda) for
finite-dimensional sl2 and sl3 modules.

All arithmetic is exact over Q: coefficients are `fractions.Fraction`,
polynomials are sparse dicts keyed by exponent tuples, and rational
functions are kept in a canonical normalized form.  Nothing here is
numerical; every identity the test suite checks is an identity of
normalized rational functions.
"""

__version__ = "0.1.0"

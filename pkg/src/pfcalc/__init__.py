"""Exact computer algebra for polynomial functors at finite rank.

Subpackages cover exact coefficient rings, sparse multivariate polynomials
with Groebner machinery, finitely presented modules over principal base
rings, coordinate rings of modules, Schur algebras, polynomial functor
expressions with dimension functions, and closed subsets of functor spaces
with per-prime dimension and good-prime detection.
"""

__version__ = "0.1.0"

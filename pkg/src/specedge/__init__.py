"""Resolvent-norm asymptotics of 1D non-self-adjoint operators near the
boundary of the symbol range, cross-validated against brute-force numerics."""

__version__ = "0.1.0"

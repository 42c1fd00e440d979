"""Exact engine for generalized d-sections and unipotent d-blocks of GL(n,q).

Everything is computed with arbitrary-precision integers and exact
rationals; there is no floating point anywhere. All public values are
immutable (tuples, frozensets, Fractions), so every function is safe to
call concurrently; the process-wide memo tables rely on CPython's atomic
dict insertion.
"""

__version__ = "0.1.0"

"""Hochschild (co)homology of exterior algebras over Z, Q and prime fields.

The package computes HH_k(A;A) and HH^k(A;A) for A the exterior algebra on
n generators, by three independent routes that are cross-checked against
each other:

* a brute-force normalized bar complex (the oracle),
* an algebraic-Morse reduction to a small multiset-indexed complex,
* closed-form formulas.

It also computes the cup-product ring structure on cohomology and verifies
its generators.  Everything runs in exact arithmetic.
"""

__version__ = "0.1.0"

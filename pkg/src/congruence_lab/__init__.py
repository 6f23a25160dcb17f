"""Trisecant congruences of surfaces in P^4.

schubert    Chow ring of G(1,n)
invariants  multiple point formulas and the numerical classification in P^4
polyalg     polynomials and linear algebra over F_q
surfaces    explicit surface models over F_q
trisecant   exhaustive trisecant counts and plane-section certificates
cli         command line front end
"""
__version__ = "0.1.0"

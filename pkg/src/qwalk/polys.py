"""Exact univariate polynomial helpers over integers / rationals.

Polynomials are sequences of coefficients in descending powers,
``p[0]`` the leading coefficient.
"""

from __future__ import annotations

from fractions import Fraction


def poly_eval(coeffs, x):
    """Horner evaluation; exact for int/Fraction inputs."""
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_trim(coeffs):
    i = 0
    while i < len(coeffs) - 1 and coeffs[i] == 0:
        i += 1
    return list(coeffs[i:])


def poly_degree(coeffs):
    t = poly_trim(coeffs)
    if len(t) == 1 and t[0] == 0:
        return -1
    return len(t) - 1


def poly_divmod(num, den):
    """Exact quotient and remainder over Fractions."""
    num = [Fraction(c) for c in poly_trim(num)]
    den = [Fraction(c) for c in poly_trim(den)]
    if poly_degree(den) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    if poly_degree(num) < poly_degree(den):
        return [Fraction(0)], num
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    r = num[:]
    lead = den[0]
    for i in range(len(q)):
        q[i] = r[i] / lead
        if q[i]:
            for j, d in enumerate(den):
                r[i + j] -= q[i] * d
    return poly_trim(q), poly_trim(r)


def poly_gcd(p, q):
    """Monic gcd over the rationals via the Euclidean algorithm."""
    a = [Fraction(c) for c in poly_trim(p)]
    b = [Fraction(c) for c in poly_trim(q)]
    while poly_degree(b) >= 0:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if poly_degree(a) < 0:
        return a
    lead = a[0]
    return [c / lead for c in a]


def poly_coprime(p, q):
    return poly_degree(poly_gcd(p, q)) == 0

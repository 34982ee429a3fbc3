"""Slow, independent reference computations used as test oracles.

Nothing here imports the code paths under test beyond the group's element
enumeration; loops are written out over residue tuples.
"""

import cmath
import itertools
import math


def elements(factors):
    return list(itertools.product(*(range(n) for n in factors)))


def add(factors, x, y):
    return tuple((a + b) % n for a, b, n in zip(x, y, factors))


def char(factors, xi, x):
    return cmath.exp(2j * math.pi * sum(a * b / n for a, b, n in zip(xi, x, factors)))


def fourier_coeffs(factors, values):
    els = elements(factors)
    N = len(els)
    return [sum(values[i] * char(factors, xi, x).conjugate() for i, x in enumerate(els)) / N for xi in els]


def gowers_power_loops(factors, values, k):
    """E over x, h_1..h_k of prod_{w in {0,1}^k} C^{|w|} f(x + w.h)."""
    els = elements(factors)
    index = {x: i for i, x in enumerate(els)}
    total = 0j
    for x in els:
        for hs in itertools.product(els, repeat=k):
            prod = 1
            for w in itertools.product((0, 1), repeat=k):
                y = x
                for wi, h in zip(w, hs):
                    if wi:
                        y = add(factors, y, h)
                v = values[index[y]]
                prod *= v.conjugate() if sum(w) % 2 else v
            total += prod
    return total / len(els) ** (k + 1)


def tilde_U_loops(factors, tables, k):
    els = elements(factors)
    index = {x: i for i, x in enumerate(els)}
    total = 0j
    for a in itertools.product(els, repeat=k + 1):
        prod = 1
        for v in range(2**k):
            y = a[0]
            for i in range(k):
                if v >> i & 1:
                    y = add(factors, y, a[i + 1])
            prod *= tables[v][index[y]]
        total += prod
    return total / len(els) ** (k + 1)


def poly_mod(coeffs, x, p):
    """Univariate sum_j coeffs[j] x^j mod p."""
    return sum(c * pow(x, j, p) for j, c in enumerate(coeffs)) % p


def phase_values(coeffs, p):
    return [cmath.exp(2j * math.pi * poly_mod(coeffs, x, p) / p) for x in range(p)]

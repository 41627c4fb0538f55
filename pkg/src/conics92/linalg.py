"""Exact determinants for small dense matrices over any supported scalar.

Rational matrices are scaled to integers and run through fraction-free
Bareiss elimination; finite-field matrices use the same elimination with
field division; float/complex matrices go to LAPACK.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def _det_bareiss_int(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _det_field(rows) -> object:
    # fraction-free elimination; over a field the divisions are exact anyway
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if piv is None:
                return m[k][k]  # a zero of the right type
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = v if prev is None else v / prev
            m[i][k] = m[i][k] - m[i][k]  # zero of the right type
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign == 1 else -d


def det(rows) -> object:
    """Determinant of a square matrix given as a sequence of row sequences."""
    n = len(rows)
    if n == 0:
        return 1
    flat = [x for row in rows for x in row]
    if any(isinstance(x, complex) for x in flat):
        return complex(np.linalg.det(np.asarray(rows, dtype=complex)))
    if any(isinstance(x, float) for x in flat):
        return float(np.linalg.det(np.asarray(rows, dtype=float)))
    if all(isinstance(x, (int, Fraction)) for x in flat):
        scales = []
        m = []
        for row in rows:
            fr = [Fraction(x) for x in row]
            lcm = 1
            for x in fr:
                lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
            scales.append(lcm)
            m.append([int(x * lcm) for x in fr])
        d = _det_bareiss_int(m)
        total = 1
        for s in scales:
            total *= s
        return Fraction(d, total)
    return _det_field(rows)


def adjugate3(c):
    """Adjugate of a 3x3 matrix given as rows of exact scalars."""
    (a, b, d), (e, f, g), (h, i, j) = c
    return [
        [f * j - g * i, -(b * j - d * i), b * g - d * f],
        [-(e * j - g * h), a * j - d * h, -(a * g - d * e)],
        [e * i - f * h, -(a * i - b * h), a * f - b * e],
    ]

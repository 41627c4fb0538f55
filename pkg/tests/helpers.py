"""Shared test utilities: an expanded-polynomial oracle and set matching."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from conics92.geometry import insert_one
from conics92.solver import ConicSolution, projective_pair_dist


class Poly:
    """Sparse multivariate polynomial over Q, used as a differentiation
    oracle: exponent-tuple -> coefficient."""

    def __init__(self, terms=None, nvars=8):
        self.nvars = nvars
        self.terms = dict(terms or {})

    @classmethod
    def const(cls, c, nvars=8):
        c = Fraction(c)
        return cls({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def var(cls, k, nvars=8):
        e = [0] * nvars
        e[k] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other, self.nvars)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
            if out[e] == 0:
                del out[e]
        return Poly(out, self.nvars)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other, self.nvars)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
                if out[e] == 0:
                    del out[e]
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def diff(self, k):
        out = {}
        for e, c in self.terms.items():
            if e[k] == 0:
                continue
            e2 = list(e)
            e2[k] -= 1
            out[tuple(e2)] = out.get(tuple(e2), 0) + c * e[k]
        return Poly(out, self.nvars)

    def eval(self, xs):
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, p in zip(xs, e):
                for _ in range(p):
                    v = v * x
            total += v
        return total


def expanded_section_polys(system):
    """Fully expanded components of the chart section as Poly objects in
    the 8 chart variables (a1,a2,a3,b1..b5)."""
    j = system.chart.j
    avars = [Poly.var(k) for k in range(3)]
    bvars = [Poly.var(3 + k) for k in range(5)]
    coeffs = insert_one(bvars, j, Poly.const(1))
    out = []
    for zm in system.zmaps:
        z = []
        for r in range(3):
            acc = Poly.const(zm[r][0])
            for c in range(3):
                acc = acc + Poly.const(zm[r][c + 1]) * avars[c]
            z.append(acc)
        phi = (
            coeffs[0] * z[0] * z[0]
            + coeffs[1] * z[1] * z[1]
            + coeffs[2] * z[2] * z[2]
            + coeffs[3] * z[1] * z[2]
            + coeffs[4] * z[0] * z[2]
            + coeffs[5] * z[0] * z[1]
        )
        out.append(phi)
    return out


def conj_solution(s: ConicSolution) -> ConicSolution:
    return ConicSolution(
        chart=s.chart,
        a=tuple(np.conj(s.a)),
        b=tuple(np.conj(s.b)),
        det_jac=np.conj(s.det_jac),
        reality=s.reality,
        sign=s.sign,
        residual=s.residual,
        abar=tuple(np.conj(s.abar)),
        cbar=tuple(np.conj(s.cbar)),
    )


def match_solution_sets(sa, sb, tol=1e-6) -> bool:
    """True when the two sets are in bijection as moduli points (either
    member of a conjugate pair may be the stored representative)."""
    if sa.count != sb.count:
        return False
    used = set()
    for u in sa.solutions:
        hit = None
        for k, v in enumerate(sb.solutions):
            if k in used or v.reality != u.reality:
                continue
            d = projective_pair_dist(u, v)
            if v.reality == "pair":
                d = min(d, projective_pair_dist(u, conj_solution(v)))
            if d < tol:
                hit = k
                break
        if hit is None:
            return False
        used.add(hit)
    return True

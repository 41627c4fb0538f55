"""Projective 3-space primitives and the 24 affine charts of the space of
plane conics.

A point of the moduli space is a pair (H, q): a plane H in P^3 and a conic
q on it, given by 6 coefficients against the monomials

    (z0^2, z1^2, z2^2, z1*z2, z0*z2, z0*z1)

in the plane coordinates z obtained by dropping one ambient coordinate.
Chart (i, j) normalizes the i-th plane coefficient and the j-th conic
coefficient to 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegeneratePoint,
    LineInPlane,
    NotInChart,
)
from .fields import PrimeFieldElement, QuadExtElement
from .linalg import det


def coerce_scalars(values) -> tuple:
    """Promote bare ints to the scalar type of their companions.

    Int-only input becomes exact rationals, so later divisions stay exact.
    """
    vals = list(values)
    ref = next((v for v in vals if not isinstance(v, int)), None)

    def conv(v):
        if not isinstance(v, int):
            return v
        if ref is None or isinstance(ref, Fraction):
            return Fraction(v)
        if isinstance(ref, float):
            return float(v)
        if isinstance(ref, complex):
            return complex(v)
        if isinstance(ref, PrimeFieldElement):
            return PrimeFieldElement(ref.p, v)
        if isinstance(ref, QuadExtElement):
            return QuadExtElement(ref.field, v, 0)
        return v

    return tuple(conv(v) for v in vals)

# ambient indices kept by the plane-coordinate projection of chart i
PLANE_COORD_INDICES = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))

# (u, v) exponent pairs of the conic monomial basis
MONOMIAL_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))


def _rank2(p, s) -> bool:
    return any(
        p[u] * s[v] - p[v] * s[u] != 0 for u in range(4) for v in range(u + 1, 4)
    )


@dataclass(frozen=True)
class Line3:
    """A line in P^3 spanned by two projectively distinct points."""

    p: tuple
    s: tuple

    def __post_init__(self):
        if len(self.p) != 4 or len(self.s) != 4:
            raise ValueError("line points need 4 homogeneous coordinates")
        object.__setattr__(self, "p", coerce_scalars(self.p))
        object.__setattr__(self, "s", coerce_scalars(self.s))
        if not _rank2(self.p, self.s):
            raise ValueError("line points are projectively equal")


@dataclass(frozen=True)
class Plane3:
    """A plane V(sum a_i y_i) in P^3, stored by its coefficient vector."""

    a: tuple

    def __post_init__(self):
        if len(self.a) != 4:
            raise ValueError("plane needs 4 coefficients")
        object.__setattr__(self, "a", coerce_scalars(self.a))
        if all(x == 0 for x in self.a):
            raise ValueError("zero plane")


@dataclass(frozen=True)
class Chart:
    """Affine patch (i, j): plane coefficient i and conic coefficient j set to 1."""

    i: int
    j: int

    def __post_init__(self):
        if not (0 <= self.i <= 3 and 0 <= self.j <= 5):
            raise ValueError(f"chart out of range: ({self.i},{self.j})")


@dataclass(frozen=True)
class ChartPoint:
    """Affine coordinates (a1,a2,a3,b1,...,b5) in a chart."""

    chart: Chart
    a: tuple
    b: tuple

    def __post_init__(self):
        if len(self.a) != 3 or len(self.b) != 5:
            raise ValueError("chart point needs 3 + 5 coordinates")
        object.__setattr__(self, "a", coerce_scalars(self.a))
        object.__setattr__(self, "b", coerce_scalars(self.b))


def all_charts():
    return [Chart(i, j) for i in range(4) for j in range(6)]


def insert_one(values, slot: int, one=1) -> tuple:
    """Insert a 1 at position `slot`, shifting the remaining values right."""
    out = list(values[:slot]) + [one] + list(values[slot:])
    return tuple(out)


def proj_equal(x, y) -> bool:
    """Projective equality: all 2x2 minors of the stacked pair vanish."""
    n = len(x)
    if n != len(y):
        return False
    return all(
        x[u] * y[v] - x[v] * y[u] == 0 for u in range(n) for v in range(u + 1, n)
    )


# ---------------------------------------------------------------------------
# incidence
# ---------------------------------------------------------------------------

def meet_plane(line: Line3, plane: Plane3) -> tuple:
    """Intersection point of a line with a plane not containing it.

    Coordinate r of the result is sum_l a_l (p_l s_r - p_r s_l); the output
    is bilinear in (a, p, s) and lies on both the line and the plane.
    """
    a, p, s = plane.a, line.p, line.s
    x = tuple(
        sum((a[l] * (p[l] * s[r] - p[r] * s[l]) for l in range(4)), start=a[0] * 0)
        for r in range(4)
    )
    if all(v == 0 for v in x):
        raise LineInPlane("line lies in the plane")
    return x


def meet_plane_oracle(line: Line3, plane: Plane3) -> tuple:
    """Same intersection computed by eliminating on x = alpha*p + beta*s."""
    a, p, s = plane.a, line.p, line.s
    ap = sum((a[l] * p[l] for l in range(4)), start=a[0] * 0)
    asx = sum((a[l] * s[l] for l in range(4)), start=a[0] * 0)
    if ap == 0 and asx == 0:
        raise LineInPlane("line lies in the plane")
    if ap == 0:
        return tuple(p)
    # alpha*ap + beta*as = 0 with beta = 1
    alpha = -asx / ap
    return tuple(alpha * p[r] + s[r] for r in range(4))


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------

def plane_coords(i: int, x) -> tuple:
    """Drop the i-th homogeneous coordinate."""
    keep = PLANE_COORD_INDICES[i]
    return (x[keep[0]], x[keep[1]], x[keep[2]])


def chart_embed(point: ChartPoint):
    """Map chart coordinates to the pair (plane, conic coefficient 6-vector)."""
    ch = point.chart
    plane = Plane3(insert_one(point.a, ch.i))
    coeffs = insert_one(point.b, ch.j)
    return plane, coeffs


def chart_coords(plane: Plane3, coeffs, chart: Chart) -> ChartPoint:
    """Inverse of chart_embed on the chart's domain."""
    coeffs = coerce_scalars(coeffs)
    ai = plane.a[chart.i]
    bj = coeffs[chart.j]
    if ai == 0 or bj == 0:
        raise NotInChart(f"point not in chart ({chart.i},{chart.j})")
    a = tuple(plane.a[k] / ai for k in range(4) if k != chart.i)
    b = tuple(coeffs[k] / bj for k in range(6) if k != chart.j)
    return ChartPoint(chart, a, b)


def conic_value(coeffs, z):
    """Evaluate the quadratic with the given 6 coefficients at z=(z0,z1,z2)."""
    z0, z1, z2 = z
    return (
        coeffs[0] * z0 * z0
        + coeffs[1] * z1 * z1
        + coeffs[2] * z2 * z2
        + coeffs[3] * z1 * z2
        + coeffs[4] * z0 * z2
        + coeffs[5] * z0 * z1
    )


def conic_gradient(coeffs, z) -> tuple:
    z0, z1, z2 = z
    return (
        2 * coeffs[0] * z0 + coeffs[4] * z2 + coeffs[5] * z1,
        2 * coeffs[1] * z1 + coeffs[3] * z2 + coeffs[5] * z0,
        2 * coeffs[2] * z2 + coeffs[3] * z1 + coeffs[4] * z0,
    )


def conic_sym_matrix(coeffs):
    """3x3 symmetric matrix of the quadratic (needs 2 invertible)."""
    b0, b1, b2, b3, b4, b5 = coeffs
    return [
        [b0, b5 / 2, b4 / 2],
        [b5 / 2, b1, b3 / 2],
        [b4 / 2, b3 / 2, b2],
    ]


def conic_coeffs_from_sym(q3):
    return (
        q3[0][0],
        q3[1][1],
        q3[2][2],
        2 * q3[1][2],
        2 * q3[0][2],
        2 * q3[0][1],
    )


def conic_coeffs_transition(a, coeffs, i_from: int, i_to: int):
    """Rewrite conic coefficients from chart-i_from to chart-i_to plane coordinates.

    On the plane, the dropped coordinate is an affine-linear function of the
    kept ones; substituting it into the quadratic gives the rewritten form.
    """
    a = coerce_scalars(a)
    coeffs = coerce_scalars(coeffs)
    if a[i_to] == 0:
        raise NotInChart(f"plane coefficient {i_to} vanishes")
    if i_from == i_to:
        return tuple(coeffs)
    idx_from = PLANE_COORD_INDICES[i_from]
    idx_to = PLANE_COORD_INDICES[i_to]
    zero = a[0] * 0
    rows = []
    for amb in idx_from:
        if amb == i_to:
            rows.append(tuple(-a[u] / a[i_to] for u in idx_to))
        else:
            u = idx_to.index(amb)
            rows.append(tuple(1 + zero if k == u else zero for k in range(3)))
    q = conic_sym_matrix(coeffs)
    # S^T Q S
    qs = [[sum(q[r][c] * rows[c][v] for c in range(3)) for v in range(3)] for r in range(3)]
    out = [
        [sum(rows[r][u] * qs[r][v] for r in range(3)) for v in range(3)]
        for u in range(3)
    ]
    return conic_coeffs_from_sym(out)


# ---------------------------------------------------------------------------
# trivializing points
# ---------------------------------------------------------------------------

def trivialization_point(chart: Chart, plane: Plane3) -> tuple:
    """Distinguished point of the chart's reference locus on the plane.

    For j <= 2 the locus is the coordinate line where both other plane
    coordinates vanish; for j >= 3 it is the line where coordinate j-3
    vanishes and the remaining two are equal.
    """
    i, j = chart.i, chart.j
    a = plane.a
    keep = PLANE_COORD_INDICES[i]
    zero = a[0] * 0
    pt = [zero, zero, zero, zero]
    if j <= 2:
        u = keep[j]
        pt[u] = a[i] + zero
        pt[i] = -a[u]
    else:
        u = keep[j - 3]
        v, w = (amb for amb in keep if amb != u)
        pt[v] = a[i] + zero
        pt[w] = a[i] + zero
        pt[i] = -(a[v] + a[w])
    if all(x == 0 for x in pt):
        raise DegeneratePoint(f"trivialization point degenerates in chart ({i},{j})")
    return tuple(pt)


def trivialization_value(chart: Chart, a, coeffs):
    """Value of the trivializing section at (H_a, q_coeffs).

    Evaluating the conic at the chart's reference point isolates a_i^2*b_j
    for the square-monomial charts; the cross-term charts subtract the two
    square contributions picked up at their reference point.  The result is
    identically a_i^2 * b_j.
    """
    i, j = chart.i, chart.j
    plane = Plane3(tuple(a))
    val = conic_value(coeffs, plane_coords(i, trivialization_point(chart, plane)))
    if j >= 3:
        for jj in range(3):
            if jj != j - 3:
                sq = conic_value(
                    coeffs, plane_coords(i, trivialization_point(Chart(i, jj), plane))
                )
                val = val - sq
    return val


# ---------------------------------------------------------------------------
# genericity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenericityReport:
    pairwise_skew: bool
    distinct_points: bool
    skew_failures: tuple
    point_failures: tuple

    @property
    def passed(self) -> bool:
        return self.pairwise_skew and self.distinct_points

    def to_json(self) -> dict:
        return {
            "pairwise_skew": self.pairwise_skew,
            "distinct_points": self.distinct_points,
            "skew_failures": list(self.skew_failures),
            "point_failures": list(self.point_failures),
            "pass": self.passed,
        }


def genericity_check(lines) -> GenericityReport:
    """Cheap syntactic genericity: pairwise skewness and distinct representatives.

    Full genericity is certified downstream by the solver finding 92 simple
    zeros.
    """
    n = len(lines)
    skew_failures = []
    point_failures = []
    for m in range(n):
        for k in range(m + 1, n):
            rows = [lines[m].p, lines[m].s, lines[k].p, lines[k].s]
            if det(rows) == 0:
                skew_failures.append((m, k))
            for u, x in (("p", lines[m].p), ("s", lines[m].s)):
                for v, y in (("p", lines[k].p), ("s", lines[k].s)):
                    if proj_equal(x, y):
                        point_failures.append((m, u, k, v))
    return GenericityReport(
        pairwise_skew=not skew_failures,
        distinct_points=not point_failures,
        skew_failures=tuple(skew_failures),
        point_failures=tuple(point_failures),
    )

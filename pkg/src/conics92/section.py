"""Evaluation of the incidence section and its Jacobian in a fixed chart.

Component n of the section is the chart-normalized conic evaluated at a
fixed affine representative of the intersection of line n with the moving
plane.  That representative is affine-linear in the plane coordinates, so
each component is a polynomial of total degree 3 in (a1,a2,a3,b1,...,b5).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ConePoint, DegenerateConfiguration, SingularZero
from .fields import (
    COMPLEX,
    RATIONAL,
    REAL,
    PrimeFieldElement,
    QuadExtElement,
    prime_field_tag,
    quad_ext_tag,
    square_class,
)
from .geometry import (
    Chart,
    ChartPoint,
    Line3,
    PLANE_COORD_INDICES,
    conic_gradient,
    conic_value,
    insert_one,
)
from .gw import GwForm, trace_form
from .linalg import det


def scalar_tag(x) -> str:
    if isinstance(x, (int, Fraction)):
        return RATIONAL
    if isinstance(x, float):
        return REAL
    if isinstance(x, complex):
        return COMPLEX
    if isinstance(x, PrimeFieldElement):
        return prime_field_tag(x.p)
    if isinstance(x, QuadExtElement):
        return quad_ext_tag(x.field.p)
    return type(x).__name__


def monomial_vector(z) -> tuple:
    z0, z1, z2 = z
    return (z0 * z0, z1 * z1, z2 * z2, z1 * z2, z0 * z2, z0 * z1)


def _b_position(ell: int, j: int) -> int:
    """Monomial slot multiplied by b_ell when slot j is normalized to 1."""
    return ell - 1 if ell <= j else ell


def orientation_sign(chart: Chart) -> int:
    """Orientation of chart (i,j) relative to chart (0,0).

    Dropping different homogeneous slots flips the chart-transition
    Jacobians by (-1)^(i+m) on the plane factor and (-1)^(j+n) on the conic
    factor while every other transition factor is an even power, so this
    sign is exactly what makes determinants of different charts agree up to
    nonzero squares.
    """
    return -1 if (chart.i + chart.j) % 2 else 1


class SectionSystem:
    """Eight lines viewed through one chart, with cached point maps.

    For line n the affine representative of its intersection with the
    moving plane is z^n = Z_n @ (1, a1, a2, a3); the 3x4 matrices Z_n are
    computed once at construction.
    """

    def __init__(self, chart: Chart, lines):
        if len(lines) != 8:
            raise ValueError("need exactly 8 lines")
        self.chart = chart
        self.lines = tuple(lines)
        keep = PLANE_COORD_INDICES[chart.i]
        col_order = (chart.i,) + keep
        zmaps = []
        for line in self.lines:
            p, s = line.p, line.s
            # ambient intersection map: x_r = sum_l a_l (p_l s_r - p_r s_l)
            m = [[p[l] * s[r] - p[r] * s[l] for l in range(4)] for r in range(4)]
            zmaps.append(
                tuple(tuple(m[r][c] for c in col_order) for r in keep)
            )
        self.zmaps = tuple(zmaps)

    def point_reps(self, point: ChartPoint) -> list:
        """Affine representatives z^n of the 8 intersection points."""
        avec = (1,) + tuple(point.a)
        out = []
        for zm in self.zmaps:
            out.append(
                tuple(sum(zm[r][c] * avec[c] for c in range(4)) for r in range(3))
            )
        return out

    def coefficients(self, point: ChartPoint) -> tuple:
        return insert_one(point.b, self.chart.j)


@dataclass(frozen=True)
class JacobianRecord:
    """8x8 Jacobian with rows (a1,a2,a3,b1..b5) and columns indexed by line."""

    matrix: tuple
    determinant: object
    field: str


@dataclass(frozen=True)
class LocalIndex:
    point: ChartPoint
    form: GwForm


def eval_section(system: SectionSystem, point: ChartPoint) -> tuple:
    coeffs = system.coefficients(point)
    return tuple(conic_value(coeffs, z) for z in system.point_reps(point))


def jacobian(system: SectionSystem, point: ChartPoint) -> JacobianRecord:
    """Exact chart Jacobian: b-rows are monomials of the intersection
    representatives, a-rows come from the chain rule with constant dz/da.

    The determinant carries the chart's orientation sign, so values taken
    in different charts at a common zero differ by nonzero squares.
    """
    coeffs = system.coefficients(point)
    j = system.chart.j
    zs = system.point_reps(point)
    mons = [monomial_vector(z) for z in zs]
    grads = [conic_gradient(coeffs, z) for z in zs]
    rows = []
    for ell in range(1, 4):  # d/da_ell; dz_r/da_ell = Z[r][ell]
        rows.append(
            tuple(
                sum(grads[n][r] * system.zmaps[n][r][ell] for r in range(3))
                for n in range(8)
            )
        )
    for ell in range(1, 6):  # d/db_ell
        pos = _b_position(ell, j)
        rows.append(tuple(mons[n][pos] for n in range(8)))
    matrix = tuple(rows)
    d = orientation_sign(system.chart) * det(matrix)
    return JacobianRecord(matrix=matrix, determinant=d, field=scalar_tag(d))


def local_index(system: SectionSystem, point: ChartPoint, reality: str = "rational") -> LocalIndex:
    """Square class of the Jacobian determinant, transferred along the
    field of definition: rank 1 for points over the base field, the
    rank-2 trace form for conjugate pairs or quadratic-extension points."""
    rec = jacobian(system, point)
    d = rec.determinant
    if d == 0:
        raise SingularZero("Jacobian determinant vanishes at this zero")
    if reality == "pair":
        if not isinstance(d, (complex, QuadExtElement)):
            raise ValueError("conjugate-pair index needs a non-real determinant type")
        form = trace_form(complex(d)) if isinstance(d, complex) else trace_form(d)
        return LocalIndex(point, form)
    if isinstance(d, QuadExtElement):
        return LocalIndex(point, trace_form(d))
    if isinstance(d, complex):
        d = d.real if d.imag == 0 else d
    return LocalIndex(point, GwForm.unit(d))


def conic_through_5(points) -> tuple:
    """Coefficients of the unique conic through 5 points in general position.

    Coefficient k is the signed 5x5 minor obtained by deleting column k of
    the 5x6 monomial matrix, with sign (-1)^k; this matches expanding the
    bordered 6x6 monomial determinant along its first row.
    """
    if len(points) != 5:
        raise ValueError("need exactly 5 points")
    m = [monomial_vector(z) for z in points]
    coeffs = []
    for k in range(6):
        minor = [[row[c] for c in range(6) if c != k] for row in m]
        d = det(minor)
        coeffs.append(d if k % 2 == 0 else -d)
    if all(c == 0 for c in coeffs):
        raise DegenerateConfiguration("5 points do not determine a conic")
    return tuple(coeffs)


def jacobian_via_laplace(system: SectionSystem, point: ChartPoint):
    """Jacobian determinant by Laplace expansion along the three a-rows.

    The complementary 5x5 minors are packaged as coefficients of the conic
    through the complementary five intersection points, with sign
    (-1)^(u+v+w+j) for 1-based column triples (u,v,w).
    """
    rec = jacobian(system, point)
    a_rows = rec.matrix[:3]
    zs = system.point_reps(point)
    j = system.chart.j
    total = rec.determinant * 0
    for u, v, w in combinations(range(1, 9), 3):
        a3 = det([[a_rows[r][n - 1] for n in (u, v, w)] for r in range(3)])
        if a3 == 0:
            continue
        comp = [zs[n - 1] for n in range(1, 9) if n not in (u, v, w)]
        try:
            f = conic_through_5(comp)
        except DegenerateConfiguration:
            continue  # the coefficient vector is zero; minor contributes nothing
        sign = -1 if (u + v + w + j) % 2 else 1
        total = total + sign * a3 * f[j]
    return orientation_sign(system.chart) * total


def tangent_diagnostics(system: SectionSystem, point: ChartPoint, n: int, ell: int) -> dict:
    """Gradient of the conic at the n-th intersection representative and the
    deviation of its a_ell-perturbation from the tangent plane.

    The deviation equals the Jacobian entry (a_ell, n); internally checks
    grad(p).(p + dp/da_ell) = deviation + 2*section_n since grad(p).p is
    twice the section value.
    """
    coeffs = system.coefficients(point)
    z = system.point_reps(point)[n]
    if all(c == 0 for c in z):
        raise ConePoint("intersection representative degenerated to the cone point")
    grad = conic_gradient(coeffs, z)
    dz = tuple(system.zmaps[n][r][ell] for r in range(3))
    deviation = sum(grad[r] * dz[r] for r in range(3))
    shifted = sum(grad[r] * (z[r] + dz[r]) for r in range(3))
    phi_n = conic_value(coeffs, z)
    check = shifted - (deviation + 2 * phi_n)
    if isinstance(check, (float, complex)):
        scale = max(1.0, abs(complex(shifted)))
        if abs(complex(check)) > 1e-9 * scale:
            raise AssertionError("tangent-plane identity failed beyond roundoff")
    elif check != 0:
        raise AssertionError("tangent-plane identity failed")
    return {"gradient": grad, "deviation": deviation}

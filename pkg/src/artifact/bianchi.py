"""Cusps, heights and horoball covers of the Bianchi orbifold of an imaginary
quadratic field."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .errors import PreconditionError
from .qfield import (
    FieldElement,
    IntegralIdeal,
    PlanarLattice,
    QuadField,
    class_group,
    gauss_reduce,
    ideal_class_reps,
    principal_ideal,
    zeta2,
)


@dataclass(frozen=True)
class CuspData:
    """A cusp alpha/beta; ``beta == (0, 0)`` is the cusp at infinity.

    ``alpha`` and ``beta`` are integral coordinates over {1, omega}.
    """

    field: QuadField
    alpha: tuple
    beta: tuple
    ideal_b: IntegralIdeal
    heegner: tuple | None = None

    @property
    def is_infinity(self) -> bool:
        return self.beta == (0, 0)

    @property
    def norm_b(self) -> int:
        return self.ideal_b.norm

    @property
    def value(self) -> complex:
        if self.is_infinity:
            return complex("inf")
        F = self.field
        return F.to_complex(self.alpha) / F.to_complex(self.beta)

    @property
    def exact_value(self) -> tuple:
        """xi over {1, omega} as a pair of Fractions."""
        return self.field.div_xy(self.alpha, self.beta)

    def __repr__(self) -> str:
        if self.is_infinity:
            return "Cusp(inf)"
        return f"Cusp({self.value:.6g}, N(B)={self.norm_b})"


@dataclass(frozen=True)
class Point3:
    z: complex
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise PreconditionError("points of upper half-space need y > 0")


@dataclass(frozen=True)
class HoroballCover:
    field: QuadField
    kappa: Fraction
    entries: tuple  # ((CuspData, Y), ...)

    def height_sq(self, j: int) -> Fraction:
        """Y_j^2 as an exact rational (kappa * N(C_j))^2 / D."""
        cusp = self.entries[j][0]
        return (self.kappa * cusp.norm_b) ** 2 / self.field.abs_disc


def _require_imaginary(F: QuadField) -> None:
    if not F.is_imaginary:
        raise PreconditionError("an imaginary quadratic field is required")


def volume(F: QuadField, precision: int = 53):
    """Covolume of SL2(O_F): zeta_F(2) * D^(3/2) / (4 pi^2).

    A float at 53 bits, an mpmath number above that.
    """
    _require_imaginary(F)
    if precision <= 53:
        return float(zeta2(F, precision)) * F.abs_disc ** 1.5 / (4 * math.pi ** 2)
    with mpmath.workprec(precision + 20):
        v = zeta2(F, precision) * mpmath.mpf(F.abs_disc) ** 1.5 / (4 * mpmath.pi ** 2)
    return v


def cusp_ideal(F: QuadField, alpha: tuple, beta: tuple) -> IntegralIdeal:
    """B = (beta) / (alpha, beta); the unit ideal for the cusp at infinity."""
    for s in (alpha, beta):
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in s):
            raise PreconditionError("cusp coordinates must be integral")
    alpha = tuple(int(v) for v in alpha)
    beta = tuple(int(v) for v in beta)
    if beta == (0, 0):
        if alpha == (0, 0):
            raise PreconditionError("(0, 0) is not a cusp")
        return IntegralIdeal.unit(F)
    g = IntegralIdeal.from_generators(F, [alpha, beta]) if alpha != (0, 0) else principal_ideal(F, beta)
    scaled = principal_ideal(F, beta) * g.conj()
    n = g.norm
    return IntegralIdeal(F, scaled.a // n, scaled.b // n, scaled.c // n)


def make_cusp(F: QuadField, alpha: tuple, beta: tuple, heegner=None) -> CuspData:
    return CuspData(F, tuple(alpha), tuple(beta), cusp_ideal(F, alpha, beta), heegner)


def infinity_cusp(F: QuadField) -> CuspData:
    return CuspData(F, (1, 0), (0, 0), IntegralIdeal.unit(F))


def _sqrt_minus_d(F: QuadField) -> tuple:
    # sqrt(-D) = 2*omega - 1 if m = 1 mod 4, else 2*omega
    return (-1, 2) if F.p else (0, 2)


def heegner_points(F: QuadField) -> list:
    """Infinity for the principal class, then (-b + sqrt(-D))/(2a) per
    nonprincipal reduced form (a, b, c)."""
    _require_imaginary(F)
    root = _sqrt_minus_d(F)
    out = []
    for f in class_group(F):
        if f.a == 1:
            out.append(infinity_cusp(F))
            continue
        # alpha = (-b + sqrt(-D))/2 lies in O_F because b = D mod 2
        alpha = ((root[0] - f.b) // 2, root[1] // 2)
        out.append(make_cusp(F, alpha, (f.a, 0), heegner=(f.a, f.b)))
    return out


def height_at(cusp: CuspData, x: Point3) -> float:
    """y_xi(x) = N(B)^-1 * height of gamma_xi x, gamma_xi = [[0, 1], [-1, xi]]."""
    if cusp.is_infinity:
        return x.y
    xi = cusp.value
    return x.y / (cusp.norm_b * (abs(x.z - xi) ** 2 + x.y * x.y))


def apply_matrix(g, x: Point3) -> Point3:
    """Action of a complex 2x2 matrix of determinant 1 on upper half-space."""
    (a, b), (c, d) = g
    z, y = x.z, x.y
    den = abs(c * z + d) ** 2 + abs(c) ** 2 * y * y
    num = (a * z + b) * (c * z + d).conjugate() + a * c.conjugate() * y * y
    return Point3(num / den, y / den)


def unipotent_stabilizer(cusp: CuspData, w: complex):
    """Element 1 + w*[[-xi, xi^2], [-1, xi]] of the stabilizer (w in B^2)."""
    if cusp.is_infinity:
        return ((1, w), (0, 1))
    xi = cusp.value
    return ((1 - w * xi, w * xi * xi), (-w, 1 + w * xi))


def horoball_cover(F: QuadField, kappa=Fraction(1, 4)) -> HoroballCover:
    """One horoball per ideal class at height kappa * N(C_j) / sqrt(D)."""
    _require_imaginary(F)
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise PreconditionError("kappa must be positive")
    root_d = math.sqrt(F.abs_disc)
    entries = [(c, float(kappa) * c.norm_b / root_d) for c in heegner_points(F)]
    entries.sort(key=lambda e: e[0].norm_b)
    return HoroballCover(F, kappa, tuple(entries))


# --------------------------------------------------------------------------
# empirical cover verification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverReport:
    covered: bool
    max_required_kappa: float
    samples: int
    classes: int
    capped: bool


def ideal_points_in_disk(I: IntegralIdeal, radius: float) -> list:
    """Nonzero coordinates of elements of I with complex modulus <= radius."""
    F = I.field
    w = F.omega
    out = []
    kmax = int(radius / (I.c * w.imag)) + 1
    for k in range(-kmax, kmax + 1):
        y = I.c * k
        im = y * w.imag
        rem = radius * radius - im * im
        if rem < 0:
            continue
        half = math.sqrt(rem)
        shift = I.b * k + y * w.real
        for j in range(math.floor((-half - shift) / I.a), math.ceil((half - shift) / I.a) + 1):
            x = I.a * j + I.b * k
            if (x, y) == (0, 0):
                continue
            if abs(complex(x + y * w.real, im)) <= radius:
                out.append((x, y))
    return out


def _reduced_basis(I: IntegralIdeal) -> tuple:
    L = gauss_reduce(ideal_lattice(I))
    return complex(*L.b1), complex(*L.b2)


def _min_pair_form(I: IntegralIdeal, zs: np.ndarray, y: float, best: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Lower ``best`` to min |beta z - alpha|^2 + |beta|^2 y^2 over alpha, beta in I, beta != 0."""
    F = I.field
    e1, e2 = _reduced_basis(I)
    det = e1.real * e2.imag - e1.imag * e2.real
    limit = math.sqrt(float(best.max())) / y
    betas = np.array([F.to_complex(b) for b in ideal_points_in_disk(I, limit)], dtype=complex)
    if betas.size == 0:
        return best
    offsets = [(i, j) for i in (-1, 0, 1, 2) for j in (-1, 0, 1, 2)]
    for start in range(0, len(betas), chunk):
        b = betas[start:start + chunk, None]
        p = b * zs[None, :]
        s = (p.real * e2.imag - p.imag * e2.real) / det
        t = (e1.real * p.imag - e1.imag * p.real) / det
        fs, ft = np.floor(s), np.floor(t)
        dist = np.full(p.shape, np.inf)
        for i, j in offsets:
            q = p - ((fs + i) * e1 + (ft + j) * e2)
            dist = np.minimum(dist, q.real ** 2 + q.imag ** 2)
        total = dist + (np.abs(b) ** 2) * y * y
        best = np.minimum(best, total.min(axis=0))
    return best


def verify_cover(cover: HoroballCover, grid_resolution: int = 12) -> CoverReport:
    """Grid check that sample points of upper half-space lie in some horoball
    of the cover, over all cusps.

    For a cusp written with a generating pair (alpha, beta) of a class
    representative C, the ratio y_xi(x)/Y_class equals sqrt(D) y / (kappa Q)
    with Q = |beta z - alpha|^2 + |beta|^2 y^2, and pairs in C x C that do not
    generate C only under-estimate some cusp's ratio.  So the best ratio at
    x is sqrt(D) y / (kappa min Q), an exact statement at each sample.

    Heights are log-spaced over a kappa-independent band so the verdict is
    ``kappa <= max_required_kappa``, which makes it monotone in kappa.
    """
    if grid_resolution < 8:
        raise PreconditionError("grid resolution must be at least 8")
    F = cover.field
    root_d = math.sqrt(F.abs_disc)
    cap = 2.0  # highest samples sit at 2/sqrt(D); larger kappa is not certified
    y_hi = cap / root_d
    y_lo = 1.0 / (8 * root_d)
    res = grid_resolution
    ticks = (np.arange(res) + 0.5) / res
    s, t = np.meshgrid(ticks, ticks, indexing="ij")
    zs = (s + t * F.omega).ravel()
    reps = ideal_class_reps(F)
    req = cap
    for y in np.exp(np.linspace(math.log(y_hi), math.log(y_lo), res)):
        best = np.ones(zs.shape)  # the pair (1, 0): cusp at infinity
        for C in reps:
            best = _min_pair_form(C, zs, float(y), best)
        req = min(req, float((root_d * y / best).min()))
    kappa = float(cover.kappa)
    return CoverReport(kappa <= req, req, res ** 3, len(reps), req >= cap)


# --------------------------------------------------------------------------
# cusp cross-sections
# --------------------------------------------------------------------------

def ideal_lattice(I: IntegralIdeal) -> PlanarLattice:
    return PlanarLattice.from_field_basis(I.field, (I.a, 0), (I.b, I.c))


def cusp_shape_tau(cusp: CuspData) -> float:
    """tau of the planar lattice B^2."""
    B2 = cusp.ideal_b * cusp.ideal_b
    return gauss_reduce(ideal_lattice(B2)).tau


def unipotent_thin_volume(F: QuadField) -> float:
    """Sum of cusp shapes tau(B_j^2) over one cusp per ideal class."""
    return math.fsum(cusp_shape_tau(c) for c in heegner_points(F))


@dataclass(frozen=True)
class TailRatio:
    ratio: float
    trivial: bool  # h = 1, no finite Heegner points


def heegner_tail_ratio(F: QuadField, bound: float | None = None) -> TailRatio:
    """Fraction of Heegner points with |xi| > bound (default D^(1/3))."""
    _require_imaginary(F)
    if bound is None:
        bound = F.abs_disc ** (1 / 3)
    if bound <= 0:
        raise PreconditionError("bound must be positive")
    pts = heegner_points(F)
    if len(pts) == 1:
        return TailRatio(0.0, True)
    big = sum(1 for c in pts if not c.is_infinity and abs(c.value) > bound)
    return TailRatio(big / len(pts), False)


def cusp_class_reps(F: QuadField) -> list:
    """Ideal class representatives (re-exported for callers that need C_j)."""
    return ideal_class_reps(F)


def element(F: QuadField, coords) -> FieldElement:
    return F.from_coords(coords)

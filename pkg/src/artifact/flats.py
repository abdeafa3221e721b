"""Binary quadratic forms over O_F and the closed geodesics they describe.

A form ``a z1^2 + b z1 z2 + c z2^2`` with discriminant ``d = b^2 - 4ac``
determines the geodesic joining the two roots of ``a z^2 + b z + c``.  Forms
with ``b = t mod 2`` correspond to the elements
``[[(t - b)/2, -c], [a, (t + b)/2]]`` of trace ``t``, and conjugation in
SL2(O_F) matches the action ``q -> q o g^-1``.
"""
from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from . import _kernels
from .bianchi import CuspData, ideal_points_in_disk, infinity_cusp
from .errors import PreconditionError, ResourceCeilingError
from .qfield import (
    FieldElement,
    IntegralIdeal,
    QuadField,
    UnitData,
    fundamental_unit,
    hnf,
    nearest_integer_coords,
    sqrt_in_field,
    squarefree_part,
)

DEFAULT_RESIDUE_CEILING = 10 ** 6


# --------------------------------------------------------------------------
# coordinate helpers (pairs over {1, omega})
# --------------------------------------------------------------------------

def _add(s, t):
    return (s[0] + t[0], s[1] + t[1])


def _sub(s, t):
    return (s[0] - t[0], s[1] - t[1])


def _neg(s):
    return (-s[0], -s[1])


def _scale(k, s):
    return (k * s[0], k * s[1])


def _integral(s) -> bool:
    return all(Fraction(v).denominator == 1 for v in s)


def _as_int(s) -> tuple:
    return (int(s[0]), int(s[1]))


def _coords(F: QuadField, x) -> tuple:
    if isinstance(x, FieldElement):
        return _as_int(x.coords())
    if isinstance(x, int):
        return (x, 0)
    return _as_int(x)


def matmul(F: QuadField, g, h):
    (a, b), (c, d) = g
    (e, f), (k, l) = h
    m = F.mul
    return ((_add(m(a, e), m(b, k)), _add(m(a, f), m(b, l))),
            (_add(m(c, e), m(d, k)), _add(m(c, f), m(d, l))))


def det(F: QuadField, g):
    (a, b), (c, d) = g
    return _sub(F.mul(a, d), F.mul(b, c))


def identity():
    return (((1, 0), (0, 0)), ((0, 0), (1, 0)))


def translation(n):
    return (((1, 0), n), ((0, 0), (1, 0)))


def inversion():
    return (((0, 0), (-1, 0)), ((1, 0), (0, 0)))


def to_complex_matrix(F: QuadField, g):
    return tuple(tuple(F.to_complex(e) for e in row) for row in g)


# --------------------------------------------------------------------------
# forms
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QForm:
    """Integral binary quadratic form over O_F; coefficients are coordinate pairs."""

    field: QuadField
    a: tuple
    b: tuple
    c: tuple

    @classmethod
    def make(cls, F: QuadField, a, b, c) -> "QForm":
        return cls(F, _coords(F, a), _coords(F, b), _coords(F, c))

    @property
    def d(self) -> tuple:
        F = self.field
        return _sub(F.mul(self.b, self.b), _scale(4, F.mul(self.a, self.c)))

    @property
    def content_ideal(self) -> IntegralIdeal:
        gens = [g for g in (self.a, self.b, self.c) if g != (0, 0)]
        return IntegralIdeal.from_generators(self.field, gens)

    @property
    def is_primitive(self) -> bool:
        return self.content_ideal.norm == 1

    @property
    def square_disc(self) -> bool:
        """Whether d is a square in F, i.e. the endpoints are cusps."""
        return sqrt_in_field(self.field.from_coords(self.d)) is not None

    def elements(self) -> tuple:
        F = self.field
        return tuple(F.from_coords(s) for s in (self.a, self.b, self.c))

    def evaluate(self, z):
        """q(z, 1) for exact coordinates z (Fractions allowed)."""
        F = self.field
        return _add(_add(F.mul(self.a, F.mul(z, z)), F.mul(self.b, z)), self.c)

    def endpoints(self) -> tuple:
        """Roots (z_+, z_-) of a z^2 + b z + c at double precision."""
        F = self.field
        a, b = F.to_complex(self.a), F.to_complex(self.b)
        root = cmath.sqrt(F.to_complex(self.d))
        if a == 0:
            raise PreconditionError("a = 0: infinity is an endpoint")
        return (-b + root) / (2 * a), (-b - root) / (2 * a)

    def element(self, t) -> tuple:
        """The matrix of trace t attached to this form (requires b = t mod 2)."""
        t = _coords(self.field, t)
        lo, hi = _sub(t, self.b), _add(t, self.b)
        if lo[0] % 2 or lo[1] % 2:
            raise PreconditionError("b and t have different parity")
        return ((_scale(Fraction(1, 2), lo), _neg(self.c)), (self.a, _scale(Fraction(1, 2), hi)))

    def key(self) -> tuple:
        return (self.a, self.b, self.c)

    def __repr__(self) -> str:
        return f"QForm({self.a}, {self.b}, {self.c})"


def form_of_element(F: QuadField, g) -> QForm:
    (p, r), (s, u) = g
    return QForm(F, _as_int(s), _as_int(_sub(u, p)), _as_int(_neg(r)))


def act(g, q: QForm) -> QForm:
    """q o g^-1 for g of determinant 1."""
    F = q.field
    if det(F, g) != (1, 0):
        raise PreconditionError("matrix must have determinant 1")
    (p, r), (s, t) = g
    m = F.mul
    a, b, c = q.a, q.b, q.c
    na = _add(_sub(m(a, m(t, t)), m(b, m(t, s))), m(c, m(s, s)))
    nc = _add(_sub(m(a, m(r, r)), m(b, m(r, p))), m(c, m(p, p)))
    nb = _sub(_add(_scale(-2, m(a, m(t, r))), m(b, _add(m(t, p), m(r, s)))), _scale(2, m(c, m(s, p))))
    return QForm(F, _as_int(na), _as_int(nb), _as_int(nc))


def cusp_frame(cusp: CuspData):
    """gamma_xi = [[0, 1], [-1, xi]] with exact entries (None at infinity)."""
    if cusp.is_infinity:
        return None
    xi = cusp.exact_value
    return (((0, 0), (1, 0)), ((-1, 0), xi))


def frame_value(q: QForm, cusp: CuspData):
    """q(xi) = a xi^2 + b xi + c, the leading coefficient in the cusp's frame."""
    if cusp.is_infinity:
        return tuple(Fraction(v) for v in q.a)
    return q.evaluate(cusp.exact_value)


# --------------------------------------------------------------------------
# the through-horoball criterion
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Meeting:
    meets: bool
    top_height: float
    at_infinity: bool = False
    boundary: bool = False


def top_height(q: QForm, cusp: CuspData) -> float:
    """Largest height y_xi reached by the geodesic of q: sqrt|d| / (2 |q(xi)| N(B))."""
    F = q.field
    A = frame_value(q, cusp)
    nA = F.norm_xy(A)
    if nA == 0:
        return math.inf
    return math.sqrt(abs(F.to_complex(q.d))) / (2 * math.sqrt(nA) * cusp.norm_b)


def _height_sq(Y, height_sq) -> Fraction:
    """Exact Y^2 from either a rational Y (floats are rational) or Y^2 itself."""
    if height_sq is not None:
        y2 = Fraction(height_sq)
    elif Y is not None:
        y2 = Fraction(Y) ** 2
        if Y < 0:
            y2 = -y2
    else:
        raise PreconditionError("horoball height missing")
    if y2 <= 0:
        raise PreconditionError("horoball height must be positive")
    return y2


def classify_meeting(q: QForm, cusp: CuspData, Y=None, height_sq=None) -> Meeting:
    """Decide top_height >= Y exactly: N(d) >= 16 Y^4 N(q(xi))^2 N(B)^4.

    Pass ``height_sq`` when Y is irrational but Y^2 is rational.
    """
    F = q.field
    y2 = _height_sq(Y, height_sq)
    A = frame_value(q, cusp)
    nA = F.norm_xy(A)
    h = top_height(q, cusp)
    if nA == 0:
        return Meeting(True, h, at_infinity=True)
    lhs = Fraction(F.norm_xy(q.d))
    rhs = 16 * y2 ** 2 * Fraction(nA) ** 2 * cusp.norm_b ** 4
    return Meeting(lhs >= rhs, h, boundary=(lhs == rhs))


def meets_horoball(q: QForm, cusp: CuspData, Y=None, height_sq=None) -> bool:
    return classify_meeting(q, cusp, Y, height_sq).meets


def meets_horoball_float(q: QForm, cusp: CuspData, Y: float, band: float = 1e-12) -> Meeting:
    """Floating evaluation at 53 and 113 bits; disagreement counts as meeting."""
    h53 = top_height(q, cusp)
    with mpmath.workprec(113):
        F = q.field
        A = frame_value(q, cusp)
        nA = F.norm_xy(A)
        if nA == 0:
            return Meeting(True, math.inf, at_infinity=True)
        d = mpmath.mpc(F.to_complex(q.d))
        h113 = mpmath.sqrt(abs(d)) / (2 * mpmath.sqrt(nA) * cusp.norm_b)
        hi = h113 >= Y
    lo = h53 >= Y
    if lo != hi or abs(h53 - Y) <= band * max(1.0, Y):
        return Meeting(True, h53, boundary=True)
    return Meeting(lo, h53)


# --------------------------------------------------------------------------
# per-cusp enumeration
# --------------------------------------------------------------------------

def _lattice_basis_in(F: QuadField, ideal: IntegralIdeal):
    return (ideal.a, 0), (ideal.b, ideal.c)


def _in_basis(ideal: IntegralIdeal, s) -> tuple:
    """Integer coordinates of s over the HNF basis of ideal."""
    X, Yc = s
    y, ry = divmod(Yc, ideal.c)
    x, rx = divmod(X - ideal.b * y, ideal.a)
    if ry or rx:
        raise ValueError("element not in ideal")
    return (x, y)


def _pair(F: QuadField, s, t) -> Fraction:
    """Real inner product <s, t> of the complex embeddings."""
    return Fraction(F.norm_xy(_add(s, t)) - F.norm_xy(s) - F.norm_xy(t), 2)


def _reduce_pair(F: QuadField, m1, m2):
    """Lagrange reduction of two lattice vectors given as coordinates."""
    if F.norm_xy(m2) < F.norm_xy(m1):
        m1, m2 = m2, m1
    while True:
        k = round(_pair(F, m1, m2) / F.norm_xy(m1))
        if k:
            m2 = _sub(m2, _scale(k, m1))
        if F.norm_xy(m2) < F.norm_xy(m1):
            m1, m2 = m2, m1
            continue
        return m1, m2


def coset_minimum(F: QuadField, x, basis) -> tuple:
    """Least (norm, coordinates) element of x + L for a reduced basis of L."""
    m1, m2 = basis
    z = F.to_complex(x)
    e1, e2 = F.to_complex(m1), F.to_complex(m2)
    det_ = e1.real * e2.imag - e1.imag * e2.real
    s = (z.real * e2.imag - z.imag * e2.real) / det_
    t = (e1.real * z.imag - e1.imag * z.real) / det_
    fs, ft = math.floor(s), math.floor(t)
    best = None
    for i in range(-1, 3):
        for j in range(-1, 3):
            cand = _sub(x, _add(_scale(fs + i, m1), _scale(ft + j, m2)))
            key = (F.norm_xy(cand), cand)
            if best is None or key < best:
                best = key
    return best[1]


def enumerate_forms_through_cusp(F: QuadField, d, cusp: CuspData, Y=None, height_sq=None,
                                 residue_ceiling: int = DEFAULT_RESIDUE_CEILING, parity=None) -> list:
    """One form per Lambda_xi-orbit of discriminant d whose geodesic meets the
    horoball {y_xi >= Y}.

    In the frame of the cusp the form reads (A, B', C') with A in B^-2 and
    B' in B^-1 defined modulo 2 A B^2.  Writing A = nu/beta^2 and
    B' = mu/beta with nu in a^2 and mu in a, where a = (alpha, beta), the
    congruence to solve is mu^2 = d beta^2 modulo 4 nu.  With ``parity`` set
    to a trace t only forms with b = t mod 2 are kept.
    """
    d = _coords(F, d)
    if F.norm_xy(d) == 0:
        raise PreconditionError("discriminant must be nonzero")
    y2 = _height_sq(Y, height_sq)
    if cusp.is_infinity:
        alpha, beta = (1, 0), (1, 0)
        a_ideal = IntegralIdeal.unit(F)
        xi = None
    else:
        alpha, beta = cusp.alpha, cusp.beta
        a_ideal = IntegralIdeal.from_generators(F, [alpha, beta])
        xi = cusp.exact_value
    nB = cusp.norm_b
    nbeta = F.norm_xy(beta)
    nd = F.norm_xy(d)
    # N(nu)^2 * 16 y^4 nB^4 <= N(d) N(beta)^4
    limit = Fraction(nd * nbeta ** 4) / (16 * y2 ** 2 * nB ** 4)
    radius = float(limit) ** 0.25 * (1 + 1e-9) + 1e-9
    a2 = a_ideal * a_ideal
    conj_a2 = a_ideal.conj() * a_ideal.conj()
    na2 = a_ideal.norm ** 2
    target = F.mul(d, F.mul(beta, beta))
    e1, e2 = _lattice_basis_in(F, a_ideal)
    if parity is not None:
        parity = _coords(F, parity)
    out = []
    for nu in sorted(ideal_points_in_disk(a2, radius)):
        if Fraction(F.norm_xy(nu)) ** 2 > limit:
            continue
        two_nu_beta = F.mul(_scale(2, nu), beta)
        Mi = IntegralIdeal.from_generators(F, [two_nu_beta]) * conj_a2
        M = IntegralIdeal(F, Mi.a // na2, Mi.b // na2, Mi.c // na2)
        rel = hnf([_in_basis(a_ideal, g) for g in ((M.a, 0), (M.b, M.c))])
        h1, h2 = rel[0], rel[2]
        if h1 * h2 > residue_ceiling:
            raise ResourceCeilingError("residue search for b^2 = d mod 4a", h1 * h2, residue_ceiling)
        modulus = _scale(4, nu)
        hits = _kernels.residue_scan(e1, e2, h1, h2, target, F.conj_xy(modulus), F.norm_xy(modulus), F.p, F.q)
        if not hits:
            continue
        mbasis = _reduce_pair(F, (M.a, 0), (M.b, M.c))
        for i, j in hits:
            mu = _add(_scale(i, e1), _scale(j, e2))
            mu = coset_minimum(F, mu, mbasis)
            num = _sub(F.mul(mu, mu), target)
            cprime = F.div_xy(num, modulus)
            if not _integral(cprime):
                continue
            cprime = _as_int(cprime)
            if xi is None:
                form = QForm(F, nu, mu, cprime)
            else:
                b = _neg(F.div_xy(_add(mu, _scale(2, F.mul(cprime, alpha))), beta))
                c = F.div_xy(_add(_add(nu, F.mul(mu, alpha)), F.mul(cprime, F.mul(alpha, alpha))),
                             F.mul(beta, beta))
                if not (_integral(b) and _integral(c)):
                    continue
                form = QForm(F, cprime, _as_int(b), _as_int(c))
            if parity is not None:
                diff = _sub(form.b, parity)
                if diff[0] % 2 or diff[1] % 2:
                    continue
            out.append(form)
    return out


# --------------------------------------------------------------------------
# stabilizers, lengths, torsion
# --------------------------------------------------------------------------

def _rational_disc(q: QForm) -> int:
    d = q.d
    if d[1] != 0:
        raise PreconditionError("relative regulator out of scope: discriminant is not a rational integer")
    return d[0]


def _pell_base(d: int) -> tuple:
    """Least t, u > 0 with t^2 - d u^2 = 4 (integers)."""
    if d % 4 in (0, 1):
        t, u = fundamental_unit(d).norm_one
        return t, u
    t, u = fundamental_unit(4 * d).norm_one
    return t, 2 * u


def _unit_power(t1: int, u1: int, d: int, k: int) -> tuple:
    """(t_k, u_k) with ((t1 + u1 sqrt d)/2)^k = (t_k + u_k sqrt d)/2."""
    t, u = 2, 0
    for _ in range(k):
        t, u = (t * t1 + d * u * u1) // 2, (t * u1 + u * t1) // 2
    return t, u


def stabilizer_generator(q: QForm, max_power: int = 64):
    """Generator [[(t - b u)/2, -c u], [a u, (t + b u)/2]] of the rational
    units fixing q, with t^2 - d u^2 = 4 and d a positive rational integer."""
    d = _rational_disc(q)
    if d <= 0:
        raise PreconditionError("stabilizer generator needs a positive rational discriminant")
    r = math.isqrt(d)
    if r * r == d:
        raise PreconditionError("degenerate flat: discriminant is a square")
    t1, u1 = _pell_base(d)
    for k in range(1, max_power + 1):
        t, u = _unit_power(t1, u1, d, k)
        lo = _sub((t, 0), _scale(u, q.b))
        hi = _add((t, 0), _scale(u, q.b))
        if all(v % 2 == 0 for v in lo + hi):
            return ((_scale(Fraction(1, 2), lo), _scale(-u, q.c)), (_scale(u, q.a), _scale(Fraction(1, 2), hi))), (t, u), k
    raise PreconditionError("no stabilizer found within the power limit")


def eigenvalue(F: QuadField, t) -> complex:
    """Eigenvalue of modulus >= 1 of an element of trace t."""
    tc = F.to_complex(_coords(F, t)) if not isinstance(t, complex) else t
    root = cmath.sqrt(tc * tc - 4)
    lam = (tc + root) / 2
    if abs(lam) < 1:
        lam = (tc - root) / 2
    return lam


def trace_length(F: QuadField, t) -> tuple:
    """(real length 2 log|lambda|, holonomy 2 arg lambda) for trace t."""
    lam = eigenvalue(F, t)
    return 2 * math.log(abs(lam)), (2 * cmath.phase(lam)) % (2 * math.pi)


def geodesic_length(eps, F: QuadField | None = None) -> tuple:
    """(length, holonomy) of the geodesic translated by eps.

    A :class:`UnitData` contributes its norm-one unit, which is real and
    positive, so the holonomy is 0.  A complex eigenvalue is also accepted.
    """
    if isinstance(eps, UnitData):
        lam = complex(eps.epsilon_plus)
    else:
        lam = complex(eps)
    if abs(abs(lam) - 1) < 1e-12:
        raise PreconditionError("elliptic, no geodesic")
    if abs(lam) < 1:
        lam = 1 / lam
    return 2 * math.log(abs(lam)), (2 * cmath.phase(lam)) % (2 * math.pi)


def mahler_measure(eps: UnitData, k: int = 1) -> float:
    """Mahler measure of eps^k for a real quadratic unit: k log eps."""
    return k * math.log((eps.t + eps.u * math.sqrt(eps.d)) / 2)


def is_torsion_free_disc(d, F: QuadField | None = None) -> bool:
    """Whether |d| > 4 at the complex place (plain modulus)."""
    if F is not None:
        return abs(F.to_complex(_coords(F, d))) > 4
    return abs(complex(d)) > 4


def singular_order(q: QForm) -> int:
    """Order (2 or 3, 1 if none) of an elliptic element of PSL2(O_F) fixing
    the geodesic of q: t'^2 - d u^2 = 4 with t' in {0, 1}."""
    F = q.field
    d = F.from_coords(q.d)
    order = 1
    for tp, o in ((0, 2), (1, 3)):
        u = sqrt_in_field((tp * tp - 4) / d)
        if u is None:
            continue
        uc = u.coords()
        entries = (
            _scale(Fraction(1, 2), _add((tp, 0), F.mul(q.b, uc))),
            _scale(Fraction(1, 2), _sub((tp, 0), F.mul(q.b, uc))),
            F.mul(q.a, uc),
            F.mul(q.c, uc),
        )
        if all(_integral(e) for e in entries):
            order = max(order, o)
    return order


def unit_index(d: int, f: int) -> int:
    """Least k with (eps_d^+)^k in the order of conductor f."""
    t1, u1 = fundamental_unit(d).norm_one
    k = 1
    while True:
        t, u = _unit_power(t1, u1, d, k)
        if u % f == 0 and (t - (u // f) * d * f) % 2 == 0:
            return k
        k += 1


@dataclass(frozen=True)
class FlatVolume:
    length: float
    index: int
    base_length: float


def flat_volume(q: QForm) -> FlatVolume:
    """Length of the closed geodesic of q for rational d: the index of its
    stabilizer inside the units of the maximal order, times 2 log eps^+."""
    d = _rational_disc(q)
    m, k = squarefree_part(d)
    dk = m if m % 4 == 1 else 4 * m
    base = fundamental_unit(dk)
    base_len = 2 * math.log(base.epsilon_plus)
    _, (t, u), _ = stabilizer_generator(q)
    length = 2 * math.log((t + u * math.sqrt(d)) / 2)
    index = round(length / base_len)
    return FlatVolume(length, index, base_len)


# --------------------------------------------------------------------------
# primitivity of elements
# --------------------------------------------------------------------------

def _chebyshev(F: QuadField, s, k: int):
    """(V_k(s), U_{k-1}(s), U_{k-2}(s)): trace of delta^k and the coefficients
    in delta^k = U_{k-1} delta - U_{k-2} I for tr delta = s."""
    v_prev, v = (2, 0), s
    u_prev2, u_prev = (0, 0), (1, 0)  # U_{-1}, U_0
    for _ in range(k - 1):
        v_prev, v = v, _sub(F.mul(s, v), v_prev)
        u_prev2, u_prev = u_prev, _sub(F.mul(s, u_prev), u_prev2)
    return v, u_prev, u_prev2


def root_of_element(F: QuadField, g, t) -> tuple | None:
    """(delta, k) with delta^k = +-g for the largest possible k >= 2, else None."""
    t = _coords(F, t)
    lam = eigenvalue(F, t)
    if abs(lam) <= 1 + 1e-12:
        return None
    kmax = int(math.log(abs(lam)) / math.log(1.5)) + 1
    found = None
    for k in range(2, kmax + 1):
        for sign in (1, -1):
            base = sign * lam
            r = abs(base) ** (1.0 / k)
            ph = cmath.phase(base)
            for j in range(k):
                mu = cmath.rect(r, (ph + 2 * math.pi * j) / k)
                s_c = mu + 1 / mu
                s = nearest_integer_coords(F, s_c)
                if abs(F.to_complex(s) - s_c) > 1e-6 * max(1.0, abs(s_c)):
                    continue
                v, u1, u2 = _chebyshev(F, s, k)
                if v != _scale(sign, t) or u1 == (0, 0):
                    continue
                g_s = tuple(tuple(_scale(sign, e) for e in row) for row in g)
                num = ((_add(g_s[0][0], u2), g_s[0][1]), (g_s[1][0], _add(g_s[1][1], u2)))
                delta = tuple(tuple(F.div_xy(e, u1) for e in row) for row in num)
                if all(_integral(e) for row in delta for e in row):
                    found = (tuple(tuple(_as_int(e) for e in row) for row in delta), k)
    return found


def is_primitive_element(F: QuadField, g, t) -> bool:
    return root_of_element(F, g, t) is None


# --------------------------------------------------------------------------
# Ford-region reduction for the Euclidean fields
# --------------------------------------------------------------------------

# largest norm of c needed for the isometric spheres |cz + d| = 1 bounding
# the Ford region; checked against larger sphere sets in the test suite
FORD_SPHERE_NORMS = {3: 1, 4: 1, 7: 1, 8: 1, 11: 1}

EQUIVALENT, INEQUIVALENT, UNKNOWN = "equivalent", "inequivalent", "unknown"


def _units(F: QuadField) -> list:
    """Units modulo +-1."""
    if F.abs_disc == 4:
        return [(1, 0), (0, 1)]
    if F.abs_disc == 3:
        return [(1, 0), (0, 1), (-1, 1)]  # 1, omega, omega^2 = omega - 1
    return [(1, 0)]


def _inverse_unit(F: QuadField, u):
    return _as_int(F.div_xy((1, 0), u))


def _lattice_disk(F: QuadField, centre: complex, radius: float) -> list:
    w = F.omega
    out = []
    for y in range(math.floor((centre.imag - radius) / w.imag), math.ceil((centre.imag + radius) / w.imag) + 1):
        im = y * w.imag - centre.imag
        rem = radius * radius - im * im
        if rem < 0:
            continue
        half = math.sqrt(rem)
        base = centre.real - y * w.real
        for x in range(math.floor(base - half), math.ceil(base + half) + 1):
            out.append((x, y))
    return out


class FordReducer:
    """Reduction of forms to geodesics crossing the Ford region, and the
    cycle of such forms attached to one conjugacy class."""

    def __init__(self, F: QuadField, max_nodes: int = 20000):
        if not F.is_euclidean:
            raise PreconditionError("exact equivalence needs a Euclidean field (D in 3, 4, 7, 8, 11)")
        self.F = F
        self.max_nodes = max_nodes
        self.units = _units(F)
        self.spheres = self._sphere_classes(FORD_SPHERE_NORMS[F.abs_disc])
        self._key_cache: dict = {}

    def _sphere_classes(self, max_norm: int) -> list:
        F = self.F
        seen = set()
        out = []
        bound = int(math.sqrt(max_norm) / F.omega.imag) + 2
        for cy in range(-bound, bound + 1):
            for cx in range(-bound - 2, bound + 3):
                c = (cx, cy)
                nc = F.norm_xy(c)
                if not 0 < nc <= max_norm:
                    continue
                for dx in range(nc):
                    for dy in range(nc):
                        dd = (dx, dy)
                        if IntegralIdeal.from_generators(F, [c, dd] if dd != (0, 0) else [c]).norm != 1:
                            continue
                        centre = -F.to_complex(dd) / F.to_complex(c)
                        n0 = nearest_integer_coords(F, centre)
                        key = (round((centre - F.to_complex(n0)).real, 9), round((centre - F.to_complex(n0)).imag, 9), nc)
                        if key in seen:
                            continue
                        seen.add(key)
                        g = self._complete(c, dd)
                        out.append((centre, 1.0 / nc, g))
        return out

    def _complete(self, c, dd):
        """A matrix [[a, b], [c, d]] of determinant 1."""
        F = self.F
        nc = F.norm_xy(c)
        for ax in range(-nc, nc + 1):
            for ay in range(-nc, nc + 1):
                a = (ax, ay)
                b = F.div_xy(_sub(F.mul(a, dd), (1, 0)), c)
                if _integral(b):
                    return ((a, _as_int(b)), (c, dd))
        raise AssertionError("no completion found")

    # -- normalisation under the stabilizer of infinity ----------------------
    def normalize(self, q: QForm) -> QForm:
        """Canonical representative under translations and unit diagonals."""
        F = self.F
        best = None
        for u in self.units:
            ui = _inverse_unit(F, u)
            a = F.mul(q.a, F.mul(ui, ui))
            c = F.mul(q.c, F.mul(u, u))
            cand = self._translate_normal(QForm(F, a, q.b, c))
            key = (cand.a, cand.b, cand.c)
            if best is None or key < best[0]:
                best = (key, cand)
        return best[1]

    def _translate_normal(self, q: QForm) -> QForm:
        F = self.F
        two_a = _scale(2, q.a)
        basis = _reduce_pair(F, two_a, F.mul(two_a, (0, 1)))
        b = coset_minimum(F, q.b, basis)
        n = F.div_xy(_sub(q.b, b), two_a)
        return act(translation(_as_int(n)), q)

    # -- geometry ------------------------------------------------------------
    def _geodesic(self, q: QForm):
        zp, zm = q.endpoints()
        c0 = (zp + zm) / 2
        r = abs(zp - zm) / 2
        e = (zp - zm) / (2 * r)
        return c0, r, e

    def _nearby(self, c0: complex, r: float):
        F = self.F
        for centre, rad2, g in self.spheres:
            rad = math.sqrt(rad2)
            for m in _lattice_disk(F, c0 - centre, r + rad + 1e-9):
                n = centre + F.to_complex(m)
                yield n, rad2, g, m

    def _move(self, g, m, q: QForm) -> QForm:
        # the sphere centred at centre(g) + m belongs to g o T_{-m}
        return act(matmul(self.F, g, translation(_neg(m))), q)

    def reduce(self, q: QForm) -> QForm:
        """Raise the top of the geodesic until it lies above every sphere."""
        if q.square_disc:
            raise PreconditionError("discriminant is a square: the geodesic joins two cusps")
        for _ in range(10000):
            q = self._translate_normal(q)
            c0, r, _ = self._geodesic(q)
            best = None
            for n, rad2, g, m in self._nearby(c0, r):
                gap = abs(c0 - n) ** 2 + r * r
                if gap < rad2 * (1 - 1e-12):
                    gain = rad2 / gap
                    if best is None or gain > best[0]:
                        best = (gain, g, m)
            if best is None:
                return self.normalize(q)
            q = self._move(best[1], best[2], q)
        raise RuntimeError("Ford reduction did not terminate")

    def exits(self, q: QForm) -> list:
        """Sphere moves at both ends of the segment of the geodesic inside the
        Ford region; None if the geodesic misses the region."""
        c0, r, e = self._geodesic(q)
        lo, hi = -r, r
        cons = []
        for n, rad2, g, m in self._nearby(c0, r):
            w = c0 - n
            k = 2 * (w.real * e.real + w.imag * e.imag)
            const = abs(w) ** 2 + r * r - rad2
            cons.append((k, const, g, m))
            if abs(k) < 1e-12:
                if const < -1e-9:
                    return None
                continue
            s = -const / k
            if k > 0:
                lo = max(lo, s)
            else:
                hi = min(hi, s)
        tol = 1e-9 * max(1.0, r)
        if lo > hi + tol:
            return None
        moves = []
        for k, const, g, m in cons:
            if abs(k) < 1e-12:
                # the geodesic lies on this sphere: the face element maps it
                # onto another lift inside the region
                if abs(const) <= tol:
                    moves.append((g, m))
                continue
            s = -const / k
            if (k > 0 and abs(s - lo) <= tol) or (k < 0 and abs(s - hi) <= tol):
                moves.append((g, m))
        return moves

    def cycle(self, q: QForm, limit: int | None = None):
        """Closure of the normalised Ford-crossing forms equivalent to q.
        Returns (set of keys, complete flag)."""
        start = self.reduce(q)
        limit = self.max_nodes if limit is None else limit
        seen = {start.key()}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            moves = self.exits(cur)
            if moves is None:
                moves = []
                nxt = self.reduce(cur)
                if nxt.key() not in seen:
                    seen.add(nxt.key())
                    queue.append(nxt)
            for g, m in moves:
                nxt = self._move(g, m, cur)
                if self.exits(self._translate_normal(nxt)) is None:
                    nxt = self.reduce(nxt)
                else:
                    nxt = self.normalize(nxt)
                if nxt.key() not in seen:
                    if len(seen) >= limit:
                        return seen, False
                    seen.add(nxt.key())
                    queue.append(nxt)
        return seen, True

    def class_key(self, q: QForm) -> tuple:
        """Least normalised key over the cycle: equal iff the forms are equivalent."""
        start = self.reduce(q).key()
        hit = self._key_cache.get(start)
        if hit is not None:
            return hit
        keys, complete = self.cycle(q)
        if not complete:
            raise ResourceCeilingError("Ford cycle", len(keys), self.max_nodes)
        key = min(keys)
        for k in keys:
            self._key_cache[k] = key
        return key


@lru_cache(maxsize=16)
def ford_reducer(F: QuadField) -> FordReducer:
    return FordReducer(F)


def equivalent_forms(q1: QForm, q2: QForm, depth: int = 64) -> str:
    """Decide SL2(O_F)-equivalence for Euclidean fields by walking the Ford
    cycle of q1 for at most ``depth`` forms."""
    F = q1.field
    if q2.field != F:
        raise PreconditionError("forms over different fields")
    if q1.d != q2.d:
        return INEQUIVALENT
    red = ford_reducer(F)
    target = red.reduce(q2).key()
    keys, complete = red.cycle(q1, limit=depth)
    if target in keys:
        return EQUIVALENT
    return INEQUIVALENT if complete else UNKNOWN


def random_unimodular(F: QuadField, rng, length: int):
    """A random word of the given length in T_1, T_omega, S and inverses."""
    gens = [translation((1, 0)), translation((-1, 0)), translation((0, 1)), translation((0, -1)), inversion()]
    g = identity()
    for _ in range(length):
        g = matmul(F, g, gens[rng.randrange(len(gens))])
    return g


def default_cusp(F: QuadField) -> CuspData:
    return infinity_cusp(F)

"""Exact arithmetic in quadratic fields Q(sqrt m).

Integral elements are handled internally as coordinate pairs ``(x, y)``
standing for ``x + y*omega`` where ``{1, omega}`` is the integral basis and
``omega**2 = p*omega + q``.  The public :class:`FieldElement` type stores the
rational coordinates over ``{1, sqrt m}`` instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import mpmath

from . import _kernels
from .errors import PreconditionError

Coords = tuple  # (x, y) over the integral basis, ints or Fractions


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        if n % k == 0:
            n //= k
        k += 1
    return True


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(m, k)`` with ``n = k*k*m`` and ``m`` squarefree (sign kept on m)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    k = 1
    f = 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            k *= f
        f += 1
    return sign * n, k


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        k, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class QuadField:
    """The field Q(sqrt m) for a squarefree radicand m."""

    radicand: int
    abs_disc: int
    signature: tuple

    @property
    def is_imaginary(self) -> bool:
        return self.radicand < 0

    @property
    def disc(self) -> int:
        """Signed field discriminant."""
        return -self.abs_disc if self.is_imaginary else self.abs_disc

    @property
    def p(self) -> int:
        return 1 if self.radicand % 4 == 1 else 0

    @property
    def q(self) -> int:
        m = self.radicand
        return (m - 1) // 4 if m % 4 == 1 else m

    @property
    def units_count(self) -> int:
        """Number of roots of unity (imaginary fields)."""
        return {3: 6, 4: 4}.get(self.abs_disc, 2)

    @cached_property
    def omega(self) -> complex:
        root = complex(0, math.sqrt(-self.radicand)) if self.is_imaginary else math.sqrt(self.radicand)
        return (1 + root) / 2 if self.p else complex(root)

    @property
    def is_euclidean(self) -> bool:
        return self.abs_disc in (3, 4, 7, 8, 11) and self.is_imaginary

    # -- coordinate arithmetic on x + y*omega -------------------------------
    def mul(self, s: Coords, t: Coords) -> Coords:
        x1, y1 = s
        x2, y2 = t
        yy = y1 * y2
        return (x1 * x2 + self.q * yy, x1 * y2 + x2 * y1 + self.p * yy)

    def conj_xy(self, s: Coords) -> Coords:
        x, y = s
        return (x + self.p * y, -y)

    def norm_xy(self, s: Coords):
        x, y = s
        return x * x + self.p * x * y - self.q * y * y

    def trace_xy(self, s: Coords):
        return 2 * s[0] + self.p * s[1]

    def div_xy(self, s: Coords, t: Coords) -> Coords:
        """Exact quotient s/t with Fraction coordinates."""
        n = self.norm_xy(t)
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        x, y = self.mul(s, self.conj_xy(t))
        return (Fraction(x) / n, Fraction(y) / n)

    def to_complex(self, s: Coords) -> complex:
        return float(s[0]) + float(s[1]) * self.omega

    def chi(self, n: int) -> int:
        return kronecker(self.disc, n)

    @cached_property
    def chi_table(self) -> tuple:
        D = self.abs_disc
        return tuple(kronecker(self.disc, n) for n in range(D))

    def element(self, u, v=0) -> "FieldElement":
        return FieldElement(self, Fraction(u), Fraction(v))

    def from_coords(self, s: Coords) -> "FieldElement":
        x, y = Fraction(s[0]), Fraction(s[1])
        if self.p:
            return FieldElement(self, x + y / 2, y / 2)
        return FieldElement(self, x, y)

    def __repr__(self) -> str:
        return f"QuadField(m={self.radicand}, D={self.abs_disc})"


def make_field(m: int) -> QuadField:
    """Build Q(sqrt m); m must be squarefree and different from 0 and 1."""
    if m in (0, 1) or not is_squarefree(m):
        raise PreconditionError(f"radicand {m} must be a squarefree integer other than 0 and 1")
    D = abs(m) if m % 4 == 1 else 4 * abs(m)
    return QuadField(m, D, (0, 1) if m < 0 else (2, 0))


def field_from_disc(D: int) -> QuadField:
    """Imaginary quadratic field with absolute discriminant D."""
    if D % 4 == 0:
        m = -(D // 4)
        if m % 4 == 1 or not is_squarefree(m):
            raise PreconditionError(f"{D} is not a fundamental discriminant")
    else:
        m = -D
        if m % 4 != 1 or not is_squarefree(m):
            raise PreconditionError(f"{D} is not a fundamental discriminant")
    return make_field(m)


def is_fundamental_disc(D: int) -> bool:
    try:
        field_from_disc(D)
    except PreconditionError:
        return False
    return True


@dataclass(frozen=True)
class FieldElement:
    """u + v*sqrt(m) with exact rational u, v."""

    field: QuadField
    u: Fraction
    v: Fraction

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise PreconditionError("elements of different fields")
            return other
        return FieldElement(self.field, Fraction(other), Fraction(0))

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.u, -self.v)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        m = self.field.radicand
        return FieldElement(self.field, self.u * o.u + m * self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        prod = self * o.conj()
        return FieldElement(self.field, prod.u / n, prod.v / n)

    def __pow__(self, k: int):
        result = FieldElement(self.field, Fraction(1), Fraction(0))
        base = self if k >= 0 else 1 / self
        for _ in range(abs(k)):
            result = result * base
        return result

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def norm(self) -> Fraction:
        return self.u * self.u - self.field.radicand * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def conj(self) -> "FieldElement":
        return FieldElement(self.field, self.u, -self.v)

    def coords(self) -> tuple:
        """Coordinates over the integral basis {1, omega}."""
        if self.field.p:
            y = 2 * self.v
            return (self.u - y / 2, y)
        return (self.u, self.v)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords())

    def int_coords(self) -> tuple:
        x, y = self.coords()
        if x.denominator != 1 or y.denominator != 1:
            raise PreconditionError(f"{self} is not integral")
        return (int(x), int(y))

    def __complex__(self) -> complex:
        m = self.field.radicand
        root = complex(0, math.sqrt(-m)) if m < 0 else complex(math.sqrt(m))
        return float(self.u) + float(self.v) * root

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __repr__(self) -> str:
        return f"({self.u} + {self.v}*sqrt({self.field.radicand}))"


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_in_field(x: FieldElement):
    """A square root of x inside its field, or None when x is not a square."""
    F, m = x.field, x.field.radicand
    if x.v == 0:
        r = _rational_sqrt(x.u)
        if r is not None:
            return FieldElement(F, r, Fraction(0))
        r = _rational_sqrt(x.u / m)
        return FieldElement(F, Fraction(0), r) if r is not None else None
    # (p + q sqrt m)^2 = x: p^2 and m q^2 are the roots of X^2 - u X + m v^2 / 4
    rn = _rational_sqrt(x.norm())
    if rn is None:
        return None
    for X in ((x.u + rn) / 2, (x.u - rn) / 2):
        p = _rational_sqrt(X)
        if p:
            cand = FieldElement(F, p, x.v / (2 * p))
            if cand * cand == x:
                return cand
    return None


def nearest_integer_coords(F: QuadField, z: complex) -> tuple:
    """Coordinates of the element of O_F nearest to the complex number z."""
    w = F.omega
    y0 = z.imag / w.imag
    best = None
    for y in (math.floor(y0), math.floor(y0) + 1):
        x = round(z.real - y * w.real)
        for xx in (x - 1, x, x + 1):
            dist = abs(z - (xx + y * w))
            if best is None or dist < best[0]:
                best = (dist, (xx, y))
    return best[1]


def norm(x: FieldElement) -> Fraction:
    return x.norm()


def trace(x: FieldElement) -> Fraction:
    return x.trace()


def conj(x: FieldElement) -> FieldElement:
    return x.conj()


def is_integral(x: FieldElement) -> bool:
    return x.is_integral()


# --------------------------------------------------------------------------
# lattices and ideals
# --------------------------------------------------------------------------

def hnf(vectors) -> tuple:
    """Hermite normal form ``(a, b, c)`` of an integer lattice in Z^2.

    The lattice is ``Z*(a, 0) + Z*(b, c)`` with ``a, c > 0`` and ``0 <= b < a``.
    """
    pivot = None
    zx = 0
    for x, y in vectors:
        if y == 0:
            zx = math.gcd(zx, x)
            continue
        if pivot is None:
            pivot = (x, y)
            continue
        px, py = pivot
        g, s, t = _ext_gcd(py, y)
        zx = math.gcd(zx, (y // g) * px - (py // g) * x)
        pivot = (s * px + t * x, g)
    if pivot is None or zx == 0:
        raise PreconditionError("vectors do not span a rank-2 lattice")
    bx, c = pivot
    if c < 0:
        bx, c = -bx, -c
    a = abs(zx)
    return a, bx % a, c


@dataclass(frozen=True)
class IntegralIdeal:
    """Integral ideal with Z-basis ``{a, b + c*omega}`` in Hermite normal form."""

    field: QuadField
    a: int
    b: int
    c: int

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def basis(self) -> tuple:
        return ((self.a, 0), (self.b, self.c))

    @classmethod
    def from_generators(cls, F: QuadField, gens) -> "IntegralIdeal":
        vecs = []
        for g in gens:
            if isinstance(g, FieldElement):
                g = g.int_coords()
            vecs.append(g)
            vecs.append(F.mul(g, (0, 1)))
        if all(v == (0, 0) for v in vecs):
            raise PreconditionError("the zero ideal has no Hermite normal form")
        return cls(F, *hnf(vecs))

    @classmethod
    def unit(cls, F: QuadField) -> "IntegralIdeal":
        return cls(F, 1, 0, 1)

    def __contains__(self, s) -> bool:
        if isinstance(s, FieldElement):
            if not s.is_integral():
                return False
            s = s.int_coords()
        x, y = s
        if y % self.c:
            return False
        return (x - self.b * (y // self.c)) % self.a == 0

    def __mul__(self, other: "IntegralIdeal") -> "IntegralIdeal":
        F = self.field
        gens = [F.mul(s, t) for s in self.basis for t in other.basis]
        return IntegralIdeal(F, *hnf(gens))

    def __add__(self, other: "IntegralIdeal") -> "IntegralIdeal":
        return IntegralIdeal(self.field, *hnf(self.basis + other.basis))

    gcd = __add__

    def conj(self) -> "IntegralIdeal":
        F = self.field
        return IntegralIdeal(F, *hnf([F.conj_xy(s) for s in self.basis]))

    def is_unit(self) -> bool:
        return self.norm == 1

    def __pow__(self, k: int) -> "IntegralIdeal":
        result = IntegralIdeal.unit(self.field)
        for _ in range(k):
            result = result * self
        return result

    def __repr__(self) -> str:
        return f"Ideal[{self.a}, {self.b}+{self.c}w](N={self.norm})"


def principal_ideal(F: QuadField, x) -> IntegralIdeal:
    return IntegralIdeal.from_generators(F, [x])


def is_ideal_lattice(F: QuadField, a: int, b: int, c: int) -> bool:
    """Whether the HNF lattice ``(a, b, c)`` is closed under multiplication by omega."""
    if c <= 0 or a <= 0 or a % c or b % c:
        return False
    lat = IntegralIdeal(F, a, b, c)
    return all(F.mul(s, (0, 1)) in lat for s in lat.basis)


# --------------------------------------------------------------------------
# binary quadratic forms and the class group
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ReducedForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


def reduce_form(a: int, b: int, c: int) -> tuple:
    """Reduce a positive definite integral binary quadratic form (proper equivalence)."""
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise PreconditionError("form is not positive definite")
    while True:
        k = (a - b) // (2 * a)
        b, c = b + 2 * a * k, a * k * k + b * k + c
        if c < a:
            a, b, c = c, -b, a
            continue
        if (a == c or b == -a) and b < 0:
            b = -b
        return a, b, c


def class_group(F: QuadField) -> list:
    """Reduced primitive forms of discriminant -D, sorted by (a, b)."""
    if not F.is_imaginary:
        raise PreconditionError("class groups of real quadratic fields are not supported")
    return [ReducedForm(*t) for t in _kernels.reduced_forms(F.abs_disc)]


def class_number(F: QuadField) -> int:
    return len(class_group(F))


@lru_cache(maxsize=4096)
def _class_lookup(F: QuadField) -> dict:
    return {(f.a, f.b, f.c): j for j, f in enumerate(class_group(F))}


def ideal_form(I: IntegralIdeal) -> tuple:
    """Norm form of I, sign-normalised so that the ideal attached to the
    reduced form (a, b, c) maps back to (a, b, c)."""
    F = I.field
    alpha2 = (I.b, I.c)
    tr = F.trace_xy(alpha2)
    nm = F.norm_xy(alpha2)
    return (I.a // I.c, -tr // I.c, nm // (I.a * I.c))


def ideal_class_index(I: IntegralIdeal) -> int:
    """Index into :func:`class_group` of the ideal class of I."""
    return _class_lookup(I.field)[reduce_form(*ideal_form(I))]


def form_ideal(F: QuadField, f: ReducedForm) -> IntegralIdeal:
    """The ideal (a, (-b + sqrt(-D))/2) attached to a form of discriminant -D."""
    # sqrt(-D) = 2*omega - 1 when m = 1 mod 4, else 2*omega
    if F.p:
        alpha = ((-f.b - 1) // 2, 1)
    else:
        alpha = (-f.b // 2, 1)
    return IntegralIdeal.from_generators(F, [(f.a, 0), alpha])


def ideal_class_reps(F: QuadField) -> list:
    """One integral ideal of least norm per class; the principal class first."""
    reps = []
    for f in class_group(F):
        if f.a == 1:
            reps.append(IntegralIdeal.unit(F))
        else:
            reps.append(form_ideal(F, f))
    return reps


# --------------------------------------------------------------------------
# units of real quadratic orders
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitData:
    """Fundamental unit (t + u*sqrt d)/2 of the quadratic order of discriminant d."""

    d: int
    t: int
    u: int
    norm_sign: int
    epsilon: FieldElement
    regulator: float

    @property
    def norm_one(self) -> tuple:
        """(t, u) of the generator of the norm-one units."""
        if self.norm_sign == 1:
            return self.t, self.u
        return (self.t * self.t + self.d * self.u * self.u) // 2, self.t * self.u

    @property
    def epsilon_plus(self) -> float:
        t1, u1 = self.norm_one
        return (t1 + u1 * math.sqrt(self.d)) / 2


def _floor_quad(P: int, Q: int, r: int) -> int:
    """floor((P + sqrt d)/Q) for nonsquare d with r = isqrt(d)."""
    if Q > 0:
        return (P + r) // Q
    return -((P + r) // (-Q)) - 1


def fundamental_unit(d: int) -> UnitData:
    """Least solution t, u > 0 of t^2 - d*u^2 = +-4 via the continued fraction
    of (sigma + sqrt d)/2."""
    if d <= 0:
        raise PreconditionError(f"discriminant {d} must be positive")
    r = math.isqrt(d)
    if r * r == d:
        raise PreconditionError(f"discriminant {d} is a square")
    if d % 4 not in (0, 1):
        raise PreconditionError(f"{d} is not a discriminant (must be 0 or 1 mod 4)")
    sigma = d % 2
    P, Q = sigma, 2
    p_prev, p, q_prev, q = 0, 1, 1, 0
    const = (sigma * sigma - d) // 4
    while True:
        a = _floor_quad(P, Q, r)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        n = p * p - sigma * p * q + q * q * const
        if n in (1, -1) and q > 0:
            t, u = 2 * p - q * sigma, q
            m, k = squarefree_part(d)
            eps = FieldElement(make_field(m), Fraction(t, 2), Fraction(u * k, 2))
            return UnitData(d, t, u, n, eps, math.log((t + u * math.sqrt(d)) / 2))
        P = a * Q - P
        Q = (d - P * P) // Q


# --------------------------------------------------------------------------
# Dedekind zeta value at 2
# --------------------------------------------------------------------------

_BERNOULLI = (Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
              Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510))


def _hurwitz2_tail(x, terms: int, coerce=float):
    """Euler-Maclaurin value of sum_{k>=0} (x+k)^-2 and the size of the first omitted term."""
    inv = 1 / x
    inv2 = inv * inv
    total = inv + inv2 / 2
    power = inv2 * inv
    for j in range(terms):
        b = _BERNOULLI[j]
        total += coerce(b.numerator) / b.denominator * power
        power *= inv2
    bound = abs(float(_BERNOULLI[terms])) * float(power)
    return total, bound


def l_value_2(F: QuadField, precision: int = 53) -> tuple:
    """L(2, chi_F) and a bound on its truncation error.

    The character sum is truncated at N = K*D; the tail is summed per residue
    class with an Euler-Maclaurin expansion whose remainder is bounded by the
    first omitted Bernoulli term.
    """
    if precision <= 0:
        raise PreconditionError("precision must be a positive number of bits")
    D = F.abs_disc
    chi = F.chi_table
    K = 10
    if precision <= 53:
        head = _kernels.char_sum(chi, K * D, 2)
        tail = 0.0
        bound = 0.0
        for a in range(1, D + 1):
            e = chi[a % D]
            if e:
                v, b = _hurwitz2_tail(K + a / D, 4)
                tail += e * v
                bound += b
        value = head + tail / (D * D)
        err = bound / (D * D) + 4 * K * D * 2.0 ** -52
        return value, err
    with mpmath.workprec(precision + 20):
        terms = 20
        b_next = abs(mpmath.bernoulli(2 * terms + 2))
        target = mpmath.mpf(2) ** -(precision + 10)
        K = 10
        while b_next / mpmath.mpf(K) ** (2 * terms + 3) > target:
            K += 1
        head = mpmath.fsum(mpmath.mpf(chi[n % D]) / (n * n) for n in range(1, K * D + 1) if chi[n % D])
        tail = mpmath.mpf(0)
        bound = mpmath.mpf(0)
        for a in range(1, D + 1):
            e = chi[a % D]
            if e:
                x = K + mpmath.mpf(a) / D
                v = 1 / x + 1 / (2 * x * x)
                for j in range(1, terms + 1):
                    v += mpmath.bernoulli(2 * j) / x ** (2 * j + 1)
                tail += e * v
                bound += b_next / x ** (2 * terms + 3)
        value = head + tail / (D * D)
        return +value, float(bound / (D * D)) + float(mpmath.mpf(2) ** -precision)


def zeta2(F: QuadField, precision: int = 53):
    """Dedekind zeta value zeta_F(2) = zeta(2) * L(2, chi_F)."""
    L, _ = l_value_2(F, precision)
    if precision <= 53:
        return math.pi ** 2 / 6 * L
    with mpmath.workprec(precision + 20):
        return mpmath.pi ** 2 / 6 * L


# --------------------------------------------------------------------------
# planar lattices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarLattice:
    """A rank-2 lattice in the plane given by a basis and its Gram matrix."""

    b1: tuple
    b2: tuple
    gram: tuple  # (<b1,b1>, <b1,b2>, <b2,b2>)

    @classmethod
    def from_vectors(cls, v1, v2) -> "PlanarLattice":
        g = (v1[0] * v1[0] + v1[1] * v1[1], v1[0] * v2[0] + v1[1] * v2[1], v2[0] * v2[0] + v2[1] * v2[1])
        return cls(tuple(v1), tuple(v2), g)

    @classmethod
    def from_field_basis(cls, F: QuadField, e1: Coords, e2: Coords) -> "PlanarLattice":
        """Lattice spanned by two field elements (coordinates over {1, omega})
        under the complex embedding; the Gram matrix is exact."""
        n1, n2 = F.norm_xy(e1), F.norm_xy(e2)
        n12 = F.norm_xy((e1[0] + e2[0], e1[1] + e2[1]))
        z1, z2 = F.to_complex(e1), F.to_complex(e2)
        return cls((z1.real, z1.imag), (z2.real, z2.imag), (n1, Fraction(n12 - n1 - n2) / 2, n2))

    @property
    def det(self):
        g11, g12, g22 = self.gram
        return g11 * g22 - g12 * g12

    @property
    def covolume(self) -> float:
        return math.sqrt(self.det)

    @property
    def alpha1(self) -> float:
        return math.sqrt(min(self.gram[0], self.gram[2]))

    @property
    def alpha2(self) -> float:
        return math.sqrt(max(self.gram[0], self.gram[2]))

    @property
    def tau(self) -> float:
        return float(max(self.gram[0], self.gram[2])) / self.covolume


def gauss_reduce(L: PlanarLattice) -> PlanarLattice:
    """Lagrange-Gauss reduction.  On the result ``|b1| = alpha1 <= |b2| = alpha2``
    are the successive minima and ``|2<b1,b2>| <= |b1|^2``."""
    if L.det <= 0:
        raise PreconditionError("degenerate basis: vectors are not independent")
    g11, g12, g22 = L.gram
    b1, b2 = L.b1, L.b2
    if g22 < g11:
        g11, g22, b1, b2 = g22, g11, b2, b1
    while True:
        k = round(g12 / g11)
        if k:
            g22 = g22 - 2 * k * g12 + k * k * g11
            g12 = g12 - k * g11
            b2 = (b2[0] - k * b1[0], b2[1] - k * b1[1])
        if g22 < g11:
            g11, g22, b1, b2 = g22, g11, b2, b1
            continue
        return PlanarLattice(b1, b2, (g11, g12, g22))

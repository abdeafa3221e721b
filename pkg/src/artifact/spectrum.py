"""Counting closed geodesics of Bianchi orbifolds and related local data.

The census runs over traces: each trace t in O_F of a loxodromic element
with 2 log|lambda| <= R contributes the SL2(O_F)-classes of integral forms of
discriminant t^2 - 4 with b = t mod 2.  Those are found through the cusp
horoballs of a verified cover and either counted per orbit (``upper``) or
deduplicated exactly on the Ford region (``exact``, Euclidean fields only).
"""
from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bianchi import horoball_cover, unipotent_thin_volume, verify_cover, volume
from .errors import PreconditionError
from .flats import (
    DEFAULT_RESIDUE_CEILING,
    _chebyshev,
    _lattice_disk,
    _scale,
    eigenvalue,
    enumerate_forms_through_cusp,
    ford_reducer,
    root_of_element,
    singular_order,
    trace_length,
)
from .qfield import (
    IntegralIdeal,
    QuadField,
    field_from_disc,
    fundamental_unit,
    kronecker,
    nearest_integer_coords,
    sqrt_in_field,
    squarefree_part,
)

UPPER, EXACT = "upper", "exact"


# --------------------------------------------------------------------------
# short discriminants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscRow:
    d: object  # int for real quadratic rows, coordinate pair for non-real traces
    trace: object
    u: int | None
    base_length: float


@dataclass(frozen=True)
class DiscRSet:
    R: float
    rows: tuple

    @property
    def discriminants(self) -> set:
        return {r.d for r in self.rows if isinstance(r.d, int)}


def _rational_rows(R: float) -> list:
    tmax = 2 * math.cosh(R / 2)
    rows = []
    for t in range(3, math.floor(tmax + 1e-12) + 1):
        n = t * t - 4
        for u in range(1, math.isqrt(n) + 1):
            if n % (u * u):
                continue
            d = n // (u * u)
            if d % 4 not in (0, 1) or math.isqrt(d) ** 2 == d:
                continue
            if fundamental_unit(d).norm_one != (t, u):
                continue
            length = 2 * math.log((t + u * math.sqrt(d)) / 2)
            if length <= R + 1e-12:
                rows.append(DiscRow(d, t, u, length))
    rows.sort(key=lambda r: (r.base_length, r.d))
    return rows


def short_disc_set(R: float, F: QuadField | None = None) -> DiscRSet:
    """Discriminants of geodesics of length at most R.

    Rational rows are orders Z[(d + sqrt d)/2] whose fundamental norm-one unit
    (t + u sqrt d)/2 has t <= 2 cosh(R/2).  With a field F the primitive
    non-real traces s of O_F with 2 log|lambda(s)| <= R are added as rows
    with d = s^2 - 4.
    """
    if R <= 0:
        raise PreconditionError("R must be positive")
    rows = _rational_rows(R)
    if F is not None:
        for s in census_traces(F, R):
            if s[1] == 0:
                continue
            if _trace_root(F, s) is None:
                length, _ = trace_length(F, s)
                d = F.mul(s, s)
                rows.append(DiscRow((d[0] - 4, d[1]), s, None, length))
    return DiscRSet(R, tuple(rows))


def _trace_root(F: QuadField, t) -> tuple | None:
    """(s, k, sign) with sign * V_k(s) = t for some k >= 2 and s in O_F."""
    lam = eigenvalue(F, t)
    if abs(lam) <= 1 + 1e-12:
        return None
    kmax = int(math.log(abs(lam)) / math.log(1.5)) + 1
    for k in range(2, kmax + 1):
        for sign in (1, -1):
            base = sign * lam
            r = abs(base) ** (1.0 / k)
            ph = cmath.phase(base)
            for j in range(k):
                mu = cmath.rect(r, (ph + 2 * math.pi * j) / k)
                s = nearest_integer_coords(F, mu + 1 / mu)
                v, _, _ = _chebyshev(F, s, k)
                if v == _scale(sign, t):
                    return s, k, sign
    return None


def decompose_trace(F: QuadField, t, disc_set: DiscRSet):
    """Find a row s and k >= 1 with t = +-V_k(s), i.e. t = +-(eps^k + eps^-k)
    for the unit eps of trace s.  Rows stand for their complex conjugates
    too, so s may also be the conjugate of a row trace.
    Returns (row, k, sign, s) or None."""
    t = tuple(t)
    target_len, _ = trace_length(F, t)
    for row in disc_set.rows:
        base = (row.trace, 0) if isinstance(row.trace, int) else tuple(row.trace)
        length = row.base_length
        if length <= 0:
            continue
        k = round(target_len / length)
        for s in dict.fromkeys((base, F.conj_xy(base))):
            for kk in {max(k, 1), max(k - 1, 1), k + 1}:
                v, _, _ = _chebyshev(F, s, kk)
                for sign in (1, -1):
                    if _scale(sign, v) == t:
                        return row, kk, sign, s
    return None


# --------------------------------------------------------------------------
# census
# --------------------------------------------------------------------------

def census_traces(F: QuadField, R: float) -> list:
    """Loxodromic traces with 2 log|lambda| <= R, one per orbit under
    t -> -t and complex conjugation (see :func:`galois_factor`)."""
    if R <= 0:
        raise PreconditionError("R must be positive")
    radius = 2 * math.cosh(R / 2) + 1e-9
    found = set()
    for t in _lattice_disk(F, 0j, radius):
        z = F.to_complex(t)
        if abs(z.imag) < 1e-12 and abs(z.real) <= 2 + 1e-12:
            continue
        length, _ = trace_length(F, t)
        if length > R + 1e-12:
            continue
        tbar = F.conj_xy(t)
        found.add(max((t, _scale(-1, t), tbar, _scale(-1, tbar))))
    return sorted(found)


def galois_factor(F: QuadField, t) -> int:
    tbar = F.conj_xy(t)
    return 2 if tbar not in (tuple(t), _scale(-1, t)) else 1


@dataclass(frozen=True)
class CensusRow:
    trace: tuple
    d: tuple
    length: float
    holonomy: float
    multiplicity: int  # Galois factor: the row also stands for the conjugate trace
    primitive: int  # classes per trace (before the multiplicity)
    imprimitive: int
    singular: tuple = ()  # ((order, count), ...) among the primitive classes

    @property
    def total(self) -> int:
        return self.primitive * self.multiplicity

    @property
    def singular_count(self) -> int:
        return sum(c for _, c in self.singular)


@dataclass(frozen=True)
class GeodesicCensus:
    D: int
    R: float
    mode: str
    kappa: Fraction
    rows: tuple
    cover_kappa: float | None = None  # max_required_kappa of the verified cover

    @property
    def total(self) -> int:
        return sum(r.total for r in self.rows)

    @property
    def imprimitive_total(self) -> int:
        return sum(r.imprimitive * r.multiplicity for r in self.rows)

    @property
    def elliptic_rows(self) -> tuple:
        return tuple(r for r in self.rows if r.singular)


@lru_cache(maxsize=256)
def _checked_cover(D: int, kappa: Fraction):
    F = field_from_disc(D)
    cover = horoball_cover(F, kappa)
    report = verify_cover(cover)
    if not report.covered:
        raise PreconditionError(
            f"horoball cover not verified at kappa={kappa} for D={D} "
            f"(largest verified kappa {report.max_required_kappa:.4g}); use a smaller kappa"
        )
    return cover, report


def _forms_for_trace(F: QuadField, cover, t, residue_ceiling: int) -> list:
    tt = F.mul(t, t)
    d = (tt[0] - 4, tt[1])
    forms = []
    for j, (cusp, _) in enumerate(cover.entries):
        forms.extend(enumerate_forms_through_cusp(F, d, cusp, height_sq=cover.height_sq(j),
                                                  residue_ceiling=residue_ceiling, parity=t))
    return d, forms


def _trace_row(F: QuadField, cover, t, mode: str, residue_ceiling: int) -> CensusRow:
    d, forms = _forms_for_trace(F, cover, t, residue_ceiling)
    if sqrt_in_field(F.from_coords(d)) is not None:
        forms = []
    if mode == EXACT:
        red = ford_reducer(F)
        reps = {}
        for q in forms:
            reps.setdefault(red.class_key(q), q)
        forms = list(reps.values())
    prim = imprim = 0
    orders: dict = {}
    for q in forms:
        if root_of_element(F, q.element(t), t) is not None:
            imprim += 1
            continue
        prim += 1
        o = singular_order(q)
        if o > 1:
            orders[o] = orders.get(o, 0) + 1
    length, hol = trace_length(F, t)
    return CensusRow(tuple(t), d, length, hol, galois_factor(F, t), prim, imprim, tuple(sorted(orders.items())))


def _row_task(args):
    D, kappa, t, mode, ceiling = args
    F = field_from_disc(D)
    cover, _ = _checked_cover(D, kappa)
    return _trace_row(F, cover, t, mode, ceiling)


def count_geodesics(F: QuadField, R: float, mode: str = UPPER, kappa=Fraction(1, 4),
                    residue_ceiling: int = DEFAULT_RESIDUE_CEILING, threads: int = 1) -> GeodesicCensus:
    """Primitive closed geodesics of length at most R, per trace.

    ``upper`` counts one per orbit of the cusp stabilizers through every
    horoball of the cover, so a class is counted once per horoball it meets.
    ``exact`` keeps one per SL2(O_F)-class (Euclidean fields).
    """
    if not F.is_imaginary:
        raise PreconditionError("census needs an imaginary quadratic field")
    if mode not in (UPPER, EXACT):
        raise PreconditionError(f"unknown census mode {mode!r}")
    if mode == EXACT and not F.is_euclidean:
        raise PreconditionError("exact mode needs a Euclidean field (D in 3, 4, 7, 8, 11)")
    kappa = Fraction(kappa)
    traces = census_traces(F, R)
    if not traces:
        return GeodesicCensus(F.abs_disc, R, mode, kappa, ())
    cover, report = _checked_cover(F.abs_disc, kappa)
    if threads > 1 and len(traces) > 1:
        tasks = [(F.abs_disc, kappa, t, mode, residue_ceiling) for t in traces]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_trace_row(F, cover, t, mode, residue_ceiling) for t in traces]
    rows = tuple(r for r in sorted(rows, key=lambda r: (r.length, r.trace)) if r.primitive or r.imprimitive)
    return GeodesicCensus(F.abs_disc, R, mode, kappa, rows, report.max_required_kappa)


# --------------------------------------------------------------------------
# thin part
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ThinPartReport:
    D: int
    R: float
    flats_term: float
    unipotent_term: float
    elliptic_term: float
    levi_term: float
    volume: float
    census_total: int
    mode: str

    @property
    def total(self) -> float:
        return math.fsum((self.flats_term, self.unipotent_term, self.elliptic_term, self.levi_term))

    @property
    def ratio(self) -> float:
        return self.total / self.volume


def thin_part_report(F: QuadField, R: float, mode: str | None = None, kappa=Fraction(1, 4),
                     residue_ceiling: int = DEFAULT_RESIDUE_CEILING, census: GeodesicCensus | None = None,
                     threads: int = 1) -> ThinPartReport:
    """Volume bound for the R-thin part: lengths of the short primitive
    geodesics (singular ones weighted by the order of their elliptic
    stabilizer), the cusp shapes, and no Levi part for imaginary fields."""
    if census is None:
        if mode is None:
            mode = EXACT if F.is_euclidean else UPPER
        census = count_geodesics(F, R, mode, kappa, residue_ceiling, threads)
    flats = []
    elliptic = []
    for row in census.rows:
        plain = row.primitive - row.singular_count
        flats.append(plain * row.multiplicity * row.length)
        for order, count in row.singular:
            elliptic.append(order * count * row.multiplicity * row.length)
    return ThinPartReport(
        D=F.abs_disc,
        R=R,
        flats_term=math.fsum(flats),
        unipotent_term=unipotent_thin_volume(F),
        elliptic_term=math.fsum(elliptic),
        levi_term=0.0,
        volume=volume(F),
        census_total=census.total,
        mode=census.mode,
    )


# --------------------------------------------------------------------------
# Levi part (real quadratic fields)
# --------------------------------------------------------------------------

def _prime_factors(n: int) -> list:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _primes_above(F: QuadField, p: int) -> list:
    """Prime ideals over the rational prime p as (ideal, norm)."""
    roots = [r for r in range(p) if (r * r - F.p * r - F.q) % p == 0]
    if not roots:
        return [(IntegralIdeal.from_generators(F, [(p, 0)]), p * p)]
    return [(IntegralIdeal.from_generators(F, [(p, 0), (-r, 1)]), p) for r in roots]


def unit_group_order(I: IntegralIdeal) -> int:
    """|(O_F / I)^x| = N(I) * prod over primes P | I of (1 - 1/N(P))."""
    n = I.norm
    phi = Fraction(n)
    for p in _prime_factors(n):
        for P, nP in _primes_above(I.field, p):
            if (I + P).norm == P.norm:
                phi *= 1 - Fraction(1, nP)
    return int(phi)


def levi_volume(I: IntegralIdeal, regulator: float) -> float:
    return regulator * unit_group_order(I)


def levi_length_bound(I: IntegralIdeal, D: int, C: float = 1.0) -> float:
    return C * (math.log(D) + math.log(I.norm))


# --------------------------------------------------------------------------
# Eichler symbols and conjugacy counts over Q
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EichlerLocalData:
    p: int
    symbol: int


def eichler_symbol(f: int, p: int, dK: int) -> EichlerLocalData:
    if f % p == 0:
        return EichlerLocalData(p, 1)
    k = kronecker(dK, p)
    return EichlerLocalData(p, k)


def _fundamental_part(d: int) -> tuple:
    """(dK, f0) with d = f0^2 dK and dK a fundamental discriminant."""
    m, k = squarefree_part(d)
    if m % 4 == 1:
        return m, k
    if k % 2:
        raise PreconditionError(f"{d} is not a discriminant")
    return 4 * m, k // 2


def _unit_index(dK: int, f: int) -> int:
    """[O_K^{x,+} : O_f^{x,+}] via powers of the norm-one fundamental unit."""
    t1, u1 = fundamental_unit(dK).norm_one
    t, u = t1, u1
    k = 1
    while True:
        # (t + u sqrt dK)/2 lies in Z + f O_K iff f | u
        if u % f == 0:
            return k
        t, u = (t * t1 + dK * u * u1) // 2, (t * u1 + u * t1) // 2
        k += 1


@lru_cache(maxsize=None)
def narrow_class_number_fundamental(dK: int) -> int:
    """Narrow class number of Q(sqrt dK), dK > 0, from the finite sum
    h log eps = -1/2 sum_{a<dK} chi(a) log sin(pi a / dK)."""
    total = math.fsum(kronecker(dK, a) * math.log(math.sin(math.pi * a / dK)) for a in range(1, dK))
    unit = fundamental_unit(dK)
    h = round(-total / (2 * unit.regulator))
    return h if unit.norm_sign == -1 else 2 * h


def narrow_class_number(d: int) -> int:
    """Narrow class number of the order of discriminant d > 0."""
    dK, f = _fundamental_part(d)
    h = Fraction(narrow_class_number_fundamental(dK) * f)
    for p in _prime_factors(f):
        h *= 1 - Fraction(kronecker(dK, p), p)
    h /= _unit_index(dK, f)
    if h.denominator != 1:
        raise AssertionError(f"non-integral class number for {d}")
    return int(h)


@dataclass(frozen=True)
class VignerasCount:
    d: int
    raw: Fraction  # sum over orders of h(O_f) times the local factors
    normalized: Fraction  # the same with h(O_f) / h(O_K)
    terms: tuple  # ((f, h(O_f), local factor), ...)

    @property
    def count(self) -> Fraction:
        return self.raw


def vigneras_count(t: int, S=(), T=(), order_class_number=None, d: int | None = None) -> VignerasCount:
    """Conjugacy classes with trace t in the unit group of an Eichler-type
    order over Q, as a sum over the quadratic orders containing the eigenvalue.

    ``order_class_number`` replaces the narrow class number of an order (a
    callable on the discriminant).  ``d`` overrides t^2 - 4 so that any
    nonsquare discriminant can be fed in.
    """
    S, T = tuple(S), tuple(T)
    if set(S) & set(T):
        raise PreconditionError("S and T must be disjoint")
    if d is None:
        d = t * t - 4
    if d <= 0 or math.isqrt(d) ** 2 == d:
        raise PreconditionError(f"discriminant {d} must be a positive nonsquare")
    dK, f0 = _fundamental_part(d)
    hK = narrow_class_number(dK) if order_class_number is None else order_class_number(dK)
    raw = Fraction(0)
    normalized = Fraction(0)
    terms = []
    for f in range(1, f0 + 1):
        if f0 % f:
            continue
        h = narrow_class_number(f * f * dK) if order_class_number is None else order_class_number(f * f * dK)
        local = 1
        for p in S:
            local *= 1 - eichler_symbol(f, p, dK).symbol
        for p in T:
            local *= 1 + eichler_symbol(f, p, dK).symbol
        raw += h * local
        normalized += Fraction(h, hK) * local
        terms.append((f, h, local))
    return VignerasCount(d, raw, normalized, tuple(terms))


# --------------------------------------------------------------------------
# the comparison identity between the S-product and (1 + e) products
# --------------------------------------------------------------------------

def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def lhs_product(S_symbols, T_symbols) -> int:
    return _prod(1 - e for e in S_symbols) * _prod(1 + e for e in T_symbols)


def stated_coefficient(subset_size: int, total_size: int) -> int:
    return (-2) ** subset_size


def expansion_coefficient(subset_size: int, total_size: int) -> int:
    """From 1 - e = 2 - (1 + e)."""
    return (-1) ** subset_size * 2 ** (total_size - subset_size)


def jl_comparison(S_symbols, T_symbols, coefficient=stated_coefficient) -> tuple:
    """(lhs, rhs) with rhs = sum over S' of c(S') prod_{S' u T} (1 + e)."""
    n = len(S_symbols)
    lhs = lhs_product(S_symbols, T_symbols)
    t_part = _prod(1 + e for e in T_symbols)
    rhs = 0
    for r in range(n + 1):
        for sub in itertools.combinations(range(n), r):
            rhs += coefficient(r, n) * _prod(1 + S_symbols[i] for i in sub) * t_part
    return lhs, rhs


def _solve_exact(rows: list, rhs: list) -> list:
    """Least-squares-free exact solve of an overdetermined consistent system
    by Gaussian elimination over Q; raises if inconsistent."""
    m = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    ncols = len(rows[0])
    piv_row = 0
    pivots = []
    for col in range(ncols):
        sel = next((i for i in range(piv_row, len(m)) if m[i][col] != 0), None)
        if sel is None:
            continue
        m[piv_row], m[sel] = m[sel], m[piv_row]
        pv = m[piv_row][col]
        m[piv_row] = [v / pv for v in m[piv_row]]
        for i in range(len(m)):
            if i != piv_row and m[i][col] != 0:
                k = m[i][col]
                m[i] = [a - k * b for a, b in zip(m[i], m[piv_row])]
        pivots.append(col)
        piv_row += 1
    for i in range(piv_row, len(m)):
        if m[i][-1] != 0:
            raise ArithmeticError("inconsistent system")
    if len(pivots) < ncols:
        raise ArithmeticError("underdetermined system")
    return [m[i][-1] for i in range(ncols)]


@dataclass(frozen=True)
class CoefficientRow:
    size: int
    subset_size: int
    solved: Fraction
    stated: int
    expansion: int


@dataclass(frozen=True)
class CoefficientTable:
    rows: tuple
    solved_reproduces: bool
    stated_holds: dict  # size -> bool
    expansion_holds: dict


def determine_coefficients(max_s: int = 3) -> CoefficientTable:
    """Solve for c(S') over all 3^|S| symbol assignments, |S| <= max_s.

    The coefficients are taken to depend on S' only through its size, which
    the solve confirms (the system on all subsets has the same solution).
    """
    rows = []
    reproduces = True
    stated_ok = {}
    expansion_ok = {}
    for n in range(max_s + 1):
        subsets = [sub for r in range(n + 1) for sub in itertools.combinations(range(n), r)]
        A, b = [], []
        assignments = list(itertools.product((-1, 0, 1), repeat=n))
        for e in assignments:
            A.append([_prod(1 + e[i] for i in sub) for sub in subsets])
            b.append(lhs_product(e, ()))
        coeffs = _solve_exact(A, b)
        for e, row, target in zip(assignments, A, b):
            if sum(c * v for c, v in zip(coeffs, row)) != target:
                reproduces = False
        by_size = {}
        for sub, c in zip(subsets, coeffs):
            by_size.setdefault(len(sub), set()).add(c)
        for r, vals in sorted(by_size.items()):
            if len(vals) != 1:
                raise AssertionError("coefficients depend on more than the subset size")
            rows.append(CoefficientRow(n, r, vals.pop(), stated_coefficient(r, n), expansion_coefficient(r, n)))
        stated_ok[n] = all(jl_comparison(e, ())[0] == jl_comparison(e, ())[1] for e in assignments)
        expansion_ok[n] = all(
            jl_comparison(e, (), expansion_coefficient)[0] == jl_comparison(e, (), expansion_coefficient)[1]
            for e in assignments
        )
    return CoefficientTable(tuple(rows), reproduces, stated_ok, expansion_ok)


# --------------------------------------------------------------------------
# index bounds
# --------------------------------------------------------------------------

def index_bound(D: int, T=()) -> int:
    """2^(h2 + 1) with h2 the number of prime divisors of D when T is empty,
    otherwise 2^|T|."""
    T = tuple(T)
    if T:
        return 2 ** len(T)
    return 2 ** (len(_prime_factors(abs(D))) + 1)


def fix_bound(R: float, T=(), residue_sizes=()) -> int:
    cutoff = 2 * math.cosh(R / 2) + 2
    C = _prod(q + 1 for q in residue_sizes if q <= cutoff)
    return C * 2 ** len(tuple(T))

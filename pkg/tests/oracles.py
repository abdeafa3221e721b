"""Independent reference computations for the test-suite.

None of these call into the package's arithmetic; they re-derive each
quantity by a different route (analytic formulas, Poisson summation, brute
force) so that agreement is evidence rather than tautology.
"""
from __future__ import annotations

import cmath
import math

import mpmath
from scipy.special import digamma


def legendre(a: int, p: int) -> int:
    """Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker_minus(D: int, n: int) -> int:
    """chi_{-D}(n) for n > 0, built from Legendre symbols and the 2-adic rule."""
    d = -D
    out = 1
    m = n
    while m % 2 == 0:
        m //= 2
        if d % 2 == 0:
            return 0
        out *= 1 if d % 8 in (1, 7) else -1
    p = 3
    while m > 1:
        if p * p > m:
            p = m
        while m % p == 0:
            m //= p
            out *= legendre(d, p)
        p += 2
    return out


def analytic_class_number(D: int) -> float:
    """h(-D) = w sqrt(D) L(1, chi) / (2 pi) with L(1, chi) = -(1/D) sum chi(a) psi(a/D)."""
    L = -sum(kronecker_minus(D, a) * digamma(a / D) for a in range(1, D)) / D
    w = {3: 6, 4: 4}.get(D, 2)
    return w * math.sqrt(D) * L / (2 * math.pi)


def reduced_forms_bruteforce(D: int) -> list:
    """Reduced positive definite forms of discriminant -D, any content."""
    out = []
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b * b + D) % (4 * a):
                continue
            c = (b * b + D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            out.append((a, b, c))
        a += 1
    return out


def epstein_zeta2(a: int, b: int, c: int) -> mpmath.mpf:
    """sum' (a x^2 + b x y + c y^2)^-2 by Poisson summation in x.

    Rows y != 0 split into a constant term (pi/2) a^-1/2 k^-3/2 with
    k = D y^2 / 4a and Bessel terms in K_{3/2}, which is elementary.
    """
    D = 4 * a * c - b * b
    pi = mpmath.pi
    total = 2 * mpmath.zeta(4) / a ** 2
    total += (pi / 2) * mpmath.mpf(a) ** -0.5 * (mpmath.mpf(4 * a) / D) ** 1.5 * 2 * mpmath.zeta(3)
    ymax = 1
    while math.pi * ymax * math.sqrt(D) / a < 90:
        ymax += 1
    for y in range(1, ymax + 1):
        k = mpmath.mpf(D) * y * y / (4 * a)
        theta = mpmath.mpf(b) * y / (2 * a)
        n = 1
        while True:
            z = 2 * pi * n * mpmath.sqrt(k / a)
            if z > 200:
                break
            kb = mpmath.sqrt(pi / (2 * z)) * mpmath.e ** -z * (1 + 1 / z)
            term = mpmath.sqrt(k / a) * k ** -2 * 2 * mpmath.sqrt(pi) * (z / 2) ** 1.5 * kb
            # two signs of n and two signs of y pair up into 4 cos(...)
            total += 4 * term * mpmath.cos(2 * pi * n * theta)
            n += 1
    return total


def dedekind_zeta2(D: int) -> mpmath.mpf:
    """zeta_F(2) = (1/w) sum over classes of the Epstein zeta value."""
    w = {3: 6, 4: 4}.get(D, 2)
    return mpmath.fsum(epstein_zeta2(*f) for f in reduced_forms_bruteforce(D)) / w


def covolume(D: int) -> mpmath.mpf:
    return dedekind_zeta2(D) * mpmath.mpf(D) ** 1.5 / (4 * mpmath.pi ** 2)


def indefinite_class_count(d: int, primitive: bool = False) -> int:
    """Proper classes of integral binary forms of discriminant d > 0 (any
    content unless ``primitive``), counted as cycles of reduced forms under
    the right neighbour."""
    r = math.isqrt(d)
    sd = math.sqrt(d)
    reduced = set()
    for b in range(1, r + 1):
        if (b * b - d) % 4 or b >= sd:
            continue
        ac = (b * b - d) // 4
        for a in range(1, abs(ac) + 1):
            if ac % a:
                continue
            for sa in (a, -a):
                c = ac // sa
                if primitive and math.gcd(math.gcd(sa, b), c) != 1:
                    continue
                if sd - b < 2 * abs(sa) < sd + b:
                    reduced.add((sa, b, c))

    def right(f):
        a, b, c = f
        m = 2 * abs(c)
        # b' = -b mod 2c with sqrt(d) - 2|c| < b' < sqrt(d)
        bp = (-b) % m
        while bp < sd:
            bp += m
        while bp > sd:
            bp -= m
        return (c, bp, (bp * bp - d) // (4 * c))

    seen = set()
    cycles = 0
    for f in sorted(reduced):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = right(g)
    return cycles


def pell_bruteforce(d: int) -> tuple:
    """Least (t, u), u > 0, with t^2 - d u^2 = +-4, by scanning u."""
    u = 1
    while True:
        for s in (-4, 4):
            t2 = d * u * u + s
            if t2 > 0:
                t = math.isqrt(t2)
                if t * t == t2:
                    return t, u
        u += 1


def geodesic_top_height(coeffs, xi) -> float:
    """Largest y_xi on the geodesic of a z^2 + b z + c, from its endpoints.

    coeffs and xi are complex; xi is None for the cusp at infinity.  The
    endpoints are pushed through z -> 1/(xi - z), which sends xi to infinity,
    and the top of the image semicircle is half their distance.
    """
    a, b, c = coeffs
    if abs(a) == 0:
        ends = [math.inf, -c / b]
    else:
        root = cmath.sqrt(b * b - 4 * a * c)
        ends = [(-b + root) / (2 * a), (-b - root) / (2 * a)]
    if xi is None:
        if math.inf in ends:
            return math.inf
        return abs(ends[0] - ends[1]) / 2
    images = []
    for z in ends:
        if z == math.inf:
            images.append(0j)
        elif abs(z - xi) < 1e-300:
            return math.inf
        else:
            images.append(1 / (xi - z))
    return abs(images[0] - images[1]) / 2


def orbit_count_bruteforce(generators, start, depth: int, canon) -> int:
    """Size of the canonicalised orbit reached within ``depth`` steps."""
    seen = {canon(start)}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for x in frontier:
            for g in generators:
                y = g(x)
                k = canon(y)
                if k not in seen:
                    seen.add(k)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def forms_at_infinity(D: int, d, y2) -> int:
    """Number of pairs (a, b mod 2a) with b^2 = d mod 4a and
    N(d) >= 16 y^4 N(a)^2, over O_F of discriminant -D, by a plain box scan."""
    if D % 4 == 3:
        p, q = 1, -(D + 1) // 4
    else:
        p, q = 0, -D // 4
    im = math.sqrt(D) / 2 if p else math.sqrt(D // 4)

    def mul(s, t):
        return (s[0] * t[0] + q * s[1] * t[1], s[0] * t[1] + s[1] * t[0] + p * s[1] * t[1])

    def norm(s):
        return s[0] * s[0] + p * s[0] * s[1] - q * s[1] * s[1]

    def conj(s):
        return (s[0] + p * s[1], -s[1])

    nd = norm(d)
    count = 0
    amax = int((nd / (16 * y2 * y2)) ** 0.25 / im) + 3
    for ax in range(-amax, amax + 1):
        for ay in range(-amax, amax + 1):
            na = norm((ax, ay))
            if na == 0 or nd < 16 * y2 * y2 * na * na:
                continue
            m = (4 * ax, 4 * ay)
            mc, nm = conj(m), norm(m)
            v1 = (2 * ax, 2 * ay)
            v2 = mul(v1, (0, 1))
            det = v1[0] * v2[1] - v1[1] * v2[0]
            sign = 1 if det > 0 else -1
            xs = (0, v1[0], v2[0], v1[0] + v2[0])
            ys = (0, v1[1], v2[1], v1[1] + v2[1])
            for bx in range(min(xs), max(xs) + 1):
                for by in range(min(ys), max(ys) + 1):
                    s = sign * (bx * v2[1] - by * v2[0])
                    t = sign * (v1[0] * by - v1[1] * bx)
                    if not (0 <= s < abs(det) and 0 <= t < abs(det)):
                        continue
                    bb = mul((bx, by), (bx, by))
                    num = mul((bb[0] - d[0], bb[1] - d[1]), mc)
                    if num[0] % nm == 0 and num[1] % nm == 0:
                        count += 1
    return count

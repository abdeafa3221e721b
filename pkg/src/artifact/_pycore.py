"""Pure-Python versions of the hot loops; the compiled ``_core`` mirrors these."""
from __future__ import annotations

import math


def reduced_forms(D: int) -> list:
    """Reduced primitive positive definite forms (a, b, c) of discriminant -D."""
    out = []
    amax = math.isqrt(D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b + D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and c == a:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    return out


def char_sum(chi, N: int, s: int) -> float:
    """sum_{n=1}^{N} chi[n mod len(chi)] / n^s with Neumaier compensation."""
    period = len(chi)
    total = 0.0
    comp = 0.0
    for n in range(1, N + 1):
        e = chi[n % period]
        if not e:
            continue
        term = e / float(n) ** s
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
    return total + comp


def residue_scan(f1x, f1y, f2x, f2y, h1, h2, tx, ty, mx, my, nmu, p, q) -> list:
    """Residues b = i*f1 + j*f2 (0 <= i < h1, 0 <= j < h2) in O = Z[omega] with
    (b^2 - t) * conj(mu) divisible by nmu coordinatewise, i.e. b^2 = t mod mu."""
    hits = []
    for i in range(h1):
        bx0 = i * f1x
        by0 = i * f1y
        for j in range(h2):
            x = bx0 + j * f2x
            y = by0 + j * f2y
            yy = y * y
            u = x * x + q * yy - tx
            v = 2 * x * y + p * yy - ty
            vm = v * my
            if (u * mx + q * vm) % nmu:
                continue
            if (u * my + v * mx + p * vm) % nmu:
                continue
            hits.append((i, j))
    return hits

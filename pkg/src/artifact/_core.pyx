# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled versions of the loops in ``_pycore``; same signatures and results."""

from libc.math cimport pow


def reduced_forms(long D):
    cdef long a, b, c, num, amax, g
    out = []
    amax = 1
    while (amax + 1) * (amax + 1) * 3 <= D:
        amax += 1
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
            g = _gcd(_gcd(a, b if b >= 0 else -b), c)
            if g != 1:
                continue
            out.append((a, b, c))
    return out


cdef long _gcd(long a, long b):
    while b:
        a, b = b, a % b
    return a


def char_sum(chi, long N, int s):
    cdef long period = len(chi)
    cdef long n
    cdef int e
    cdef double total = 0.0, comp = 0.0, term, t
    cdef int[:] table
    import array
    arr = array.array("i", chi)
    table = arr
    for n in range(1, N + 1):
        e = table[n % period]
        if e == 0:
            continue
        term = e / pow(<double> n, s)
        t = total + term
        if (total if total >= 0 else -total) >= (term if term >= 0 else -term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
    return total + comp


cdef inline long _pymod(long a, long n):
    cdef long r = a % n
    return r + n if r < 0 else r


def residue_scan(long f1x, long f1y, long f2x, long f2y, long h1, long h2,
                 long tx, long ty, long mx, long my, long nmu, long p, long q):
    cdef long i, j, x, y, yy, u, v, vm, bx0, by0
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
            if _pymod(u * mx + q * vm, nmu):
                continue
            if _pymod(u * my + v * mx + p * vm, nmu):
                continue
            hits.append((i, j))
    return hits

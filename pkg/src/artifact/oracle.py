"""Brute-force census for the Euclidean Bianchi groups by word enumeration.

Elements are generated breadth-first from T_1, T_omega, S and the inverses of
the translations; short loxodromic elements are grouped into conjugacy
classes by union-find under conjugation with short words.  This is
deliberately independent of the form machinery used by the census.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import PreconditionError, ResourceCeilingError
from .qfield import QuadField, field_from_disc

MAX_DEPTH = 16
DEFAULT_BALL_CEILING = 3_000_000


def _mat_mul(F: QuadField, g, h):
    a, b, c, d = g
    e, f, k, l = h
    m = F.mul
    return (
        _add(m(a, e), m(b, k)), _add(m(a, f), m(b, l)),
        _add(m(c, e), m(d, k)), _add(m(c, f), m(d, l)),
    )


def _add(s, t):
    return (s[0] + t[0], s[1] + t[1])


def _neg(g):
    return tuple((-x, -y) for x, y in g)


def _psl(g):
    """Sign-normalised representative of +-g."""
    flat = [v for e in g for v in e]
    for v in flat:
        if v:
            return g if v > 0 else _neg(g)
    return g


def _inverse(g):
    a, b, c, d = g
    return (d, (-b[0], -b[1]), (-c[0], -c[1]), a)


def generators(F: QuadField) -> list:
    one, zero = (1, 0), (0, 0)
    t1 = (one, one, zero, one)
    tw = (one, (0, 1), zero, one)
    s = (zero, (-1, 0), one, zero)
    return [t1, _inverse(t1), tw, _inverse(tw), s]


def _trace(g):
    return _add(g[0], g[3])


def _length(F: QuadField, t) -> float:
    z = F.to_complex(t)
    root = cmath.sqrt(z * z - 4)
    lam = max(abs((z + root) / 2), abs((z - root) / 2))
    return 2 * math.log(lam)


def _is_loxodromic(F: QuadField, t) -> bool:
    z = F.to_complex(t)
    return not (abs(z.imag) < 1e-12 and abs(z.real) <= 2 + 1e-12)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


@dataclass(frozen=True)
class OracleRow:
    trace: tuple  # canonical under sign and complex conjugation
    length: float
    count: int


@dataclass(frozen=True)
class OracleCensus:
    D: int
    depth: int
    R: float
    rows: tuple
    completeness_radius: float
    ball_size: int

    @property
    def total(self) -> int:
        return sum(r.count for r in self.rows)

    def total_below(self, R: float) -> int:
        return sum(r.count for r in self.rows if r.length <= R + 1e-12)


def _ball(F: QuadField, depth: int, ceiling: int):
    gens = generators(F)
    ident = ((1, 0), (0, 0), (0, 0), (1, 0))
    seen = {ident: 0}
    frontier = [ident]
    for level in range(1, depth + 1):
        nxt = []
        for g in frontier:
            for h in gens:
                w = _psl(_mat_mul(F, g, h))
                if w not in seen:
                    seen[w] = level
                    nxt.append(w)
        frontier = nxt
        if len(seen) > ceiling:
            raise ResourceCeilingError("word ball", len(seen), ceiling)
    return seen


def _trace_key(F: QuadField, t) -> tuple:
    tbar = F.conj_xy(t)
    neg = lambda s: (-s[0], -s[1])
    return max((t, neg(t), tbar, neg(tbar)))


def _power(F: QuadField, g, k: int):
    out = g
    for _ in range(k - 1):
        out = _mat_mul(F, out, g)
    return out


def _classify(F: QuadField, ball: dict, level_cap: int, R: float, conj_pairs) -> dict:
    """trace key -> [length, class count] over ball elements of level <= cap."""
    short = {}
    for g, lvl in ball.items():
        if lvl > level_cap:
            continue
        t = _trace(g)
        if _is_loxodromic(F, t) and _length(F, t) <= R + 1e-12:
            short[g] = lvl
    # imprimitive: g = +-h^k with h loxodromic and k >= 2
    imprimitive = set()
    for h, lvl in ball.items():
        if lvl > level_cap:
            continue
        th = _trace(h)
        if not _is_loxodromic(F, th):
            continue
        lh = _length(F, th)
        k = 2
        while k * lh <= R + 1e-12:
            p = _psl(_power(F, h, k))
            if p in short:
                imprimitive.add(p)
            k += 1
    uf = _UnionFind()
    for g in short:
        uf.add(g)
    for g in short:
        for c, ci in conj_pairs:
            h = _psl(_mat_mul(F, _mat_mul(F, c, g), ci))
            if h in short:
                uf.union(g, h)
    # a class is imprimitive as soon as one of its members is a visible power
    bad_roots = {uf.find(g) for g in imprimitive}
    roots = {uf.find(g) for g in short} - bad_roots
    rows: dict = {}
    for r in roots:
        t = _trace(r)
        row = rows.setdefault(_trace_key(F, t), [_length(F, t), 0])
        row[1] += 1
    return rows


def bfs_oracle(D: int, depth: int, R: float, ball_ceiling: int = DEFAULT_BALL_CEILING) -> OracleCensus:
    """Classes of primitive loxodromic elements of length <= R among words of
    length <= depth, up to sign and complex conjugation of the trace.

    Two elements are merged when one is conjugate to the other by a word of
    length <= 2 or a unit diagonal matrix.  A class is imprimitive when one
    of its members is a power (k >= 2) of a ball element up to sign.  The
    completeness radius is the shortest length whose row count still changes
    between depths ``depth - 2``, ``depth - 1`` and ``depth``.
    """
    F = field_from_disc(D)
    if not F.is_euclidean:
        raise PreconditionError("the word oracle needs a Euclidean field (D in 3, 4, 7, 8, 11)")
    if not 0 <= depth <= MAX_DEPTH:
        raise PreconditionError(f"depth must be between 0 and {MAX_DEPTH}")
    ball = _ball(F, depth, ball_ceiling)
    conj = [g for g, lvl in ball.items() if lvl <= 2]
    conj += {3: [((0, 1), (0, 0), (0, 0), (1, -1))], 4: [((0, 1), (0, 0), (0, 0), (0, -1))]}.get(D, [])
    conj_pairs = [(c, _inverse(c)) for c in conj]
    rows = _classify(F, ball, depth, R, conj_pairs)
    radius = R
    if depth < 2:
        radius = 0.0
    else:
        for cap in (depth - 1, depth - 2):
            other = _classify(F, ball, cap, R, conj_pairs)
            for key in set(rows) | set(other):
                a, b = rows.get(key), other.get(key)
                if a is None or b is None or a[1] != b[1]:
                    length = (a or b)[0]
                    radius = min(radius, length - 1e-9)
    out = tuple(OracleRow(k, v[0], v[1]) for k, v in sorted(rows.items(), key=lambda kv: (kv[1][0], kv[0])))
    return OracleCensus(D, depth, R, out, max(radius, 0.0), len(ball))

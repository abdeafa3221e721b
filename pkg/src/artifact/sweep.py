"""Discriminant sweeps, exponent fits and form-class counts h_F(d)."""
from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .bianchi import volume
from .errors import PreconditionError, ResourceCeilingError
from .flats import DEFAULT_RESIDUE_CEILING, _coords, _lattice_disk, enumerate_forms_through_cusp, ford_reducer
from .qfield import QuadField, class_number, field_from_disc, is_fundamental_disc, sqrt_in_field
from .spectrum import EXACT, UPPER, _checked_cover, count_geodesics, thin_part_report

CSV_HEADER = ("D", "h", "vol", "nR_upper", "nR_exact", "thin_total", "ratio", "wall_ms")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SweepRow:
    D: int
    h: int | None
    vol: float | None
    nR_upper: int | None
    nR_exact: int | None
    thin_total: float | None
    ratio: float | None
    wall_ms: int
    error: str | None = None

    def csv_fields(self) -> list:
        return [_fmt(getattr(self, k)) for k in CSV_HEADER]

    @classmethod
    def from_csv(cls, rec: dict) -> "SweepRow":
        def num(key, conv):
            v = rec[key]
            return None if v == "" else conv(v)

        return cls(num("D", int), num("h", int), num("vol", float), num("nR_upper", int), num("nR_exact", int),
                   num("thin_total", float), num("ratio", float), num("wall_ms", int))

    def to_json(self) -> dict:
        return asdict(self)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def fundamental_discriminants(Dmin: int, Dmax: int) -> list:
    return [D for D in range(max(Dmin, 3), Dmax + 1) if is_fundamental_disc(D)]


def sweep_row(D: int, R: float, kappa=Fraction(1, 4), residue_ceiling: int = DEFAULT_RESIDUE_CEILING,
              timing: bool = True, mode: str = UPPER) -> SweepRow:
    """One CSV row.  The thin total comes from the upper census, or with
    ``mode="exact"`` from the exact census where the field allows it."""
    if mode not in (UPPER, EXACT):
        raise PreconditionError(f"unknown sweep mode {mode!r}")
    start = time.perf_counter()
    try:
        F = field_from_disc(D)
        h = class_number(F)
        vol = volume(F)
        upper = count_geodesics(F, R, UPPER, kappa, residue_ceiling)
        exact = count_geodesics(F, R, EXACT, kappa, residue_ceiling) if F.is_euclidean else None
        report = thin_part_report(F, R, census=exact if (mode == EXACT and exact) else upper)
        row = SweepRow(D, h, vol, upper.total, exact.total if exact else None, report.total, report.ratio, 0)
    except (PreconditionError, ResourceCeilingError) as exc:
        row = SweepRow(D, None, None, None, None, None, None, 0, f"{type(exc).__name__}: {exc}")
    wall = round((time.perf_counter() - start) * 1000) if timing else 0
    return SweepRow(**{**asdict(row), "wall_ms": wall})


def _row_task(args):
    return sweep_row(*args)


@dataclass(frozen=True)
class Fit:
    slope: float
    intercept: float
    residuals: tuple
    n: int


def fit_loglog(xs, ys) -> Fit:
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.asarray(ys, dtype=float))
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - (slope * x + intercept)
    return Fit(float(slope), float(intercept), tuple(float(r) for r in res), len(xs))


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    thin_fit: Fit | None
    volume_fit: Fit | None


def _fits(rows) -> tuple:
    good = [r for r in rows if r.error is None and r.thin_total and r.thin_total > 0]
    if len(good) < 2:
        return None, None
    Ds = [r.D for r in good]
    return fit_loglog(Ds, [r.thin_total for r in good]), fit_loglog(Ds, [r.vol for r in good])


def read_rows(path: str) -> list:
    with open(path, newline="") as fh:
        return [SweepRow.from_csv(rec) for rec in csv.DictReader(fh)]


def sweep(Dmin: int, Dmax: int, R: float, kappa=Fraction(1, 4), threads: int = 1,
          residue_ceiling: int = DEFAULT_RESIDUE_CEILING, done=(), timing: bool = True, progress=None,
          mode: str = UPPER) -> SweepResult:
    """Rows for every fundamental D in [Dmin, Dmax]; rows in ``done`` are reused."""
    if mode not in (UPPER, EXACT):
        raise PreconditionError(f"unknown sweep mode {mode!r}")
    if Dmin > Dmax:
        raise PreconditionError("empty discriminant range")
    Ds = fundamental_discriminants(Dmin, Dmax)
    if not Ds:
        raise PreconditionError("no fundamental discriminants in range")
    have = {r.D: r for r in done if Dmin <= r.D <= Dmax}
    todo = [D for D in Ds if D not in have]
    tasks = [(D, R, Fraction(kappa), residue_ceiling, timing, mode) for D in todo]
    fresh = []
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for row in pool.map(_row_task, tasks, chunksize=8):
                fresh.append(row)
                if progress:
                    progress(row)
    else:
        for t in tasks:
            row = _row_task(t)
            fresh.append(row)
            if progress:
                progress(row)
    rows = sorted(list(have.values()) + fresh, key=lambda r: r.D)
    thin, vol = _fits(rows)
    return SweepResult(tuple(rows), thin, vol)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def gnuplot_script(csv_path: str, result: SweepResult) -> str:
    lines = [
        "# columns: " + ",".join(CSV_HEADER),
        "set datafile separator ','",
        "set logscale xy",
        "set xlabel 'D'",
        "set key top left",
    ]
    plots = [f"'{csv_path}' using 1:6 every ::1 with points title 'thin total'",
             f"'{csv_path}' using 1:3 every ::1 with points title 'volume'"]
    if result.thin_fit is not None:
        f = result.thin_fit
        lines.append(f"thin(x) = exp({f.intercept!r}) * x**{f.slope!r}")
        plots.append(f"thin(x) title 'slope {f.slope:.4f}'")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def default_threads() -> int:
    env = os.environ.get("BIANCHILAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise PreconditionError(f"BIANCHILAB_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise PreconditionError("BIANCHILAB_THREADS must be positive")
        return n
    return 1


# --------------------------------------------------------------------------
# h_F(d)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HfdCount:
    D: int
    d: tuple
    upper: int
    exact: int | None


def is_valid_discriminant(F: QuadField, d) -> bool:
    """d nonzero, not a square, and a square modulo 4 O_F."""
    d = _coords(F, d)
    if d == (0, 0) or sqrt_in_field(F.from_coords(d)) is not None:
        return False
    for b in ((0, 0), (1, 0), (0, 1), (1, 1)):
        sq = F.mul(b, b)
        if (sq[0] - d[0]) % 4 == 0 and (sq[1] - d[1]) % 4 == 0:
            return True
    return False


def valid_discriminants(F: QuadField, max_norm: int) -> list:
    pts = _lattice_disk(F, 0j, math.sqrt(max_norm) + 1e-9)
    return sorted(d for d in pts if 0 < F.norm_xy(d) <= max_norm and is_valid_discriminant(F, d))


def hfd(F: QuadField, d, kappa=Fraction(1, 4), residue_ceiling: int = DEFAULT_RESIDUE_CEILING) -> HfdCount:
    """Classes of integral forms of discriminant d modulo SL2(O_F): orbits
    through the cover horoballs, deduplicated exactly on Euclidean fields."""
    d = _coords(F, d)
    if d == (0, 0):
        raise PreconditionError("degenerate: discriminant is zero")
    if sqrt_in_field(F.from_coords(d)) is not None:
        raise PreconditionError("degenerate: discriminant is a square")
    if not is_valid_discriminant(F, d):
        raise PreconditionError("not a discriminant: no b with b^2 = d mod 4")
    cover, _ = _checked_cover(F.abs_disc, Fraction(kappa))
    forms = []
    for j, (cusp, _) in enumerate(cover.entries):
        forms.extend(enumerate_forms_through_cusp(F, d, cusp, height_sq=cover.height_sq(j),
                                                  residue_ceiling=residue_ceiling))
    exact = None
    if F.is_euclidean:
        red = ford_reducer(F)
        exact = len({red.class_key(q) for q in forms})
    return HfdCount(F.abs_disc, d, len(forms), exact)


def hfd_bound_constant(counts, D: int, eps: float = 0.1) -> float:
    """Least C with h <= C (|d| D)^(1 + eps) over the given counts."""
    best = 0.0
    for c in counts:
        h = c.exact if c.exact is not None else c.upper
        best = max(best, h / (_modulus(c) * D) ** (1 + eps))
    return best


def _modulus(c: HfdCount) -> float:
    F = field_from_disc(c.D)
    return math.sqrt(F.norm_xy(c.d))

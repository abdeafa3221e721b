"""Command-line driver: ``bianchilab <subcommand> [options]``.

Exit codes: 0 success, 2 precondition error or bad usage, 3 resource ceiling.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bianchi, flats, oracle, qfield, spectrum, sweep as sweep_mod
from .errors import PreconditionError, ResourceCeilingError

SCHEMA_VERSION = sweep_mod.SCHEMA_VERSION
EXIT_OK, EXIT_PRECONDITION, EXIT_CEILING = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PRECONDITION, f"{self.prog}: error: {message}\n")


def _kappa(text: str) -> Fraction:
    try:
        k = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if k <= 0:
        raise argparse.ArgumentTypeError("kappa must be positive")
    return k


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _coords(text: str) -> tuple:
    """``x,y`` for x + y*omega, or a plain integer."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return (int(parts[0]), 0)
        if len(parts) == 2:
            return (int(parts[0]), int(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected an integer or 'x,y' coordinates, got {text!r}")


def _primes(text: str) -> tuple:
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated primes, got {text!r}") from None


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--precision", type=_positive_int, default=d(53), help="working precision in bits")
    p.add_argument("--kappa", type=_kappa, default=d(Fraction(1, 4)), help="horoball height constant (rational)")
    p.add_argument("--format", choices=("csv", "json"), default=d("json"), help="output format")
    p.add_argument("--threads", type=_positive_int, default=d(None),
                   help="worker processes (default: $BIANCHILAB_THREADS or 1)")
    p.add_argument("--residue-ceiling", type=_positive_int, default=d(flats.DEFAULT_RESIDUE_CEILING),
                   help="largest residue search allowed per form coefficient")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bianchilab", description="Geodesic counts and thin parts of Bianchi orbifolds.")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        _add_globals(p, suppress=True)
        return p

    p = cmd("field", "field invariants")
    p.add_argument("-D", type=int, required=True)
    p = cmd("volume", "covolume of SL2(O_F)")
    p.add_argument("-D", type=int, required=True)
    p = cmd("heegner", "cusp representatives and horoball heights")
    p.add_argument("-D", type=int, required=True)
    p = cmd("cover-verify", "check the horoball cover")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("--grid", type=_positive_int, default=12, help="height samples per decade")
    p = cmd("census", "closed geodesics of length <= R")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-R", type=float, required=True)
    p.add_argument("--mode", choices=(spectrum.UPPER, spectrum.EXACT), default=None)
    p = cmd("thin-part", "volume bound for the R-thin part")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-R", type=float, required=True)
    p.add_argument("--mode", choices=(spectrum.UPPER, spectrum.EXACT), default=None)
    p = cmd("sweep", "rows for every fundamental D in a range")
    p.add_argument("--Dmin", type=int, required=True)
    p.add_argument("--Dmax", type=int, required=True)
    p.add_argument("-R", type=float, required=True)
    p.add_argument("--output", "-o", help="write rows here instead of stdout")
    p.add_argument("--resume", action="store_true", help="reuse rows already present in --output")
    p.add_argument("--gnuplot", metavar="PATH", help="also write a gnuplot script for the CSV output")
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-stable output")
    p.add_argument("--mode", choices=(spectrum.UPPER, spectrum.EXACT), default=spectrum.UPPER,
                   help="census feeding thin_total (exact falls back to upper off Euclidean fields)")
    p = cmd("oracle-bfs", "word-enumeration census (Euclidean D)")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-L", type=int, required=True, help="word depth")
    p.add_argument("-R", type=float, required=True)
    p = cmd("vigneras", "conjugacy-class count over Q")
    p.add_argument("-t", type=int, help="trace")
    p.add_argument("-d", type=int, help="discriminant instead of t^2 - 4")
    p.add_argument("--S", type=_primes, default=(), help="comma-separated primes")
    p.add_argument("--T", type=_primes, default=(), help="comma-separated primes")
    p = cmd("jl-table", "coefficients of the S-product expansion")
    p.add_argument("--max-s", type=int, default=3)
    p = cmd("hfd", "classes of forms of discriminant d")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-d", type=_coords, required=True, help="integer or x,y over {1, omega}")
    return parser


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------

def _json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in r])
    return buf.getvalue()


def _emit(args, command: str, doc: dict, header, rows) -> str:
    if args.format == "json":
        return _json({"schema_version": SCHEMA_VERSION, "command": command, **doc})
    return _csv(header, rows)


def _xy(s) -> str:
    return f"{s[0]},{s[1]}"


def _high(v, precision: int):
    """Float at 53 bits, otherwise a decimal string with the requested precision."""
    if precision <= 53:
        return float(v)
    import mpmath

    return mpmath.nstr(v, int(precision * 0.30103), strip_zeros=False)


def _field(D: int):
    return qfield.field_from_disc(D)


def run_field(args) -> str:
    F = _field(args.D)
    forms = qfield.class_group(F)
    z = qfield.zeta2(F, args.precision)
    doc = {
        "D": F.abs_disc,
        "radicand": F.radicand,
        "omega_poly": [F.p, F.q],
        "h": len(forms),
        "units": F.units_count,
        "euclidean": F.is_euclidean,
        "zeta2": _high(z, args.precision),
        "class_group": [[f.a, f.b, f.c] for f in forms],
    }
    rows = [(F.abs_disc, F.radicand, len(forms), F.units_count, int(F.is_euclidean), doc["zeta2"])]
    return _emit(args, "field", doc, ("D", "radicand", "h", "units", "euclidean", "zeta2"), rows)


def run_volume(args) -> str:
    F = _field(args.D)
    v = bianchi.volume(F, args.precision)
    value = _high(v, args.precision)
    return _emit(args, "volume", {"D": F.abs_disc, "precision": args.precision, "volume": value},
                 ("D", "precision", "volume"), [(F.abs_disc, args.precision, value)])


def run_heegner(args) -> str:
    F = _field(args.D)
    cover = bianchi.horoball_cover(F, args.kappa)
    items = []
    for j, (c, Y) in enumerate(cover.entries):
        items.append({
            "alpha": _xy(c.alpha), "beta": _xy(c.beta), "norm_b": c.norm_b,
            "value": None if c.is_infinity else [c.value.real, c.value.imag],
            "height": Y, "height_sq": str(cover.height_sq(j)),
        })
    rows = [(i["alpha"], i["beta"], i["norm_b"], *(i["value"] or (None, None)), i["height"]) for i in items]
    return _emit(args, "heegner", {"D": F.abs_disc, "kappa": str(args.kappa), "cusps": items},
                 ("alpha", "beta", "norm_b", "re", "im", "height"), rows)


def run_cover_verify(args) -> str:
    F = _field(args.D)
    rep = bianchi.verify_cover(bianchi.horoball_cover(F, args.kappa), args.grid)
    doc = {"D": F.abs_disc, "kappa": str(args.kappa), "covered": rep.covered,
           "maxRequiredKappa": rep.max_required_kappa, "capped": rep.capped,
           "samples": rep.samples, "classes": rep.classes}
    return _emit(args, "cover-verify", doc, ("D", "kappa", "covered", "maxRequiredKappa", "capped"),
                 [(F.abs_disc, str(args.kappa), int(rep.covered), rep.max_required_kappa, int(rep.capped))])


CENSUS_HEADER = ("trace", "d", "length", "holonomy", "multiplicity", "primitive", "imprimitive", "singular")


def _census_rows(c: spectrum.GeodesicCensus) -> list:
    return [(_xy(r.trace), _xy(r.d), r.length, r.holonomy, r.multiplicity, r.primitive, r.imprimitive,
             ";".join(f"{o}:{n}" for o, n in r.singular)) for r in c.rows]


def run_census(args) -> str:
    F = _field(args.D)
    mode = args.mode or (spectrum.EXACT if F.is_euclidean else spectrum.UPPER)
    c = spectrum.count_geodesics(F, args.R, mode, args.kappa, args.residue_ceiling, args.threads)
    doc = {
        "D": c.D, "R": c.R, "mode": c.mode, "kappa": str(c.kappa), "total": c.total,
        "imprimitive_total": c.imprimitive_total, "cover_kappa": c.cover_kappa,
        "rows": [dict(zip(CENSUS_HEADER, r)) for r in _census_rows(c)],
    }
    return _emit(args, "census", doc, CENSUS_HEADER, _census_rows(c))


def run_thin_part(args) -> str:
    F = _field(args.D)
    rep = spectrum.thin_part_report(F, args.R, args.mode, args.kappa, args.residue_ceiling, threads=args.threads)
    doc = {"D": rep.D, "R": rep.R, "mode": rep.mode, "flats": rep.flats_term, "unipotent": rep.unipotent_term,
           "elliptic": rep.elliptic_term, "levi": rep.levi_term, "total": rep.total, "volume": rep.volume,
           "ratio": rep.ratio, "census_total": rep.census_total}
    header = ("D", "R", "mode", "flats", "unipotent", "elliptic", "levi", "total", "volume", "ratio")
    return _emit(args, "thin-part", doc, header, [tuple(doc[k] for k in header)])


def run_sweep(args) -> str:
    done = []
    if args.gnuplot and (not args.output or args.format != "csv"):
        raise PreconditionError("--gnuplot needs --output with --format csv")
    if args.resume:
        if not args.output:
            raise PreconditionError("--resume needs --output")
        if os.path.exists(args.output):
            if args.format != "csv":
                raise PreconditionError("--resume reads CSV output; use --format csv")
            done = sweep_mod.read_rows(args.output)
    res = sweep_mod.sweep(args.Dmin, args.Dmax, args.R, args.kappa, args.threads, args.residue_ceiling,
                          done=done, timing=not args.no_timing, mode=args.mode)
    if args.format == "csv":
        text = sweep_mod.rows_to_csv(res.rows)
    else:
        fit = lambda f: None if f is None else {"slope": f.slope, "intercept": f.intercept, "n": f.n,
                                                 "residuals": list(f.residuals)}
        text = _json({"schema_version": SCHEMA_VERSION, "command": "sweep", "R": args.R, "mode": args.mode,
                      "kappa": str(args.kappa), "rows": [r.to_json() for r in res.rows],
                      "thin_fit": fit(res.thin_fit), "volume_fit": fit(res.volume_fit)})
    if res.thin_fit is not None:
        print(f"thin slope {res.thin_fit.slope:.6f}  volume slope {res.volume_fit.slope:.6f}", file=sys.stderr)
    if args.gnuplot:
        with open(args.gnuplot, "w") as fh:
            fh.write(sweep_mod.gnuplot_script(args.output, res))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        return ""
    return text


def run_oracle(args) -> str:
    o = oracle.bfs_oracle(args.D, args.L, args.R)
    rows = [(_xy(r.trace), r.length, r.count) for r in o.rows]
    doc = {"D": o.D, "depth": o.depth, "R": o.R, "total": o.total, "completenessRadius": o.completeness_radius,
           "ball_size": o.ball_size, "rows": [dict(zip(("trace", "length", "count"), r)) for r in rows]}
    return _emit(args, "oracle-bfs", doc, ("trace", "length", "count"), rows)


def run_vigneras(args) -> str:
    if args.t is None and args.d is None:
        raise PreconditionError("give -t or -d")
    v = spectrum.vigneras_count(args.t or 0, args.S, args.T, d=args.d)
    doc = {"d": v.d, "S": list(args.S), "T": list(args.T), "count": str(v.raw), "normalized": str(v.normalized),
           "terms": [{"conductor": f, "class_number": h, "local": loc} for f, h, loc in v.terms]}
    return _emit(args, "vigneras", doc, ("d", "count", "normalized"), [(v.d, str(v.raw), str(v.normalized))])


def run_jl_table(args) -> str:
    if not 0 <= args.max_s <= 6:
        raise PreconditionError("--max-s must be between 0 and 6")
    tab = spectrum.determine_coefficients(args.max_s)
    rows = [(r.size, r.subset_size, str(r.solved), r.stated, r.expansion) for r in tab.rows]
    header = ("size", "subset_size", "solved", "stated", "expansion")
    doc = {"rows": [dict(zip(header, r)) for r in rows], "solved_reproduces": tab.solved_reproduces,
           "stated_holds": {str(k): v for k, v in tab.stated_holds.items()},
           "expansion_holds": {str(k): v for k, v in tab.expansion_holds.items()}}
    return _emit(args, "jl-table", doc, header, rows)


def run_hfd(args) -> str:
    F = _field(args.D)
    c = sweep_mod.hfd(F, args.d, args.kappa, args.residue_ceiling)
    doc = {"D": c.D, "d": _xy(c.d), "upper": c.upper, "exact": c.exact}
    return _emit(args, "hfd", doc, ("D", "d", "upper", "exact"), [(c.D, _xy(c.d), c.upper, c.exact)])


COMMANDS = {
    "field": run_field, "volume": run_volume, "heegner": run_heegner, "cover-verify": run_cover_verify,
    "census": run_census, "thin-part": run_thin_part, "sweep": run_sweep, "oracle-bfs": run_oracle,
    "vigneras": run_vigneras, "jl-table": run_jl_table, "hfd": run_hfd,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.threads is None:
            args.threads = sweep_mod.default_threads()
        out = COMMANDS[args.command](args)
    except PreconditionError as exc:
        print(f"bianchilab: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceCeilingError as exc:
        print(f"bianchilab: resource ceiling: {exc}", file=sys.stderr)
        return EXIT_CEILING
    sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

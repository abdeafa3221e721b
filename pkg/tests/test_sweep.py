import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact.errors import PreconditionError
from artifact.qfield import field_from_disc, is_fundamental_disc
from artifact.spectrum import count_geodesics, thin_part_report
from artifact.sweep import (
    SweepRow,
    default_threads,
    fit_loglog,
    fundamental_discriminants,
    gnuplot_script,
    hfd,
    hfd_bound_constant,
    is_valid_discriminant,
    read_rows,
    rows_to_csv,
    sweep,
    sweep_row,
    valid_discriminants,
)

Q_I = field_from_disc(4)
Q_3 = field_from_disc(3)


def test_fundamental_discriminants():
    assert fundamental_discriminants(1, 30) == [3, 4, 7, 8, 11, 15, 19, 20, 23, 24]


@given(st.floats(0.1, 3), st.floats(-2, 2))
def test_fit_recovers_power_law(k, c):
    xs = [3, 10, 40, 200, 1000]
    ys = [math.exp(c) * x ** k for x in xs]
    f = fit_loglog(xs, ys)
    assert f.slope == pytest.approx(k, abs=1e-9)
    assert f.intercept == pytest.approx(c, abs=1e-8)
    assert max(abs(r) for r in f.residuals) < 1e-9


def test_sweep_row_fields():
    row = sweep_row(4, 2.0, timing=False)
    assert (row.D, row.h, row.nR_exact, row.wall_ms, row.error) == (4, 1, 15, 0, None)
    assert row.nR_upper >= row.nR_exact
    assert row.ratio == pytest.approx(row.thin_total / row.vol)


def test_sweep_modes_pick_the_census():
    F = field_from_disc(4)
    upper = sweep_row(4, 2.0, timing=False)
    exact = sweep_row(4, 2.0, timing=False, mode="exact")
    assert upper.thin_total == thin_part_report(F, 2.0, census=count_geodesics(F, 2.0, "upper")).total
    assert exact.thin_total == thin_part_report(F, 2.0, census=count_geodesics(F, 2.0, "exact")).total
    assert exact.thin_total < upper.thin_total
    # no exact census off the Euclidean fields, so both modes agree there
    assert sweep_row(15, 2.0, timing=False, mode="exact") == sweep_row(15, 2.0, timing=False)
    with pytest.raises(PreconditionError):
        sweep(3, 10, 1.0, mode="both")


def test_sweep_row_reports_cover_failure():
    row = sweep_row(23, 2.0, kappa=Fraction(5, 2), timing=False)
    assert row.h is None and "PreconditionError" in row.error


def test_rows_roundtrip(tmp_path):
    res = sweep(3, 24, 1.5, timing=False)
    path = tmp_path / "rows.csv"
    path.write_text(rows_to_csv(res.rows))
    assert tuple(read_rows(str(path))) == res.rows
    assert "set logscale xy" in gnuplot_script(str(path), res)


def test_sweep_resume_reuses_rows():
    done = [SweepRow(3, 99, 1.0, 0, 0, 1.0, 1.0, 0)]
    res = sweep(3, 8, 1.0, done=done, timing=False)
    assert res.rows[0].h == 99
    assert [r.D for r in res.rows] == [3, 4, 7, 8]


def test_sweep_parallel_matches_serial():
    a = sweep(3, 60, 1.5, timing=False)
    b = sweep(3, 60, 1.5, threads=2, timing=False)
    assert a == b


def test_sweep_preconditions():
    with pytest.raises(PreconditionError):
        sweep(10, 5, 1.0)
    with pytest.raises(PreconditionError):
        sweep(5, 6, 1.0)


def test_volume_exponent_on_small_range():
    res = sweep(3, 300, 1.0, timing=False)
    # covolume is D^(3/2) times zeta_F(2) / (4 pi^2), and zeta_F(2) = zeta(2) L(2, chi)
    # with L(2, chi) between zeta(4)/zeta(2) and zeta(2)
    wobble = math.log((math.pi ** 2 / 6) ** 2) / math.log(300 / 3)
    assert abs(res.volume_fit.slope - 1.5) <= wobble


def test_default_threads(monkeypatch):
    monkeypatch.delenv("BIANCHILAB_THREADS", raising=False)
    assert default_threads() == 1
    monkeypatch.setenv("BIANCHILAB_THREADS", "6")
    assert default_threads() == 6
    monkeypatch.setenv("BIANCHILAB_THREADS", "six")
    with pytest.raises(PreconditionError):
        default_threads()


def test_valid_discriminants():
    assert is_valid_discriminant(Q_I, (5, 0))
    assert is_valid_discriminant(Q_I, (3, 0))  # 3 = i^2 mod 4
    assert not is_valid_discriminant(Q_I, (2, 0))
    assert not is_valid_discriminant(Q_I, (-4, 0))  # a square: (2i)^2
    assert not is_valid_discriminant(Q_I, (0, 0))
    for d in valid_discriminants(Q_I, 30):
        assert 0 < Q_I.norm_xy(d) <= 30
        # some b in O_F has b^2 = d mod 4, found here by a wider scan
        assert any(((x * x - y * y - d[0]) % 4, (2 * x * y - d[1]) % 4) == (0, 0)
                   for x in range(4) for y in range(4))


def test_hfd_small():
    c = hfd(Q_I, 5)
    assert (c.upper, c.exact) == (96, 2)
    assert hfd(Q_I, 3).exact == 1


def test_hfd_degenerate():
    with pytest.raises(PreconditionError, match="degenerate"):
        hfd(Q_I, -4)
    with pytest.raises(PreconditionError, match="degenerate"):
        hfd(Q_3, -3)
    with pytest.raises(PreconditionError):
        hfd(Q_I, 2)


def test_hfd_noneuclidean_upper_only():
    c = hfd(field_from_disc(15), 5)
    assert c.exact is None and c.upper > 0


def test_bound_constant():
    counts = [hfd(Q_I, d) for d in ((5, 0), (3, 0), (8, 4))]
    C = hfd_bound_constant(counts, 4)
    for c in counts:
        assert c.exact <= C * (math.sqrt(Q_I.norm_xy(c.d)) * 4) ** 1.1 * (1 + 1e-12)

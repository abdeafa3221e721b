import cmath
import math
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artifact.errors import PreconditionError
from artifact.flats import trace_length
from artifact.qfield import IntegralIdeal, field_from_disc, fundamental_unit, make_field
from artifact.spectrum import (
    EXACT,
    UPPER,
    census_traces,
    count_geodesics,
    decompose_trace,
    determine_coefficients,
    eichler_symbol,
    expansion_coefficient,
    fix_bound,
    galois_factor,
    index_bound,
    jl_comparison,
    levi_length_bound,
    levi_volume,
    lhs_product,
    narrow_class_number,
    short_disc_set,
    thin_part_report,
    unit_group_order,
    vigneras_count,
)

import oracles

Q_I = field_from_disc(4)
Q_3 = field_from_disc(3)


def test_short_disc_set_rational_rows():
    assert short_disc_set(1.5).rows == ()
    assert short_disc_set(3.0).discriminants == {5, 12}
    row = short_disc_set(2.0).rows[0]
    assert (row.d, row.trace, row.u) == (5, 3, 1)
    assert row.base_length == pytest.approx(2 * math.log(fundamental_unit(5).epsilon_plus))


@pytest.mark.parametrize("R", [2.5, 4.0, 5.5])
def test_short_disc_set_complete(R):
    # every d whose norm-one unit is short appears, checked by scanning u
    found = short_disc_set(R).discriminants
    tmax = 2 * math.cosh(R / 2)
    for d in range(2, 400):
        if d % 4 not in (0, 1) or math.isqrt(d) ** 2 == d:
            continue
        t, u = fundamental_unit(d).norm_one
        assert (t <= tmax + 1e-12) == (d in found)


def test_short_disc_set_with_field():
    rows = short_disc_set(2.0, Q_I).rows
    complex_traces = {r.trace for r in rows if not isinstance(r.d, int)}
    assert complex_traces == {(0, 1), (0, 2), (1, 1), (1, 2), (2, 1)}
    with pytest.raises(PreconditionError):
        short_disc_set(0)


def test_decompose_rational_power():
    ds = short_disc_set(2.0, Q_I)
    # 7 = V_2(3): the square of the trace-3 unit, and also -V_4(i)
    row, k, sign, _ = decompose_trace(Q_I, (7, 0), ds)
    assert (row.trace, k) in {(3, 2), ((0, 1), 4)}
    assert decompose_trace(Q_I, (3, 0), ds) is not None


def test_decompose_through_conjugate_row():
    # over Q(sqrt -3), 3 - w is minus the square of a unit whose trace is the
    # conjugate of the stored row 1 - w
    F = field_from_disc(3)
    row, k, sign, s = decompose_trace(F, (3, -1), short_disc_set(2.0, F))
    assert row.trace == (1, -1) and s == F.conj_xy((1, -1)) and (k, sign) == (2, -1)
    z = F.to_complex(s)
    eps = (z + cmath.sqrt(z * z - 4)) / 2
    assert -(eps ** 2 + eps ** -2) == pytest.approx(F.to_complex((3, -1)))


def test_census_traces_gaussian():
    assert census_traces(Q_I, 2.0) == [(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (3, 0)]


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_galois_factor(x, y):
    t = (x, y)
    f = galois_factor(Q_I, t)
    tbar = Q_I.conj_xy(t)
    assert f == (1 if tbar in (t, (-x, -y)) else 2)


# frozen from the word-enumeration oracle (test_oracle.py rederives them)
CENSUS = {(4, 1.0): 2, (4, 1.5): 8, (4, 2.0): 15, (3, 1.0): 4, (3, 1.5): 6, (3, 2.0): 17}


@pytest.mark.parametrize("D,R", sorted(CENSUS))
def test_exact_census_frozen(D, R):
    assert count_geodesics(field_from_disc(D), R, EXACT).total == CENSUS[(D, R)]


def test_gaussian_census_rows():
    census = count_geodesics(Q_I, 2.0, EXACT)
    rows = {r.trace: (r.multiplicity, r.primitive, r.imprimitive) for r in census.rows}
    assert rows == {
        (0, 1): (1, 2, 0),
        (1, 1): (2, 2, 0),
        (2, 1): (2, 1, 0),
        (0, 2): (1, 3, 0),
        (1, 2): (2, 2, 0),
        (3, 0): (1, 0, 2),
    }
    # every census trace decomposes over the short discriminants
    ds = short_disc_set(2.0, Q_I)
    assert all(decompose_trace(Q_I, r.trace, ds) for r in census.rows)


@pytest.mark.parametrize("D", [3, 4, 7])
def test_upper_bounds_exact(D):
    F = field_from_disc(D)
    for R in (1.5, 2.0):
        upper = count_geodesics(F, R, UPPER)
        exact = count_geodesics(F, R, EXACT)
        assert upper.total >= exact.total


def test_census_threads_match_serial():
    a = count_geodesics(Q_3, 2.0, EXACT)
    b = count_geodesics(Q_3, 2.0, EXACT, threads=2)
    assert a == b


def test_census_preconditions():
    with pytest.raises(PreconditionError):
        count_geodesics(field_from_disc(15), 2.0, EXACT)
    with pytest.raises(PreconditionError):
        count_geodesics(Q_I, 2.0, "fast")
    with pytest.raises(PreconditionError):
        count_geodesics(make_field(5), 2.0)
    with pytest.raises(PreconditionError):
        count_geodesics(Q_I, 2.0, kappa=Fraction(3))


def test_census_empty_below_first_trace():
    census = count_geodesics(field_from_disc(23), 0.5)
    assert census.rows == () and census.total == 0


def test_thin_part_terms_add_up():
    census = count_geodesics(Q_I, 2.0, EXACT)
    rep = thin_part_report(Q_I, 2.0, census=census)
    flats = sum((r.primitive - r.singular_count) * r.multiplicity * r.length for r in census.rows)
    elliptic = sum(o * c * r.multiplicity * r.length for r in census.rows for o, c in r.singular)
    assert rep.flats_term == pytest.approx(flats)
    assert rep.elliptic_term == pytest.approx(elliptic)
    assert rep.unipotent_term == pytest.approx(1.0)  # square lattice
    assert rep.levi_term == 0
    assert rep.total == pytest.approx(flats + elliptic + 1.0)
    assert rep.ratio == pytest.approx(rep.total / rep.volume)


def test_elliptic_term_weights_by_order():
    census = count_geodesics(Q_I, 2.0, EXACT)
    assert census.elliptic_rows == ()
    first = census.rows[0]
    marked = replace(census, rows=(replace(first, singular=((2, 1),)),) + census.rows[1:])
    plain = thin_part_report(Q_I, 2.0, census=census)
    rep = thin_part_report(Q_I, 2.0, census=marked)
    step = first.multiplicity * first.length
    assert rep.elliptic_term == pytest.approx(2 * step)
    assert rep.flats_term == pytest.approx(plain.flats_term - step)


@pytest.mark.parametrize("d", range(5, 300))
def test_narrow_class_number_against_cycles(d):
    if d % 4 not in (0, 1) or math.isqrt(d) ** 2 == d:
        return
    assert narrow_class_number(d) == oracles.indefinite_class_count(d, primitive=True)


def test_vigneras_trace_three():
    v = vigneras_count(3)
    assert v.d == 5 and v.count == 1
    assert vigneras_count(3, S=(2,)).count == 2  # chi_5(2) = -1
    assert vigneras_count(3, T=(2,)).count == 0


@pytest.mark.parametrize("d", [5, 8, 12, 21, 45, 60, 96, 145, 200])
def test_vigneras_against_cycles(d):
    assert vigneras_count(0, d=d).count == oracles.indefinite_class_count(d)


def test_vigneras_preconditions():
    with pytest.raises(PreconditionError):
        vigneras_count(2)
    with pytest.raises(PreconditionError):
        vigneras_count(3, S=(2,), T=(2,))
    with pytest.raises(PreconditionError):
        vigneras_count(0, d=7)


def test_eichler_symbols():
    assert eichler_symbol(3, 3, 5).symbol == 1
    assert eichler_symbol(1, 2, 5).symbol == -1
    assert eichler_symbol(1, 11, 5).symbol == 1
    assert eichler_symbol(1, 5, 5).symbol == 0


def test_coefficient_table():
    table = determine_coefficients(3)
    assert table.solved_reproduces
    assert all(table.expansion_holds.values())
    assert table.stated_holds == {0: True, 1: False, 2: False, 3: False}
    for row in table.rows:
        assert row.solved == expansion_coefficient(row.subset_size, row.size)


@given(st.lists(st.sampled_from([-1, 0, 1]), max_size=4), st.lists(st.sampled_from([-1, 0, 1]), max_size=3))
def test_expansion_identity(S, T):
    lhs, rhs = jl_comparison(S, T, expansion_coefficient)
    assert lhs == rhs == lhs_product(S, T)


def test_unit_group_orders():
    ideal = lambda n: IntegralIdeal.from_generators(Q_I, [(n, 0)])
    assert unit_group_order(ideal(3)) == 8  # inert
    assert unit_group_order(ideal(5)) == 16  # split
    assert unit_group_order(ideal(2)) == 2  # ramified
    assert levi_volume(ideal(3), 1.5) == pytest.approx(12.0)
    assert levi_length_bound(ideal(3), 4) == pytest.approx(math.log(4) + math.log(9))


def test_index_and_fix_bounds():
    assert index_bound(15) == 8
    assert index_bound(15, T=(2, 3)) == 4
    # q + 1 over residue sizes q <= 2 cosh(1) + 2, times 2^|T|
    assert fix_bound(2.0, T=(2,), residue_sizes=(2, 3, 5, 7)) == 3 * 4 * 6 * 2


def test_lengths_match_traces():
    for t in census_traces(Q_3, 2.0):
        length, _ = trace_length(Q_3, t)
        assert 0 < length <= 2.0 + 1e-12

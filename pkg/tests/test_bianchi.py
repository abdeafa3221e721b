import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from artifact.bianchi import (
    Point3,
    apply_matrix,
    cusp_shape_tau,
    heegner_points,
    heegner_tail_ratio,
    height_at,
    horoball_cover,
    ideal_points_in_disk,
    infinity_cusp,
    unipotent_stabilizer,
    unipotent_thin_volume,
    verify_cover,
    volume,
)
from artifact.errors import PreconditionError
from artifact.qfield import IntegralIdeal, field_from_disc, make_field

import oracles


@pytest.mark.parametrize("D", [3, 4, 7, 8, 11, 15, 19, 20, 23, 24])
def test_volume_against_epstein(D):
    mpmath.mp.dps = 30
    ref = oracles.covolume(D)
    assert abs(volume(field_from_disc(D)) - ref) / ref < 1e-12


def test_volume_gaussian_closed_form():
    # D^(3/2) zeta(2) G / (4 pi^2) with Catalan's constant G
    ref = 8 * mpmath.zeta(2) * mpmath.catalan / (4 * mpmath.pi ** 2)
    assert volume(field_from_disc(4)) == pytest.approx(float(ref), rel=1e-14)


def test_volume_high_precision():
    mpmath.mp.dps = 45
    v = volume(field_from_disc(3), precision=140)
    ref = oracles.covolume(3)
    assert abs(v - ref) < mpmath.mpf(10) ** -38


def test_volume_requires_imaginary():
    with pytest.raises(PreconditionError):
        volume(make_field(5))


def test_heegner_points_d23():
    F = field_from_disc(23)
    pts = heegner_points(F)
    assert pts[0].is_infinity
    finite = sorted((c.value for c in pts[1:]), key=lambda z: z.real)
    # (-b + sqrt -23) / 4 for the forms (2, +-1, 3)
    assert [round(z.real, 12) for z in finite] == [-0.25, 0.25]
    assert all(z.imag == pytest.approx(math.sqrt(23) / 4) for z in finite)
    assert all(c.norm_b == 2 for c in pts[1:])


def test_cover_heights_d23():
    cover = horoball_cover(field_from_disc(23))
    assert [cover.height_sq(j) for j in range(3)] == [Fraction(1, 368), Fraction(1, 92), Fraction(1, 92)]
    for j, (cusp, Y) in enumerate(cover.entries):
        assert Y * Y == pytest.approx(float(cover.height_sq(j)))


def test_cover_rejects_bad_kappa():
    with pytest.raises(PreconditionError):
        horoball_cover(field_from_disc(3), 0)


@pytest.mark.parametrize("D", [3, 4, 7, 15, 23, 47, 1003])
def test_cover_verified_at_quarter(D):
    report = verify_cover(horoball_cover(field_from_disc(D)))
    assert report.covered and not report.capped
    assert report.max_required_kappa > 1


def test_cover_verdict_monotone_in_kappa():
    F = field_from_disc(23)
    req = verify_cover(horoball_cover(F)).max_required_kappa
    assert verify_cover(horoball_cover(F, Fraction(1, 2))).covered
    assert not verify_cover(horoball_cover(F, Fraction(req) * 2)).covered


def test_verify_cover_resolution_floor():
    with pytest.raises(PreconditionError):
        verify_cover(horoball_cover(field_from_disc(3)), grid_resolution=4)


@settings(max_examples=50)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.01, 3), st.floats(-2, 2), st.floats(-2, 2))
def test_height_is_stabilizer_invariant(x, y, h, wr, wi):
    F = field_from_disc(23)
    cusp = heegner_points(F)[1]
    # w must lie in B^2; scaling any element of B^2 by an integer stays there
    B2 = cusp.ideal_b * cusp.ideal_b
    w = complex(round(wr)) * F.to_complex((B2.a, 0)) + complex(round(wi)) * F.to_complex((B2.b, B2.c))
    p = Point3(complex(x, y), h)
    g = unipotent_stabilizer(cusp, w)
    assert height_at(cusp, apply_matrix(g, p)) == pytest.approx(height_at(cusp, p), rel=1e-9)


def test_height_at_infinity():
    F = field_from_disc(4)
    assert height_at(infinity_cusp(F), Point3(0.3 + 0.1j, 0.7)) == 0.7


def test_point_needs_positive_height():
    with pytest.raises(PreconditionError):
        Point3(0j, 0.0)


def test_tau_trivial_cases():
    assert cusp_shape_tau(infinity_cusp(field_from_disc(4))) == pytest.approx(1.0)
    assert cusp_shape_tau(infinity_cusp(field_from_disc(3))) == pytest.approx(2 / math.sqrt(3))
    # O_F of Q(sqrt -23): |omega|^2 / covolume = 6 / (sqrt 23 / 2)
    assert cusp_shape_tau(infinity_cusp(field_from_disc(23))) == pytest.approx(12 / math.sqrt(23))


def test_tau_sum_d23():
    assert unipotent_thin_volume(field_from_disc(23)) == pytest.approx(12 / math.sqrt(23) + 2 * 1.2510864843424487)


@pytest.mark.parametrize("D", [23, 47, 71, 1003])
def test_tau_against_bruteforce_minima(D):
    F = field_from_disc(D)
    for cusp in heegner_points(F):
        B2 = cusp.ideal_b * cusp.ideal_b
        e1, e2 = F.to_complex((B2.a, 0)), F.to_complex((B2.b, B2.c))
        vecs = sorted(abs(i * e1 + j * e2) for i in range(-30, 31) for j in range(-30, 31) if (i, j) != (0, 0))
        a1 = vecs[0]
        # second minimum: shortest vector independent of the first
        v1 = next(i * e1 + j * e2 for i in range(-30, 31) for j in range(-30, 31)
                  if (i, j) != (0, 0) and abs(abs(i * e1 + j * e2) - a1) < 1e-12)
        a2 = min(abs(v) for v in (i * e1 + j * e2 for i in range(-30, 31) for j in range(-30, 31))
                 if abs((v * v1.conjugate()).imag) > 1e-9)
        covol = abs((e1.conjugate() * e2).imag)
        assert cusp_shape_tau(cusp) == pytest.approx(a2 * a2 / covol, rel=1e-12)


def test_ideal_points_in_disk_gaussian():
    pts = ideal_points_in_disk(IntegralIdeal.unit(field_from_disc(4)), 1.5)
    assert sorted(pts) == sorted((x, y) for x in (-1, 0, 1) for y in (-1, 0, 1) if (x, y) != (0, 0))


def test_tail_ratio():
    assert heegner_tail_ratio(field_from_disc(4)).trivial
    r = heegner_tail_ratio(field_from_disc(23), bound=0.1)
    assert r.ratio == pytest.approx(2 / 3)
    with pytest.raises(PreconditionError):
        heegner_tail_ratio(field_from_disc(23), bound=-1)

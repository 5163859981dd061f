import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from solitonlab.curvature import (dw_connection, dw_full_bundle, dw_ricci,
                                  dw_table, family_bundle, family_eigenvalues,
                                  family_weyl_sq, warp3_full_bundle,
                                  warp3_ricci)
from solitonlab.errors import PreconditionError
from solitonlab.families import (broken_family, constant_profile,
                                 cylinder_family, gaussian_family,
                                 power_profile, product_family, sin_profile,
                                 singular_steady_family, sphere_family)
from solitonlab.frames import (ricci_from_riemann, riemann_symmetry_residuals,
                               tensor_norm)

STEADY = singular_steady_family()
ONE = constant_profile(1.0)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_dw_ricci_singular_steady(s):
    got = dw_ricci(STEADY.p, STEADY.h, 0.0, s)
    expected = np.array([2 / 3, -2 / 9, -4 / 9, -4 / 9, -4 / 9]) / s**2
    assert_allclose(got, expected, rtol=1e-12)


def test_dw_ricci_product():
    fam = product_family(-1.0)
    got = dw_ricci(fam.p, fam.h, fam.k, 1.7)
    assert_allclose(got, (0.0, 0.0, -1.0, -1.0, -2.0), atol=1e-14)


def test_dw_ricci_flat():
    assert_allclose(dw_ricci(ONE, ONE, 0.0, 3.0), np.zeros(5), atol=1e-15)


def test_dw_ricci_rejects_broken_profiles():
    fam = broken_family()
    with pytest.raises(PreconditionError) as exc:
        dw_ricci(fam.p, fam.h, fam.k, 1.0)
    # p''/p = 0, h''/h = -1/4 at s = 1
    assert_allclose(exc.value.residual, 0.25, rtol=1e-12)


def test_dw_table_scalar_is_eigenvalue_sum():
    t = dw_table(power_profile(1.0, 0.4), power_profile(2.0, 0.4), -1.0, 1.3)
    assert_allclose(t.scalar, t.lam1 + t.lam2 + 2 * t.lam3, rtol=1e-14)


def test_dw_full_bundle_singular_steady():
    b = dw_full_bundle(STEADY.p, STEADY.h, 0.0, (1.0, 0.0, 0.8, 0.1))
    # R_1221 = -zeta_2' - zeta_2^2 = 2/9 at s = 1
    assert_allclose(b.riem[0, 1, 1, 0], 2.0 / 9.0, rtol=1e-13)
    assert_allclose(b.riem[0, 1, 1, 0], b.riem[0, 2, 2, 0], rtol=1e-13)
    assert_allclose(b.riem[0, 2, 2, 0], b.riem[0, 3, 3, 0], rtol=1e-13)
    # Ricci by contraction matches the closed-form eigenvalues
    assert_allclose(np.diag(b.ric), dw_ricci(STEADY.p, STEADY.h, 0.0, 1.0)[:4],
                    rtol=1e-12)
    assert_allclose(ricci_from_riemann(b.riem), b.ric, atol=1e-15)
    assert_allclose(b.scalar, np.trace(b.ric), rtol=1e-12)
    for v in riemann_symmetry_residuals(b.riem).values():
        assert v <= 1e-15
    assert b.weyl_norm_sq() > 1e-3
    assert np.max(np.abs(b.codazzi_residual)) <= 1e-14


def test_dw_full_bundle_flat_is_zero():
    b = dw_full_bundle(ONE, ONE, 0.0, (2.0, 0.0, 1.0, 0.0))
    assert np.max(np.abs(b.riem)) == 0.0
    assert np.max(np.abs(b.ric)) == 0.0
    assert b.scalar == 0.0
    assert np.max(np.abs(b.weyl)) == 0.0
    # only the flat-polar fiber term survives in the connection
    assert_allclose(b.christoffel[2, 3, 3], 1.0, rtol=1e-15)


@pytest.mark.parametrize("p, h, k", [
    (power_profile(1.0, 1.0 / 3.0), power_profile(1.0, 2.0 / 3.0), 0.0),
    (power_profile(1.0, 1.0), constant_profile(1.0), -1.0),
    (ONE, ONE, 0.0),
])
def test_dw_bundle_contraction_matches_dw_ricci(p, h, k):
    s = 1.4
    b = dw_full_bundle(p, h, k, (s, 0.0, 0.9, 0.3))
    eigs = dw_ricci(p, h, k, s)
    assert_allclose(np.diag(b.ric), eigs[:4], rtol=1e-12, atol=1e-15)
    assert_allclose(b.scalar, eigs[4], rtol=1e-12, atol=1e-15)


def test_dw_connection_values():
    conn = dw_connection(STEADY.p, STEADY.h, 0.0, 1.0, 2.0)
    assert_allclose((conn.zeta2, conn.zeta3), (1.0 / 3.0, 2.0 / 3.0), rtol=1e-15)
    assert_allclose(conn.beta4, 1.0 / 2.0, rtol=1e-15)  # u = r, h(1) = 1


def test_warp3_ricci_reference_values():
    assert_allclose(warp3_ricci(ONE, 1.0, 0.7), (0.0, 2.0, 6.0), atol=1e-15)
    assert_allclose(warp3_ricci(power_profile(1.0, 1.0), 1.0, 1.3),
                    (0.0, 0.0, 0.0), atol=1e-14)
    assert_allclose(warp3_ricci(ONE, 0.0, 2.0), (0.0, 0.0, 0.0), atol=1e-15)


def test_sphere_family_is_einstein():
    fam = sphere_family()
    for s in (0.5, 1.2, 2.4):
        l1, l2, l3, l4, scalar = family_eigenvalues(fam, s)
        assert_allclose([l1, l2, l3, l4], [3.0] * 4, rtol=1e-12)
        assert_allclose(scalar, 12.0, rtol=1e-12)


@pytest.mark.parametrize("h, k", [
    (ONE, 1.0), (ONE, -1.0), (power_profile(1.0, 1.0), 1.0),
    (sin_profile(), 1.0), (power_profile(2.0, 0.7), -0.5),
])
def test_warp3_is_conformally_flat(h, k):
    b = warp3_full_bundle(h, k, (1.1, 0.8, 1.2, 0.4))
    assert tensor_norm(b.weyl) <= 1e-10
    for v in riemann_symmetry_residuals(b.riem).values():
        assert v <= 1e-13


def test_warp3_bundle_connection_flat_chart():
    # gaussian family at h = s is flat R^4 in spherical coordinates, where
    # the frame connection coefficients are classical
    s, r, th = 2.0, 0.7, 1.1
    b = warp3_full_bundle(power_profile(1.0, 1.0), 1.0, (s, r, th, 0.3))
    gam = b.christoffel
    assert_allclose(gam[1, 1, 0], 1.0 / s, rtol=1e-14)            # zeta
    assert_allclose(gam[1, 2, 2], -math.cos(r) / (s * math.sin(r)), rtol=1e-13)
    assert_allclose(gam[2, 3, 3], -math.cos(th) / (math.sin(th) * s * math.sin(r)),
                    rtol=1e-13)
    # metric compatibility: antisymmetric in the last two frame slots
    assert np.max(np.abs(gam + gam.transpose(2, 1, 0))) <= 1e-15


def test_singular_steady_weyl_scaling():
    # |W|^2 * s^4 is the constant 16/243 along the singular steady family
    for s in (0.5, 1.0, 1.7, 2.0):
        assert_allclose(family_weyl_sq(STEADY, s) * s**4, 16.0 / 243.0, rtol=1e-12)


def test_product_weyl_norm():
    fam = product_family(-1.0)
    assert_allclose(family_weyl_sq(fam, 1.3), 4.0 / 3.0, rtol=1e-12)


def test_family_bundle_accepts_broken_family():
    b = family_bundle(broken_family(), (1.0, 0.0, 0.9, 0.3))
    assert np.max(np.abs(b.codazzi_residual)) > 1e-2


@pytest.mark.parametrize("fam", [STEADY, product_family(-1.0), gaussian_family(),
                                 cylinder_family(2.0), sphere_family()],
                         ids=lambda f: f.name)
def test_family_bundle_codazzi_vanishes_on_canonical(fam):
    point = (1.0, 0.8, 1.2, 0.4)
    b = family_bundle(fam, point)
    assert np.max(np.abs(b.codazzi_residual)) <= 5e-14

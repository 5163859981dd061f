import numpy as np
import pytest
from numpy.testing import assert_allclose

from solitonlab.curvature import family_eigenvalues
from solitonlab.errors import DomainError
from solitonlab.families import singular_steady_family
from solitonlab.frames import (Frame4, as_sym2, riemann_symmetry_residuals,
                               sym_eigen, tensor_norm, weyl_from_riemann)


def charpoly_roots(a):
    """Independent eigenvalue oracle: characteristic polynomial coefficients
    by the Faddeev-LeVerrier recursion, roots via the companion matrix."""
    n = a.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(a)
    for k in range(1, n + 1):
        M = a @ M + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ M) / k)
    roots = np.roots(coeffs)
    return np.sort(roots.real)[::-1]


def random_spd(rng, scale=1.0):
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    return q @ np.diag(rng.uniform(0.2, scale + 1.0, size=4)) @ q.T


def test_frame4_validation():
    Frame4("coordinate", ("s", "t", "x3", "x4"))
    with pytest.raises(ValueError):
        Frame4("coordinate", ("s", "s", "x3", "x4"))
    with pytest.raises(ValueError):
        Frame4("weird", ("s", "t", "x3", "x4"))


def test_as_sym2_rejects_asymmetric():
    m = np.eye(4)
    m[0, 1] = 1e-3
    with pytest.raises(ValueError):
        as_sym2(m)


def test_sym_eigen_diagonal():
    pairs = sym_eigen(np.diag([2.0, 2.0, 0.0, 0.0]), np.eye(4))
    assert_allclose([w for w, _ in pairs], [2.0, 2.0, 0.0, 0.0], atol=1e-14)


def test_sym_eigen_singular_steady_ricci():
    fam = singular_steady_family()
    l1, l2, l3, l4, _ = family_eigenvalues(fam, 1.0)
    pairs = sym_eigen(np.diag([l1, l2, l3, l4]), np.eye(4))
    assert_allclose([w for w, _ in pairs],
                    [2.0 / 3.0, -2.0 / 9.0, -4.0 / 9.0, -4.0 / 9.0], rtol=1e-13)


@pytest.mark.parametrize("seed", range(8))
def test_sym_eigen_matches_charpoly_oracle(seed):
    rng = np.random.default_rng(seed)
    t = rng.normal(size=(4, 4))
    t = 0.5 * (t + t.T)
    got = np.array([w for w, _ in sym_eigen(t, np.eye(4))])
    assert_allclose(got, charpoly_roots(t), rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_sym_eigen_generalized_residual_and_orthonormality(seed):
    rng = np.random.default_rng(100 + seed)
    t = rng.normal(size=(4, 4))
    t = 0.5 * (t + t.T)
    g = random_spd(rng)
    pairs = sym_eigen(t, g)
    scale = max(np.max(np.abs(t)), 1.0)
    V = np.column_stack([v for _, v in pairs])
    for w, v in pairs:
        assert np.max(np.abs(t @ v - w * (g @ v))) <= 1e-12 * scale
    assert_allclose(V.T @ g @ V, np.eye(4), atol=1e-12)
    ws = [w for w, _ in pairs]
    assert ws == sorted(ws, reverse=True)


@pytest.mark.parametrize("seed", range(6))
def test_sym_eigen_rotation_invariance(seed):
    rng = np.random.default_rng(200 + seed)
    t = rng.normal(size=(4, 4))
    t = 0.5 * (t + t.T)
    q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    w0 = [w for w, _ in sym_eigen(t, np.eye(4))]
    w1 = [w for w, _ in sym_eigen(q.T @ t @ q, np.eye(4))]
    assert_allclose(w0, w1, atol=1e-10)


def test_sym_eigen_rejects_indefinite_metric():
    with pytest.raises(DomainError):
        sym_eigen(np.eye(4), np.diag([1.0, 1.0, 1.0, -1.0]))


@pytest.mark.parametrize("seed", range(4))
def test_weyl_vanishes_for_constant_curvature(seed):
    rng = np.random.default_rng(300 + seed)
    g = random_spd(rng) if seed else np.eye(4)
    kappa = rng.uniform(-2.0, 2.0)
    gg_iljk = np.einsum("il,jk->ijkl", g, g)
    gg_ikjl = np.einsum("ik,jl->ijkl", g, g)
    riem = kappa * (gg_iljk - gg_ikjl)
    ginv = np.linalg.inv(g)
    ric = np.einsum("ab,jabl->jl", ginv, riem)
    assert_allclose(ric, 3.0 * kappa * g, atol=1e-12)
    scalar = np.einsum("ij,ij->", ginv, ric)
    w = weyl_from_riemann(riem, ric, scalar, g)
    assert np.max(np.abs(w)) <= 1e-12 * max(1.0, abs(kappa))


@pytest.mark.parametrize("seed", range(4))
def test_weyl_is_totally_trace_free(seed):
    rng = np.random.default_rng(400 + seed)
    r = rng.normal(size=(4, 4, 4, 4))
    r = r - r.transpose(1, 0, 2, 3)
    r = r - r.transpose(0, 1, 3, 2)
    r = r + r.transpose(2, 3, 0, 1)
    g = np.eye(4)
    ric = np.einsum("jiil->jl", r)
    scalar = float(np.trace(ric))
    w = weyl_from_riemann(r, ric, scalar, g)
    trace = np.einsum("ijil->jl", w)
    assert np.max(np.abs(trace)) <= 1e-10 * max(1.0, np.max(np.abs(r)))


def test_tensor_norm_zero_and_ricci():
    assert tensor_norm(np.zeros((4, 4)), np.eye(4)) == 0.0
    fam = singular_steady_family()
    l1, l2, l3, l4, _ = family_eigenvalues(fam, 1.0)
    got = tensor_norm(np.diag([l1, l2, l3, l4]), np.eye(4))
    assert_allclose(got, 8.0 / 9.0, rtol=1e-13)


def test_tensor_norm_is_frame_invariant():
    rng = np.random.default_rng(7)
    t = rng.normal(size=(4, 4))
    t = 0.5 * (t + t.T)
    # push both the tensor and the metric through a coordinate change
    J = rng.normal(size=(4, 4)) + 4.0 * np.eye(4)
    g = random_spd(rng)
    t2 = J.T @ t @ J
    g2 = J.T @ g @ J
    assert_allclose(tensor_norm(t2, g2), tensor_norm(t, g), rtol=1e-10)


def test_riemann_symmetry_residuals_flag_violations():
    r = np.zeros((4, 4, 4, 4))
    r[0, 1, 1, 0] = 1.0  # deliberately not antisymmetrized
    res = riemann_symmetry_residuals(r)
    assert res["antisym_first"] > 0.5

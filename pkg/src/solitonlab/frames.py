"""Rank-2 and rank-4 tensor algebra in a fixed 4-dimensional frame.

Tensors are plain ``numpy`` arrays: a symmetric 2-tensor is a ``(4, 4)``
array, a curvature-type 4-tensor a ``(4, 4, 4, 4)`` array.  Components of a
4-tensor follow the convention ``R[i, j, k, l] = <R(E_i, E_j) E_k, E_l>``
with ``R(X, Y) = grad_X grad_Y - grad_Y grad_X - grad_[X,Y]``, so the
sectional curvature of the (E_i, E_j) plane is ``R[i, j, j, i]`` and a space
of constant curvature c has ``R[i, j, k, l] = c (g_il g_jk - g_ik g_jl)``.
The Ricci tensor is the contraction ``Ric_jl = sum_i R[j, i, i, l]`` (indices
raised with g in a non-orthonormal frame), which makes ``Ric = 3c g`` on a
constant-curvature 4-space and reproduces the warped-product tables used in
:mod:`solitonlab.curvature`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DIM = 4

_JACOBI_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 64


@dataclass(frozen=True)
class Frame4:
    """A declared frame: four distinct labels, orthonormal or coordinate."""

    kind: str
    labels: tuple[str, str, str, str]

    def __post_init__(self):
        if self.kind not in ("orthonormal", "coordinate"):
            raise ValueError(f"unknown frame kind {self.kind!r}")
        if len(self.labels) != DIM or len(set(self.labels)) != DIM:
            raise ValueError("a frame needs exactly 4 distinct labels")


ORTHONORMAL = Frame4("orthonormal", ("e1", "e2", "e3", "e4"))


def as_sym2(m, tol: float = 0.0) -> np.ndarray:
    """Validate and return a (4, 4) symmetric array.

    With ``tol == 0`` the components must be symmetric exactly; a positive
    tolerance symmetrizes numerically produced input after checking the
    asymmetry stays below ``tol``.
    """
    a = np.asarray(m, dtype=float)
    if a.shape != (DIM, DIM):
        raise ValueError(f"expected a (4, 4) array, got {a.shape}")
    asym = np.max(np.abs(a - a.T))
    if asym > tol:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return 0.5 * (a + a.T) if tol > 0 else a


def riemann_symmetry_residuals(riem: np.ndarray) -> dict[str, float]:
    """Max violation of each algebraic curvature symmetry.

    Keys: ``antisym_first`` (i <-> j), ``antisym_last`` (k <-> l),
    ``pair`` ((ij) <-> (kl)) and ``bianchi`` (first Bianchi cyclic sum).
    """
    r = np.asarray(riem, dtype=float)
    return {
        "antisym_first": float(np.max(np.abs(r + np.swapaxes(r, 0, 1)))),
        "antisym_last": float(np.max(np.abs(r + np.swapaxes(r, 2, 3)))),
        "pair": float(np.max(np.abs(r - np.transpose(r, (2, 3, 0, 1))))),
        "bianchi": float(
            np.max(
                np.abs(r + np.transpose(r, (1, 2, 0, 3)) + np.transpose(r, (2, 0, 1, 3)))
            )
        ),
    }


def _cholesky_spd(g: np.ndarray) -> np.ndarray:
    try:
        L = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise DomainError("metric is not positive definite") from exc
    if not np.all(np.isfinite(L)):
        raise DomainError("metric is not positive definite")
    return L


def _jacobi_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization of a small symmetric matrix.

    Returns (eigenvalues, eigenvectors-as-columns), unsorted.  Iterates full
    sweeps until the off-diagonal Frobenius norm drops below ``_JACOBI_TOL``
    relative to the matrix scale.
    """
    n = a.shape[0]
    A = np.array(a, dtype=float)
    V = np.eye(n)
    scale = max(float(np.max(np.abs(A))), 1.0)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.sqrt(sum(A[p, q] ** 2 for p in range(n) for q in range(p + 1, n)) * 2.0)
        if off <= _JACOBI_TOL * scale:
            break
        for p in range(n):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                # classical Jacobi rotation annihilating A[p, q]
                theta = 0.5 * (A[q, q] - A[p, p]) / apq
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                A = rot.T @ A @ rot
                V = V @ rot
    w = np.diag(A).copy()
    return w, V


def sym_eigen(t, g=None) -> list[tuple[float, np.ndarray]]:
    """g-orthonormal eigenpairs of a symmetric 2-tensor t relative to g.

    Solves the generalized problem ``t v = w g v`` for positive definite g by
    Cholesky reduction followed by a cyclic Jacobi diagonalization.  Returns
    the four pairs sorted by descending eigenvalue; the eigenvectors satisfy
    ``v_i^T g v_j = delta_ij``.  Rounding-level asymmetry in the inputs (as
    produced by matrix products) is symmetrized away.
    """
    t = np.asarray(t, dtype=float)
    t = as_sym2(t, tol=1e-12 * max(1.0, float(np.max(np.abs(t)))))
    if g is None:
        g = np.eye(DIM)
    else:
        g = np.asarray(g, dtype=float)
        g = as_sym2(g, tol=1e-12 * max(1.0, float(np.max(np.abs(g)))))
    L = _cholesky_spd(g)
    Linv = np.linalg.inv(L)
    B = Linv @ t @ Linv.T
    B = 0.5 * (B + B.T)
    w, Y = _jacobi_eigh(B)
    V = Linv.T @ Y
    order = np.argsort(-w, kind="stable")
    return [(float(w[i]), V[:, i].copy()) for i in order]


def weyl_from_riemann(riem, ric, scalar: float, g) -> np.ndarray:
    """Weyl part of a curvature tensor in dimension four.

    Subtracts the Ricci and scalar parts of the standard orthogonal
    decomposition, with signs matched to the component convention stated in
    the module docstring so that a constant-curvature input yields zero:

    ``W_ijkl = R_ijkl + (g_ik A_jl - g_il A_jk + g_jl A_ik - g_jk A_il) / 2
      - (R / 6) (g_ik g_jl - g_il g_jk)``
    """
    r = np.asarray(riem, dtype=float)
    ric = np.asarray(ric, dtype=float)
    ric = as_sym2(ric, tol=1e-9 * max(1.0, float(np.max(np.abs(ric)))))
    g = np.asarray(g, dtype=float)
    g = as_sym2(g, tol=1e-12 * max(1.0, float(np.max(np.abs(g)))))
    gr = np.einsum("ik,jl->ijkl", g, ric)  # gr[i,j,k,l] = g_ik Ric_jl
    gg = np.einsum("ik,jl->ijkl", g, g)
    kulkarni = gr - gr.transpose(0, 1, 3, 2) + gr.transpose(1, 0, 3, 2) - gr.transpose(1, 0, 2, 3)
    metric_part = gg - gg.transpose(0, 1, 3, 2)
    return r + 0.5 * kulkarni - (scalar / 6.0) * metric_part


def tensor_norm(t, g=None) -> float:
    """Squared g-norm of a tensor with all indices raised by g^{-1}."""
    t = np.asarray(t, dtype=float)
    if g is None:
        g = np.eye(DIM)
    else:
        g = np.asarray(g, dtype=float)
        g = as_sym2(g, tol=1e-12 * max(1.0, float(np.max(np.abs(g)))))
    _cholesky_spd(g)  # positive-definiteness gate
    ginv = np.linalg.inv(g)
    up = t
    for axis in range(t.ndim):
        up = np.tensordot(up, ginv, axes=([axis], [0]))
        up = np.moveaxis(up, -1, axis)
    return float(np.tensordot(up, t, axes=t.ndim))


def ricci_from_riemann(riem, g=None) -> np.ndarray:
    """Contract a curvature 4-tensor to its Ricci tensor, ``sum_i R[j,i,i,l]``."""
    r = np.asarray(riem, dtype=float)
    if g is None:
        return np.einsum("jiil->jl", r)
    ginv = np.linalg.inv(as_sym2(g))
    return np.einsum("ab,jabl->jl", ginv, r)


def scalar_from_ricci(ric, g=None) -> float:
    ric = np.asarray(ric, dtype=float)
    if g is None:
        return float(np.trace(ric))
    return float(np.einsum("ij,ij->", np.linalg.inv(as_sym2(g)), ric))

"""Finite-difference curvature on uniform coordinate grids.

This is the brute-force oracle for the closed-form results: it knows nothing
about warped structure, takes raw metric components g_ij on a 4-d product
grid, and produces Christoffel symbols, Riemann/Ricci/scalar/Weyl curvature
and the Codazzi residual of Ric - (R/6) g by 4th-order central differences.

Stencils are fixed at 5 points.  First and second metric derivatives are
taken at the node itself; the covariant derivative of Ricci is assembled
from Ricci values at stencil neighbors, so the Codazzi residual needs a
margin of 4 nodes while plain curvature needs 2.

Grids can carry a different node count per axis.  Accuracy is set by the
spacing, not the count, so axes the metric does not vary along (Killing
directions of the families) only need the minimal 2*margin+1 nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GridBoundaryError
from .families import KIND_WARPED3, MetricFamily, fiber_profile_eval
from .frames import DIM, Frame4
from .curvature import CurvatureBundle

MARGIN_CURVATURE = 2
MARGIN_CODAZZI = 4

# 4th-order central stencils on 5 points
_D1_W = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2_W = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFFSETS = np.array([-2, -1, 0, 1, 2])

_TRIU = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]


@dataclass(frozen=True)
class MetricGrid:
    """Uniform 4-d coordinate grid carrying metric components per node."""

    axes: tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    g: np.ndarray  # shape (n1, n2, n3, n4, 4, 4)
    margin: int = MARGIN_CODAZZI

    def __post_init__(self):
        if len(self.axes) != DIM:
            raise ValueError("need 4 coordinate axes")
        if self.margin < MARGIN_CURVATURE:
            raise ValueError("margin must be at least 2")
        for ax in self.axes:
            d = np.diff(ax)
            if len(d) == 0 or np.any(d <= 0):
                raise ValueError("axes must be strictly increasing")
            if np.max(np.abs(d - d[0])) > 1e-12 * max(1.0, abs(d[0])):
                raise ValueError("axes must be uniformly spaced")
        shape = tuple(len(ax) for ax in self.axes) + (DIM, DIM)
        if self.g.shape != shape:
            raise ValueError(f"metric array shape {self.g.shape} != {shape}")
        if np.max(np.abs(self.g - np.swapaxes(self.g, -1, -2))) > 1e-12:
            raise ValueError("metric components must be symmetric")
        _assert_positive_definite(self.g)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return tuple(len(ax) for ax in self.axes)

    @property
    def spacings(self) -> np.ndarray:
        return np.array([ax[1] - ax[0] for ax in self.axes])

    def point(self, node) -> tuple[float, float, float, float]:
        return tuple(float(self.axes[i][node[i]]) for i in range(DIM))

    def interior(self, node, margin: int | None = None) -> bool:
        margin = self.margin if margin is None else margin
        return all(margin <= node[i] <= self.shape[i] - 1 - margin for i in range(DIM))

    def require_interior(self, node, margin: int | None = None) -> None:
        if not self.interior(node, margin):
            raise GridBoundaryError(
                f"node {tuple(node)} too close to the boundary of {self.shape}")

    def interior_nodes(self, margin: int | None = None) -> np.ndarray:
        margin = self.margin if margin is None else margin
        ranges = [np.arange(margin, n - margin) for n in self.shape]
        mesh = np.meshgrid(*ranges, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


def _assert_positive_definite(g: np.ndarray) -> None:
    flat = g.reshape(-1, DIM, DIM)
    step = 262144
    for lo in range(0, flat.shape[0], step):
        try:
            np.linalg.cholesky(flat[lo:lo + step])
        except np.linalg.LinAlgError as exc:
            raise ValueError("metric is not positive definite on the grid") from exc


def fd_partial(field: np.ndarray, spacings, axis: int, order: int, node) -> float:
    """4th-order central difference of a grid scalar field at a node.

    Exact on polynomials of degree <= 4 (order 1) and <= 5 (order 2), up to
    rounding.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    n = field.shape[axis]
    if not MARGIN_CURVATURE <= node[axis] <= n - 1 - MARGIN_CURVATURE:
        raise GridBoundaryError(f"node {tuple(node)} too close to the boundary")
    idx = list(node)
    vals = np.empty(5)
    for j, off in enumerate(_OFFSETS):
        idx[axis] = node[axis] + off
        vals[j] = field[tuple(idx)]
    # both stencils annihilate constants; subtracting the center value makes
    # that cancellation exact in floating point as well
    vals -= vals[2]
    h = spacings[axis]
    if order == 1:
        return float(vals @ _D1_W / h)
    return float(vals @ _D2_W / (h * h))


# ---------------------------------------------------------------------------
# batched derivative machinery

def _gather(g: np.ndarray, nodes: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """g values at nodes + offsets; nodes (N, 4), offsets (N, 4) or (4,)."""
    pos = nodes + offsets
    return g[pos[:, 0], pos[:, 1], pos[:, 2], pos[:, 3]]


def _metric_derivs(grid: MetricGrid, nodes: np.ndarray):
    """(g, dg, d2g) at a batch of nodes: dg[n,l,a,b] = d_l g_ab and
    d2g[n,l,m,a,b] = d_l d_m g_ab."""
    g = grid.g
    h = grid.spacings
    N = nodes.shape[0]
    g0 = _gather(g, nodes, np.zeros(DIM, dtype=int))
    dg = np.zeros((N, DIM, DIM, DIM))
    d2g = np.zeros((N, DIM, DIM, DIM, DIM))
    # center-value subtraction makes the annihilation of constants exact
    for l in range(DIM):
        e = np.zeros(DIM, dtype=int)
        stack = []
        for off in _OFFSETS:
            e[l] = off
            stack.append(_gather(g, nodes, e) - g0)
        stack = np.stack(stack)  # (5, N, 4, 4)
        dg[:, l] = np.tensordot(_D1_W, stack, axes=(0, 0)) / h[l]
        d2g[:, l, l] = np.tensordot(_D2_W, stack, axes=(0, 0)) / h[l] ** 2
    for l in range(DIM):
        for m in range(l + 1, DIM):
            acc = np.zeros((N, DIM, DIM))
            for i, oi in enumerate(_OFFSETS):
                if _D1_W[i] == 0.0:
                    continue
                for j, oj in enumerate(_OFFSETS):
                    if _D1_W[j] == 0.0:
                        continue
                    e = np.zeros(DIM, dtype=int)
                    e[l], e[m] = oi, oj
                    acc += (_D1_W[i] * _D1_W[j]) * (_gather(g, nodes, e) - g0)
            acc /= h[l] * h[m]
            d2g[:, l, m] = acc
            d2g[:, m, l] = acc
    return g0, dg, d2g


def _curvature_batch(grid: MetricGrid, nodes: np.ndarray):
    """(g0, ginv, gam, riem, ric, scalar) at a batch of interior nodes."""
    g0, dg, d2g = _metric_derivs(grid, nodes)
    ginv = np.linalg.inv(g0)
    # bracket[n,a,b,d] = d_a g_db + d_b g_da - d_d g_ab   (dg[n,l,i,j] = d_l g_ij)
    bracket = (np.einsum("nadb->nabd", dg) + np.einsum("nbda->nabd", dg)
               - np.einsum("ndab->nabd", dg))
    gam = 0.5 * np.einsum("ncd,nabd->ncab", ginv, bracket)
    # d_l of the bracket and of g^{-1}, for d_l Gamma^c_ab
    dbracket = (np.einsum("nladb->nlabd", d2g) + np.einsum("nlbda->nlabd", d2g)
                - np.einsum("nldab->nlabd", d2g))
    dginv = -np.einsum("ncp,nlpq,nqd->nlcd", ginv, dg, ginv)
    dgam = (0.5 * np.einsum("nlcd,nabd->nlcab", dginv, bracket)
            + 0.5 * np.einsum("ncd,nlabd->nlcab", ginv, dbracket))
    # R^c_ijk = d_i Gamma^c_jk - d_j Gamma^c_ik
    #           + Gamma^m_jk Gamma^c_im - Gamma^m_ik Gamma^c_jm
    rup = (np.einsum("nicjk->ncijk", dgam) - np.einsum("njcik->ncijk", dgam)
           + np.einsum("nmjk,ncim->ncijk", gam, gam)
           - np.einsum("nmik,ncjm->ncijk", gam, gam))
    riem = np.einsum("nlm,nmijk->nijkl", g0, rup)
    ric = np.einsum("nab,njabl->njl", ginv, riem)
    scalar = np.einsum("njl,njl->n", ginv, ric)
    return g0, ginv, gam, riem, ric, scalar


def _weyl_batch(riem, ric, scalar, g0):
    kulkarni = (np.einsum("nik,njl->nijkl", g0, ric)
                - np.einsum("nil,njk->nijkl", g0, ric)
                + np.einsum("njl,nik->nijkl", g0, ric)
                - np.einsum("njk,nil->nijkl", g0, ric))
    metric_part = (np.einsum("nik,njl->nijkl", g0, g0)
                   - np.einsum("nil,njk->nijkl", g0, g0))
    return riem + 0.5 * kulkarni - (scalar[:, None, None, None, None] / 6.0) * metric_part


def _ricci_simple(grid: MetricGrid, nodes: np.ndarray):
    _, _, _, _, ric, scalar = _curvature_batch(grid, nodes)
    return ric, scalar


def _codazzi_batch(grid: MetricGrid, nodes: np.ndarray, g0, ginv, gam, ric, scalar):
    """Codazzi residual C_kij = cov_k Ric_ij - cov_i Ric_kj
    + (d_i R / 6) g_kj - (d_k R / 6) g_ij at the batch nodes."""
    N = nodes.shape[0]
    h = grid.spacings
    dric = np.zeros((N, DIM, DIM, DIM))
    dscal = np.zeros((N, DIM))
    for l in range(DIM):
        ric_stack, scal_stack = [], []
        for off in _OFFSETS:
            if off == 0:
                ric_stack.append(np.zeros_like(ric))
                scal_stack.append(np.zeros_like(scalar))
                continue
            e = np.zeros(DIM, dtype=int)
            e[l] = off
            r_n, s_n = _ricci_simple(grid, nodes + e)
            ric_stack.append(r_n - ric)
            scal_stack.append(s_n - scalar)
        dric[:, l] = np.tensordot(_D1_W, np.stack(ric_stack), axes=(0, 0)) / h[l]
        dscal[:, l] = np.tensordot(_D1_W, np.stack(scal_stack), axes=(0, 0)) / h[l]
    cov = (dric - np.einsum("nmki,nmj->nkij", gam, ric)
           - np.einsum("nmkj,nim->nkij", gam, ric))
    c = (cov - cov.transpose(0, 2, 1, 3)
         + np.einsum("ni,nkj->nkij", dscal, g0) / 6.0
         - np.einsum("nk,nij->nkij", dscal, g0) / 6.0)
    return c


def fd_ricci_block(grid: MetricGrid, nodes) -> dict[str, np.ndarray]:
    """Batched Ricci/scalar (with the node metrics) at interior nodes."""
    nodes = np.atleast_2d(np.asarray(nodes, dtype=int))
    for node in nodes:
        grid.require_interior(node, MARGIN_CURVATURE)
    g0, _, _, _, ric, scalar = _curvature_batch(grid, nodes)
    return {"g": g0, "ric": ric, "scalar": scalar}


def fd_curvature(grid: MetricGrid, node) -> CurvatureBundle:
    """Full curvature bundle (coordinate frame) at one interior node.

    Needs the full Codazzi margin (4 nodes) on every axis.
    """
    node = tuple(int(i) for i in node)
    grid.require_interior(node, MARGIN_CODAZZI)
    nodes = np.array([node])
    g0, ginv, gam, riem, ric, scalar = _curvature_batch(grid, nodes)
    weyl = _weyl_batch(riem, ric, scalar, g0)
    codazzi = _codazzi_batch(grid, nodes, g0, ginv, gam, ric, scalar)
    labels = tuple(f"x{i+1}" for i in range(DIM))
    return CurvatureBundle(Frame4("coordinate", labels), g0[0], gam[0], riem[0],
                           ric[0], float(scalar[0]), weyl[0], codazzi[0])


def fd_codazzi_block(grid: MetricGrid, nodes) -> np.ndarray:
    nodes = np.atleast_2d(np.asarray(nodes, dtype=int))
    for node in nodes:
        grid.require_interior(node, MARGIN_CODAZZI)
    g0, ginv, gam, riem, ric, scalar = _curvature_batch(grid, nodes)
    return _codazzi_batch(grid, nodes, g0, ginv, gam, ric, scalar)


# ---------------------------------------------------------------------------
# grid construction from families

def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _profile_values(profile, axis: np.ndarray) -> np.ndarray:
    return np.array([profile.value(float(s)) for s in axis])


def grid_from_family(m: MetricFamily, s_range=(0.5, 2.0), n_s: int = 129,
                     r_range=None, n_r: int | None = None,
                     cross_nodes: int = 2 * MARGIN_CODAZZI + 1) -> MetricGrid:
    """Sample a family chart onto a MetricGrid.

    The s and fiber-radial axes get full resolution; axes the metric does
    not vary along (t, phi; theta for 2-d fibers) get ``cross_nodes`` nodes
    at the s-spacing.  For warped3 the theta axis also uses the s-spacing,
    centered at theta = pi/2.
    """
    lo, hi = float(s_range[0]), float(s_range[1])
    ds = (hi - lo) / (n_s - 1)
    n_r = n_s if n_r is None else n_r
    if r_range is None:
        r_range = (0.6, 2.1) if m.k > 0 else (0.5, 2.0)
    rlo, rhi = float(r_range[0]), float(r_range[1])
    dr = (rhi - rlo) / (n_r - 1)
    if rlo < 10.0 * dr:
        raise DomainError("fiber radial range must stay 10 spacings away from u = 0")
    s_ax = _axis(lo, hi, n_s)
    r_ax = _axis(rlo, rhi, n_r)
    cross = lambda center: center + ds * (np.arange(cross_nodes) - (cross_nodes - 1) / 2)
    h_vals = _profile_values(m.h, s_ax)
    u_vals = np.array([fiber_profile_eval(m.fiber, float(r))[0] for r in r_ax])
    if m.kind == KIND_WARPED3:
        th_ax = cross(math.pi / 2.0)
        axes = (s_ax, r_ax, th_ax, cross(0.0))
        shape = (n_s, n_r, cross_nodes, cross_nodes)
        g = np.zeros(shape + (DIM, DIM))
        H = h_vals[:, None, None, None]
        U = u_vals[None, :, None, None]
        ST = np.sin(th_ax)[None, None, :, None]
        g[..., 0, 0] = 1.0
        g[..., 1, 1] = H**2
        g[..., 2, 2] = (H * U) ** 2
        g[..., 3, 3] = (H * U * ST) ** 2
        return MetricGrid(axes, g)
    p_vals = _profile_values(m.p, s_ax)
    axes = (s_ax, cross(0.0), r_ax, cross(0.0))
    shape = (n_s, cross_nodes, n_r, cross_nodes)
    g = np.zeros(shape + (DIM, DIM))
    P = p_vals[:, None, None, None]
    H = h_vals[:, None, None, None]
    U = u_vals[None, None, :, None]
    g[..., 0, 0] = 1.0
    g[..., 1, 1] = P**2
    g[..., 2, 2] = H**2
    g[..., 3, 3] = (H * U) ** 2
    return MetricGrid(axes, g)


# ---------------------------------------------------------------------------
# serialization (intended for desk-scale grids)

def bundle_to_json(bundle: CurvatureBundle) -> dict:
    return {
        "frame": {"kind": bundle.frame.kind, "labels": list(bundle.frame.labels)},
        "g": bundle.g.tolist(),
        "christoffel": bundle.christoffel.tolist(),
        "riem": bundle.riem.tolist(),
        "ric": bundle.ric.tolist(),
        "scalar": bundle.scalar,
        "weyl": bundle.weyl.tolist(),
        "codazzi_residual": bundle.codazzi_residual.tolist(),
    }


def bundles_to_json(grid: MetricGrid, nodes) -> dict[str, dict]:
    """fd_curvature output at several nodes, keyed by node index."""
    out = {}
    for node in np.atleast_2d(np.asarray(nodes, dtype=int)):
        key = ",".join(str(int(i)) for i in node)
        out[key] = bundle_to_json(fd_curvature(grid, node))
    return out


def grid_to_json(grid: MetricGrid) -> dict:
    packed = np.stack([grid.g[..., i, j] for i, j in _TRIU], axis=-1)
    return {"axes": [ax.tolist() for ax in grid.axes],
            "margin": grid.margin,
            "g": packed.reshape(-1, len(_TRIU)).tolist()}


def grid_from_json(d: dict) -> MetricGrid:
    axes = tuple(np.asarray(ax, dtype=float) for ax in d["axes"])
    shape = tuple(len(ax) for ax in axes)
    packed = np.asarray(d["g"], dtype=float).reshape(shape + (len(_TRIU),))
    g = np.zeros(shape + (DIM, DIM))
    for idx, (i, j) in enumerate(_TRIU):
        g[..., i, j] = packed[..., idx]
        g[..., j, i] = packed[..., idx]
    return MetricGrid(axes, g, margin=int(d.get("margin", MARGIN_CODAZZI)))

"""Structured 4-metric families and their potential functions.

Every metric here is a block ansatz over an interval of the arc-length
variable s:

* ``doubly_warped`` (and its named specializations ``product_R2xN`` and
  ``singular_steady``): ``g = ds^2 + p(s)^2 dt^2 + h(s)^2 gt`` with ``gt`` a
  2-d metric of constant curvature k, realized in polar-type coordinates
  ``(r, theta)`` as ``dr^2 + u(r)^2 dtheta^2``.
* ``warped3``: ``g = ds^2 + h(s)^2 gt`` with ``gt`` a 3-d metric of constant
  curvature k in polar-type coordinates ``(r, theta, phi)``.

Profiles carry exact derivatives; no numerical differentiation happens in
this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, UnsupportedFamilyError

BOUNDARY_MARGIN = 1e-6


# ---------------------------------------------------------------------------
# profiles

@dataclass(frozen=True)
class Profile:
    """A scalar profile of s with derivatives up to third order.

    ``d3`` may be ``None`` for user-supplied profiles; operations that need a
    third derivative (closed-form dR/ds) then fall back to a Richardson
    difference of ``d2``.
    """

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    d3: Callable[[float], float] | None = None
    label: str = ""

    def d3_or_fd(self, s: float) -> float:
        if self.d3 is not None:
            return self.d3(s)
        step = 1e-4 * max(1.0, abs(s))
        d2 = self.d2
        coarse = (d2(s + step) - d2(s - step)) / (2.0 * step)
        fine = (d2(s + 0.5 * step) - d2(s - 0.5 * step)) / step
        return (4.0 * fine - coarse) / 3.0  # Richardson, O(step^4)


def constant_profile(c: float) -> Profile:
    return Profile(lambda s: c, lambda s: 0.0, lambda s: 0.0, lambda s: 0.0, f"{c:g}")


def power_profile(coef: float, expo: float) -> Profile:
    """c * s**e with exact derivatives."""

    def d(order: int) -> Callable[[float], float]:
        fac = coef
        e = expo
        for _ in range(order):
            fac *= e
            e -= 1.0
        return lambda s, fac=fac, e=e: fac * s**e

    return Profile(d(0), d(1), d(2), d(3), f"{coef:g}*s^{expo:g}")


def sin_profile() -> Profile:
    return Profile(math.sin, math.cos, lambda s: -math.sin(s), lambda s: -math.cos(s), "sin(s)")


def log_profile(coef: float) -> Profile:
    """c * ln(s)."""
    return Profile(
        lambda s: coef * math.log(s),
        lambda s: coef / s,
        lambda s: -coef / s**2,
        lambda s: 2.0 * coef / s**3,
        f"{coef:g}*ln(s)",
    )


def quadratic_potential(lam: float) -> Profile:
    """f(s) = lam * s^2 / 2, the rigid-soliton potential along a flat factor."""
    return Profile(
        lambda s: 0.5 * lam * s**2,
        lambda s: lam * s,
        lambda s: lam,
        lambda s: 0.0,
        f"{lam:g}*s^2/2",
    )


# ---------------------------------------------------------------------------
# constant-curvature fiber profile u(r)

@dataclass(frozen=True)
class FiberProfile:
    """Radial profile of a constant-curvature fiber in polar-type coordinates.

    u solves u'' = -k u with u(0) = 0, u'(0) = 1, so the fiber metric
    ``dr^2 + u(r)^2 dtheta^2`` (and its 3-d analogue) has constant curvature
    k and no cone singularity at r = 0.
    """

    k: float

    @property
    def r_max(self) -> float:
        return math.pi / math.sqrt(self.k) if self.k > 0 else math.inf

    def contains(self, r: float) -> bool:
        return BOUNDARY_MARGIN <= r <= self.r_max - BOUNDARY_MARGIN


def fiber_profile_eval(fp: FiberProfile, r: float) -> tuple[float, float, float]:
    """(u, u', u'') at r, on the sine / linear / sinh branch by sign of k."""
    if not fp.contains(r):
        raise DomainError(f"r={r!r} outside fiber domain (0, {fp.r_max!r})")
    k = fp.k
    if k > 0:
        rk = math.sqrt(k)
        u = math.sin(rk * r) / rk
        return u, math.cos(rk * r), -k * u
    if k < 0:
        rk = math.sqrt(-k)
        u = math.sinh(rk * r) / rk
        return u, math.cosh(rk * r), -k * u
    return r, 1.0, 0.0


# ---------------------------------------------------------------------------
# metric families

KIND_PRODUCT = "product_R2xN"
KIND_SINGULAR_STEADY = "singular_steady"
KIND_DOUBLY_WARPED = "doubly_warped"
KIND_WARPED3 = "warped3"

_DW_KINDS = (KIND_PRODUCT, KIND_SINGULAR_STEADY, KIND_DOUBLY_WARPED)


@dataclass(frozen=True)
class MetricFamily:
    """A parametric structured 4-metric.

    ``p`` is ``None`` exactly for ``warped3`` (3-d fiber, no t-circle).
    ``name`` tags canonical instances ("product", "singular_steady",
    "gaussian", "cylinder", "sphere", "flat", "broken_product"); it is empty
    for user-assembled profiles.
    """

    kind: str
    h: Profile
    k: float
    p: Profile | None = None
    lam: float | None = None
    domain: tuple[float, float] = (BOUNDARY_MARGIN, math.inf)
    name: str = ""

    def __post_init__(self):
        if self.kind not in _DW_KINDS + (KIND_WARPED3,):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind in _DW_KINDS and self.p is None:
            raise ValueError(f"{self.kind} needs a p profile")
        if self.kind == KIND_WARPED3 and self.p is not None:
            raise ValueError("warped3 has no p profile")

    @property
    def fiber(self) -> FiberProfile:
        return FiberProfile(self.k)

    @property
    def fiber_dim(self) -> int:
        return 3 if self.kind == KIND_WARPED3 else 2

    def coordinates(self) -> tuple[str, str, str, str]:
        if self.kind == KIND_WARPED3:
            return ("s", "r", "theta", "phi")
        return ("s", "t", "r", "theta")

    def contains(self, s: float) -> bool:
        # infinite endpoints absorb the margin (inf - m == inf)
        lo, hi = self.domain
        return lo + BOUNDARY_MARGIN <= s <= hi - BOUNDARY_MARGIN

    def require(self, s: float) -> None:
        if not self.contains(s):
            raise DomainError(f"s={s!r} outside family domain {self.domain}")


def doubly_warped_family(p: Profile, h: Profile, k: float,
                         domain=(BOUNDARY_MARGIN, math.inf), name="") -> MetricFamily:
    return MetricFamily(KIND_DOUBLY_WARPED, h, k, p=p, domain=domain, name=name)


def warped3_family(h: Profile, k: float, domain=(BOUNDARY_MARGIN, math.inf),
                   lam: float | None = None, name="") -> MetricFamily:
    return MetricFamily(KIND_WARPED3, h, k, lam=lam, domain=domain, name=name)


def product_family(lam: float) -> MetricFamily:
    """R^2 x N: g = ds^2 + s^2 dt^2 + gt, fiber of constant curvature lam != 0."""
    if lam == 0.0:
        raise ValueError("the product family needs lam != 0")
    return MetricFamily(KIND_PRODUCT, constant_profile(1.0), lam,
                        p=power_profile(1.0, 1.0), lam=lam,
                        domain=(BOUNDARY_MARGIN, math.inf), name="product")


def singular_steady_family() -> MetricFamily:
    """g = ds^2 + s^(2/3) dt^2 + s^(4/3) gt with flat 2-d fiber, on s > 0."""
    return MetricFamily(KIND_SINGULAR_STEADY, power_profile(1.0, 2.0 / 3.0), 0.0,
                        p=power_profile(1.0, 1.0 / 3.0), lam=0.0,
                        domain=(BOUNDARY_MARGIN, math.inf), name="singular_steady")


def gaussian_family(lam: float = 1.0) -> MetricFamily:
    """Flat warped product g = ds^2 + s^2 g_{S^3}; polar chart of R^4."""
    return warped3_family(power_profile(1.0, 1.0), 1.0,
                          domain=(BOUNDARY_MARGIN, math.inf), lam=lam, name="gaussian")


def cylinder_family(lam: float = 2.0) -> MetricFamily:
    """R x M^3: g = ds^2 + gt with gt of constant curvature lam/2 != 0."""
    if lam == 0.0:
        raise ValueError("the cylinder family needs lam != 0")
    return warped3_family(constant_profile(1.0), 0.5 * lam,
                          domain=(-math.inf, math.inf), lam=lam, name="cylinder")


def sphere_family() -> MetricFamily:
    """The unit round 4-sphere in polar form, an Einstein instance (Ric = 3g)."""
    return warped3_family(sin_profile(), 1.0,
                          domain=(BOUNDARY_MARGIN, math.pi - BOUNDARY_MARGIN),
                          lam=3.0, name="sphere")


def flat_family() -> MetricFamily:
    """Flat product chart: p = h = 1, k = 0 (Einstein with lam = 0)."""
    return MetricFamily(KIND_DOUBLY_WARPED, constant_profile(1.0), 0.0,
                        p=constant_profile(1.0), lam=0.0,
                        domain=(-math.inf, math.inf), name="flat")


def broken_family() -> MetricFamily:
    """g = ds^2 + s^2 dt^2 + s * gt (k = 1): a deliberate negative control.

    This metric does not satisfy the divergence-free-Weyl structure
    (p''/p != h''/h), so the Codazzi residual checks must reject it.
    """
    return MetricFamily(KIND_DOUBLY_WARPED, power_profile(1.0, 0.5), 1.0,
                        p=power_profile(1.0, 1.0),
                        domain=(BOUNDARY_MARGIN, math.inf), name="broken_product")


def family_metric_at(m: MetricFamily, point) -> np.ndarray:
    """Coordinate components of the family metric at ``point``.

    Doubly-warped kinds use coordinates (s, t, r, theta) and give
    ``diag(1, p^2, h^2, h^2 u(r)^2)``; warped3 uses (s, r, theta, phi) and
    gives ``diag(1, h^2, h^2 u^2, h^2 u^2 sin^2 theta)``.
    """
    point = tuple(float(x) for x in point)
    s = point[0]
    m.require(s)
    h = m.h.value(s)
    if h <= 0.0:
        raise DomainError(f"h(s) = {h!r} is not positive at s={s!r}")
    if m.kind == KIND_WARPED3:
        _, r, theta, _ = point
        u, _, _ = fiber_profile_eval(m.fiber, r)
        st = math.sin(theta)
        if not BOUNDARY_MARGIN <= theta <= math.pi - BOUNDARY_MARGIN:
            raise DomainError(f"theta={theta!r} outside polar chart (0, pi)")
        return np.diag([1.0, h * h, (h * u) ** 2, (h * u * st) ** 2])
    p = m.p.value(s)
    if p <= 0.0:
        raise DomainError(f"p(s) = {p!r} is not positive at s={s!r}")
    _, _, r, _ = point
    u, _, _ = fiber_profile_eval(m.fiber, r)
    return np.diag([1.0, p * p, h * h, (h * u) ** 2])


# ---------------------------------------------------------------------------
# canonical soliton data

@dataclass(frozen=True)
class SolitonData:
    """Potential profile f(s), soliton constant, and the frame coefficients
    zeta_i = <grad_{E_i} E_1, E_i> of the ansatz (zeta_2 = p'/p,
    zeta_3 = zeta_4 = h'/h; all equal to h'/h for warped3)."""

    f: Profile
    lam: float
    zeta: tuple[Callable[[float], float], Callable[[float], float], Callable[[float], float]]

    def zeta_values(self, s: float) -> tuple[float, float, float]:
        return tuple(z(s) for z in self.zeta)


def _family_zetas(m: MetricFamily):
    hz = lambda s: m.h.d1(s) / m.h.value(s)
    if m.kind == KIND_WARPED3:
        return (hz, hz, hz)
    pz = lambda s: m.p.d1(s) / m.p.value(s)
    return (pz, hz, hz)


def soliton_data(m: MetricFamily, f: Profile, lam: float) -> SolitonData:
    """Bundle an arbitrary potential with the family's frame coefficients."""
    return SolitonData(f, lam, _family_zetas(m))


def canonical_soliton_for(m: MetricFamily) -> SolitonData:
    """The canonical (f, lam) making the family a gradient Ricci soliton.

    Additive constants in f are normalized to zero.  Raises
    UnsupportedFamilyError for families without a canonical potential.
    """
    if m.name == "singular_steady":
        return soliton_data(m, log_profile(2.0 / 3.0), 0.0)
    if m.name in ("product", "gaussian", "cylinder"):
        return soliton_data(m, quadratic_potential(m.lam), m.lam)
    if m.name in ("sphere", "flat"):
        return soliton_data(m, constant_profile(0.0), m.lam)
    raise UnsupportedFamilyError(
        f"no canonical soliton for family {m.name or m.kind!r}")


# ---------------------------------------------------------------------------
# serialization

_CANONICAL_BUILDERS = {
    "product": lambda d: product_family(d.get("lambda", -1.0)),
    "singular_steady": lambda d: singular_steady_family(),
    "gaussian": lambda d: gaussian_family(d.get("lambda", 1.0)),
    "cylinder": lambda d: cylinder_family(d.get("lambda", 2.0)),
    "sphere": lambda d: sphere_family(),
    "flat": lambda d: flat_family(),
    "broken_product": lambda d: broken_family(),
}


def family_to_json(m: MetricFamily) -> dict:
    if not m.name:
        raise UnsupportedFamilyError("only named canonical families serialize to JSON")
    lo, hi = m.domain
    out = {"kind": m.kind, "name": m.name, "k": m.k,
           "domain": [lo if math.isfinite(lo) else None, hi if math.isfinite(hi) else None]}
    if m.lam is not None:
        out["lambda"] = m.lam
    return out


def family_from_json(d: dict) -> MetricFamily:
    name = d.get("name") or d.get("kind")
    if name == KIND_PRODUCT:
        name = "product"
    if name not in _CANONICAL_BUILDERS:
        raise UnsupportedFamilyError(f"unknown family name {name!r}")
    return _CANONICAL_BUILDERS[name](d)

"""The reduced first-order soliton system and its algebraic identities.

For the doubly-warped ansatz with a = p'/p, b = h'/h and potential slope
fp = f', the soliton equation reduces, after eliminating curvature, to

    a'  = fp a - a^2 - 2 a b - lambda
    b'  = a' + a^2 - b^2          (from R_1221 = R_1331)
    fp' = 3 a' + 3 a^2 + lambda
    h'  = b h

with the third soliton component

    fp b = b' + 2 b^2 + a b - k/h^2 + lambda

left over as a conserved diagnostic.  Along solutions a family of derived
identities holds; :func:`reduced_identity_residuals` evaluates them.

The module also carries the algebra of the pairwise-distinct eigenvalue
case: with eigenframe coefficients (a, b, c) and commutator coefficients
alpha, beta, gamma of the fiber frame, the bracket structure forces

    alpha^2 = (a - b)^4 / (4 P),   beta/alpha = (b - c)^2 / (a - b)^2,
    gamma/alpha = (a - c)^2 / (a - b)^2,   P = a^2+b^2+c^2-ab-bc-ac,

and differentiating alpha^2 in s two ways leaves a residual proportional to
f'; the residual vanishing forces f' = 0, which excludes pairwise-distinct
fiber eigenvalues on a non-Einstein soliton.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace as _replace
from typing import NamedTuple

from .errors import DomainError

BLOWUP_LIMIT = 1e8
H_FLOOR = 1e-8
BRANCH_TOL = 1e-8

BRANCH_FACTORS = ("b", "lambda+3ab", "lambda-2a^2+ab")


@dataclass(frozen=True)
class ReducedState:
    """State of the reduced system at arc-length s."""

    s: float
    a: float
    b: float
    fp: float
    h: float
    lam: float
    k: float

    def k_h2(self) -> float:
        if self.h == 0.0:
            raise DomainError("h vanished: the fiber scale degenerated")
        return self.k / self.h**2

    def replace(self, **kw) -> "ReducedState":
        return _replace(self, **kw)


class DwDerivatives(NamedTuple):
    ap: float
    bp: float
    fpp: float
    hp: float
    diagnostic: float  # |fp b - (b' + 2b^2 + ab - k/h^2 + lambda)|


def dw_rhs(st: ReducedState) -> DwDerivatives:
    """Right-hand side of the reduced system, plus the conserved diagnostic."""
    ap = st.fp * st.a - st.a**2 - 2.0 * st.a * st.b - st.lam
    bp = ap + st.a**2 - st.b**2
    fpp = 3.0 * ap + 3.0 * st.a**2 + st.lam
    hp = st.b * st.h
    diag = abs(st.fp * st.b - (bp + 2.0 * st.b**2 + st.a * st.b - st.k_h2() + st.lam))
    return DwDerivatives(ap, bp, fpp, hp, diag)


def singular_steady_state(s: float = 1.0) -> ReducedState:
    """Reduced data of the singular steady metric: a = 1/(3s), b = 2/(3s),
    f' = 2/(3s), h = s^(2/3), lambda = k = 0."""
    return ReducedState(s, 1.0 / (3.0 * s), 2.0 / (3.0 * s), 2.0 / (3.0 * s),
                        s ** (2.0 / 3.0), 0.0, 0.0)


def product_state(s: float, lam: float) -> ReducedState:
    """Reduced data of the product family: a = 1/s, b = 0, f' = lam s, h = 1."""
    return ReducedState(s, 1.0 / s, 0.0, lam * s, 1.0, lam, lam)


@dataclass(frozen=True)
class Trajectory:
    """RK4 output: one row per accepted step, plus a truncation flag."""

    states: tuple[ReducedState, ...]
    truncated: bool = False
    reason: str | None = None

    @property
    def final(self) -> ReducedState:
        return self.states[-1]

    def identity_residual_rows(self) -> list[dict[str, float]]:
        return [reduced_identity_residuals(st, dw_rhs(st).ap) for st in self.states]


def _rk4_step(st: ReducedState, ds: float) -> ReducedState:
    def f(y):
        d = dw_rhs(y)
        return (d.ap, d.bp, d.fpp, d.hp)

    def shift(y, k, c):
        return y.replace(s=y.s + c * ds, a=y.a + c * ds * k[0], b=y.b + c * ds * k[1],
                         fp=y.fp + c * ds * k[2], h=y.h + c * ds * k[3])

    k1 = f(st)
    k2 = f(shift(st, k1, 0.5))
    k3 = f(shift(st, k2, 0.5))
    k4 = f(shift(st, k3, 1.0))
    mix = tuple((k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0 for i in range(4))
    return shift(st, mix, 1.0)


def integrate(st0: ReducedState, s_end: float, step: float) -> Trajectory:
    """Classical fixed-step RK4 from st0.s to s_end.

    Stops early (flagging the partial trajectory) if the state blows up or h
    crosses its positivity floor: singular-steady-type solutions genuinely
    degenerate at s = 0 and the partial data is the useful output.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    span = s_end - st0.s
    if span == 0.0:
        return Trajectory((st0,))
    n = max(1, round(abs(span) / step))
    ds = span / n
    states = [st0]
    st = st0
    for i in range(n):
        st = _rk4_step(st, ds)
        st = st.replace(s=st0.s + (i + 1) * ds)  # no additive s drift
        if not all(map(math.isfinite, (st.a, st.b, st.fp, st.h))):
            return Trajectory(tuple(states), True, "non-finite state")
        if max(abs(st.a), abs(st.b), abs(st.fp), abs(st.h)) > BLOWUP_LIMIT:
            return Trajectory(tuple(states), True, "state blow-up")
        if st.h < H_FLOOR:
            return Trajectory(tuple(states), True, "h reached its floor")
        states.append(st)
    return Trajectory(tuple(states))


def reduced_identity_residuals(st: ReducedState, ap: float) -> dict[str, float]:
    """Residuals of the derived constraints at one state.

    Keys (all should vanish along true soliton trajectories):

    * ``linear``      : (a-b) f' - b(a-b) - k/h^2
    * ``second_order``: 2(b'+b^2) + b^2 - k/h^2 + lambda
    * ``quadratic``   : (a-b)(2ab - b^2 + lambda) - (a+b) k/h^2
    * ``cubic_slope`` : (a+b) a' + a^3 + 2ab^2 + lambda b
    * ``branch_cubic``: b (lambda+3ab) (lambda-2a^2+ab), reported when k != 0
    * ``inapplicable``: 1.0 flag when a = b makes the family degenerate
    """
    a, b, lam, kh2 = st.a, st.b, st.lam, st.k_h2()
    if a == b:
        return {"inapplicable": 1.0}
    bp = ap + a * a - b * b
    out = {
        "linear": (a - b) * st.fp - b * (a - b) - kh2,
        "second_order": 2.0 * (bp + b * b) + b * b - kh2 + lam,
        "quadratic": (a - b) * (2.0 * a * b - b * b + lam) - (a + b) * kh2,
        "cubic_slope": (a + b) * ap + a**3 + 2.0 * a * b * b + lam * b,
    }
    if st.k != 0.0:
        out["branch_cubic"] = b * (lam + 3.0 * a * b) * (lam - 2.0 * a * a + a * b)
    return out


def branch_label(traj: Trajectory, tol: float = BRANCH_TOL) -> tuple[str, ...]:
    """Branch factors of b (lambda+3ab) (lambda-2a^2+ab) that stay below tol
    in running max along the trajectory; ties are labeled jointly."""
    peaks = [0.0, 0.0, 0.0]
    for st in traj.states:
        vals = (st.b, st.lam + 3.0 * st.a * st.b, st.lam - 2.0 * st.a**2 + st.a * st.b)
        for i, v in enumerate(vals):
            peaks[i] = max(peaks[i], abs(v))
    return tuple(name for name, peak in zip(BRANCH_FACTORS, peaks) if peak < tol)


# ---------------------------------------------------------------------------
# warped-product (3-d fiber) reduced equations

def warp3_rhs(h: float, hp: float, fp: float, lam: float, k: float) -> tuple[float, float]:
    """(h'', f'') of the 3-fiber warped product soliton equations:
    h''/h = (h'/h) f' + 2k/h^2 - 2(h'/h)^2 - lambda and f'' = lambda + 3h''/h."""
    if h <= 0.0:
        raise DomainError(f"h = {h!r} must be positive")
    hpp = h * ((hp / h) * fp + 2.0 * k / h**2 - 2.0 * (hp / h) ** 2 - lam)
    fpp = lam + 3.0 * hpp / h
    return hpp, fpp


# ---------------------------------------------------------------------------
# pairwise-distinct eigenvalue algebra

def _pairwise_distinct_P(a: float, b: float, c: float) -> float:
    # stable form of a^2+b^2+c^2-ab-bc-ac: zero exactly iff a = b = c
    P = 0.5 * ((a - b) ** 2 + (b - c) ** 2 + (a - c) ** 2)
    if P == 0.0:
        raise DomainError("a = b = c: the eigenframe algebra degenerates")
    return P


def fprime_numerator(a: float, b: float, c: float) -> float:
    """a^2 b + a^2 c + a b^2 + a c^2 + b^2 c + c^2 b - 6abc, equal to
    a(b-c)^2 + b(c-a)^2 + c(a-b)^2."""
    return (a * a * b + a * a * c + a * b * b + a * c * c
            + b * b * c + c * c * b - 6.0 * a * b * c)


def distinct_fprime(a: float, b: float, c: float) -> float:
    """The potential slope forced by pairwise-distinct fiber eigenvalues."""
    return fprime_numerator(a, b, c) / (2.0 * _pairwise_distinct_P(a, b, c))


def _require_pairwise_distinct(a: float, b: float, c: float) -> float:
    if a == b or b == c or a == c:
        raise DomainError("eigenframe coefficients must be pairwise distinct")
    return _pairwise_distinct_P(a, b, c)


def distinct_frame_relations(a: float, b: float, c: float) -> tuple[float, float, float]:
    """(alpha^2, beta/alpha, gamma/alpha) of the fiber commutator coefficients."""
    P = _require_pairwise_distinct(a, b, c)
    ab2 = (a - b) ** 2
    return (ab2 * ab2 / (4.0 * P), (b - c) ** 2 / ab2, (a - c) ** 2 / ab2)


def exclusion_residual(a: float, b: float, c: float) -> float:
    """Difference of the two closed-form expressions for 2 alpha alpha'.

    Expression one differentiates alpha^2 = (a-b)^4/(4P) in s using the
    propagation rules b' - a' = a^2 - b^2, c' - a' = a^2 - c^2; expression
    two uses E_1(alpha) = alpha (c - a - b).  The difference simplifies to
    -(a-b)^4 / (2P) * distinct_fprime(a, b, c), so it vanishes exactly when
    the forced potential slope does.
    """
    P = _require_pairwise_distinct(a, b, c)
    ab4 = (a - b) ** 4
    sym_term = (6.0 * a * b * c - a * a * b - a * b * b - a * a * c
                - a * c * c - b * b * c - b * c * c)
    expr1 = -(ab4 / P) * (0.5 * (a + b - c) - sym_term / (4.0 * P))
    expr2 = -(ab4 / (2.0 * P)) * (a + b - c)
    return expr1 - expr2


# ---------------------------------------------------------------------------
# trajectory export

_CSV_COLUMNS = ("s", "a", "b", "fp", "h")


def trajectory_rows(traj: Trajectory) -> list[dict[str, float]]:
    rows = []
    for st in traj.states:
        row = {"s": st.s, "a": st.a, "b": st.b, "fp": st.fp, "h": st.h}
        res = reduced_identity_residuals(st, dw_rhs(st).ap)
        row.update({f"res_{k}": v for k, v in res.items()})
        rows.append(row)
    return rows


def trajectory_to_csv(traj: Trajectory, fmt: str = "%.17g") -> str:
    rows = trajectory_rows(traj)
    fields = list(rows[0].keys()) if rows else list(_CSV_COLUMNS)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, restval="", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: fmt % v for k, v in row.items()})
    return buf.getvalue()


def trajectory_to_json_dict(traj: Trajectory) -> dict:
    return {
        "truncated": traj.truncated,
        "reason": traj.reason,
        "branch": list(branch_label(traj)),
        "rows": trajectory_rows(traj),
    }

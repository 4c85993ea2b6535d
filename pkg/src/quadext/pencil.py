"""One-parameter symmetric-pencil feasibility.

The workhorse question: for symmetric A1, A2, B, where on [0, 1] is
alpha*A1 + (1-alpha)*A2 - B positive semidefinite?  Since
alpha -> lambda_min(pencil(alpha)) is concave (a minimum of affine
functions of alpha), the feasible set is a closed interval and a
golden-section search decides everything up to tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import form_matrix
from .errors import InvalidInputError, PencilInfeasibleError

DEFAULT_TOL = 1e-9
GOLDEN_WIDTH = 1e-10
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FeasibleInterval:
    """A closed subinterval of [0, 1], possibly empty."""

    lo: float
    hi: float
    empty: bool = False

    def __post_init__(self):
        if not self.empty and not (0.0 <= self.lo <= self.hi <= 1.0):
            raise InvalidInputError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def midpoint(self) -> float:
        if self.empty:
            raise InvalidInputError("empty interval has no midpoint")
        return 0.5 * (self.lo + self.hi)

    def contains(self, alpha: float) -> bool:
        return (not self.empty) and self.lo <= alpha <= self.hi


@dataclass(frozen=True)
class SandwichCertificate:
    """Coefficients alpha, beta of a two-sided convex-combination bound.

    Certifies -(beta*A1 + (1-beta)*A2) <= B <= alpha*A1 + (1-alpha)*A2
    (as quadratic forms, up to the tolerance used when it was produced).
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise InvalidInputError("certificate coefficients must lie in [0, 1]")


def pencil_min_eig(M0, M1, alpha: float) -> float:
    """Smallest eigenvalue of alpha*M1 + (1-alpha)*M0.

    As a function of alpha this is concave, which the interval search relies on.
    """
    m0 = form_matrix(M0)
    m1 = form_matrix(M1)
    if m0.shape != m1.shape:
        raise InvalidInputError(f"pencil endpoint shapes differ: {m0.shape} vs {m1.shape}")
    return float(np.linalg.eigvalsh(alpha * m1 + (1.0 - alpha) * m0)[0])


def _concave_sup_bound(a, fa, c, fc, d, fd, b, fb) -> float:
    """Upper bound on sup f over [a, b] for concave f probed at a < c < d < b.

    Uses chord extensions: for concave f and t > c, f(t) <= fc + slope(a,c)*(t-c);
    symmetrically from the right.
    """
    s_ac = (fc - fa) / (c - a)
    s_cd = (fd - fc) / (d - c)
    s_db = (fb - fd) / (b - d)
    # over [a, c]: f(t) <= fc + s_cd * (t - c)
    left = fc + max(0.0, -s_cd * (c - a))
    # over [d, b]: f(t) <= fd + s_cd * (t - d)
    right = fd + max(0.0, s_cd * (b - d))
    # over [c, d]: below both fc + s_ac*(t-c) and fd + s_db*(t-d)
    if s_ac > s_db:
        t = (fd - fc + s_ac * c - s_db * d) / (s_ac - s_db)
        t = min(max(t, c), d)
        mid = min(fc + s_ac * (t - c), fd + s_db * (t - d))
        mid = max(mid, fc, fd)
    else:
        mid = max(fc, fd)
    return max(left, mid, right)


def _golden_max(
    f: Callable[[float], float],
    width_tol: float = GOLDEN_WIDTH,
    exit_above: Optional[float] = None,
    exit_below: Optional[float] = None,
) -> tuple[float, float]:
    """Golden-section maximization of a concave f on [0, 1].

    Stops when the bracket is narrower than width_tol, or early: as soon as a
    probe reaches exit_above, or as soon as the concavity bound proves
    sup f < exit_below.  Returns (argmax probe, value).
    """
    a, b = 0.0, 1.0
    fa, fb = f(a), f(b)
    best_x, best_f = (a, fa) if fa >= fb else (b, fb)
    if exit_above is not None and best_f >= exit_above:
        return best_x, best_f
    h = b - a
    c = b - _INVPHI * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while True:
        for x, fx in ((c, fc), (d, fd)):
            if fx > best_f:
                best_x, best_f = x, fx
        if exit_above is not None and best_f >= exit_above:
            return best_x, best_f
        if exit_below is not None:
            if _concave_sup_bound(a, fa, c, fc, d, fd, b, fb) < exit_below:
                return best_x, best_f
        h *= _INVPHI
        if h < width_tol:
            return best_x, best_f
        if fc >= fd:
            b, fb = d, fd
            d, fd = c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, fa = c, fc
            c, fc = d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)


def maximize_concave_on_unit_interval(
    f: Callable[[float], float], tol: float = GOLDEN_WIDTH
) -> tuple[float, float]:
    """Maximize a concave function on [0, 1] to bracket width tol.

    Returns (alpha_star, value).  Concavity is the caller's contract; a
    non-concave f yields some in-range probe, nothing more.
    """
    if tol <= 0.0:
        raise InvalidInputError("tolerance must be positive")
    return _golden_max(f, width_tol=tol)


def _pencil_fn(A1, A2, B) -> Callable[[float], float]:
    a1 = form_matrix(A1)
    a2 = form_matrix(A2)
    bm = form_matrix(B)
    if not (a1.shape == a2.shape == bm.shape):
        raise InvalidInputError(
            f"pencil dimensions differ: {a1.shape}, {a2.shape}, {bm.shape}"
        )
    m0 = a2 - bm
    m1 = a1 - bm
    return lambda alpha: float(np.linalg.eigvalsh(alpha * m1 + (1.0 - alpha) * m0)[0])


def pencil_feasible_point(A1, A2, B, tol: float = DEFAULT_TOL) -> Optional[float]:
    """Fast nonemptiness test for {alpha : pencil(alpha) >= -tol}.

    Returns a feasible alpha, or None when the concavity bound (or an
    exhausted search) shows the supremum of lambda_min is below -tol.
    Decisions agree with psd_interval at the same tolerance.
    """
    g = _pencil_fn(A1, A2, B)
    x, v = _golden_max(g, exit_above=-tol, exit_below=-tol)
    return x if v >= -tol else None


def _crossing(g: Callable[[float], float], good: float, bad: float, level: float) -> float:
    """Bisect for the boundary of {g >= level} between a good and a bad point.

    g is monotone on [min, max] by concavity (one side of the maximizer).
    Returns a point on the good side of the crossing.
    """
    for _ in range(60):
        if abs(good - bad) <= 1e-13:
            break
        mid = 0.5 * (good + bad)
        if g(mid) >= level:
            good = mid
        else:
            bad = mid
    return good


def psd_interval(A1, A2, B, tol: float = DEFAULT_TOL) -> FeasibleInterval:
    """The closed interval {alpha in [0,1] : lambda_min(alpha*A1+(1-alpha)*A2 - B) >= -tol}.

    Concavity of lambda_min in alpha makes the set an interval; it is found by
    maximizing and then bisecting outward from the maximizer to the -tol
    crossing on each side.  Empty when the maximum is below -tol.
    """
    g = _pencil_fn(A1, A2, B)
    x_star, g_star = _golden_max(g, width_tol=GOLDEN_WIDTH)
    if g_star < -tol:
        return FeasibleInterval(0.0, 0.0, empty=True)
    lo = 0.0 if g(0.0) >= -tol else _crossing(g, x_star, 0.0, -tol)
    hi = 1.0 if g(1.0) >= -tol else _crossing(g, x_star, 1.0, -tol)
    return FeasibleInterval(min(lo, hi), max(lo, hi))


def lemma_a_combination(P, Q, tol: float = DEFAULT_TOL) -> float:
    """A coefficient alpha in [0, 1] with alpha*P + (1-alpha)*Q PSD to tolerance.

    P and Q are 2x2 forms assumed to satisfy max(P(x), Q(x)) >= 0 for all x
    (see check_pointwise_max).  Raises PencilInfeasibleError with the sweep
    evidence when no coefficient exists, which signals the hypothesis fails,
    possibly only numerically.
    """
    p = form_matrix(P)
    q = form_matrix(Q)
    if p.shape != (2, 2) or q.shape != (2, 2):
        raise InvalidInputError("combination lemma applies to 2x2 forms")
    interval = psd_interval(p, q, np.zeros((2, 2)), tol=tol)
    if interval.empty:
        g = _pencil_fn(p, q, np.zeros((2, 2)))
        x, v = _golden_max(g)
        raise PencilInfeasibleError(
            f"no convex combination is PSD: best lambda_min {v:.3e} at alpha={x:.6f}",
            alpha=x,
            min_eig=v,
        )
    return interval.midpoint


def check_pointwise_max(P, Q, grid: int = 256, tol: float = DEFAULT_TOL) -> bool:
    """Grid test of the hypothesis max(P(x), Q(x)) >= 0 on the plane.

    Samples max(P, Q) on the unit half-circle (homogeneity covers the rest),
    refines once around the grid minimum, and reports False if a value below
    -tol is found.  Approximate by design: a fine grid, not a decision
    procedure.
    """
    if grid < 64:
        raise InvalidInputError("grid must be at least 64")
    p = form_matrix(P)
    q = form_matrix(Q)
    if p.shape != (2, 2) or q.shape != (2, 2):
        raise InvalidInputError("pointwise-max check applies to 2x2 forms")

    def sweep(theta):
        c, s = np.cos(theta), np.sin(theta)
        pv = p[0, 0] * c * c + 2.0 * p[0, 1] * c * s + p[1, 1] * s * s
        qv = q[0, 0] * c * c + 2.0 * q[0, 1] * c * s + q[1, 1] * s * s
        return np.maximum(pv, qv)

    theta = np.linspace(0.0, np.pi, grid, endpoint=False)
    values = sweep(theta)
    i = int(np.argmin(values))
    step = np.pi / grid
    fine = np.linspace(theta[i] - step, theta[i] + step, grid)
    worst = min(float(values[i]), float(np.min(sweep(fine))))
    return worst >= -tol


def dominating_combination(A1, A2, B, tol: float = DEFAULT_TOL) -> SandwichCertificate:
    """Certificate alpha, beta with -(beta*A1+(1-beta)*A2) <= B <= alpha*A1+(1-alpha)*A2.

    Exists whenever |B(x)| <= max(A1(x), A2(x)) pointwise with A1, A2 PSD; the
    hypothesis is not pre-checked (it is equivalent to what this constructs),
    so infeasibility is reported with the witnessing sweep instead.
    Feasible points are taken at interval midpoints for rounding robustness.
    """
    a1 = form_matrix(A1)
    a2 = form_matrix(A2)
    bm = form_matrix(B)
    upper = psd_interval(a1, a2, bm, tol=tol)
    if upper.empty:
        x, v = _golden_max(_pencil_fn(a1, a2, bm))
        raise PencilInfeasibleError(
            f"upper sandwich infeasible: best lambda_min {v:.3e} at alpha={x:.6f}",
            alpha=x,
            min_eig=v,
        )
    lower = psd_interval(a1, a2, -bm, tol=tol)
    if lower.empty:
        x, v = _golden_max(_pencil_fn(a1, a2, -bm))
        raise PencilInfeasibleError(
            f"lower sandwich infeasible: best lambda_min {v:.3e} at beta={x:.6f}",
            alpha=x,
            min_eig=v,
        )
    return SandwichCertificate(alpha=upper.midpoint, beta=lower.midpoint)

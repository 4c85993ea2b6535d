"""Independent oracles and seeded instance generators.

The sampler here shares no code with the certificate-based norm: it evaluates
the homogeneous ratio |B(x)| / max(A1(x), A2(x)) directly on random
directions and refines by derivative-free ascent, so it is a sound lower
bound no matter what the pencil machinery does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    QuadOnSubspace,
    Subspace,
    SymForm,
    TwoEllipsoidSpace,
    form_matrix,
)
from .errors import InvalidInputError
from .normcalc import norm_on_subspace, polynomial_norm

ASCENT_ROUNDS = 20
ASCENT_STEPS_PER_ROUND = 5
ASCENT_INITIAL_STEP = 0.5


@dataclass(frozen=True)
class InstanceSpec:
    """Seeded description of a random extension problem."""

    n: int
    k: int
    seed: int
    conditioning: float = 1000.0

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise InvalidInputError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.conditioning < 1.0:
            raise InvalidInputError("conditioning must be at least 1")


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the three extension checks; failures are content, not errors."""

    ok_restriction: bool
    ok_norm_bound: bool
    ok_sampler: bool
    restriction_residual: float
    original_norm: float
    extended_norm: float
    sampler_bound: float

    @property
    def passed(self) -> bool:
        return self.ok_restriction and self.ok_norm_bound and self.ok_sampler


def sample_norm_lower_bound(B, A1, A2, samples: int, seed: int):
    """Monte Carlo lower bound on the norm, with derivative-free refinement.

    Draws Euclidean directions, takes the best homogeneous ratio, then runs
    100 multiplicative coordinate perturbations with halving step size.  The
    returned value is an evaluated ratio, hence always a valid lower bound;
    refinement never decreases it.  Deterministic given the seed.
    """
    if samples < 1:
        raise InvalidInputError("samples must be at least 1")
    b = form_matrix(B)
    a1 = form_matrix(A1)
    a2 = form_matrix(A2)
    n = b.shape[0]
    rng = np.random.default_rng(seed)

    x = rng.standard_normal((samples, n))
    q1 = np.einsum("ij,jk,ik->i", x, a1, x)
    q2 = np.einsum("ij,jk,ik->i", x, a2, x)
    qb = np.einsum("ij,jk,ik->i", x, b, x)
    denom = np.maximum(q1, q2)
    ratios = np.abs(qb) / denom
    i = int(np.argmax(ratios))
    best = float(ratios[i])
    point = x[i] / np.sqrt(denom[i])

    def ratio(v):
        d = max(float(v @ a1 @ v), float(v @ a2 @ v))
        if d <= 0.0:
            return 0.0
        return abs(float(v @ b @ v)) / d

    h = ASCENT_INITIAL_STEP
    for _ in range(ASCENT_ROUNDS):
        for _ in range(ASCENT_STEPS_PER_ROUND):
            candidate = point * (1.0 + h * rng.uniform(-1.0, 1.0, n))
            value = ratio(candidate)
            if value > best:
                best = value
                point = candidate
        h *= 0.5

    scale = np.sqrt(max(float(point @ a1 @ point), float(point @ a2 @ point)))
    return best, point / scale


def verify_extension(
    space: TwoEllipsoidSpace,
    P: QuadOnSubspace,
    Btilde,
    tol: float = 1e-6,
    samples: int = 100_000,
    seed: int = 0,
) -> VerificationReport:
    """Check an alleged extension against the original form.

    (a) Btilde restricted to the subspace equals P (basis-pair residuals);
    (b) the certified norm of Btilde is at most the certified subspace norm,
        up to (1+tol) and +tol;
    (c) the sampler's lower bound does not exceed the certified norm of
        Btilde by more than a factor (1+tol).
    """
    bt = form_matrix(Btilde)
    if bt.shape != (space.n, space.n) or P.subspace.n != space.n:
        raise InvalidInputError(
            f"dimension mismatch: extension {bt.shape}, space {space.n}, subspace ambient {P.subspace.n}"
        )
    original = norm_on_subspace(P, space)
    extended = polynomial_norm(bt, space.pi1, space.pi2)

    coord = P.subspace.coordinate_map()
    p_ambient = coord.T @ P.form.entries @ coord
    y_orth = P.subspace.orthonormalized().basis
    residual = float(np.max(np.abs(y_orth @ (bt - p_ambient) @ y_orth.T)))
    residual /= max(1.0, original.value)

    sampler, _ = sample_norm_lower_bound(bt, space.pi1.matrix, space.pi2.matrix, samples, seed)

    ok_restriction = residual <= 1e-9
    ok_norm_bound = extended.value <= original.value * (1.0 + tol) + tol
    ok_sampler = sampler <= extended.value * (1.0 + tol)
    return VerificationReport(
        ok_restriction=ok_restriction,
        ok_norm_bound=ok_norm_bound,
        ok_sampler=ok_sampler,
        restriction_residual=residual,
        original_norm=original.value,
        extended_norm=extended.value,
        sampler_bound=sampler,
    )


def _random_orthogonal(rng, n):
    m = rng.standard_normal((n, n))
    q, r = np.linalg.qr(m)
    return q * np.sign(np.diag(r))


def random_instance(spec: InstanceSpec):
    """A seeded two-ellipsoid space and a subspace form of norm 1.

    Inner products are Q D Q^T with Haar-ish orthogonal Q and log-uniform
    eigenvalues in [1, conditioning]; the form is scaled by its certified
    subspace norm.
    """
    rng = np.random.default_rng(spec.seed)
    inner = []
    for _ in range(2):
        q = _random_orthogonal(rng, spec.n)
        d = np.exp(rng.uniform(0.0, np.log(spec.conditioning), spec.n))
        inner.append(q @ np.diag(d) @ q.T)
    space = TwoEllipsoidSpace(inner[0], inner[1])

    basis = rng.standard_normal((spec.k, spec.n))
    sub = Subspace(basis)
    raw = rng.standard_normal((spec.k, spec.k))
    form = SymForm(raw + raw.T)
    quad = QuadOnSubspace(sub, form)
    value = norm_on_subspace(quad, space).value
    if value <= 0.0:
        raise InvalidInputError(f"degenerate random form for seed {spec.seed}")
    return space, QuadOnSubspace(sub, SymForm(form.entries / value))


def lemma_a_instance(seed: int):
    """A planted 2x2 pair (P, Q) with a known feasible combination.

    P = S + (1-a)*D and Q = S - a*D give a*P + (1-a)*Q = S PSD, so the
    pointwise-max hypothesis holds by construction.  Returns (P, Q, a).
    """
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((2, 2))
    s = m @ m.T
    d_raw = rng.standard_normal((2, 2))
    delta = (d_raw + d_raw.T) / 2.0
    alpha = float(rng.uniform())
    p = SymForm(s + (1.0 - alpha) * delta)
    q = SymForm(s - alpha * delta)
    return p, q, alpha

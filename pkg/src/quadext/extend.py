"""Norm-preserving extension of a quadratic form from a subspace.

One hyperplane step: renormalize the two inner products with a sandwich
certificate so that -||y||_2'^2 <= P(y) <= ||y||_1'^2 on Y, split Y by the
signs of the two representing operators' eigenvalues, take the renormalized
orthogonal complements M1 of the non-negative split and M2 of the negative
split, pick z in their intersection with phi(z) != 0, and push P through the
oblique projection x -> x - (phi(x)/phi(z)) z.  The projected form agrees
with P on Y and its norm does not grow.  Arbitrary codimension is a chain of
such steps along a flag of nested subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    InnerProduct,
    QuadOnSubspace,
    Subspace,
    SymForm,
    TwoEllipsoidSpace,
    embed_form,
    form_matrix,
    gram_restrict,
)
from .errors import (
    DegenerateZError,
    ExtensionVerificationError,
    InvalidInputError,
    PencilInfeasibleError,
)
from .normcalc import NormResult, norm_on_subspace, polynomial_norm
from .pencil import DEFAULT_TOL, SandwichCertificate, dominating_combination, pencil_min_eig
from .spectral import (
    orthogonal_complement,
    representing_operator,
    split_eigenspaces,
    subspace_intersection,
)

# |phi(z)| below this fraction of ||phi||*||z|| is treated as degenerate.
PHI_Z_RTOL = 1e-8

# Feasibility slack inherited from earlier steps is absorbed by retrying the
# certificate search with a widened tolerance, up to this fraction of the
# restricted Gram scale; the final report invariants still gate the result.
STEP_SLACK_CAP_RTOL = 1e-6

AGREEMENT_TOL = 1e-9
NORM_GROWTH_RTOL = 1e-6
NORM_GROWTH_ATOL = 1e-9


@dataclass(frozen=True)
class HyperplaneStep:
    """Record of one codimension-1 extension."""

    ambient: TwoEllipsoidSpace
    subspace: Subspace
    phi: np.ndarray
    z: np.ndarray
    projector: np.ndarray
    renorm: SandwichCertificate

    def summary(self) -> dict:
        return {
            "ambient_dim": self.ambient.n,
            "subspace_dim": self.subspace.k,
            "alpha": self.renorm.alpha,
            "beta": self.renorm.beta,
            "phi_z": float(self.phi @ self.z),
        }


@dataclass(frozen=True)
class ExtensionReport:
    """Extension with both certified norms and the agreement residual."""

    extended: SymForm
    original_norm: NormResult
    extended_norm: NormResult
    steps: tuple
    agreement_residual: float


def renormalize(
    space: TwoEllipsoidSpace,
    P: QuadOnSubspace,
    cert: SandwichCertificate,
    tol: float = DEFAULT_TOL,
) -> tuple[InnerProduct, InnerProduct]:
    """Convex-combination inner products certified against P on its subspace.

    A1' = alpha*Pi1 + (1-alpha)*Pi2 and A2' = beta*Pi1 + (1-beta)*Pi2 on the
    ambient space; on the subspace, -A2'(y) <= P(y) <= A1'(y) up to the
    certificate's tolerance.  The certificate is re-checked against the
    restricted Grams before the combinations are returned.
    """
    a1 = space.pi1.matrix
    a2 = space.pi2.matrix
    g1 = gram_restrict(space.pi1, P.subspace).entries
    g2 = gram_restrict(space.pi2, P.subspace).entries
    b = P.form.entries
    slack = 10.0 * tol * max(1.0, np.linalg.norm(g1), np.linalg.norm(g2))
    upper = pencil_min_eig(g2 - b, g1 - b, cert.alpha)
    lower = pencil_min_eig(g2 + b, g1 + b, cert.beta)
    if upper < -slack or lower < -slack:
        raise InvalidInputError(
            f"certificate does not dominate the form: pencil minima {upper:.3e}, {lower:.3e}"
        )
    first = InnerProduct(SymForm(cert.alpha * a1 + (1.0 - cert.alpha) * a2))
    second = InnerProduct(SymForm(cert.beta * a1 + (1.0 - cert.beta) * a2))
    return first, second


def find_z(M1: Subspace, M2: Subspace, phi, tol: float = PHI_Z_RTOL) -> np.ndarray:
    """A unit vector of M1 and M2's intersection maximizing |phi(z)|.

    The maximizer over the unit sphere of the intersection is the normalized
    projection of phi onto it.  Raises DegenerateZError when the intersection
    is trivial or lies in the kernel of phi.
    """
    phi = np.asarray(phi, dtype=float)
    inter = subspace_intersection(M1, M2)
    phi_norm = float(np.linalg.norm(phi))
    if phi_norm == 0.0:
        raise InvalidInputError("phi must be nonzero")
    if inter.k == 0:
        raise DegenerateZError("complement intersection is zero-dimensional", achieved=0.0)
    coeffs = inter.basis @ phi
    achieved = float(np.linalg.norm(coeffs))
    if achieved < tol * phi_norm:
        raise DegenerateZError(
            f"every intersection vector is numerically in ker(phi): |phi(z)| = {achieved:.3e}",
            achieved=achieved / phi_norm,
        )
    z = inter.basis.T @ (coeffs / achieved)
    if float(phi @ z) < 0.0:
        z = -z
    return z


def _euclidean_normal(sub: Subspace) -> np.ndarray:
    null = scipy.linalg.null_space(sub.basis)
    if null.shape[1] != 1:
        raise InvalidInputError("subspace is not a hyperplane")
    phi = null[:, 0]
    pivot = int(np.argmax(np.abs(phi)))
    if phi[pivot] < 0.0:
        phi = -phi
    return phi


def _step_certificate(g1, g2, b, tol):
    """Sandwich certificate with adaptive slack for chained-step drift.

    Earlier hyperplane steps can leave the form above the sandwich by a few
    multiples of their tolerance; retry with a tolerance just above the
    observed violation, bounded by the slack cap.
    """
    cap = STEP_SLACK_CAP_RTOL * max(1.0, np.linalg.norm(g1), np.linalg.norm(g2))
    ftol = tol
    for _ in range(4):
        try:
            return dominating_combination(g1, g2, b, tol=ftol), ftol
        except PencilInfeasibleError as err:
            violation = -float(err.min_eig)
            if violation > cap:
                raise
            ftol = max(1.5 * violation, 2.0 * ftol)
    return dominating_combination(g1, g2, b, tol=cap), cap


def extend_hyperplane(
    space: TwoEllipsoidSpace,
    P: QuadOnSubspace,
    tol: float = DEFAULT_TOL,
    zeros_to_neg: tuple[bool, bool] = (False, False),
) -> tuple[SymForm, HyperplaneStep]:
    """One codimension-1 norm-preserving extension; P must have norm <= 1 on Y.

    Returns the extended form on the ambient space together with the step
    record.  zeros_to_neg reassigns near-zero eigenvalues of the first or
    second representing operator to the negative split, the retry knob for
    degenerate-z situations.
    """
    Y = P.subspace
    n = space.n
    if Y.n != n:
        raise InvalidInputError(f"subspace ambient {Y.n} does not match space dimension {n}")
    if Y.k != n - 1:
        raise InvalidInputError(f"hyperplane step requires dim(Y) = {n - 1}, got {Y.k}")

    g1 = gram_restrict(space.pi1, Y).entries
    g2 = gram_restrict(space.pi2, Y).entries
    b = P.form.entries
    cert, ftol = _step_certificate(g1, g2, b, tol)
    a1p, a2p = renormalize(space, P, cert, tol=ftol)

    op1 = representing_operator(gram_restrict(a1p, Y), P.form)
    op2 = representing_operator(gram_restrict(a2p, Y), P.form)
    split1 = split_eigenspaces(op1, subspace=Y, zeros_to_neg=zeros_to_neg[0])
    split2 = split_eigenspaces(op2, subspace=Y, zeros_to_neg=zeros_to_neg[1])

    m1 = orthogonal_complement(a1p, split1.nonneg)
    m2 = orthogonal_complement(a2p, split2.neg)
    phi = _euclidean_normal(Y)
    try:
        z = find_z(m1, m2, phi)
    except DegenerateZError as err:
        zero_mults = tuple(
            int(np.sum(np.abs(op.eigenvalues) <= 1e-9 * max(1.0, np.max(np.abs(op.eigenvalues)))))
            for op in (op1, op2)
        )
        raise DegenerateZError(
            f"{err} [zero-eigenvalue multiplicities {zero_mults}]",
            achieved=err.achieved,
            zero_multiplicities=zero_mults,
        ) from err

    projector = np.eye(n) - np.outer(z, phi) / float(phi @ z)
    extended = embed_form(P.form, Y, projector)
    step = HyperplaneStep(
        ambient=space, subspace=Y, phi=phi, z=z, projector=projector, renorm=cert
    )
    return extended, step


def build_flag(Y: Subspace, n: int) -> list[Subspace]:
    """Nested subspaces Y = W_k < W_{k+1} < ... < W_n = R^n, one dimension a step.

    Every basis is Euclidean-orthonormal; complement directions come from the
    rank-revealing decomposition of Y's basis, so the flag is deterministic.
    """
    if Y.n != n:
        raise InvalidInputError(f"subspace ambient {Y.n} does not match n = {n}")
    if Y.k < 1:
        raise InvalidInputError("flag requires a subspace of dimension at least 1")
    base = Y.orthonormalized().basis
    if Y.k == n:
        return [Subspace(base)]
    comp = scipy.linalg.null_space(base).T
    flag = [Subspace(base)]
    for j in range(comp.shape[0]):
        flag.append(Subspace(np.vstack([base, comp[: j + 1]])))
    return flag


_RETRY_SPLITS = ((False, False), (True, False), (False, True), (True, True))


def extend(
    space: TwoEllipsoidSpace,
    P: QuadOnSubspace,
    tol: float = DEFAULT_TOL,
    retry_degenerate_z: bool = False,
) -> ExtensionReport:
    """Extend P from its subspace to the whole space, preserving the norm.

    The form is scaled to norm 1, extended one hyperplane at a time along a
    flag, rescaled, and both norms are recomputed against the ORIGINAL inner
    products.  Raises ExtensionVerificationError if the assembled report
    violates its invariants, and propagates DegenerateZError (after the
    optional split-reassignment retries) from any step.
    """
    n = space.n
    Y = P.subspace
    if Y.n != n:
        raise InvalidInputError(f"subspace ambient {Y.n} does not match space dimension {n}")
    original = norm_on_subspace(P, space, tol=tol)

    coord = Y.coordinate_map()
    p_ambient = coord.T @ P.form.entries @ coord

    if original.value == 0.0:
        extended = SymForm(np.zeros((n, n)))
        return ExtensionReport(
            extended=extended,
            original_norm=original,
            extended_norm=polynomial_norm(extended, space.pi1, space.pi2, tol=tol),
            steps=(),
            agreement_residual=float(np.max(np.abs(p_ambient))) if Y.k else 0.0,
        )

    c = original.value
    flag = build_flag(Y, n)
    v_base = flag[0].basis
    r = v_base @ Y.basis.T
    r_inv = np.linalg.inv(r)
    b_cur = (r_inv.T @ P.form.entries @ r_inv) / c

    a1 = space.pi1.matrix
    a2 = space.pi2.matrix
    steps = []
    for j in range(len(flag) - 1):
        v_next = flag[j + 1].basis
        sub_space = TwoEllipsoidSpace(
            InnerProduct(SymForm(v_next @ a1 @ v_next.T)),
            InnerProduct(SymForm(v_next @ a2 @ v_next.T)),
        )
        embedded_y = Subspace(flag[j].basis @ v_next.T)
        quad = QuadOnSubspace(embedded_y, SymForm(b_cur))
        if retry_degenerate_z:
            first_err = None
            for assignment in _RETRY_SPLITS:
                try:
                    form_next, step = extend_hyperplane(
                        sub_space, quad, tol=tol, zeros_to_neg=assignment
                    )
                    break
                except DegenerateZError as err:
                    if first_err is None:
                        first_err = err
            else:
                raise first_err
        else:
            form_next, step = extend_hyperplane(sub_space, quad, tol=tol)
        b_cur = form_next.entries
        steps.append(step)

    v_full = flag[-1].basis
    extended = SymForm(c * (v_full.T @ b_cur @ v_full))
    extended_norm = polynomial_norm(extended, space.pi1, space.pi2, tol=tol)

    y_orth = flag[0].basis
    residual_matrix = y_orth @ (extended.entries - p_ambient) @ y_orth.T
    agreement = float(np.max(np.abs(residual_matrix))) / max(1.0, original.value)

    residuals = {
        "agreement_residual": agreement,
        "original_norm": original.value,
        "extended_norm": extended_norm.value,
    }
    if agreement > AGREEMENT_TOL:
        raise ExtensionVerificationError(
            f"extension does not restrict to the original form: residual {agreement:.3e}",
            residuals=residuals,
        )
    bound = original.value * (1.0 + NORM_GROWTH_RTOL) + NORM_GROWTH_ATOL
    if extended_norm.value > bound:
        raise ExtensionVerificationError(
            f"extended norm {extended_norm.value:.12g} exceeds bound {bound:.12g}",
            residuals=residuals,
        )
    return ExtensionReport(
        extended=extended,
        original_norm=original,
        extended_norm=extended_norm,
        steps=tuple(steps),
        agreement_residual=agreement,
    )

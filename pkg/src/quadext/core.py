"""Data model for quadratic forms, inner products, and subspaces.

Everything downstream (pencil searches, norm computation, the extension
pipeline) works with the four value types defined here.  All instances are
immutable after construction: arrays are copied in and marked read-only, so
values are safe to share across threads.

Conventions: a quadratic form is an n-by-n symmetric matrix B acting as
x -> x^T B x; a subspace is stored as a (k, n) matrix whose ROWS are basis
vectors of R^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, NotPositiveDefiniteError, RankDeficientError

# Scale-invariant gates used at construction everywhere in the package.
DEFINITENESS_RTOL = 1e-10
RANK_RTOL = 1e-10


def _frozen_array(values, dtype=float) -> np.ndarray:
    out = np.array(values, dtype=dtype)
    out.setflags(write=False)
    return out


def form_matrix(obj) -> np.ndarray:
    """Coerce a SymForm, InnerProduct, or array-like to an ndarray matrix."""
    if isinstance(obj, InnerProduct):
        return obj.form.entries
    if isinstance(obj, SymForm):
        return obj.entries
    return np.asarray(obj, dtype=float)


@dataclass(frozen=True)
class SymForm:
    """A homogeneous quadratic form, stored as its unique symmetric matrix.

    Any square matrix is accepted; it is symmetrized to (M + M^T)/2 at
    construction, which leaves the quadratic form x^T M x unchanged.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidInputError(f"form matrix must be square, got shape {m.shape}")
        if m.shape[0] < 1:
            raise InvalidInputError("form dimension must be at least 1")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("form matrix contains non-finite entries")
        object.__setattr__(self, "entries", _frozen_array((m + m.T) / 2.0))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __call__(self, x) -> float:
        return evaluate_form(self, x)


@dataclass(frozen=True)
class InnerProduct:
    """A positive-definite SymForm with its cached definiteness witness.

    The gate is scale invariant: the smallest eigenvalue must exceed
    DEFINITENESS_RTOL times the largest.
    """

    form: SymForm
    min_eigenvalue: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.form, SymForm):
            object.__setattr__(self, "form", SymForm(form_matrix(self.form)))
        w = np.linalg.eigvalsh(self.form.entries)
        if w[0] <= DEFINITENESS_RTOL * abs(w[-1]) or w[-1] <= 0.0:
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite: eigenvalue range [{w[0]:.3e}, {w[-1]:.3e}]"
            )
        object.__setattr__(self, "min_eigenvalue", float(w[0]))

    @property
    def n(self) -> int:
        return self.form.n

    @property
    def matrix(self) -> np.ndarray:
        return self.form.entries

    def pairing(self, x, y) -> float:
        """The bilinear value <x, y> under this inner product."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != (self.n,) or y.shape != (self.n,):
            raise InvalidInputError("vector length does not match inner product dimension")
        return float(x @ self.matrix @ y)


@dataclass(frozen=True)
class TwoEllipsoidSpace:
    """R^n under the norm ||x|| = sqrt(max(pi1(x,x), pi2(x,x))).

    The unit ball is the intersection of the two ellipsoids {pi_i(x,x) <= 1}.
    """

    pi1: InnerProduct
    pi2: InnerProduct

    def __post_init__(self):
        if not isinstance(self.pi1, InnerProduct):
            object.__setattr__(self, "pi1", InnerProduct(SymForm(form_matrix(self.pi1))))
        if not isinstance(self.pi2, InnerProduct):
            object.__setattr__(self, "pi2", InnerProduct(SymForm(form_matrix(self.pi2))))
        if self.pi1.n != self.pi2.n:
            raise InvalidInputError(
                f"inner product dimensions differ: {self.pi1.n} vs {self.pi2.n}"
            )

    @property
    def n(self) -> int:
        return self.pi1.n

    def norm(self, x) -> float:
        return max_norm(self, x)


@dataclass(frozen=True)
class Subspace:
    """A subspace of R^n given by a full-rank (k, n) matrix of basis rows.

    k = 0 (an empty basis) is allowed so that eigenspace splits and subspace
    intersections can represent the trivial subspace.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise InvalidInputError(f"basis must be a 2-d matrix, got ndim={b.ndim}")
        k, n = b.shape
        if n < 1 or k > n:
            raise InvalidInputError(f"basis shape {b.shape} is not k x n with k <= n")
        if not np.all(np.isfinite(b)):
            raise InvalidInputError("basis contains non-finite entries")
        if k > 0:
            s = np.linalg.svd(b, compute_uv=False)
            if s[-1] <= RANK_RTOL * s[0]:
                raise RankDeficientError(
                    f"basis is rank deficient: singular values [{s[-1]:.3e}, {s[0]:.3e}]"
                )
        object.__setattr__(self, "basis", _frozen_array(b))

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    def orthonormalized(self) -> "Subspace":
        """Same span, Euclidean-orthonormal rows (deterministic, SVD-based)."""
        if self.k == 0:
            return self
        _, _, vh = np.linalg.svd(self.basis, full_matrices=False)
        return Subspace(vh)

    def coordinate_map(self) -> np.ndarray:
        """The (k, n) matrix C with C @ y = coordinates of y for y in the span.

        For y = basis.T @ c this returns c; C = (U U^T)^{-1} U.
        """
        u = self.basis
        return np.linalg.solve(u @ u.T, u)

    def coordinates_of(self, x) -> np.ndarray:
        return self.coordinate_map() @ np.asarray(x, dtype=float)

    def from_coordinates(self, c) -> np.ndarray:
        return self.basis.T @ np.asarray(c, dtype=float)


@dataclass(frozen=True)
class QuadOnSubspace:
    """A quadratic form given in the coordinates of a subspace basis."""

    subspace: Subspace
    form: SymForm

    def __post_init__(self):
        if not isinstance(self.form, SymForm):
            object.__setattr__(self, "form", SymForm(form_matrix(self.form)))
        if self.form.n != self.subspace.k:
            raise InvalidInputError(
                f"form dimension {self.form.n} does not match subspace dimension {self.subspace.k}"
            )


def evaluate_form(B, x) -> float:
    """Evaluate the quadratic form x^T B x."""
    m = form_matrix(B)
    x = np.asarray(x, dtype=float)
    if x.shape != (m.shape[0],):
        raise InvalidInputError(
            f"vector length {x.shape} does not match form dimension {m.shape[0]}"
        )
    return float(x @ m @ x)


def max_norm(space: TwoEllipsoidSpace, x) -> float:
    """The two-ellipsoid norm sqrt(max(pi1(x,x), pi2(x,x)))."""
    x = np.asarray(x, dtype=float)
    if x.shape != (space.n,):
        raise InvalidInputError(
            f"vector length {x.shape} does not match space dimension {space.n}"
        )
    q1 = float(x @ space.pi1.matrix @ x)
    q2 = float(x @ space.pi2.matrix @ x)
    return float(np.sqrt(max(q1, q2, 0.0)))


def gram_restrict(A, sub: Subspace) -> SymForm:
    """Pull a form on R^n back to subspace coordinates: U A U^T for U = sub.basis."""
    m = form_matrix(A)
    if m.shape[0] != sub.n:
        raise InvalidInputError(
            f"form dimension {m.shape[0]} does not match ambient dimension {sub.n}"
        )
    if sub.k == 0:
        raise InvalidInputError("cannot restrict to a zero-dimensional subspace")
    u = sub.basis
    return SymForm(u @ m @ u.T)


def embed_form(Bk, sub: Subspace, projector) -> SymForm:
    """Express "evaluate Bk at the sub-coordinates of projector(x)" as an n x n form.

    projector must map R^n into the span of sub; the result is
    (C P)^T Bk (C P) with C the coordinate map of sub.
    """
    bk = form_matrix(Bk)
    p = np.asarray(projector, dtype=float)
    if p.shape != (sub.n, sub.n):
        raise InvalidInputError(f"projector shape {p.shape} does not match ambient ({sub.n})")
    if bk.shape[0] != sub.k:
        raise InvalidInputError(
            f"form dimension {bk.shape[0]} does not match subspace dimension {sub.k}"
        )
    cp = sub.coordinate_map() @ p
    return SymForm(cp.T @ bk @ cp)

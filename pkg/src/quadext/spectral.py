"""Representing operators, eigenspace splits, and subspace geometry.

For an inner product G and a form B on the same space, the representing
operator T = G^{-1} B satisfies <u, T v>_G = u^T B v.  It is G-self-adjoint,
so its spectrum is real and its eigenvectors can be taken G-orthonormal; the
solve goes through the symmetric-definite generalized eigenproblem
B v = lambda G v (Cholesky reduction of G), never a nonsymmetric eigensolver,
which keeps those properties structural rather than numerical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .core import InnerProduct, Subspace, SymForm, form_matrix
from .errors import InvalidInputError

# Eigenvalue sign classification: |lambda| below this fraction of the spectral
# radius counts as zero and goes to the non-negative side.
SPLIT_ZERO_RTOL = 1e-9

# Rank threshold when intersecting subspaces: generous, so that a direction
# guaranteed by dimension counting is found even when slightly off.
INTERSECTION_RCOND = 1e-8


@dataclass(frozen=True)
class RepresentingOperator:
    """G^{-1} B with its real spectrum and G-orthonormal eigenvectors."""

    gram: np.ndarray
    form: np.ndarray
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class EigenSplit:
    """Decomposition into the non-negative and negative eigenvalue spans.

    Either side may be zero-dimensional (k = 0 Subspace).
    """

    nonneg: Subspace
    neg: Subspace


def representing_operator(Pi, B) -> RepresentingOperator:
    """Solve B v = lambda G v for G positive definite.

    Returns the operator with matrix G^{-1} B, real eigenvalues in ascending
    order, and eigenvector columns v_i with v_i^T G v_j = delta_ij.
    """
    g = form_matrix(Pi)
    if not isinstance(Pi, InnerProduct):
        g = InnerProduct(SymForm(g)).matrix  # definiteness gate
    b = form_matrix(B)
    if g.shape != b.shape:
        raise InvalidInputError(f"gram shape {g.shape} does not match form shape {b.shape}")
    w, v = scipy.linalg.eigh(b, g)
    t = scipy.linalg.solve(g, b, assume_a="pos")
    for arr in (g, b, t, w, v):
        arr.setflags(write=False)
    return RepresentingOperator(gram=g, form=b, matrix=t, eigenvalues=w, eigenvectors=v)


def split_eigenspaces(
    op: RepresentingOperator,
    zero_tol: Optional[float] = None,
    subspace: Optional[Subspace] = None,
    zeros_to_neg: bool = False,
) -> EigenSplit:
    """Split into spans of eigenvectors with non-negative / negative eigenvalues.

    Eigenvalues within zero_tol of zero count as non-negative (the sign
    convention of the construction); zeros_to_neg flips that assignment, which
    the extension pipeline uses as a degeneracy fallback.  When subspace is
    given, the operator lives in its coordinates and the returned spans are
    expressed in ambient coordinates; bases are re-orthonormalized either way.
    """
    w = op.eigenvalues
    if zero_tol is None:
        zero_tol = SPLIT_ZERO_RTOL * float(np.max(np.abs(w))) if w.size else 0.0
    mask = (w <= zero_tol) if zeros_to_neg else (w >= -zero_tol)
    mask_neg = ~mask

    def side(selector) -> Subspace:
        cols = op.eigenvectors[:, selector]
        rows = cols.T if subspace is None else cols.T @ subspace.basis
        n = rows.shape[1]
        if rows.shape[0] == 0:
            return Subspace(np.zeros((0, n)))
        return Subspace(rows).orthonormalized()

    return EigenSplit(nonneg=side(mask), neg=side(mask_neg))


def orthogonal_complement(A, sub: Subspace) -> Subspace:
    """All z with <z, x>_A = 0 for every x in sub: the nullspace of (U A).

    Returned with an orthonormal (Euclidean) basis of dimension n - dim(sub).
    """
    a = form_matrix(A)
    if a.shape[0] != sub.n:
        raise InvalidInputError(
            f"inner product dimension {a.shape[0]} does not match ambient {sub.n}"
        )
    if sub.k == 0:
        return Subspace(np.eye(sub.n))
    null = scipy.linalg.null_space(sub.basis @ a)
    return Subspace(null.T)


def subspace_intersection(S1: Subspace, S2: Subspace) -> Subspace:
    """Basis of S1 and S2's intersection via the stacked projector constraints.

    z lies in both spans iff (I - P1) z = 0 = (I - P2) z for the Euclidean
    projectors P_i; the intersection is the nullspace of the stacked system.
    A zero-dimensional result is representable and left to the caller.
    """
    if S1.n != S2.n:
        raise InvalidInputError(f"ambient dimensions differ: {S1.n} vs {S2.n}")
    n = S1.n
    if S1.k == 0 or S2.k == 0:
        return Subspace(np.zeros((0, n)))
    eye = np.eye(n)
    stacked = []
    for s in (S1, S2):
        q = s.orthonormalized().basis
        stacked.append(eye - q.T @ q)
    null = scipy.linalg.null_space(np.vstack(stacked), rcond=INTERSECTION_RCOND)
    return Subspace(null.T)

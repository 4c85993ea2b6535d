import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadext import (
    InnerProduct,
    InvalidInputError,
    NotPositiveDefiniteError,
    QuadOnSubspace,
    RankDeficientError,
    Subspace,
    SymForm,
    TwoEllipsoidSpace,
    embed_form,
    evaluate_form,
    gram_restrict,
    max_norm,
)
from conftest import random_spd


class TestSymForm:
    def test_symmetrized_at_construction(self):
        f = SymForm([[1.0, 4.0], [0.0, 2.0]])
        assert np.array_equal(f.entries, f.entries.T)
        assert f.entries[0, 1] == 2.0

    def test_rejects_non_square(self):
        with pytest.raises(InvalidInputError):
            SymForm(np.ones((2, 3)))

    def test_rejects_nan(self):
        with pytest.raises(InvalidInputError):
            SymForm([[np.nan, 0.0], [0.0, 1.0]])

    def test_entries_read_only(self):
        f = SymForm(np.eye(2))
        with pytest.raises(ValueError):
            f.entries[0, 0] = 5.0

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_symmetrization_preserves_evaluation(self, seed):
        rng = np.random.default_rng(seed)
        m = rng.standard_normal((3, 3))
        x = rng.standard_normal(3)
        direct = float(x @ m @ x)
        assert evaluate_form(SymForm(m), x) == pytest.approx(direct, rel=1e-12, abs=1e-12)


class TestInnerProduct:
    def test_identity_passes(self):
        ip = InnerProduct(SymForm(np.eye(3)))
        assert ip.min_eigenvalue == pytest.approx(1.0)

    def test_negative_definite_rejected(self):
        with pytest.raises(NotPositiveDefiniteError):
            InnerProduct(SymForm(-np.eye(2)))

    def test_indefinite_rejected(self):
        with pytest.raises(NotPositiveDefiniteError):
            InnerProduct(SymForm(np.diag([1.0, -1e-6])))

    def test_near_singular_rejected(self):
        # smallest eigenvalue must exceed 1e-10 times the largest
        with pytest.raises(NotPositiveDefiniteError):
            InnerProduct(SymForm(np.diag([1.0, 1e-12])))

    def test_pairing(self):
        ip = InnerProduct(SymForm(np.diag([2.0, 1.0])))
        assert ip.pairing([1.0, 0.0], [1.0, 0.0]) == 2.0


class TestSubspace:
    def test_rank_deficient_rejected(self):
        with pytest.raises(RankDeficientError):
            Subspace([[1.0, 1.0], [2.0, 2.0]])

    def test_zero_dimensional_allowed(self):
        s = Subspace(np.zeros((0, 3)))
        assert s.k == 0 and s.n == 3

    def test_orthonormalized_preserves_span(self, rng):
        basis = rng.standard_normal((2, 4))
        s = Subspace(basis)
        q = s.orthonormalized().basis
        assert np.allclose(q @ q.T, np.eye(2), atol=1e-12)
        # original rows lie in the span of the orthonormal rows
        assert np.allclose(basis @ q.T @ q, basis, atol=1e-12)

    def test_coordinate_round_trip(self, rng):
        s = Subspace(rng.standard_normal((3, 5)))
        c = rng.standard_normal(3)
        x = s.from_coordinates(c)
        assert np.allclose(s.coordinates_of(x), c, atol=1e-12)


class TestQuadOnSubspace:
    def test_dimension_check(self):
        with pytest.raises(InvalidInputError):
            QuadOnSubspace(Subspace([[1.0, 0.0]]), SymForm(np.eye(2)))


class TestEvaluateForm:
    def test_euclidean_square(self):
        assert evaluate_form(SymForm(np.eye(2)), [3.0, 4.0]) == 25.0

    def test_cancellation(self):
        assert evaluate_form(SymForm(np.diag([1.0, -1.0])), [1.0, 1.0]) == 0.0

    def test_direct_expansion(self):
        assert evaluate_form(SymForm([[2.0, 1.0], [1.0, 3.0]]), [1.0, 1.0]) == 7.0

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            evaluate_form(SymForm(np.eye(2)), [1.0, 2.0, 3.0])


class TestMaxNorm:
    def test_euclidean(self):
        space = TwoEllipsoidSpace(np.eye(2), np.eye(2))
        assert max_norm(space, [0.0, 1.0]) == 1.0

    def test_takes_the_larger_ellipsoid(self):
        space = TwoEllipsoidSpace(np.diag([4.0, 1.0]), np.diag([1.0, 4.0]))
        assert max_norm(space, [1.0, 0.0]) == 2.0

    def test_zero_vector(self):
        space = TwoEllipsoidSpace(np.diag([4.0, 1.0]), np.diag([1.0, 4.0]))
        assert max_norm(space, [0.0, 0.0]) == 0.0

    def test_dimension_mismatch(self):
        space = TwoEllipsoidSpace(np.eye(2), np.eye(2))
        with pytest.raises(InvalidInputError):
            max_norm(space, [1.0])

    def test_positive_off_zero(self, rng):
        space = TwoEllipsoidSpace(random_spd(rng, 3), random_spd(rng, 3))
        for _ in range(20):
            x = rng.standard_normal(3)
            assert max_norm(space, x) > 0.0


class TestGramRestrict:
    def test_coordinate_plane(self):
        sub = Subspace([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        out = gram_restrict(SymForm(np.eye(3)), sub)
        assert np.allclose(out.entries, np.eye(2))

    def test_diagonal(self):
        sub = Subspace([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        out = gram_restrict(SymForm(np.diag([2.0, 1.0, 1.0])), sub)
        assert np.allclose(out.entries, np.diag([2.0, 1.0]))

    def test_diagonal_line(self):
        out = gram_restrict(SymForm(np.eye(2)), Subspace([[1.0, 1.0]]))
        assert np.allclose(out.entries, [[2.0]])

    def test_positive_definite_preserved(self, rng):
        a = random_spd(rng, 5)
        sub = Subspace(rng.standard_normal((3, 5)))
        restricted = gram_restrict(SymForm(a), sub)
        assert np.linalg.eigvalsh(restricted.entries)[0] > 0.0

    def test_restriction_matches_ambient_evaluation(self, rng):
        a = random_spd(rng, 4)
        sub = Subspace(rng.standard_normal((2, 4)))
        restricted = gram_restrict(SymForm(a), sub)
        for _ in range(25):
            c = rng.standard_normal(2)
            x = sub.from_coordinates(c)
            lhs = evaluate_form(restricted, c)
            rhs = evaluate_form(SymForm(a), x)
            assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            gram_restrict(SymForm(np.eye(3)), Subspace([[1.0, 0.0]]))


class TestEmbedForm:
    def test_axis_line(self):
        sub = Subspace([[1.0, 0.0]])
        out = embed_form(SymForm([[1.0]]), sub, np.diag([1.0, 0.0]))
        assert np.allclose(out.entries, np.diag([1.0, 0.0]))

    def test_zero_form(self):
        sub = Subspace([[1.0, 0.0]])
        out = embed_form(SymForm([[0.0]]), sub, np.diag([1.0, 0.0]))
        assert np.array_equal(out.entries, np.zeros((2, 2)))

    def test_diagonal_line_euclidean_projection(self, rng):
        # oracle: evaluate both sides on a grid of vectors and match
        sub = Subspace([[1.0, 1.0]])
        projector = np.full((2, 2), 0.5)
        out = embed_form(SymForm([[1.0]]), sub, projector)
        assert np.allclose(out.entries, np.full((2, 2), 0.25))
        for _ in range(20):
            x = rng.standard_normal(2)
            coords = sub.coordinates_of(projector @ x)
            assert evaluate_form(out, x) == pytest.approx(
                evaluate_form(SymForm([[1.0]]), coords), rel=1e-12, abs=1e-12
            )

    def test_inconsistent_dimensions(self):
        sub = Subspace([[1.0, 0.0]])
        with pytest.raises(InvalidInputError):
            embed_form(SymForm(np.eye(2)), sub, np.eye(2))
        with pytest.raises(InvalidInputError):
            embed_form(SymForm([[1.0]]), sub, np.eye(3))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadext import (
    InvalidInputError,
    PencilInfeasibleError,
    SymForm,
    check_pointwise_max,
    dominating_combination,
    lemma_a_combination,
    maximize_concave_on_unit_interval,
    pencil_min_eig,
    psd_interval,
)
from quadext.verify import lemma_a_instance
from conftest import random_spd, random_sym

TOL = 1e-9


def min_eig_2x2_grid(m0, m1, alphas):
    """Closed-form lambda_min of the 2x2 pencil on a grid: the independent oracle."""
    pencils = alphas[:, None, None] * m1 + (1.0 - alphas)[:, None, None] * m0
    a = pencils[:, 0, 0]
    c = pencils[:, 1, 1]
    b = pencils[:, 0, 1]
    return (a + c) / 2.0 - np.sqrt(((a - c) / 2.0) ** 2 + b**2)


class TestPencilMinEig:
    def test_identity(self):
        for alpha in (0.0, 0.3, 1.0):
            assert pencil_min_eig(np.eye(2), np.eye(2), alpha) == pytest.approx(1.0)

    def test_cancelling_forms(self):
        assert pencil_min_eig(np.diag([-1.0, 1.0]), np.diag([1.0, -1.0]), 0.5) == pytest.approx(0.0)

    def test_diagonal_arithmetic(self):
        v = pencil_min_eig(np.diag([-1.0, 2.0]), np.diag([2.0, -1.0]), 0.25)
        assert v == pytest.approx(-0.25)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            pencil_min_eig(np.eye(2), np.eye(3), 0.5)


class TestMaximizeConcave:
    def test_known_maximizer(self):
        x, v = maximize_concave_on_unit_interval(lambda a: -((a - 0.3) ** 2), tol=1e-10)
        assert x == pytest.approx(0.3, abs=1e-8)
        assert v == pytest.approx(0.0, abs=1e-15)

    def test_constant(self):
        _, v = maximize_concave_on_unit_interval(lambda a: 5.0)
        assert v == 5.0

    def test_pencil_against_grid_oracle(self):
        m0 = np.diag([-1.0, 2.0])
        m1 = np.diag([2.0, -1.0])
        x, v = maximize_concave_on_unit_interval(lambda a: pencil_min_eig(m0, m1, a))
        alphas = np.linspace(0.0, 1.0, 10_000)
        grid = min_eig_2x2_grid(m0, m1, alphas)
        i = int(np.argmax(grid))
        assert v == pytest.approx(float(grid[i]), abs=1e-7)
        assert x == pytest.approx(float(alphas[i]), abs=1e-3)

    def test_invalid_tol(self):
        with pytest.raises(InvalidInputError):
            maximize_concave_on_unit_interval(lambda a: a, tol=0.0)


class TestConcavity:
    @settings(max_examples=60, deadline=None)
    @given(
        st.integers(0, 2**32 - 1),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
    )
    def test_min_eig_concave_in_alpha(self, seed, alpha, gamma, t):
        rng = np.random.default_rng(seed)
        m0 = random_sym(rng, 3)
        m1 = random_sym(rng, 3)
        mix = t * alpha + (1.0 - t) * gamma
        lhs = pencil_min_eig(m0, m1, mix)
        rhs = t * pencil_min_eig(m0, m1, alpha) + (1.0 - t) * pencil_min_eig(m0, m1, gamma)
        assert lhs >= rhs - 1e-9


class TestLemmaACombination:
    def test_equal_psd_forms(self, rng):
        m = rng.standard_normal((2, 2))
        p = m @ m.T
        alpha = lemma_a_combination(p, p)
        assert pencil_min_eig(p, p, alpha) >= -TOL

    def test_antisymmetric_pair(self):
        alpha = lemma_a_combination(np.diag([1.0, -1.0]), np.diag([-1.0, 1.0]))
        assert alpha == pytest.approx(0.5, abs=1e-8)

    def test_planted_instances(self):
        # the generator plants a feasible combination; a grid scan confirms the result
        for seed in range(100):
            p, q, _ = lemma_a_instance(seed)
            alpha = lemma_a_combination(p, q)
            assert pencil_min_eig(q, p, alpha) >= -TOL
            grid = min_eig_2x2_grid(q.entries, p.entries, np.array([alpha]))
            assert float(grid[0]) >= -TOL

    def test_infeasible_reports_evidence(self):
        with pytest.raises(PencilInfeasibleError) as info:
            lemma_a_combination(-np.eye(2), -np.eye(2))
        assert info.value.min_eig < 0.0
        assert 0.0 <= info.value.alpha <= 1.0

    def test_requires_2x2(self):
        with pytest.raises(InvalidInputError):
            lemma_a_combination(np.eye(3), np.eye(3))


class TestCheckPointwiseMax:
    def test_identity_dominates(self, rng):
        assert check_pointwise_max(np.eye(2), random_sym(rng, 2)) is True

    def test_both_negative(self):
        assert check_pointwise_max(-np.eye(2), -np.eye(2)) is False

    def test_antisymmetric_pair(self):
        # max(P, Q) = |cos 2theta| * r^2 >= 0
        assert check_pointwise_max(np.diag([1.0, -1.0]), np.diag([-1.0, 1.0])) is True

    def test_grid_too_small(self):
        with pytest.raises(InvalidInputError):
            check_pointwise_max(np.eye(2), np.eye(2), grid=32)


class TestPsdInterval:
    def test_zero_form_full_interval(self, rng):
        a1 = random_spd(rng, 3)
        a2 = random_spd(rng, 3)
        interval = psd_interval(a1, a2, np.zeros((3, 3)))
        assert not interval.empty
        assert interval.lo == 0.0 and interval.hi == 1.0

    def test_degenerate_point(self):
        # pencil is diag(alpha - 0.5, 0.5 - alpha): feasible only at 0.5
        interval = psd_interval(np.diag([2.0, 1.0]), np.diag([1.0, 2.0]), np.diag([1.5, 1.5]))
        assert not interval.empty
        assert interval.lo == pytest.approx(0.5, abs=1e-7)
        assert interval.hi == pytest.approx(0.5, abs=1e-7)

    def test_half_interval(self):
        interval = psd_interval(np.diag([2.0, 1.0]), np.diag([1.0, 2.0]), np.diag([1.5, -1.5]))
        assert interval.lo == pytest.approx(0.5, abs=1e-7)
        assert interval.hi == 1.0

    def test_empty(self):
        interval = psd_interval(np.eye(2), np.eye(2), 2.0 * np.eye(2))
        assert interval.empty

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            psd_interval(np.eye(2), np.eye(3), np.eye(2))

    def test_soundness_on_random_instances(self, rng):
        # inside: lambda_min >= -2 tol; outside by > 10 tol: lambda_min < 0
        for _ in range(30):
            a1 = random_spd(rng, 3)
            a2 = random_spd(rng, 3)
            b = random_sym(rng, 3)
            interval = psd_interval(a1, a2, b, tol=TOL)
            if interval.empty:
                continue
            fn = lambda al: pencil_min_eig(a2 - b, a1 - b, al)
            for alpha in np.linspace(interval.lo, interval.hi, 20):
                assert fn(float(alpha)) >= -2.0 * TOL
            for outside in (interval.lo - 10.0 * TOL, interval.hi + 10.0 * TOL):
                if 0.0 <= outside <= 1.0 and not interval.contains(outside):
                    assert fn(outside) < 0.0


class TestDominatingCombination:
    def test_all_identity(self):
        cert = dominating_combination(np.eye(2), np.eye(2), np.eye(2))
        assert 0.0 <= cert.alpha <= 1.0
        assert 0.0 <= cert.beta <= 1.0
        assert pencil_min_eig(np.eye(2) + np.eye(2), np.eye(2) + np.eye(2), cert.beta) >= 0.0

    def test_split_diagonal_case(self):
        a1 = np.diag([2.0, 1.0])
        a2 = np.diag([1.0, 2.0])
        b = np.diag([1.5, -1.5])
        cert = dominating_combination(a1, a2, b)
        assert 0.5 - 1e-7 <= cert.alpha <= 1.0
        assert 0.0 <= cert.beta <= 0.5 + 1e-7
        # midpoints of [0.5, 1] and [0, 0.5]
        assert cert.alpha == pytest.approx(0.75, abs=1e-7)
        assert cert.beta == pytest.approx(0.25, abs=1e-7)

    def test_zero_form_midpoints(self, rng):
        a1 = random_spd(rng, 2)
        a2 = random_spd(rng, 2)
        cert = dominating_combination(a1, a2, np.zeros((2, 2)))
        assert cert.alpha == pytest.approx(0.5)
        assert cert.beta == pytest.approx(0.5)

    def test_certified_sandwich_holds_pointwise(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 5))
            a1 = random_spd(rng, n)
            a2 = random_spd(rng, n)
            # construct B inside the sandwich: B = -comb_beta + M^(1/2) W M^(1/2)
            alpha_p = float(rng.uniform())
            beta_p = float(rng.uniform())
            comb_a = alpha_p * a1 + (1.0 - alpha_p) * a2
            comb_b = beta_p * a1 + (1.0 - beta_p) * a2
            m = comb_a + comb_b
            w_eig, w_vec = np.linalg.eigh(random_sym(rng, n))
            w = w_vec @ np.diag(np.clip(w_eig, 0.0, 1.0)) @ w_vec.T
            root = np.linalg.cholesky(m)
            b = -comb_b + root @ w @ root.T
            cert = dominating_combination(a1, a2, b, tol=TOL)
            upper = cert.alpha * a1 + (1.0 - cert.alpha) * a2 - b
            lower = cert.beta * a1 + (1.0 - cert.beta) * a2 + b
            assert np.linalg.eigvalsh(upper)[0] >= -2.0 * TOL
            assert np.linalg.eigvalsh(lower)[0] >= -2.0 * TOL
            for _ in range(5):
                x = rng.standard_normal(n)
                slack = 2.0 * TOL * float(x @ x)
                bx = float(x @ b @ x)
                assert bx <= float(x @ upper @ x) + bx + slack
                assert -(float(x @ lower @ x) - bx) - slack <= bx

    def test_hypothesis_violation_reported(self):
        with pytest.raises(PencilInfeasibleError) as info:
            dominating_combination(np.eye(2), np.eye(2), 3.0 * np.eye(2))
        assert info.value.min_eig == pytest.approx(-2.0, abs=1e-6)

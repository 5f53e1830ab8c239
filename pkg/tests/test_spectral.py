import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qse.core import DomainError, PreconditionError
from qse.spectral import (
    HermitianOperator,
    bks_check,
    block_diag_twice,
    chiral_projector_check,
    chiral_U,
    dirac_matrices,
    free_dirac,
    negative_part_trace,
    positive_part_trace,
    projection_trace_checks,
    random_chiral_hamiltonian,
    random_contraction,
    random_hermitian,
    random_psd,
    spectral_projectors,
)

seeds = st.integers(0, 2**32 - 1)


class TestNegativePart:
    def test_diag(self):
        assert negative_part_trace(np.diag([1.0, -4.0]), 0.5) == 2.0

    def test_positive_definite(self):
        assert negative_part_trace(np.eye(3) * 2, 1.0) == 0.0

    @settings(max_examples=50)
    @given(seeds, st.integers(1, 20))
    def test_against_eigensolve(self, seed, n):
        H = random_hermitian(np.random.default_rng(seed), n)
        e = np.linalg.eigvals(H).real  # general solver as an independent oracle
        assert negative_part_trace(H, 1.0) == pytest.approx(-e[e < 0].sum(), abs=1e-12 * n)
        # [H]_- + [H]_+ traces give Tr|H|
        svals = np.linalg.svd(H, compute_uv=False)
        assert negative_part_trace(H) + positive_part_trace(H) == pytest.approx(svals.sum(), abs=1e-12 * n)

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            HermitianOperator(np.array([[0, 1], [0, 0]]))
        with pytest.raises(DomainError):
            HermitianOperator(np.ones((2, 3)))


class TestBKS:
    def test_equal(self):
        A = random_psd(np.random.default_rng(0), 5)
        lhs, rhs, ok = bks_check(A, A)
        assert lhs == pytest.approx(0, abs=1e-12) and rhs == pytest.approx(0, abs=1e-6) and ok

    def test_commuting_saturation(self):
        b = np.array([0.5, 2.0, 3.0])
        lhs, rhs, ok = bks_check(np.zeros((3, 3)), np.diag(b))
        assert lhs == pytest.approx(b.sum()) and rhs == pytest.approx(b.sum()) and ok

    def test_non_psd(self):
        with pytest.raises(DomainError):
            bks_check(-np.eye(2), np.eye(2))

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            bks_check(np.eye(2), np.eye(3))

    @settings(max_examples=300, deadline=None)
    @given(seeds, st.integers(2, 20), st.sampled_from(["wishart", "diagonal", "rank_deficient"]),
           st.sampled_from(["wishart", "diagonal", "rank_deficient"]))
    def test_random(self, seed, n, ka, kb):
        rng = np.random.default_rng(seed)
        assert bks_check(random_psd(rng, n, ka), random_psd(rng, n, kb))[2]

    def test_square_root_map_is_not_the_point(self):
        # without the square root on the right the inequality can fail, so the
        # 1/2-moment matters: small eigenvalues make Tr[A^2 - B^2]_- tiny
        A, B = np.zeros((1, 1)), 0.1 * np.eye(1)
        assert negative_part_trace(A - B) > negative_part_trace(A @ A - B @ B, 1.0)


class TestProjectionChecks:
    def test_identity(self):
        rng = np.random.default_rng(1)
        X, Y = random_hermitian(rng, 6), random_psd(rng, 6)
        r = projection_trace_checks(np.eye(6), X, Y)
        assert r.passed
        assert r.min_max[0] == pytest.approx(r.min_max[1])
        assert r.sqrt_trace[0] == pytest.approx(r.sqrt_trace[1])

    @settings(max_examples=200, deadline=None)
    @given(seeds, st.integers(1, 30))
    def test_random(self, seed, n):
        rng = np.random.default_rng(seed)
        F = random_contraction(rng, int(rng.integers(1, n + 1)), n)
        assert projection_trace_checks(F, random_hermitian(rng, n), random_psd(rng, n)).passed

    @pytest.mark.parametrize("rank", [0, 1, 3])
    def test_rank_deficient(self, rank):
        rng = np.random.default_rng(rank)
        F = random_contraction(rng, 8, 8, rank=rank)
        r = projection_trace_checks(F, random_hermitian(rng, 8), random_psd(rng, 8, "rank_deficient"))
        assert r.same_nonzero_spectrum and r.passed

    def test_not_contraction(self):
        with pytest.raises(DomainError):
            projection_trace_checks(2 * np.eye(2), np.eye(2), np.eye(2))


class TestChiral:
    def test_U_squares_to_minus_one(self):
        U = chiral_U(3)
        assert np.allclose(U @ U, -np.eye(6))

    def test_dirac_algebra(self):
        alpha, beta = dirac_matrices()
        U = chiral_U(2)
        for a in list(alpha) + [beta]:
            assert np.allclose(a @ a, np.eye(4))
            assert np.allclose(U @ a + a @ U, 0)
        for i in range(3):
            for j in range(i + 1, 3):
                assert np.allclose(alpha[i] @ alpha[j] + alpha[j] @ alpha[i], 0)

    @settings(max_examples=50)
    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=3), st.floats(0.1, 5))
    def test_free_dirac(self, p, m):
        D = free_dirac(p, m)
        E = np.sqrt(np.dot(p, p) + m * m)
        assert np.allclose(np.linalg.eigvalsh(D), [-E, -E, E, E], atol=1e-12 * max(1, E))
        r = chiral_projector_check(D, chiral_U(2))
        assert r.passed and not r.skipped
        Pp, Pm = spectral_projectors(D)
        assert np.trace(Pp).real == pytest.approx(2.0)

    def test_massless_at_rest_skipped(self):
        r = chiral_projector_check(free_dirac([0, 0, 0], 0.0), chiral_U(2))
        assert r.skipped and r.passed

    @settings(max_examples=200, deadline=None)
    @given(seeds, st.integers(1, 8))
    def test_random_family(self, seed, n):
        rng = np.random.default_rng(seed)
        H, U = random_chiral_hamiltonian(rng, n)
        S = block_diag_twice(random_hermitian(rng, n))
        r = chiral_projector_check(H, U, S)
        assert r.passed
        e = np.linalg.eigvalsh(H)
        assert np.allclose(np.sort(e), np.sort(-e), atol=1e-10)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            chiral_projector_check(np.diag([1.0, 2.0]), chiral_U(1))

    def test_S_must_commute(self):
        H, U = random_chiral_hamiltonian(np.random.default_rng(0), 2)
        S = np.diag([1.0, 2.0, 3.0, 4.0])
        with pytest.raises(PreconditionError):
            chiral_projector_check(H, U, S)


def test_ensembles():
    rng = np.random.default_rng(5)
    for kind in ("wishart", "diagonal", "rank_deficient"):
        M = random_psd(rng, 7, kind)
        assert np.linalg.eigvalsh(M)[0] >= -1e-12
    with pytest.raises(DomainError):
        random_psd(rng, 3, "other")
    assert np.linalg.norm(random_contraction(rng, 4, 6), 2) <= 1 + 1e-12

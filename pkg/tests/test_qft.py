import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eprcert import oracle, qft
from eprcert.entropy import shannon_entropy
from eprcert.errors import DomainError, NumericalError, TruncationError
from eprcert.oracle import DoubleGaussianParams as P
from eprcert.qft import QftGrid


def window_grid(params, n, window=6.0):
    return QftGrid(n, 2 * window * params.marginal_std("position") / n)


class TestGrid:
    def test_conjugate_spacing(self):
        g = QftGrid(16, 0.25)
        assert g.dx * g.dk == pytest.approx(2 * math.pi / 16)
        assert list(g.indices[[0, -1]]) == [-8, 7]

    @pytest.mark.parametrize("n,dx", [(3, 1.0), (0, 1.0), (4, 0.0)])
    def test_invalid(self, n, dx):
        with pytest.raises(DomainError):
            QftGrid(n, dx)

    def test_axes_are_centered_on_values(self):
        g = QftGrid(8, 0.5)
        np.testing.assert_allclose(g.position_axis().centers, g.x_values)
        np.testing.assert_allclose(g.momentum_axis().centers, g.k_values)


class TestKernel:
    def test_two_point(self):
        u = qft.qft_kernel(QftGrid(2, 1.0))
        np.testing.assert_allclose(np.abs(u), np.full((2, 2), 1 / math.sqrt(2)), atol=1e-15)

    @pytest.mark.parametrize("n", [2 ** j for j in range(1, 11)])
    def test_unitary(self, n):
        u = qft.qft_kernel(QftGrid(n, 1.0))
        assert np.max(np.abs(u.conj().T @ u - np.eye(n))) < 1e-12

    def test_four_point_exact(self):
        u = qft.qft_kernel(QftGrid(4, 1.0))
        assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-14

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 16])
    def test_square_is_centered_parity(self, n):
        u = qft.qft_kernel(QftGrid(n, 1.0))
        idx = np.arange(-n // 2, n // 2)
        parity = np.zeros((n, n))
        for i, l in enumerate(idx):
            j = (-l + n // 2) % n  # -l wrapped into [-n/2, n/2)
            parity[i, j] = 1.0
        np.testing.assert_allclose(u @ u, parity, atol=1e-12)

    def test_agrees_with_fft(self):
        n = 32
        u = qft.qft_kernel(QftGrid(n, 1.0))
        v = np.random.default_rng(0).standard_normal(n) + 0j
        # U^H v is the centered forward DFT, normalized.
        ref = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(v))) / math.sqrt(n)
        np.testing.assert_allclose(u.conj().T @ v, ref, atol=1e-12)


class TestDiscretize:
    def test_separable_is_rank_one(self):
        p = P(1.0, 1.0)
        s = qft.discretize(p, window_grid(p, 32))
        assert np.linalg.matrix_rank(s.amplitudes, tol=1e-10) == 1

    def test_exchange_symmetric(self):
        p = P.from_ratio(3.0)
        a = qft.discretize(p, window_grid(p, 32)).amplitudes
        np.testing.assert_allclose(a, a.T, atol=1e-15)

    def test_fine_grid_deficit(self):
        p = P.from_ratio(4.0)
        s = qft.discretize(p, window_grid(p, 256))
        assert s.norm_deficit < 1e-8

    def test_narrow_window(self):
        p = P.from_ratio(4.0)
        with pytest.raises(TruncationError):
            qft.discretize(p, window_grid(p, 64, window=2.0))

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            qft.DiscretizedPureState(np.ones((2, 3)), QftGrid(2, 1.0), QftGrid(2, 1.0), 0.0)

    def test_non_finite(self):
        with pytest.raises(NumericalError):
            qft.schmidt_conditional_entropy(
                qft.DiscretizedPureState(np.full((2, 2), np.nan + 0j), QftGrid(2, 1.0), QftGrid(2, 1.0), 0.0))


class TestMomentum:
    def test_rank_one_stays_rank_one(self):
        p = P(1.0, 1.0)
        s = qft.discretize(p, window_grid(p, 32))
        assert np.linalg.matrix_rank(qft.momentum_amplitudes(s), tol=1e-10) == 1

    def test_width_ratio(self):
        p = P.from_ratio(4.0)
        g = window_grid(p, 128)
        d = qft.momentum_distribution(qft.discretize(p, g))
        k = g.k_values
        s = k[:, None] + k[None, :]
        m = k[:, None] - k[None, :]
        ratio = math.sqrt(np.sum(d.probabilities * s * s) / np.sum(d.probabilities * m * m))
        assert ratio == pytest.approx(1 / 4.0, rel=1e-3)

    def test_parseval(self, rng):
        s = qft.random_pure_state(16, rng=rng)
        probs = np.abs(qft.momentum_amplitudes(s)) ** 2
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)

    def test_anticorrelated(self):
        p = P.from_ratio(8.0)
        g = window_grid(p, 64)
        d = qft.momentum_distribution(qft.discretize(p, g))
        k = g.k_values
        cov = np.sum(d.probabilities * k[:, None] * k[None, :])
        assert cov < 0


class TestSchmidt:
    def test_product(self):
        s = qft.from_amplitudes(np.outer([1, 2, 0, 1], [1, 1j]))
        assert qft.schmidt_conditional_entropy(s) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_entangled(self):
        s = qft.from_amplitudes(np.eye(4) / 2)
        assert qft.schmidt_conditional_entropy(s) == pytest.approx(-2.0, abs=1e-14)

    def test_double_gaussian(self):
        p = P.from_ratio(4.0)
        s = qft.discretize(p, window_grid(p, 256))
        assert qft.schmidt_conditional_entropy(s) == pytest.approx(-1.4729, abs=1e-3)
        assert qft.schmidt_conditional_entropy(s) == pytest.approx(-oracle.max_entanglement(4.0), abs=1e-7)

    def test_local_unitary_on_b(self, rng):
        s = qft.random_pure_state(8, rng=rng)
        z = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        q, _ = np.linalg.qr(z)
        t = qft.from_amplitudes(s.amplitudes @ q)
        assert qft.schmidt_conditional_entropy(t) == pytest.approx(
            qft.schmidt_conditional_entropy(s), abs=1e-10)


class TestRelationMargin:
    @pytest.mark.parametrize("r", [1, 2, 4, 8, 16])
    @pytest.mark.parametrize("n", [64, 128, 256])
    def test_double_gaussian_sweep(self, r, n):
        p = P.from_ratio(float(r))
        assert qft.discrete_relation_margin(qft.discretize(p, window_grid(p, n))) >= 0.0

    def test_product_state_single_particle_slack(self):
        p = P(1.0, 1.0)
        g = window_grid(p, 128)
        s = qft.discretize(p, g)
        t = qft.discrete_relation_terms(s)
        slack = t.h_x + math.log2(g.dx) + t.h_k + math.log2(g.dk) - math.log2(2 * math.pi)
        assert t.s_ab == pytest.approx(0.0, abs=1e-12)
        assert t.margin == pytest.approx(slack, abs=1e-12)
        # Gaussian minimum-uncertainty packet: slack is log2(e/2).
        assert slack == pytest.approx(math.log2(math.e / 2), abs=1e-3)

    def test_maximally_correlated_saturates(self):
        for n in (2, 4, 8, 16):
            t = qft.discrete_relation_terms(qft.from_amplitudes(np.eye(n)))
            # Position perfectly correlated; momentum correlated through the kernel.
            assert t.h_x == 0.0
            assert t.margin == pytest.approx(0.0, abs=1e-9)

    def test_random_states(self):
        rng = np.random.default_rng(20170412)
        for n in (2, 4, 6, 8, 12, 16):
            for _ in range(25):
                s = qft.random_pure_state(n, rng=rng)
                assert qft.discrete_relation_margin(s) >= -1e-9


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.sampled_from([2, 4, 8, 16]), st.integers(0, 2 ** 32 - 1))
def test_relation_holds_for_random_states(n, seed):
    s = qft.random_pure_state(n, rng=seed)
    assert qft.discrete_relation_margin(s) >= -1e-9


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(0, 2 ** 32 - 1))
def test_momentum_marginal_entropy_bounded(seed):
    s = qft.random_pure_state(8, rng=seed)
    d = qft.momentum_distribution(s)
    assert shannon_entropy(d.marginal("A")).bits <= 3.0 + 1e-12


class TestConvergence:
    def test_fixed_window_refinement(self):
        p = P.from_ratio(4.0)
        rows = qft.convergence_study(p, qft.fixed_window_schedule(p, [32, 64, 128, 256, 512]))
        errs = [r.lhs_error for r in rows]
        assert all(a > b for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-3
        assert all(r.margin >= 0 for r in rows)
        assert rows[-1].s_ab_error < 1e-6

    def test_separable_limit(self):
        p = P(1.0, 1.0)
        rows = qft.convergence_study(p, qft.fixed_window_schedule(p, [32, 128]))
        assert rows[-1].lhs_differential == pytest.approx(math.log2(math.pi * math.e), abs=1e-3)
        assert rows[-1].s_ab_exact == pytest.approx(0.0, abs=1e-12)

    def test_truncated_rows(self):
        p = P.from_ratio(4.0)
        sched = qft.fixed_spacing_schedule([8, 256], 0.2)
        with pytest.raises(TruncationError):
            qft.convergence_study(p, sched)
        rows = qft.convergence_study(p, sched, skip_truncated=True)
        assert rows[0].status == "truncated" and math.isnan(rows[0].margin)
        assert rows[1].status == "ok"

    def test_workers_preserve_order(self):
        p = P.from_ratio(4.0)
        sched = qft.fixed_window_schedule(p, [64, 32, 128])
        serial = qft.convergence_study(p, sched)
        threaded = qft.convergence_study(p, sched, workers=3)
        assert [r.n for r in threaded] == [64, 32, 128]
        assert [r.lhs_differential for r in threaded] == [r.lhs_differential for r in serial]

    def test_observed_orders(self):
        p = P.from_ratio(4.0)
        rows = qft.convergence_study(p, qft.fixed_window_schedule(p, [16, 32, 64]))
        orders = qft.observed_orders(rows)
        assert orders[0] is None
        assert all(o is not None and o > 0 for o in orders[1:])

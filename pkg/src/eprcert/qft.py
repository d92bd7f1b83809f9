"""Discrete position/momentum observables and their continuum limit.

An N-point grid carries positions ``X_l = l dx`` and wavenumbers
``K_m = m 2 pi / (N dx)`` for centred indices ``l, m`` in
``[-N/2, N/2 - 1]``, with ``<X_l|K_m> = exp(2 pi i l m / N) / sqrt(N)``.
For a pure bipartite state on such grids the discrete relation

    H(X_A|X_B) + H(K_A|K_B) >= log2(2 pi / (dx_A dk_A)) + S(A|B)

can be checked exactly, since S(A|B) = -S(A) is available from the
singular values of the amplitude matrix.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
import math
from typing import NamedTuple

import numpy as np

from . import oracle
from .entropy import AxisSpec, Direction, JointDistribution, conditional_entropy
from .errors import DomainError, NumericalError, TruncationError

MAX_NORM_DEFICIT = 1e-6
PARSEVAL_TOL = 1e-10


@dataclass(frozen=True)
class QftGrid:
    n: int
    dx: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2 or self.n % 2:
            raise DomainError(f"grid size must be an even integer >= 2, got {self.n}")
        if not (self.dx > 0 and math.isfinite(self.dx)):
            raise DomainError(f"dx must be positive, got {self.dx}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "dx", float(self.dx))

    @classmethod
    def spanning(cls, n, half_width):
        """Grid of ``n`` points with spacing ``2 half_width / n``."""
        return cls(n, 2.0 * half_width / n)

    @property
    def dk(self):
        return 2.0 * math.pi / (self.n * self.dx)

    @property
    def indices(self):
        return np.arange(-self.n // 2, self.n // 2)

    @property
    def x_values(self):
        return self.indices * self.dx

    @property
    def k_values(self):
        return self.indices * self.dk

    def position_axis(self, label="x", units=""):
        return AxisSpec(label, self.dx, -0.5 * self.n * self.dx, self.n, units)

    def momentum_axis(self, label="k", units=""):
        return AxisSpec(label, self.dk, -0.5 * self.n * self.dk, self.n, units)


@lru_cache(maxsize=16)
def _kernel(n):
    idx = np.arange(-n // 2, n // 2)
    u = np.exp(2j * np.pi * np.outer(idx, idx) / n) / math.sqrt(n)
    u.setflags(write=False)
    return u


def qft_kernel(grid):
    """Unitary ``U[l, m] = <X_l|K_m>`` on centred indices."""
    n = grid if isinstance(grid, int) else grid.n
    return _kernel(n)


@dataclass(frozen=True)
class DiscretizedPureState:
    amplitudes: np.ndarray
    grid_a: QftGrid
    grid_b: QftGrid
    norm_deficit: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.grid_a.n, self.grid_b.n):
            raise DomainError(f"amplitude shape {amps.shape} does not match grids")
        if not np.all(np.isfinite(amps)):
            raise NumericalError("amplitudes contain non-finite values")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)


def _normalized(amps):
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if not norm2 > 0:
        raise NumericalError("state has zero norm")
    return amps / math.sqrt(norm2), norm2


def from_amplitudes(amplitudes, grid_a=None, grid_b=None):
    """Wrap an arbitrary amplitude matrix (normalized here) as a grid state."""
    amps, _ = _normalized(np.asarray(amplitudes, dtype=np.complex128))
    grid_a = grid_a or QftGrid(amps.shape[0], 1.0)
    grid_b = grid_b or QftGrid(amps.shape[1], 1.0)
    return DiscretizedPureState(amps, grid_a, grid_b, 0.0)


def random_pure_state(n_a, n_b=None, rng=None):
    """Haar-random pure state: uniform on the unit sphere of amplitudes."""
    rng = np.random.default_rng(rng)
    n_b = n_a if n_b is None else n_b
    z = rng.standard_normal((n_a, n_b)) + 1j * rng.standard_normal((n_a, n_b))
    return from_amplitudes(z)


def discretize(params, grid_a, grid_b=None, max_deficit=MAX_NORM_DEFICIT):
    """Sample the double-Gaussian wavefunction at grid points.

    Amplitudes are ``psi(X_l, X_l') sqrt(dx_A dx_B)``. The probability mass
    missing from the grid (estimated by the same sum) must be below
    ``max_deficit``; the state is then renormalized.
    """
    grid_b = grid_a if grid_b is None else grid_b
    psi = oracle.wavefunction(params, grid_a.x_values[:, None], grid_b.x_values[None, :])
    amps = psi * math.sqrt(grid_a.dx * grid_b.dx)
    amps, norm2 = _normalized(amps.astype(np.complex128))
    deficit = 1.0 - norm2
    if deficit > max_deficit:
        raise TruncationError(
            f"grid loses {deficit:.3e} of the probability (limit {max_deficit:.1e}); widen the window")
    return DiscretizedPureState(amps, grid_a, grid_b, deficit)


def momentum_amplitudes(state):
    """Joint amplitudes ``<K_m, K_m'|psi>`` via the kernel on each party."""
    ua, ub = qft_kernel(state.grid_a), qft_kernel(state.grid_b)
    return ua.conj().T @ state.amplitudes @ ub.conj()


def _distribution(probs, axis_a, axis_b):
    total = float(probs.sum())
    if abs(total - 1.0) > PARSEVAL_TOL:
        raise NumericalError(f"total probability {total!r} drifted from 1")
    return JointDistribution(probs / total, axis_a, axis_b)


def position_distribution(state):
    return _distribution(np.abs(state.amplitudes) ** 2,
                         state.grid_a.position_axis("x_A"), state.grid_b.position_axis("x_B"))


def momentum_distribution(state):
    """Joint (K_A, K_B) distribution; total probability kept to 1e-10."""
    return _distribution(np.abs(momentum_amplitudes(state)) ** 2,
                         state.grid_a.momentum_axis("k_A"), state.grid_b.momentum_axis("k_B"))


def schmidt_coefficients(state):
    try:
        s = np.linalg.svd(state.amplitudes, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    return s * s


def schmidt_conditional_entropy(state):
    """S(A|B) = -S(A) for a pure state, from the singular values."""
    p = schmidt_coefficients(state)
    p = p[p > 0]
    return float(np.sum(p * np.log2(p)))


class RelationTerms(NamedTuple):
    h_x: float
    h_k: float
    bound: float
    s_ab: float
    margin: float


def discrete_relation_terms(state):
    h_x = conditional_entropy(position_distribution(state), Direction.A_GIVEN_B).bits
    h_k = conditional_entropy(momentum_distribution(state), Direction.A_GIVEN_B).bits
    bound = math.log2(2 * math.pi / (state.grid_a.dx * state.grid_a.dk))
    s_ab = schmidt_conditional_entropy(state)
    return RelationTerms(h_x, h_k, bound, s_ab, h_x + h_k - (bound + s_ab))


def discrete_relation_margin(state):
    """Slack ``lhs - rhs`` of the discrete relation; never below -1e-9."""
    return discrete_relation_terms(state).margin


class ConvergenceRow(NamedTuple):
    n: int
    dx: float
    dk: float
    lhs_differential: float
    analytic_lhs: float
    lhs_error: float
    s_ab_exact: float
    s_ab_analytic: float
    s_ab_error: float
    margin: float
    norm_deficit: float
    status: str = "ok"


def fixed_window_schedule(params, sizes, window=6.0):
    """Refine spacing at a fixed position window of ``+-window`` marginal widths."""
    half = window * params.marginal_std("position")
    return [(n, 2.0 * half / n) for n in sizes]


def fixed_spacing_schedule(sizes, dx):
    """Grow N at fixed spacing: the first of the two continuum limits."""
    return [(n, dx) for n in sizes]


def _row(params, n, dx, max_deficit, skip_truncated):
    grid = QftGrid(n, dx)
    analytic = oracle.conditional_entropy_sum(params)
    s_analytic = -oracle.max_entanglement(params)
    try:
        state = discretize(params, grid, grid, max_deficit)
    except TruncationError:
        if not skip_truncated:
            raise
        nan = float("nan")
        return ConvergenceRow(n, dx, grid.dk, nan, analytic, nan, nan, s_analytic, nan, nan,
                              nan, "truncated")
    t = discrete_relation_terms(state)
    lhs = t.h_x + math.log2(grid.dx) + t.h_k + math.log2(grid.dk)
    return ConvergenceRow(n, dx, grid.dk, lhs, analytic, abs(lhs - analytic), t.s_ab,
                          s_analytic, abs(t.s_ab - s_analytic), t.margin, state.norm_deficit)


def convergence_study(params, schedule, max_deficit=MAX_NORM_DEFICIT, skip_truncated=False,
                      workers=None):
    """Evaluate the discretized state along a refinement schedule.

    Each ``(n, dx)`` step yields the bin-corrected entropy sum (to compare
    with the closed form), the exact S(A|B) (to compare with minus the
    Schmidt entropy) and the discrete relation's margin. Rows are
    independent; ``workers`` evaluates them on a thread pool, and the output
    order always follows ``schedule``.
    """
    args = [(params, int(n), float(dx), max_deficit, skip_truncated) for n, dx in schedule]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda a: _row(*a), args))
    return [_row(*a) for a in args]


def observed_orders(rows, column="lhs_error"):
    """``log2(err_i / err_{i+1})`` between consecutive rows (None where undefined)."""
    orders = [None]
    for prev, cur in zip(rows, rows[1:]):
        e0, e1 = getattr(prev, column), getattr(cur, column)
        if e0 > 0 and e1 > 0 and math.isfinite(e0) and math.isfinite(e1):
            orders.append(math.log2(e0 / e1))
        else:
            orders.append(None)
    return orders

"""Closed-form analytics for the double-Gaussian two-particle state.

The position wavefunction is Gaussian in both the sum and the difference
coordinate::

    psi(x_A, x_B) = exp(-(x_A + x_B)^2 / (8 s+^2) - (x_A - x_B)^2 / (8 s-^2))
                    / sqrt(2 pi s+ s-)

so ``x_A + x_B`` has standard deviation ``sqrt(2) s+`` and ``x_A - x_B``
has ``sqrt(2) s-``. The correlation ratio is ``R = s+ / s-``.

Its Fourier transform (with ``psi~(k) = (2 pi)^-1 int psi e^{-i k.x}``) is

    psi~(k_A, k_B) = sqrt(2 s+ s- / pi)
                     * exp(-s+^2 (k_A + k_B)^2 / 2 - s-^2 (k_A - k_B)^2 / 2)

i.e. ``k_A + k_B`` has standard deviation ``1 / (sqrt(2) s+)`` and
``k_A - k_B`` has ``1 / (sqrt(2) s-)``: strong position correlation comes
with strong momentum anti-correlation.

Its Schmidt coefficients are geometric, ``lambda (1 - lambda)^n`` with
``lambda = 4R / (R + 1)^2``.
"""
from dataclasses import dataclass
import math
from typing import NamedTuple

import numpy as np
from scipy.special import ndtr

from .errors import DomainError

LOG2E = math.log2(math.e)


@dataclass(frozen=True)
class DoubleGaussianParams:
    """Widths of the sum and difference coordinates, in length units (mm).

    Parameters with ``sigma_plus < sigma_minus`` describe an anti-correlated
    state. They are stored canonically (widths swapped so ``R >= 1``) with
    ``anticorrelated=True``, which mirrors party B's coordinate.
    """

    sigma_plus: float
    sigma_minus: float
    anticorrelated: bool = False

    def __post_init__(self):
        sp, sm = float(self.sigma_plus), float(self.sigma_minus)
        for name, v in (("sigma_plus", sp), ("sigma_minus", sm)):
            if not (v > 0 and math.isfinite(v)):
                raise DomainError(f"{name} must be positive and finite, got {v}")
        flip = bool(self.anticorrelated)
        if sp < sm:
            sp, sm, flip = sm, sp, not flip
        object.__setattr__(self, "sigma_plus", sp)
        object.__setattr__(self, "sigma_minus", sm)
        object.__setattr__(self, "anticorrelated", flip)

    @classmethod
    def from_ratio(cls, ratio, sigma_minus=1.0):
        if not ratio > 0:
            raise DomainError(f"correlation ratio must be positive, got {ratio}")
        return cls(ratio * sigma_minus, sigma_minus)

    @property
    def ratio(self):
        return self.sigma_plus / self.sigma_minus

    @property
    def parity(self):
        return -1.0 if self.anticorrelated else 1.0

    @property
    def std_x_sum(self):
        return math.sqrt(2.0) * self.sigma_plus

    @property
    def std_x_diff(self):
        return math.sqrt(2.0) * self.sigma_minus

    @property
    def std_k_sum(self):
        return 1.0 / (math.sqrt(2.0) * self.sigma_plus)

    @property
    def std_k_diff(self):
        return 1.0 / (math.sqrt(2.0) * self.sigma_minus)

    def covariance(self, space="position"):
        """2x2 covariance of ``(x_A, x_B)`` or ``(k_A, k_B)``."""
        if space == "position":
            s2, d2 = self.std_x_sum ** 2, self.std_x_diff ** 2
        elif space == "momentum":
            s2, d2 = self.std_k_sum ** 2, self.std_k_diff ** 2
        else:
            raise ValueError(f"space must be 'position' or 'momentum', got {space!r}")
        var = 0.25 * (s2 + d2)
        cov = 0.25 * (s2 - d2) * self.parity
        return np.array([[var, cov], [cov, var]])

    def marginal_std(self, space="position"):
        return math.sqrt(self.covariance(space)[0, 0])

    def conditional_std(self, space="position"):
        """Standard deviation of one party's variable given the other's."""
        c = self.covariance(space)
        return math.sqrt(c[0, 0] - c[0, 1] ** 2 / c[1, 1])


def _ratio(params):
    if isinstance(params, DoubleGaussianParams):
        return params.ratio
    r = float(params)
    if not r > 0:
        raise DomainError(f"correlation ratio must be positive, got {r}")
    return max(r, 1.0 / r)


def wavefunction(params, x_a, x_b):
    """Real, positive position amplitude; broadcasts over array inputs."""
    x_a = np.asarray(x_a, dtype=np.float64)
    x_b = np.asarray(x_b, dtype=np.float64) * params.parity
    sp, sm = params.sigma_plus, params.sigma_minus
    return np.exp(-(x_a + x_b) ** 2 / (8 * sp * sp) - (x_a - x_b) ** 2 / (8 * sm * sm)) \
        / math.sqrt(2 * math.pi * sp * sm)


def momentum_wavefunction(params, k_a, k_b):
    k_a = np.asarray(k_a, dtype=np.float64)
    k_b = np.asarray(k_b, dtype=np.float64) * params.parity
    sp, sm = params.sigma_plus, params.sigma_minus
    return math.sqrt(2 * sp * sm / math.pi) \
        * np.exp(-0.5 * sp * sp * (k_a + k_b) ** 2 - 0.5 * sm * sm * (k_a - k_b) ** 2)


def position_density(params, x_a, x_b):
    return wavefunction(params, x_a, x_b) ** 2


def momentum_density(params, k_a, k_b):
    return momentum_wavefunction(params, k_a, k_b) ** 2


def conditional_entropies(params):
    """Analytic ``(h(x_A|x_B), h(k_A|k_B))`` in bits."""
    c = 2 * math.pi * math.e
    return (0.5 * math.log2(c * params.conditional_std("position") ** 2),
            0.5 * math.log2(c * params.conditional_std("momentum") ** 2))


def conditional_entropy_sum(params):
    """``h(x_A|x_B) + h(k_A|k_B) = log2(2 pi e / (R + 1/R))``."""
    r = _ratio(params)
    return math.log2(2 * math.pi * math.e / (r + 1 / r))


def witnessed_entanglement(params):
    """Ebits per transverse dimension certified by the exact distributions."""
    r = _ratio(params)
    return max(0.0, math.log2((r + 1 / r) / math.e))


def witness_threshold():
    """Smallest ratio R at which anything is certified: ``R + 1/R = e``."""
    e = math.e
    return 0.5 * (e + math.sqrt(e * e - 4))


def schmidt_lambda(params):
    r = _ratio(params)
    return 4 * r / (r + 1) ** 2


def binary_entropy(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def max_entanglement(params):
    """Exact entanglement entropy ``h2(lambda) / lambda`` per dimension.

    Equals the entanglement of formation of the pure double-Gaussian state
    and caps it for any state with the same correlation ratio.
    """
    lam = schmidt_lambda(params)
    return binary_entropy(lam) / lam


def gap_asymptote():
    """Large-R limit of max minus witnessed entanglement, two dimensions."""
    return 2 * (2 * LOG2E - 2)


@dataclass(frozen=True)
class SchmidtSpectrum:
    lambda0: float
    eigenvalues: np.ndarray
    truncation_bound: float

    def truncated_entropy(self):
        """Shannon entropy of the listed eigenvalues only."""
        p = self.eigenvalues[self.eigenvalues > 0]
        return float(-np.sum(p * np.log2(p)))

    def entropy(self):
        """Entropy including the analytically summed geometric tail."""
        lam, tail, m = self.lambda0, self.truncation_bound, len(self.eigenvalues)
        if tail == 0.0:
            return self.truncated_entropy()
        mean_index = m + (1 - lam) / lam
        tail_bits = -tail * math.log2(lam) - tail * mean_index * math.log2(1 - lam)
        return self.truncated_entropy() + tail_bits


def schmidt_spectrum(params, tail_tolerance=1e-12):
    """Geometric Schmidt spectrum cut once the remaining mass is below tolerance."""
    if not 0 < tail_tolerance < 1:
        raise DomainError("tail_tolerance must lie in (0, 1)")
    lam = schmidt_lambda(params)
    if lam >= 1.0:
        return SchmidtSpectrum(1.0, np.array([1.0]), 0.0)
    q = 1.0 - lam
    # Smallest m with q**m < tol; the tail beyond index m-1 has mass q**m.
    m = max(1, math.ceil(math.log(tail_tolerance) / math.log(q)))
    while q ** m >= tail_tolerance:
        m += 1
    eig = lam * q ** np.arange(m)
    return SchmidtSpectrum(lam, eig, q ** m)


class Samples(NamedTuple):
    x_a: np.ndarray
    x_b: np.ndarray
    k_a: np.ndarray
    k_b: np.ndarray


def sample(params, n, seed):
    """Draw ``n`` independent position pairs and ``n`` momentum pairs.

    Positions and momenta come from separate child streams of ``seed`` (they
    are measured on different photon pairs in practice).
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    pos_seq, mom_seq = seq.spawn(2)
    pos, mom = np.random.default_rng(pos_seq), np.random.default_rng(mom_seq)
    u = pos.normal(0.0, params.std_x_sum, n)
    v = pos.normal(0.0, params.std_x_diff, n)
    s = mom.normal(0.0, params.std_k_sum, n)
    d = mom.normal(0.0, params.std_k_diff, n)
    sign = params.parity
    return Samples(0.5 * (u + v), sign * 0.5 * (u - v), 0.5 * (s + d), sign * 0.5 * (s - d))


def binned_probabilities(params, axis_a, axis_b, space="position", nodes=8):
    """Probability mass of the exact density in each rectangular bin.

    The A coordinate is integrated exactly through the conditional normal
    CDF; the B coordinate by ``nodes``-point Gauss-Legendre per bin. Mass
    outside the axes' range is simply absent, so the result sums to less
    than one.
    """
    cov = params.covariance(space)
    var_b = cov[1, 1]
    slope = cov[0, 1] / var_b
    cond_sd = math.sqrt(cov[0, 0] - cov[0, 1] * slope)
    t, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * axis_b.bin_width
    xb = (axis_b.centers[:, None] + half * t[None, :]).ravel()
    weight_b = (half * w)[None, :].repeat(axis_b.count, axis=0).ravel()
    dens_b = np.exp(-0.5 * xb * xb / var_b) / math.sqrt(2 * math.pi * var_b)
    edges_a = axis_a.left_edge + axis_a.bin_width * np.arange(axis_a.count + 1)
    cdf = ndtr((edges_a[:, None] - slope * xb[None, :]) / cond_sd)
    mass = np.diff(cdf, axis=0) * (dens_b * weight_b)[None, :]
    return mass.reshape(axis_a.count, axis_b.count, nodes).sum(axis=2)

"""Entropic uncertainty relations with quantum memory.

Each relation has the form ``lhs >= bound + S(A|B)``, where ``lhs`` is the
sum of two measured conditional entropies for a complementary pair of
observables. Rearranged, ``lhs - bound`` is an upper bound on the quantum
conditional entropy S(A|B); its negative lower-bounds several entanglement
monotones (see :mod:`eprcert.monotones`).
"""
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from .entropy import (
    Direction,
    EntropyKind,
    EntropyValue,
    Estimator,
    conditional_entropy,
    differential_conditional_entropy,
)
from .errors import DomainError, KindMismatch


class PairKind(str, Enum):
    POSITION_MOMENTUM = "position_momentum"
    TIME_FREQUENCY = "time_frequency"
    QUADRATURES = "quadratures"
    ANGLE_OAM = "angle_oam"
    NUMBER_PHASE = "number_phase"
    DISCRETE_MUB = "discrete_mub"
    HYBRID = "hybrid_continuous_discrete"


class CommutatorConvention(str, Enum):
    UNIT = "unit"
    HALF = "half"


# (first_A, first_B, second_A, second_B): which measured variables are
# continuous. "first" is the position-like member of the pair (x, t, u,
# theta, phi); "second" its conjugate (k, omega, v, l_z, N).
_DEFAULT_SIDES = {
    PairKind.POSITION_MOMENTUM: (True, True, True, True),
    PairKind.TIME_FREQUENCY: (True, True, True, True),
    PairKind.QUADRATURES: (True, True, True, True),
    PairKind.ANGLE_OAM: (True, True, False, False),
    PairKind.NUMBER_PHASE: (True, True, False, False),
    PairKind.DISCRETE_MUB: (False, False, False, False),
    PairKind.HYBRID: (True, False, True, False),
}

_FOURIER_KINDS = {
    PairKind.POSITION_MOMENTUM,
    PairKind.TIME_FREQUENCY,
    PairKind.QUADRATURES,
    PairKind.ANGLE_OAM,
    PairKind.NUMBER_PHASE,
}


@dataclass(frozen=True)
class ObservablePairSpec:
    kind: PairKind
    commutator_convention: CommutatorConvention = CommutatorConvention.UNIT
    omega: float | None = None
    continuous_sides: tuple | None = None

    def __post_init__(self):
        kind = PairKind(self.kind)
        conv = CommutatorConvention(self.commutator_convention)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "commutator_convention", conv)
        if kind is PairKind.DISCRETE_MUB:
            if self.omega is None:
                raise DomainError("discrete_mub pairs need the complementarity constant omega")
            if not self.omega >= 1:
                raise DomainError(f"omega must be >= 1, got {self.omega}")
            object.__setattr__(self, "omega", float(self.omega))
        elif self.omega is not None:
            raise DomainError(f"omega is only meaningful for discrete_mub, not {kind.value}")
        if conv is CommutatorConvention.HALF and kind is not PairKind.QUADRATURES:
            raise DomainError("the half commutator convention applies to quadratures only")
        sides = _DEFAULT_SIDES[kind] if self.continuous_sides is None else tuple(
            bool(s) for s in self.continuous_sides)
        if len(sides) != 4:
            raise DomainError("continuous_sides needs four flags (first_A, first_B, second_A, second_B)")
        object.__setattr__(self, "continuous_sides", sides)

    def predicted_sides(self, direction):
        """Continuity flags of the two predicted variables for ``direction``."""
        s = self.continuous_sides
        if Direction(direction) is Direction.A_GIVEN_B:
            return s[0], s[2]
        return s[1], s[3]


@dataclass(frozen=True)
class SteeringAssessment:
    lhs_bits: float
    bound_bits: float
    s_ab_upper_bits: float
    direction: Direction
    relation_id: str
    vacuous: bool = False
    terms: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.s_ab_upper_bits != self.lhs_bits - self.bound_bits:
            raise ValueError("s_ab_upper_bits must equal lhs_bits - bound_bits")

    @classmethod
    def from_terms(cls, first, second, bound_bits, direction, relation_id, vacuous=False):
        lhs = float(first) + float(second)
        bound = float(bound_bits)
        return cls(lhs, bound, lhs - bound, Direction(direction), relation_id, vacuous,
                   (first, second))

    @property
    def certified_bits(self):
        """Lower bound on -S implied by this assessment, clamped at zero."""
        return max(0.0, -self.s_ab_upper_bits)


def _require_kind(value, kind, name):
    if not isinstance(value, EntropyValue):
        raise KindMismatch(f"{name} must be an EntropyValue, got {type(value).__name__}")
    if value.kind is not kind:
        raise KindMismatch(f"{name} is {value.kind.value}, expected {kind.value}")


def _require_positive(**values):
    for name, v in values.items():
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be positive and finite, got {v}")


def fourier_bound_bits(spec):
    """Constant of the continuous relation for a Fourier-conjugate pair."""
    bound = math.log2(2.0 * math.pi)
    if spec.commutator_convention is CommutatorConvention.HALF:
        bound += 1.0
    return bound


def discrete_memory_bound(h_qq, h_rr, omega, direction=Direction.A_GIVEN_B):
    """Relation for two discrete observables with complementarity ``omega``."""
    _require_kind(h_qq, EntropyKind.DISCRETE, "h_qq")
    _require_kind(h_rr, EntropyKind.DISCRETE, "h_rr")
    if not omega >= 1:
        raise DomainError(f"omega must be >= 1, got {omega}")
    return SteeringAssessment.from_terms(h_qq.bits, h_rr.bits, math.log2(omega), direction,
                                         "discrete_memory")


def continuous_memory_bound(h_xx, h_kk, spec, direction=Direction.A_GIVEN_B):
    """Relation for Fourier-conjugate observables, with ``log2(2 pi)`` bound.

    The entropy kinds must match the pair's continuity flags for the
    predicted variables, e.g. for ``angle_oam`` the angle entropy is
    differential and the angular-momentum entropy discrete.
    """
    if spec.kind not in _FOURIER_KINDS:
        raise KindMismatch(f"{spec.kind.value} is not a Fourier-conjugate pair")
    first_cont, second_cont = spec.predicted_sides(direction)
    as_kind = {True: EntropyKind.DIFFERENTIAL, False: EntropyKind.DISCRETE}
    _require_kind(h_xx, as_kind[first_cont], "h_xx")
    _require_kind(h_kk, as_kind[second_cont], "h_kk")
    return SteeringAssessment.from_terms(h_xx.bits, h_kk.bits, fourier_bound_bits(spec), direction,
                                         f"continuous_memory:{spec.kind.value}")


def _resolution_bound(h_xx, h_kk, dx_a, dk_a, direction, relation_id):
    _require_kind(h_xx, EntropyKind.DISCRETE, "h_xx")
    _require_kind(h_kk, EntropyKind.DISCRETE, "h_kk")
    _require_positive(dx_a=dx_a, dk_a=dk_a)
    bound = math.log2(2.0 * math.pi / (dx_a * dk_a))
    return SteeringAssessment.from_terms(h_xx.bits, h_kk.bits, bound, direction, relation_id,
                                         vacuous=bound <= 0.0)


def coarse_grained_bound(h_xx, h_kk, dx_a, dk_a, direction=Direction.A_GIVEN_B):
    """Finite-resolution relation with bound ``log2(2 pi / (dx dk))``.

    Resolutions coarser than ``dx * dk = 2 pi`` give a non-positive bound;
    the result is then flagged ``vacuous`` instead of raising.
    """
    return _resolution_bound(h_xx, h_kk, dx_a, dk_a, direction, "coarse_grained")


def hybrid_bound(h_xsig, h_ksig, dx_a, dk_a):
    """Spatial side of A against arbitrary discrete observables of B.

    Same arithmetic as :func:`coarse_grained_bound`; the result bounds
    S(A_x|B_sigma). Only the A-given-B direction exists.
    """
    return _resolution_bound(h_xsig, h_ksig, dx_a, dk_a, Direction.A_GIVEN_B, "hybrid")


def variance_assessment(sigma_x, sigma_k, direction=Direction.A_GIVEN_B):
    """Continuous relation with each conditional entropy replaced by the
    Gaussian entropy of the corresponding sum/difference width."""
    _require_positive(sigma_x=sigma_x, sigma_k=sigma_k)
    hx = gaussian_entropy_chain(sigma_x).bits
    hk = gaussian_entropy_chain(sigma_k).bits
    return SteeringAssessment.from_terms(hx, hk, math.log2(2.0 * math.pi), direction, "variance")


def variance_witness(sigma_x, sigma_k):
    """Entanglement of formation lower bound from two correlation widths.

    ``sigma_x`` is the standard deviation of ``x_A -/+ x_B`` and ``sigma_k``
    that of ``k_A +/- k_B``.
    """
    _require_positive(sigma_x=sigma_x, sigma_k=sigma_k)
    return max(0.0, -math.log2(math.e * sigma_x * sigma_k))


def gaussian_entropy_chain(sigma):
    """Differential entropy of a Gaussian of width ``sigma``: the largest
    entropy any distribution with that standard deviation can have."""
    _require_positive(sigma=sigma)
    return EntropyValue(0.5 * math.log2(2.0 * math.pi * math.e * sigma * sigma),
                        EntropyKind.DIFFERENTIAL, False)


def single_particle_bound(h_x, h_k):
    """Upper bound on the von Neumann entropy S(A) of one particle."""
    _require_kind(h_x, EntropyKind.DIFFERENTIAL, "h_x")
    _require_kind(h_k, EntropyKind.DIFFERENTIAL, "h_k")
    return h_x.bits + h_k.bits - math.log2(2.0 * math.pi)


def complementarity_omega(basis_q, basis_r, atol=1e-10):
    """``1 / max |<q_i|r_j>|^2`` for two orthonormal bases given as columns."""
    q = np.asarray(basis_q, dtype=np.complex128)
    r = np.asarray(basis_r, dtype=np.complex128)
    if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape != r.shape:
        raise DomainError("bases must be square matrices of equal size")
    eye = np.eye(q.shape[0])
    for name, m in (("basis_q", q), ("basis_r", r)):
        if not np.allclose(m.conj().T @ m, eye, atol=atol):
            raise DomainError(f"{name} is not orthonormal")
    overlap = np.max(np.abs(q.conj().T @ r) ** 2)
    return float(1.0 / overlap)


def _units_conjugate(first, second):
    if first == "1" and second == "1":
        return True
    if first == "rad" and second == "1":
        return True
    return bool(first) and second == f"rad/{first}"


def _check_axes(first, second, spec, direction):
    """Validate units and angular wrapping for the predicted axes."""
    if Direction(direction) is Direction.A_GIVEN_B:
        ax_first, ax_second = first.axis_a, second.axis_a
    else:
        ax_first, ax_second = first.axis_b, second.axis_b
    if spec.kind is PairKind.DISCRETE_MUB:
        return ax_first, ax_second
    if not ax_first.units or not ax_second.units:
        raise DomainError(
            f"units must be declared for {spec.kind.value} axes "
            f"({ax_first.label!r}, {ax_second.label!r})")
    if not _units_conjugate(ax_first.units, ax_second.units):
        raise DomainError(
            f"axes {ax_first.label!r} [{ax_first.units}] and {ax_second.label!r} "
            f"[{ax_second.units}] are not Fourier-conjugate units")
    if spec.kind in (PairKind.ANGLE_OAM, PairKind.NUMBER_PHASE):
        for ax in (first.axis_a, first.axis_b):
            if not ax.periodic or abs(ax.span - 2.0 * math.pi) > 1e-9:
                raise DomainError(f"angular axis {ax.label!r} must be periodic and span 2 pi")
    return ax_first, ax_second


def assess(first, second, spec, direction=Direction.A_GIVEN_B, estimator=Estimator.PLUGIN):
    """Evaluate the relation appropriate to ``spec`` on two binned datasets.

    ``first`` holds the joint distribution of the position-like observable
    (x, t, u, theta, phi or Q) and ``second`` that of its conjugate.
    """
    direction = Direction(direction)
    ax_first, ax_second = _check_axes(first, second, spec, direction)
    if spec.kind is PairKind.DISCRETE_MUB:
        return discrete_memory_bound(conditional_entropy(first, direction, estimator),
                                     conditional_entropy(second, direction, estimator),
                                     spec.omega, direction)
    if spec.kind is PairKind.HYBRID:
        if direction is not Direction.A_GIVEN_B:
            raise KindMismatch("hybrid pairs only bound S(A_x|B_sigma)")
        return hybrid_bound(conditional_entropy(first, direction, estimator),
                            conditional_entropy(second, direction, estimator),
                            ax_first.bin_width, ax_second.bin_width)
    if spec.kind is PairKind.POSITION_MOMENTUM and spec.continuous_sides == (True,) * 4:
        return coarse_grained_bound(conditional_entropy(first, direction, estimator),
                                    conditional_entropy(second, direction, estimator),
                                    ax_first.bin_width, ax_second.bin_width, direction)
    first_cont, second_cont = spec.predicted_sides(direction)
    pick = {True: differential_conditional_entropy, False: conditional_entropy}
    return continuous_memory_bound(pick[first_cont](first, direction, estimator),
                                   pick[second_cont](second, direction, estimator),
                                   spec, direction)

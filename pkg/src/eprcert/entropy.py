"""Shannon entropies of binned joint distributions.

All entropies are in bits. Joint tables are stored with party A along the
rows and party B along the columns, so ``probabilities[i, j]`` is the
probability that A landed in bin ``i`` and B in bin ``j``.

Differential (continuous) entropies are obtained from discrete ones by
adding ``log2`` of the bin width of the predicted variable; the width of
the conditioning variable cancels.
"""
from dataclasses import dataclass, field
from enum import Enum
import math

import numpy as np

from . import kernels
from .errors import DomainError, EmptyHistogram, NormalizationError, ShapeError

NORMALIZATION_TOL = 1e-12


class Direction(str, Enum):
    A_GIVEN_B = "A_given_B"
    B_GIVEN_A = "B_given_A"

    @property
    def mirrored(self):
        return Direction.B_GIVEN_A if self is Direction.A_GIVEN_B else Direction.A_GIVEN_B


class EntropyKind(str, Enum):
    DISCRETE = "discrete"
    DIFFERENTIAL = "differential"


class Estimator(str, Enum):
    PLUGIN = "plugin"
    MILLER_MADOW = "miller_madow"


@dataclass(frozen=True)
class AxisSpec:
    """Uniform binning of one measured variable.

    ``offset`` is the coordinate of the centre of bin 0. A periodic axis
    (angles) wraps with period ``count * bin_width``.
    """

    label: str
    bin_width: float
    offset: float = 0.0
    count: int = 1
    units: str = ""
    periodic: bool = False

    def __post_init__(self):
        if not (self.bin_width > 0 and math.isfinite(self.bin_width)):
            raise DomainError(f"axis {self.label!r}: bin_width must be positive, got {self.bin_width}")
        if int(self.count) != self.count or self.count < 1:
            raise DomainError(f"axis {self.label!r}: count must be a positive integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "bin_width", float(self.bin_width))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def left_edge(self):
        return self.offset - 0.5 * self.bin_width

    @property
    def span(self):
        return self.count * self.bin_width

    @property
    def centers(self):
        return self.offset + self.bin_width * np.arange(self.count)

    @classmethod
    def centered(cls, label, half_width, count, units="", periodic=False):
        """Axis of ``count`` bins covering ``[-half_width, half_width)``."""
        width = 2.0 * half_width / count
        return cls(label, width, -half_width + 0.5 * width, count, units, periodic)


@dataclass(frozen=True)
class JointDistribution:
    probabilities: np.ndarray
    axis_a: AxisSpec
    axis_b: AxisSpec
    sample_size: int | None = None
    counts: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=np.float64)
        if p.ndim != 2 or p.shape != (self.axis_a.count, self.axis_b.count):
            raise ShapeError(
                f"probability table shape {p.shape} does not match axes "
                f"({self.axis_a.count}, {self.axis_b.count})")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise NormalizationError("probabilities must be finite and non-negative")
        total = float(p.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        if self.sample_size is not None and self.sample_size < 1:
            raise DomainError("sample_size must be a positive integer")

    @property
    def shape(self):
        return self.probabilities.shape

    def marginal(self, side):
        """Marginal probabilities of party ``"A"`` or ``"B"``."""
        if side == "A":
            return self.probabilities.sum(axis=1)
        if side == "B":
            return self.probabilities.sum(axis=0)
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")

    def transposed(self):
        """The same data with the party roles exchanged."""
        return JointDistribution(
            self.probabilities.T, self.axis_b, self.axis_a, self.sample_size,
            None if self.counts is None else self.counts.T)


@dataclass(frozen=True)
class EntropyValue:
    bits: float
    kind: EntropyKind = EntropyKind.DISCRETE
    conditioned: bool = False
    estimator: Estimator = Estimator.PLUGIN

    def __float__(self):
        return float(self.bits)


def from_histogram(counts, axis_a, axis_b):
    """Normalize a table of integer counts into a :class:`JointDistribution`."""
    c = np.asarray(counts)
    if c.ndim != 2 or c.shape != (axis_a.count, axis_b.count):
        raise ShapeError(
            f"histogram shape {c.shape} does not match axes ({axis_a.count}, {axis_b.count})")
    if c.dtype.kind == "f":
        if not np.all(np.isfinite(c)) or np.any(c != np.round(c)):
            raise DomainError("histogram counts must be integers")
    elif c.dtype.kind not in "iu":
        raise DomainError(f"histogram counts must be integers, got dtype {c.dtype}")
    c = c.astype(np.int64)
    if np.any(c < 0):
        raise DomainError("histogram counts must be non-negative")
    total = int(c.sum())
    if total == 0:
        raise EmptyHistogram("histogram has no counts")
    c.setflags(write=False)
    return JointDistribution(c / total, axis_a, axis_b, sample_size=total, counts=c)


def _check_normalized(p):
    p = np.asarray(p, dtype=np.float64)
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise NormalizationError("probabilities must be finite and non-negative")
    total = float(p.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"probabilities sum to {total!r}, not 1")
    return p


def _miller_madow_bias(p, sample_size):
    if sample_size is None:
        raise DomainError("Miller-Madow correction needs the sample size of the histogram")
    occupied = int(np.count_nonzero(p))
    return (occupied - 1) / (2.0 * sample_size * math.log(2.0))


def shannon_entropy(dist, estimator=Estimator.PLUGIN, sample_size=None):
    """Joint Shannon entropy of a :class:`JointDistribution` or of a 1-D marginal."""
    estimator = Estimator(estimator)
    if isinstance(dist, JointDistribution):
        p = dist.probabilities
        sample_size = dist.sample_size if sample_size is None else sample_size
    else:
        p = _check_normalized(dist)
    bits = kernels.entropy_bits(p)
    if estimator is Estimator.MILLER_MADOW:
        bits += _miller_madow_bias(p, sample_size)
    return EntropyValue(bits, EntropyKind.DISCRETE, False, estimator)


def _rows_given_columns(p, estimator, sample_size):
    joint, cond = kernels.joint_and_column_entropy(p)
    if estimator is Estimator.MILLER_MADOW:
        joint += _miller_madow_bias(p, sample_size)
        cond += _miller_madow_bias(p.sum(axis=0), sample_size)
    # Rounding can leave -1e-16 for a perfectly correlated table.
    return max(joint - cond, 0.0)


def conditional_entropy(dist, direction=Direction.A_GIVEN_B, estimator=Estimator.PLUGIN):
    """H(A|B) = H(AB) - H(B), or the mirrored H(B|A)."""
    direction = Direction(direction)
    estimator = Estimator(estimator)
    p = dist.probabilities
    if direction is Direction.B_GIVEN_A:
        p = p.T
    bits = _rows_given_columns(p, estimator, dist.sample_size)
    return EntropyValue(bits, EntropyKind.DISCRETE, True, estimator)


def differential_conditional_entropy(dist, direction=Direction.A_GIVEN_B,
                                     estimator=Estimator.PLUGIN):
    """Bin-corrected h(A|B) = H(A|B) + log2(bin width of A), or mirrored."""
    direction = Direction(direction)
    h = conditional_entropy(dist, direction, estimator)
    axis = dist.axis_a if direction is Direction.A_GIVEN_B else dist.axis_b
    return EntropyValue(h.bits + math.log2(axis.bin_width), EntropyKind.DIFFERENTIAL, True, h.estimator)


def differential_entropy(dist, side="A", estimator=Estimator.PLUGIN):
    """Unconditioned bin-corrected marginal entropy h(A) or h(B)."""
    axis = dist.axis_a if side == "A" else dist.axis_b
    h = shannon_entropy(dist.marginal(side), estimator, dist.sample_size)
    return EntropyValue(h.bits + math.log2(axis.bin_width), EntropyKind.DIFFERENTIAL, False, h.estimator)


def merge_bins(dist, side, boundaries):
    """Coarse-grain one axis by merging runs of adjacent bins.

    ``boundaries`` are the start indices of the merged groups (the first must
    be 0). Merged bins are generally of unequal width, so the resulting axis
    keeps the original width and offset only when every group has the same
    size; otherwise the nominal width is the widest group. Use the result for
    discrete entropies only in that case.
    """
    axis = dist.axis_a if side == "A" else dist.axis_b
    starts = np.asarray(boundaries, dtype=np.int64)
    if starts.ndim != 1 or starts.size == 0 or starts[0] != 0 or np.any(np.diff(starts) <= 0) \
            or starts[-1] >= axis.count:
        raise DomainError(f"invalid merge boundaries {boundaries!r} for {axis.count} bins")
    p = dist.probabilities if side == "A" else dist.probabilities.T
    merged = np.add.reduceat(p, starts, axis=0)
    sizes = np.diff(np.append(starts, axis.count))
    widest = int(sizes.max())
    new_axis = AxisSpec(axis.label, axis.bin_width * widest,
                        axis.left_edge + 0.5 * axis.bin_width * sizes[0],
                        len(starts), axis.units, axis.periodic)
    counts = None
    if dist.counts is not None:
        c = dist.counts if side == "A" else dist.counts.T
        counts = np.add.reduceat(c, starts, axis=0)
    if side == "B":
        merged = merged.T
        counts = None if counts is None else counts.T
        return JointDistribution(merged / merged.sum(), dist.axis_a, new_axis, dist.sample_size, counts)
    return JointDistribution(merged / merged.sum(), new_axis, dist.axis_b, dist.sample_size, counts)

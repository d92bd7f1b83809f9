"""Certified entanglement lower bounds from EPR-steering correlations.

Two joint histograms of complementary observables (e.g. transverse
position and wavenumber of photon pairs) bound the quantum conditional
entropy S(A|B) from above; its negative bounds the entanglement of
formation, relative entropy of entanglement and squashed entanglement,
and the mean over both directions bounds the distillable entanglement.
"""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DirectionMismatch,
    DomainError,
    EmptyHistogram,
    EmptyInput,
    EprCertError,
    KindMismatch,
    NormalizationError,
    NumericalError,
    ParseError,
    ShapeError,
    TruncationError,
)
from .entropy import (  # noqa: E402
    AxisSpec,
    Direction,
    EntropyKind,
    EntropyValue,
    Estimator,
    JointDistribution,
    conditional_entropy,
    differential_conditional_entropy,
    differential_entropy,
    from_histogram,
    shannon_entropy,
)
from .witness import (  # noqa: E402
    ObservablePairSpec,
    PairKind,
    SteeringAssessment,
    assess,
    coarse_grained_bound,
    continuous_memory_bound,
    discrete_memory_bound,
    hybrid_bound,
    variance_witness,
)
from .monotones import EntanglementCertificate, certify, combine_dofs  # noqa: E402
from .oracle import DoubleGaussianParams  # noqa: E402

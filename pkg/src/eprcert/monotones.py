"""Lower bounds on entanglement monotones from steering assessments.

E_F, E_RE and E_SQ are bounded below by ``max(0, -S(A|B), -S(B|A))``; the
distillable entanglement E_D by the mean of the two negative conditional
entropies. Bounds from independent degrees of freedom add, by
subadditivity of the quantum conditional entropy.
"""
from dataclasses import dataclass
import math
from typing import NamedTuple

from .errors import DirectionMismatch, EmptyInput


class DofContribution(NamedTuple):
    label: str
    ebits: float
    ed_ebits: float
    s_ab_upper: float
    s_ba_upper: float | None


@dataclass(frozen=True)
class EntanglementCertificate:
    ef_ere_esq_lower: float
    ed_lower: float
    s_ab_upper: float
    s_ba_upper: float | None
    per_dof_contributions: tuple
    relation_ids: tuple
    estimator_note: str = "plugin"
    ed_certified: bool = False
    ed_raw_mean: float | None = None

    @property
    def vacuous(self):
        """True when nothing at all is certified."""
        return self.ef_ere_esq_lower <= 0.0

    def to_dict(self):
        return {
            "ef_ere_esq_lower": self.ef_ere_esq_lower,
            "ed_lower": self.ed_lower,
            "ed_certified": self.ed_certified,
            "ed_raw_mean": self.ed_raw_mean,
            "s_ab_upper": self.s_ab_upper,
            "s_ba_upper": self.s_ba_upper,
            "vacuous": self.vacuous,
            "per_dof_contributions": [c._asdict() for c in self.per_dof_contributions],
            "relation_ids": list(self.relation_ids),
            "estimator_note": self.estimator_note,
        }


def certify(s_ab, s_ba=None, label="dof", estimator_note="plugin"):
    """Turn one or two mirrored steering assessments into a certificate.

    With a single direction only E_F/E_RE/E_SQ are bounded; E_D is reported
    as not certified (zero, ``ed_certified=False``).
    """
    relation_ids = (s_ab.relation_id,)
    s_ab_up = s_ab.s_ab_upper_bits
    if s_ba is None:
        ef = max(0.0, -s_ab_up)
        ed, ed_certified, raw = 0.0, False, None
        s_ba_up = None
    else:
        if s_ba.direction is not s_ab.direction.mirrored:
            raise DirectionMismatch(
                f"second assessment must be {s_ab.direction.mirrored.value}, got {s_ba.direction.value}")
        if s_ba.relation_id != s_ab.relation_id:
            raise DirectionMismatch(
                f"directions use different relations: {s_ab.relation_id} vs {s_ba.relation_id}")
        s_ba_up = s_ba.s_ab_upper_bits
        ef = max(0.0, -s_ab_up, -s_ba_up)
        raw = 0.5 * (-s_ab_up - s_ba_up)
        ed, ed_certified = max(0.0, raw), True
    contribution = DofContribution(label, ef, ed, s_ab_up, s_ba_up)
    return EntanglementCertificate(ef, ed, s_ab_up, s_ba_up, (contribution,), relation_ids,
                                   estimator_note, ed_certified, raw)


def combine_dofs(certs):
    """Add certificates from independent degrees of freedom of one pair.

    Totals are exact sums (``math.fsum``) over the flattened per-DOF
    contributions, so combining is order-independent and associative.
    """
    certs = list(certs)
    if not certs:
        raise EmptyInput("combine_dofs needs at least one certificate")
    parts = tuple(c for cert in certs for c in cert.per_dof_contributions)
    ef = math.fsum(c.ebits for c in parts)
    ed_certified = all(cert.ed_certified for cert in certs)
    ed = math.fsum(c.ed_ebits for c in parts) if ed_certified else 0.0
    s_ab = math.fsum(c.s_ab_upper for c in parts)
    s_ba = None
    if all(c.s_ba_upper is not None for c in parts):
        s_ba = math.fsum(c.s_ba_upper for c in parts)
    raw = None
    if ed_certified and s_ba is not None:
        raw = 0.5 * (-s_ab - s_ba)
    relation_ids = tuple(dict.fromkeys(r for cert in certs for r in cert.relation_ids))
    notes = "; ".join(dict.fromkeys(cert.estimator_note for cert in certs))
    return EntanglementCertificate(ef, ed, s_ab, s_ba, parts, relation_ids, notes,
                                   ed_certified, raw)

"""Capacity regions and bounds for phase-insensitive Gaussian bosonic channels."""

from .bounds import BoundEntry, BoundReport, degext_amp_upper, degext_att_upper, h, plob_upper, report, twist_upper
from .channel import (
    IDENTITY,
    AdditiveNoise,
    Amplifier,
    Attenuator,
    Channel,
    GaussianMoments,
    apply_to_moments,
    compose,
    compose_canonical,
    make_channel,
    oracle_compose,
    to_canonical,
)
from .errors import DegenerateError, DomainError, NotInRegionError, PreconditionError
from .improve import (
    Envelope,
    ImprovedBound,
    best_upper_envelope,
    improved_q1,
    improved_q2,
    improved_upper,
    m_max_gt,
    maximize_over_low_ground,
    minimize_over_high_ground,
)
from .regions import (
    Witness,
    border_curve,
    border_f1,
    border_f2,
    classify,
    in_high_ground,
    in_low_ground,
    m_ad,
    m_eb,
    witness_low_ground,
)

__version__ = "0.1.0"

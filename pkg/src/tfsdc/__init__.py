"""Biphoton frequency-comb superdense coding: states, protocol and channel capacities."""

from .capacity import (
    CapacityResult,
    ChannelSpec,
    TransitionMatrix,
    blahut_arimoto,
    capacity_sweep,
    comparison_table,
    raw_symbol_count,
    symmetric_capacity,
    total_capacity,
    transition_matrix,
)
from .combs import (
    BiphotonCombState,
    CombSpec,
    EnvelopeSpec,
    SampledDensity,
    SpikeComb,
    biphoton_time_representation,
    make_biphoton_comb,
    make_single_photon_comb,
    physical_spectrum,
    physical_temporal_correlation,
    to_freq_basis,
    to_time_basis,
)
from .gkp import Displacement, LogicalQudit, apply_displacement, commutator_phase, logical_X, logical_Z
from .presets import Preset, list_presets, load_preset
from .protocol import (
    EncodingParams,
    MeasurementRecord,
    Message,
    NoiseModel,
    apply_fbs,
    decode,
    encode,
    measure_frequency,
    measure_time,
    monte_carlo_channel,
)

__version__ = "0.1.0"

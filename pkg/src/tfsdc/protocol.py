"""Superdense coding on a biphoton frequency comb.

Alice encodes ``(k, j)`` with a frequency shift ``k dW / n`` and a time
shift ``(j / d) dT`` on photon H.  Bob applies a frequency beamsplitter,
reads ``k`` from photon H's frequency and ``j`` from photon V's arrival time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .combs import TWO_PI, BiphotonCombState, CombSpec, SpikeComb
from .gkp import D_f, D_t, displace_photon

SQRT2 = math.sqrt(2.0)
CHUNK_TRIALS = 65_536


@dataclass(frozen=True)
class EncodingParams:
    """``d`` time bins per comb period, frequency bins of ``dW / n``, ``c`` frequency symbols."""

    d: int
    n: int
    c: int

    def __post_init__(self):
        for name in ("d", "n", "c"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    @property
    def message_count(self) -> int:
        return self.c * self.d

    def symbol(self, msg: "Message") -> int:
        return msg.k * self.d + msg.j

    def message(self, symbol: int) -> "Message":
        return Message(*divmod(int(symbol), self.d))


@dataclass(frozen=True)
class Message:
    k: int
    j: int


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian standard deviations: frequency terms in Hz, timing terms in s."""

    sigma_f_shift: float = 0.0
    sigma_f_meas: float = 0.0
    sigma_t_shift: float = 0.0
    sigma_t_meas: float = 0.0
    sigma_linewidth: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("sigma_f_shift", "sigma_f_meas", "sigma_t_shift", "sigma_t_meas", "sigma_linewidth"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def sigma_f_total(self) -> float:
        return math.hypot(self.sigma_f_shift, self.sigma_f_meas)

    @property
    def sigma_t_total(self) -> float:
        return math.sqrt(self.sigma_t_shift ** 2 + self.sigma_t_meas ** 2 + self.sigma_linewidth ** 2)

    @classmethod
    def noiseless(cls, seed: int = 0) -> "NoiseModel":
        return cls(rng_seed=seed)


@dataclass(frozen=True)
class MeasurementRecord:
    """Bob's readout; fields may be scalars or equal-length arrays."""

    freq_sample: float | np.ndarray
    time_sample: float | np.ndarray
    m_drawn: int | np.ndarray


def encode(state: BiphotonCombState, params: EncodingParams, msg: Message) -> BiphotonCombState:
    if not (0 <= msg.k < params.c and 0 <= msg.j < params.d):
        raise ValueError(f"message {msg} outside k < {params.c}, j < {params.d}")
    if state.is_separable or state.freq_offset_H or state.freq_offset_V:
        raise ValueError("encoding expects a fresh entangled comb")
    spec = state.spec
    shifted = displace_photon(state, D_t(msg.j / params.d * spec.time_period), "H")
    return displace_photon(shifted, D_f(msg.k * spec.spacing / params.n), "H")


def fbs_frequencies(w1, w2):
    """Frequency beamsplitter on an eigenstate pair."""
    return (w1 + w2) / SQRT2, (w1 - w2) / SQRT2


def apply_fbs(state: BiphotonCombState) -> BiphotonCombState:
    """Disentangle the comb: H at ``(w_p + sH + sV)/sqrt2``, V a comb of teeth ``(2 m dW + sH - sV)/sqrt2``."""
    if state.is_separable:
        raise ValueError("frequency beamsplitter already applied")
    spec = state.spec
    h_freq = (spec.center_frequency + state.freq_offset_H + state.freq_offset_V) / SQRT2
    v_spec = CombSpec((state.freq_offset_H - state.freq_offset_V) / SQRT2, SQRT2 * spec.spacing,
                      spec.truncation, spec.guard)
    v_comb = SpikeComb(v_spec, state.pair_indices, state.pair_amplitudes, "frequency")
    return replace(state, pair_indices=None, pair_amplitudes=None, separable_form=(h_freq, v_comb))


def invert_fbs(state: BiphotonCombState) -> BiphotonCombState:
    if not state.is_separable:
        raise ValueError("state has not passed the frequency beamsplitter")
    h_freq, v_comb = state.separable_form
    total = SQRT2 * h_freq - state.spec.center_frequency
    diff = SQRT2 * v_comb.spec.center_frequency
    return replace(state, pair_indices=v_comb.indices, pair_amplitudes=v_comb.amplitudes,
                   freq_offset_H=(total + diff) / 2, freq_offset_V=(total - diff) / 2,
                   separable_form=None)


def _require_separable(state):
    if not state.is_separable:
        raise ValueError("measurement needs the post-beamsplitter state")


def measure_frequency(state: BiphotonCombState, noise: NoiseModel, rng: np.random.Generator,
                      size: int | None = None):
    """Photon H frequency shift (Hz) relative to the unshifted reference, with noise.

    The 1/sqrt2 beamsplitter scaling is undone before noise is added.
    """
    _require_separable(state)
    h_freq = state.separable_form[0]
    shift_hz = (SQRT2 * h_freq - state.spec.center_frequency) / TWO_PI
    return shift_hz + rng.normal(0.0, noise.sigma_f_total, size=size)


def encoded_time_fraction(v_comb: SpikeComb) -> float:
    """Fractional time offset ``j/d`` read from the tooth-to-tooth phase ramp of photon V."""
    amps = v_comb.amplitudes
    if amps.size < 2:
        return 0.0
    consecutive = np.diff(v_comb.indices) == 1
    ramp = np.sum(amps[1:][consecutive] * np.conj(amps[:-1][consecutive]))
    return (-np.angle(ramp) / TWO_PI) % 1.0


def measure_time(state: BiphotonCombState, noise: NoiseModel, rng: np.random.Generator,
                 size: int | None = None) -> MeasurementRecord:
    """Arrival time of photon V on the unscaled lattice ``(j/d + m) dT`` plus noise.

    The tooth ``m`` is drawn with |amplitude|^2 weights; the frequency sample
    is drawn alongside so one record holds the full readout.
    """
    _require_separable(state)
    v_comb = state.separable_form[1]
    weights = np.abs(v_comb.amplitudes) ** 2
    m = rng.choice(v_comb.indices, size=size, p=weights / weights.sum())
    frac = encoded_time_fraction(v_comb)
    # V teeth are spaced sqrt2 dW, so its time comb period is dT / sqrt2
    t_scaled = (frac + m) * state.spec.time_period / SQRT2
    t = SQRT2 * t_scaled + rng.normal(0.0, noise.sigma_t_total, size=size)
    f = measure_frequency(state, noise, rng, size=size)
    return MeasurementRecord(f, t, m)


def _round_half_down(x):
    return np.ceil(np.asarray(x) - 0.5).astype(np.int64)


def decode(record: MeasurementRecord, params: EncodingParams, comb: CombSpec):
    """Nearest-bin decisions, circular in both ``k`` and ``j``; ties go to the lower bin."""
    k = _round_half_down(np.asarray(record.freq_sample) * params.n / comb.fsr_hz) % params.c
    phase = np.mod(np.asarray(record.time_sample) / comb.time_period, 1.0)
    j = _round_half_down(params.d * phase) % params.d
    if k.ndim == 0:
        return Message(int(k), int(j))
    return k, j


def monte_carlo_channel(params: EncodingParams, noise: NoiseModel, comb: CombSpec, trials: int,
                        state: BiphotonCombState | None = None) -> np.ndarray:
    """Joint counts ``[sent symbol, decoded symbol]`` over ``c*d`` symbols.

    Symbols are ``k * d + j``.  Messages are uniform; each chunk of trials
    uses its own stream spawned from ``noise.rng_seed``.
    """
    from .combs import make_biphoton_comb

    if trials < 1:
        raise ValueError("trials must be >= 1")
    M = params.message_count
    base = make_biphoton_comb(comb) if state is None else state
    received = [apply_fbs(encode(base, params, params.message(s))) for s in range(M)]
    counts = np.zeros(M * M, dtype=np.int64)
    n_chunks = -(-trials // CHUNK_TRIALS)
    streams = np.random.SeedSequence(noise.rng_seed).spawn(n_chunks)
    for c_idx, seq in enumerate(streams):
        rng = np.random.default_rng(seq)
        size = min(CHUNK_TRIALS, trials - c_idx * CHUNK_TRIALS)
        sent = rng.integers(M, size=size)
        per_msg = np.bincount(sent, minlength=M)
        for s in np.flatnonzero(per_msg):
            rec = measure_time(received[s], noise, rng, size=int(per_msg[s]))
            k, j = decode(rec, params, comb)
            counts += np.bincount(s * M + k * params.d + j, minlength=M * M)
    return counts.reshape(M, M)


def marginal_counts(counts: np.ndarray, params: EncodingParams, which: str) -> np.ndarray:
    """Collapse joint symbol counts onto the frequency (k) or time (j) channel."""
    c, d = params.c, params.d
    t = counts.reshape(c, d, c, d)
    if which == "frequency":
        return t.sum(axis=(1, 3))
    if which == "time":
        return t.sum(axis=(0, 2))
    raise ValueError(f"unknown marginal {which!r}")

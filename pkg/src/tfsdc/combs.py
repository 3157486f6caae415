"""Truncated time-frequency comb states and physical comb densities.

Ideal Dirac combs are represented by finite lists of spikes on a lattice
``center + index * spacing / subdivision`` with unit total norm.  Angular
frequencies are in rad/s; durations in s.  Time-basis wavefunctions follow
the convention <t|w> = exp(i w t) / sqrt(2 pi).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

TWO_PI = 2.0 * math.pi
SPEED_OF_LIGHT = 299_792_458.0
# 1560 nm degenerate wavelength of the photon pair
DEFAULT_CENTER = TWO_PI * SPEED_OF_LIGHT / 1560e-9
DEFAULT_TRUNCATION = 32
DEFAULT_GRID_POINTS = 4096
# A * B_PM for the sinc phase-matching amplitude
PHASE_MATCHING_CONSTANT = 2.78 / math.pi


class TruncationOverflowError(ValueError):
    """A displacement pushed spikes outside the representable lattice window."""


class GridTooCoarseError(ValueError):
    pass


@dataclass(frozen=True)
class CombSpec:
    """Comb geometry: spikes at ``center + m * spacing`` for ``|m| <= truncation``.

    ``guard`` extra periods on each side are representable so that
    displaced combs can be held without loss.
    """

    center_frequency: float
    spacing: float
    truncation: int = DEFAULT_TRUNCATION
    guard: int = 1

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("comb spacing must be positive")
        if self.truncation < 0:
            raise ValueError("truncation must be >= 0")
        if self.guard < 0:
            raise ValueError("guard must be >= 0")

    @classmethod
    def from_fsr(cls, fsr_hz: float, truncation: int = DEFAULT_TRUNCATION,
                 center_frequency: float = DEFAULT_CENTER, guard: int = 1) -> "CombSpec":
        return cls(center_frequency, TWO_PI * fsr_hz, truncation, guard)

    @property
    def time_period(self) -> float:
        return TWO_PI / self.spacing

    @property
    def fsr_hz(self) -> float:
        return self.spacing / TWO_PI

    @property
    def n_teeth(self) -> int:
        return 2 * self.truncation + 1


@dataclass(frozen=True)
class SpikeComb:
    """Finite comb of spikes in the frequency or time basis.

    Frequency basis: spike ``i`` sits at ``center + indices[i] * spacing / subdivision``.
    Time basis: ``samples`` points per time period ``subdivision * 2 pi / spacing``,
    ``indices`` run over ``0..samples-1``; ``window_start`` remembers the
    frequency index window for the inverse transform.
    """

    spec: CombSpec
    indices: np.ndarray
    amplitudes: np.ndarray
    basis: str = "frequency"
    subdivision: int = 1
    samples: int = 0
    window_start: int = 0
    dropped: int = 0

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        amp = np.asarray(self.amplitudes, dtype=complex)
        if idx.shape != amp.shape or idx.ndim != 1:
            raise ValueError("indices and amplitudes must be 1-D arrays of equal length")
        if idx.size > 1 and np.any(np.diff(idx) <= 0):
            raise ValueError("indices must be strictly increasing")
        if self.basis not in ("frequency", "time"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.subdivision < 1:
            raise ValueError("subdivision must be >= 1")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def step(self) -> float:
        if self.basis == "frequency":
            return self.spec.spacing / self.subdivision
        return self.subdivision * self.spec.time_period / self.samples

    @property
    def max_index(self) -> int:
        """Largest representable |index| in the frequency lattice."""
        return (self.spec.truncation + self.spec.guard) * self.subdivision

    def coordinates(self) -> np.ndarray:
        if self.basis == "frequency":
            return self.spec.center_frequency + self.indices * self.step
        return self.indices * self.step

    def offsets(self) -> np.ndarray:
        """Frequency offsets from the comb center (rad/s)."""
        return self.indices * self.step

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def refine(self, subdivision: int) -> "SpikeComb":
        if self.basis != "frequency":
            raise ValueError("only frequency-basis combs can be refined")
        if subdivision % self.subdivision:
            raise ValueError("new subdivision must be a multiple of the current one")
        factor = subdivision // self.subdivision
        return replace(self, indices=self.indices * factor, subdivision=subdivision)

    def __eq__(self, other):
        return self is other

    __hash__ = object.__hash__


def _keys(coords: np.ndarray, quantum: float) -> np.ndarray:
    return np.round(coords / quantum).astype(np.int64)


def overlap(a: SpikeComb, b: SpikeComb) -> complex:
    """Inner product <a|b> by matching spike coordinates."""
    if a.basis != b.basis:
        raise ValueError("combs are in different bases")
    quantum = 1e-9 * min(a.step, b.step)
    ka = _keys(a.coordinates() - a.spec.center_frequency * (a.basis == "frequency"), quantum)
    kb = _keys(b.coordinates() - a.spec.center_frequency * (b.basis == "frequency"), quantum)
    _, ia, ib = np.intersect1d(ka, kb, assume_unique=True, return_indices=True)
    return complex(np.vdot(a.amplitudes[ia], b.amplitudes[ib]))


def fidelity(a: SpikeComb, b: SpikeComb) -> float:
    """|<a|b>| for unit-norm combs; global phases drop out."""
    return abs(overlap(a, b))


def make_single_photon_comb(spec: CombSpec) -> SpikeComb:
    m = np.arange(-spec.truncation, spec.truncation + 1)
    amp = np.full(m.size, 1.0 / math.sqrt(m.size), dtype=complex)
    return SpikeComb(spec, m, amp, "frequency")


def to_time_basis(comb: SpikeComb, samples: int | None = None) -> SpikeComb:
    """Sample the periodic time wavefunction at ``samples`` points per period.

    The map ``c_q = P^-1/2 sum_m a_m exp(2 pi i m q / P)`` is an isometry
    whenever ``P`` covers the index span.
    """
    if comb.basis != "frequency":
        raise ValueError("comb is already in the time basis")
    if comb.indices.size == 0:
        raise ValueError("empty comb")
    lo, hi = int(comb.indices[0]), int(comb.indices[-1])
    span = hi - lo + 1
    P = span if samples is None else int(samples)
    if P < span:
        raise ValueError(f"need at least {span} samples per period, got {P}")
    q = np.arange(P)
    kernel = np.exp(2j * np.pi * np.outer(q, comb.indices) / P)
    amps = kernel @ comb.amplitudes / math.sqrt(P)
    return replace(comb, indices=q, amplitudes=amps, basis="time", samples=P, window_start=lo)


def to_freq_basis(comb: SpikeComb, atol: float = 1e-14) -> SpikeComb:
    if comb.basis != "time":
        raise ValueError("comb is already in the frequency basis")
    P = comb.samples
    m = comb.window_start + np.arange(P)
    kernel = np.exp(-2j * np.pi * np.outer(m, comb.indices) / P)
    amps = kernel @ comb.amplitudes / math.sqrt(P)
    keep = np.abs(amps) > atol
    return replace(comb, indices=m[keep], amplitudes=amps[keep], basis="frequency",
                   samples=0, window_start=0)


def translate_time(comb: SpikeComb, dt: float) -> SpikeComb:
    """Translate a time-basis comb by ``dt``; must be a whole number of samples."""
    if comb.basis != "time":
        raise ValueError("translate_time needs a time-basis comb")
    shift = dt / comb.step
    k = round(shift)
    if abs(shift - k) > 1e-9:
        raise ValueError(f"shift {dt} is not a multiple of the sample step {comb.step}")
    return replace(comb, amplitudes=np.roll(comb.amplitudes, k))


@dataclass(frozen=True)
class BiphotonCombState:
    """Correlated spike pairs ``|w_p/2 + m dW + sH>_H |w_p/2 - m dW + sV>_V``.

    ``spec.center_frequency`` holds the pump frequency ``w_p``.  After the
    frequency beamsplitter the state is separable: ``pairs`` is ``None`` and
    ``separable_form`` holds ``(photon_H frequency, photon_V comb)``.
    """

    spec: CombSpec
    pair_indices: np.ndarray | None
    pair_amplitudes: np.ndarray | None
    freq_offset_H: float = 0.0
    freq_offset_V: float = 0.0
    separable_form: tuple[float, SpikeComb] | None = None

    def __post_init__(self):
        if (self.pair_indices is None) == (self.separable_form is None):
            raise ValueError("state must hold either pairs or a separable form")
        if self.pair_indices is not None:
            idx = np.asarray(self.pair_indices, dtype=np.int64)
            amp = np.asarray(self.pair_amplitudes, dtype=complex)
            if idx.shape != amp.shape:
                raise ValueError("pair indices and amplitudes differ in length")
            object.__setattr__(self, "pair_indices", idx)
            object.__setattr__(self, "pair_amplitudes", amp)

    @property
    def is_separable(self) -> bool:
        return self.separable_form is not None

    @property
    def pairs(self):
        if self.pair_indices is None:
            return None
        return list(zip(self.pair_indices.tolist(), self.pair_amplitudes.tolist()))

    def pair_frequencies(self, m: int) -> tuple[float, float]:
        half = self.spec.center_frequency / 2
        dW = self.spec.spacing
        return half + m * dW + self.freq_offset_H, half - m * dW + self.freq_offset_V

    def norm(self) -> float:
        if self.is_separable:
            return self.separable_form[1].norm()
        return float(np.sum(np.abs(self.pair_amplitudes) ** 2))

    def __eq__(self, other):
        return self is other

    __hash__ = object.__hash__


def make_biphoton_comb(spec: CombSpec) -> BiphotonCombState:
    m = np.arange(-spec.truncation, spec.truncation + 1)
    amp = np.full(m.size, 1.0 / math.sqrt(m.size), dtype=complex)
    return BiphotonCombState(spec, m, amp)


def biphoton_overlap(a: BiphotonCombState, b: BiphotonCombState) -> complex:
    """<a|b> on the idealized spike representation.

    Distinct frequency offsets give orthogonal states (no shared spike pairs).
    """
    tol = 1e-9 * a.spec.spacing
    if a.is_separable != b.is_separable:
        raise ValueError("cannot compare a separable and an entangled state")
    if a.is_separable:
        (fa, va), (fb, vb) = a.separable_form, b.separable_form
        if abs(fa - fb) > tol:
            return 0j
        return overlap(va, vb)
    if abs(a.freq_offset_H - b.freq_offset_H) > tol or abs(a.freq_offset_V - b.freq_offset_V) > tol:
        return 0j
    _, ia, ib = np.intersect1d(a.pair_indices, b.pair_indices, assume_unique=True, return_indices=True)
    return complex(np.vdot(a.pair_amplitudes[ia], b.pair_amplitudes[ib]))


@dataclass(frozen=True)
class BiphotonTimeRep:
    """Biphoton comb over relative delay ``tau = t_H - t_V``.

    The optical carrier ``exp(-i w_p/2 (2t - tau))`` and any residual
    single-photon frequency offsets stay symbolic in ``carrier_offsets``;
    states with different carriers are orthogonal.
    """

    periods: np.ndarray
    delays: np.ndarray
    amplitudes: np.ndarray
    carrier_offsets: tuple[float, float]
    carrier: str = "exp(-i*(w_p/2)*(2t - tau))"

    def support(self, atol: float = 1e-9) -> np.ndarray:
        return self.delays[np.abs(self.amplitudes) > atol]


def biphoton_time_representation(state: BiphotonCombState, samples: int | None = None) -> BiphotonTimeRep:
    """Relative-delay wavefunction of an entangled comb, one replica per tooth.

    ``sum_m a_m exp(i m dW tau)`` is periodic in ``tau`` with period ``dT``;
    it is sampled at ``samples`` points per period and replicated over
    ``|l| <= N0`` periods with the norm shared evenly.
    """
    if state.is_separable:
        raise ValueError("time representation is defined before the frequency beamsplitter")
    spec = state.spec
    m = state.pair_indices
    lo = int(m.min())
    span = int(m.max()) - lo + 1
    P = span if samples is None else int(samples)
    if P < span:
        raise ValueError(f"need at least {span} samples per period")
    q = np.arange(P)
    per_period = np.exp(2j * np.pi * np.outer(q, m) / P) @ state.pair_amplitudes / math.sqrt(P)
    reps = np.arange(-spec.truncation, spec.truncation + 1)
    dT = spec.time_period
    periods = np.repeat(reps, P)
    delays = periods * dT + np.tile(q, reps.size) * dT / P
    amps = np.tile(per_period, reps.size) / math.sqrt(reps.size)
    return BiphotonTimeRep(periods, delays, amps, (state.freq_offset_H, state.freq_offset_V))


def time_rep_overlap(a: BiphotonTimeRep, b: BiphotonTimeRep, tol: float = 1e-6) -> complex:
    if any(abs(x - y) > tol for x, y in zip(a.carrier_offsets, b.carrier_offsets)):
        return 0j
    quantum = 1e-9 * float(np.min(np.diff(a.delays))) if a.delays.size > 1 else 1e-18
    _, ia, ib = np.intersect1d(_keys(a.delays, quantum), _keys(b.delays, quantum),
                               assume_unique=True, return_indices=True)
    return complex(np.vdot(a.amplitudes[ia], b.amplitudes[ib]))


# ---------------------------------------------------------------------------
# physical combs: sinc phase matching times Lorentzian cavity lines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeSpec:
    """Envelope of a cavity-filtered photon-pair source (all in Hz)."""

    phase_matching_fwhm: float
    lorentzian_fwhm: float
    free_spectral_range: float

    def __post_init__(self):
        if not self.phase_matching_fwhm > 0 or not self.free_spectral_range > 0:
            raise ValueError("bandwidth and free spectral range must be positive")
        if self.lorentzian_fwhm < 0:
            raise ValueError("linewidth must be non-negative")
        if self.lorentzian_fwhm > 0 and self.free_spectral_range / self.lorentzian_fwhm < 5:
            warnings.warn("cavity lines overlap: FSR / linewidth < 5", stacklevel=2)

    @property
    def A(self) -> float:
        """Phase-matching time scale (s); sinc argument is ``A * detuning_hz``."""
        return PHASE_MATCHING_CONSTANT / self.phase_matching_fwhm

    @property
    def half_linewidth(self) -> float:
        """Cavity field decay rate dw (rad/s); the line FWHM is 2 dw."""
        return math.pi * self.lorentzian_fwhm

    @property
    def time_period(self) -> float:
        return 1.0 / self.free_spectral_range


@dataclass
class SampledDensity:
    axis: str
    coordinates: np.ndarray
    density: np.ndarray
    unit: str = field(default="")

    def __post_init__(self):
        if self.axis not in ("detuning", "delay"):
            raise ValueError(f"unknown axis {self.axis!r}")
        if not self.unit:
            self.unit = "Hz" if self.axis == "detuning" else "s"
        if np.any(self.density < 0):
            raise ValueError("densities must be non-negative")

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.coordinates))

    def normalized(self) -> "SampledDensity":
        return SampledDensity(self.axis, self.coordinates, self.density / self.integral(), self.unit)

    @property
    def step(self) -> float:
        return float(self.coordinates[1] - self.coordinates[0])


def _grid(span, step, points):
    lo, hi = span
    if points is None:
        points = max(DEFAULT_GRID_POINTS, int(math.ceil((hi - lo) / step)) + 1) if step else DEFAULT_GRID_POINTS
    return np.linspace(lo, hi, points)


def physical_spectrum(env: EnvelopeSpec, span: tuple[float, float] | None = None,
                      points: int | None = None) -> SampledDensity:
    """Joint-spectral density along the detuning from degeneracy (Hz).

    density = |sinc(A nu) * sum_m L(nu - m FSR)|^2 with ``L`` the complex
    cavity amplitude ``dw / (dw - i 2 pi nu)``.
    """
    if env.lorentzian_fwhm <= 0:
        raise GridTooCoarseError("spectrum needs a finite cavity linewidth")
    if span is None:
        half = 1.5 * env.phase_matching_fwhm
        span = (-half, half)
    nu = _grid(span, env.lorentzian_fwhm / 10, points)
    step = nu[1] - nu[0]
    if step > env.lorentzian_fwhm / 10 * (1 + 1e-9):
        raise GridTooCoarseError(f"grid step {step:.3g} Hz exceeds linewidth/10")
    n0 = int(max(abs(nu[0]), abs(nu[-1])) // env.free_spectral_range) + 1
    dw = env.half_linewidth
    field_sum = np.zeros(nu.size, dtype=complex)
    for m in range(-n0, n0 + 1):
        field_sum += dw / (dw - 1j * TWO_PI * (nu - m * env.free_spectral_range))
    density = np.abs(np.sinc(env.A * nu) * field_sum) ** 2
    return SampledDensity("detuning", nu, density)


def physical_temporal_correlation(env: EnvelopeSpec, jitter_fwhm: float,
                                  span: tuple[float, float] | None = None,
                                  points: int | None = None,
                                  truncation: int | None = None) -> SampledDensity:
    """Coincidence density versus relative delay, blurred by detector jitter.

    density = |exp(-dw|tau|) sum_m sinc(A m FSR) cos(m dW tau)|^2, then
    convolved with a Gaussian of FWHM ``jitter_fwhm``.
    """
    if jitter_fwhm < 0:
        raise ValueError("jitter must be non-negative")
    if span is None:
        half = 5.5 * env.time_period
        span = (-half, half)
    # each period holds a rect of width A; it must be resolved before blurring
    step_req = env.A / 4
    if jitter_fwhm > 0:
        step_req = min(step_req, jitter_fwhm / 10)
    tau = _grid(span, step_req, points)
    step = tau[1] - tau[0]
    if step > step_req * (1 + 1e-9):
        raise GridTooCoarseError(f"grid step {step:.3g} s exceeds min(A/4, jitter/10) = {step_req:.3g} s")
    if truncation is None:
        # lines out to the third zero of the phase-matching sinc
        truncation = int(math.ceil(3.0 / (env.A * env.free_spectral_range)))
    m = np.arange(-truncation, truncation + 1)
    weights = np.sinc(env.A * m * env.free_spectral_range)
    dW = TWO_PI * env.free_spectral_range
    amp = np.zeros(tau.size)
    for chunk in np.array_split(np.arange(m.size), max(1, m.size // 256)):
        amp += np.cos(np.outer(tau, m[chunk] * dW)) @ weights[chunk]
    amp *= np.exp(-env.half_linewidth * np.abs(tau))
    density = amp ** 2
    if jitter_fwhm > 0:
        sigma = jitter_fwhm / (2 * math.sqrt(2 * math.log(2)))
        half_k = int(math.ceil(5 * sigma / step))
        k = np.arange(-half_k, half_k + 1) * step
        kernel = np.exp(-0.5 * (k / sigma) ** 2)
        kernel /= kernel.sum()
        density = np.convolve(density, kernel, mode="same")
    return SampledDensity("delay", tau, np.clip(density, 0.0, None))

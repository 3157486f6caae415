"""Time and frequency displacements, and the TFGKP logical qudit built from them."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from .combs import (
    BiphotonCombState,
    CombSpec,
    SpikeComb,
    TruncationOverflowError,
    make_single_photon_comb,
    overlap,
)

MAX_DENOMINATOR = 4096


class OffLatticeError(ValueError):
    """A frequency shift is not a rational fraction of the comb spacing."""


@dataclass(frozen=True)
class Displacement:
    """Translation in frequency (``amount`` in rad/s) or time (``amount`` in s)."""

    kind: str
    amount: float

    def __post_init__(self):
        if self.kind not in ("frequency", "time"):
            raise ValueError(f"unknown displacement kind {self.kind!r}")
        if not math.isfinite(self.amount):
            raise ValueError("displacement amount must be finite")

    def __add__(self, other: "Displacement") -> "Displacement":
        if other.kind != self.kind:
            raise ValueError("cannot compose displacements of different kinds")
        return Displacement(self.kind, self.amount + other.amount)

    def __mul__(self, power: int) -> "Displacement":
        return Displacement(self.kind, self.amount * power)

    __rmul__ = __mul__


def D_f(amount: float) -> Displacement:
    return Displacement("frequency", amount)


def D_t(amount: float) -> Displacement:
    return Displacement("time", amount)


def lattice_fraction(amount: float, spacing: float) -> Fraction:
    """``amount / spacing`` as an exact fraction, or OffLatticeError."""
    ratio = amount / spacing
    frac = Fraction(ratio).limit_denominator(MAX_DENOMINATOR)
    if abs(float(frac) - ratio) > 1e-9 * max(1.0, abs(ratio)):
        raise OffLatticeError(f"shift {amount} is not a rational multiple of the spacing {spacing}")
    return frac


def time_phases(offsets_in_spacings: np.ndarray, dt: float, period: float) -> np.ndarray:
    """exp(-i * offset * dt) with offsets in units of the comb spacing.

    The phase is reduced as ``2 pi * offset * (dt / period)`` so that whole
    periods cancel exactly.
    """
    cycles = np.asarray(offsets_in_spacings, dtype=float) * (dt / period)
    return np.exp(-2j * np.pi * (cycles - np.round(cycles)))


def apply_displacement(comb: SpikeComb, disp: Displacement, overflow: str = "raise") -> SpikeComb:
    """Apply a displacement to a frequency-basis comb.

    Time shifts multiply each spike by ``exp(-i (w_m - w_0) dt)``; the
    ``w_0 dt`` phase is global and dropped.  Frequency shifts translate the
    spikes, refining the lattice when the shift is a fraction of the spacing.
    ``overflow="truncate"`` drops spikes leaving the window and counts them
    in ``dropped``.
    """
    if comb.basis != "frequency":
        raise ValueError("displacements act on frequency-basis combs")
    if disp.kind == "time":
        phases = time_phases(comb.indices / comb.subdivision, disp.amount, comb.spec.time_period)
        return replace(comb, amplitudes=comb.amplitudes * phases)

    frac = lattice_fraction(disp.amount, comb.spec.spacing)
    sub = math.lcm(comb.subdivision, frac.denominator)
    comb = comb.refine(sub) if sub != comb.subdivision else comb
    shift = frac.numerator * (sub // frac.denominator)
    idx = comb.indices + shift
    inside = np.abs(idx) <= comb.max_index
    lost = int(np.count_nonzero(~inside))
    if lost and overflow == "raise":
        raise TruncationOverflowError(
            f"{lost} spike(s) shifted outside the representable window |index| <= {comb.max_index}")
    if overflow not in ("raise", "truncate"):
        raise ValueError(f"unknown overflow policy {overflow!r}")
    return replace(comb, indices=idx[inside], amplitudes=comb.amplitudes[inside],
                   dropped=comb.dropped + lost)


def displace_photon(state: BiphotonCombState, disp: Displacement, photon: str = "H") -> BiphotonCombState:
    """Single-photon displacement of one member of an entangled comb."""
    if state.is_separable:
        raise ValueError("photon displacements are defined on the entangled state")
    if photon not in ("H", "V"):
        raise ValueError("photon must be 'H' or 'V'")
    if disp.kind == "frequency":
        if photon == "H":
            return replace(state, freq_offset_H=state.freq_offset_H + disp.amount)
        return replace(state, freq_offset_V=state.freq_offset_V + disp.amount)
    spec = state.spec
    # H tooth m sits m spacings above w_p/2, V tooth m sits m below it
    sign = 1 if photon == "H" else -1
    offset = state.freq_offset_H if photon == "H" else state.freq_offset_V
    phases = time_phases(sign * state.pair_indices + offset / spec.spacing, disp.amount, spec.time_period)
    return replace(state, pair_amplitudes=state.pair_amplitudes * phases)


def commutator_phase(df: Displacement, dt: Displacement, spec: CombSpec | None = None) -> complex:
    """Measured relative phase of D_f D_t |psi> against D_t D_f |psi>.

    Evaluated on a single-photon test comb; the result should equal
    ``exp(i * df * dt)``.
    """
    if df.kind != "frequency" or dt.kind != "time":
        raise ValueError("need a frequency displacement and a time displacement")
    if spec is None:
        spec = CombSpec(0.0, 1.0, truncation=8)
    frac = lattice_fraction(df.amount, spec.spacing)
    guard = int(math.ceil(abs(float(frac)))) + 1
    spec = replace(spec, guard=max(spec.guard, guard))
    psi = make_single_photon_comb(spec)
    ft = apply_displacement(apply_displacement(psi, dt), df)
    tf = apply_displacement(apply_displacement(psi, df), dt)
    ov = overlap(tf, ft)
    return ov / abs(ov)


@dataclass(frozen=True)
class LogicalQudit:
    d: int
    base_comb: CombSpec

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("qudit dimension must be >= 2")

    def zero(self) -> SpikeComb:
        return make_single_photon_comb(self.base_comb)

    def basis_state(self, j: int) -> SpikeComb:
        return logical_X(self, j)(self.zero())


def logical_X(qudit: LogicalQudit, power: int = 1,
              overflow: str = "truncate") -> Callable[[SpikeComb], SpikeComb]:
    """Frequency shift by ``power * spacing / d``."""
    disp = D_f(power * qudit.base_comb.spacing / qudit.d)
    return lambda comb: apply_displacement(comb, disp, overflow=overflow)


def logical_Z(qudit: LogicalQudit, power: int = 1) -> Callable[[SpikeComb], SpikeComb]:
    """Time shift by ``power`` comb periods 2 pi / spacing."""
    disp = D_t(power * qudit.base_comb.time_period)
    return lambda comb: apply_displacement(comb, disp)


def relative_phase(a: SpikeComb, b: SpikeComb) -> complex:
    """Unit phase ``<a|b> / |<a|b>|``."""
    ov = overlap(a, b)
    if abs(ov) == 0:
        raise ValueError("states are orthogonal; relative phase undefined")
    return ov / abs(ov)


def expected_commutator(df: Displacement, dt: Displacement) -> complex:
    return cmath.exp(1j * df.amount * dt.amount)

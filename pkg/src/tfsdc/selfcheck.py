"""Quick invariant checks run by ``tfsdc selftest``.

Each check returns ``(passed, detail)``; tolerances mirror the unit tests.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable

import numpy as np

from . import capacity as cap
from .combs import (
    CombSpec,
    biphoton_overlap,
    biphoton_time_representation,
    make_biphoton_comb,
    make_single_photon_comb,
    overlap,
    time_rep_overlap,
    to_freq_basis,
    to_time_basis,
    translate_time,
)
from .gkp import D_f, D_t, LogicalQudit, apply_displacement, commutator_phase, displace_photon, logical_X, logical_Z
from .presets import load_preset
from .protocol import EncodingParams, Message, NoiseModel, apply_fbs, decode, encode, invert_fbs, measure_time

CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = []


def check(name):
    def deco(fn):
        CHECKS.append((name, fn))
        return fn
    return deco


@check("fourier round trip")
def _round_trip():
    spec = CombSpec(0.0, 1.0, truncation=16)
    comb = make_single_photon_comb(spec)
    comb = apply_displacement(comb, D_t(0.37 * spec.time_period))
    back = to_freq_basis(to_time_basis(comb))
    f = abs(overlap(comb, back))
    return f >= 1 - 1e-9, f"|<x|F^-1 F x>| = {f:.15f}"


@check("phase ramp <-> translation")
def _ramp():
    spec = CombSpec(0.0, 1.0, truncation=7)
    d, j = 5, 2
    comb = make_single_photon_comb(spec)
    left = to_time_basis(apply_displacement(comb, D_t(j / d * spec.time_period)), samples=15)
    right = translate_time(to_time_basis(comb, samples=15), j / d * spec.time_period)
    f = abs(overlap(left, right))
    return f >= 1 - 1e-9, f"overlap {f:.15f}"


@check("ZX = exp(-2 pi i/d) XZ")
def _zx():
    q = LogicalQudit(3, CombSpec(0.0, 1.0, truncation=6))
    X, Z = logical_X(q), logical_Z(q)
    worst = 0.0
    for j in range(q.d):
        s = q.basis_state(j)
        zx, xz = Z(X(s)), X(Z(s))
        ratio = overlap(xz, zx)
        worst = max(worst, abs(ratio / abs(ratio) - cmath.exp(-2j * math.pi / q.d)))
    return worst < 1e-10, f"max phase error {worst:.2e}"


@check("X^d, Z^d identity")
def _powers():
    q = LogicalQudit(4, CombSpec(0.0, 1.0, truncation=8))
    zero = q.zero()
    fx = abs(overlap(zero, logical_X(q, q.d)(zero)))
    fz = abs(overlap(zero, logical_Z(q, q.d)(zero)))
    bound = 1 - 2 / q.base_comb.n_teeth
    return fx >= bound and fz >= 1 - 1e-12, f"X^d {fx:.6f} (>= {bound:.6f}), Z^d {fz:.15f}"


@check("Heisenberg-Weyl commutator")
def _hw():
    spec = CombSpec(0.0, 1.0, truncation=8)
    phase = commutator_phase(D_f(spec.spacing / 4), D_t(spec.time_period / 3), spec)
    err = abs(phase - cmath.exp(1j * math.pi / 6))
    return err < 1e-10, f"phase error {err:.2e}"


@check("biphoton dT invariance / frequency-shift orthogonality")
def _biphoton():
    spec = CombSpec(2.0e15, 2 * math.pi * 20e9, truncation=8)
    phi = make_biphoton_comb(spec)
    inv = min(abs(biphoton_overlap(phi, displace_photon(phi, D_t(spec.time_period), p))) for p in "HV")
    orth = abs(biphoton_overlap(phi, displace_photon(phi, D_f(spec.spacing / 7), "H")))
    rep = biphoton_time_representation(phi)
    on_lattice = np.allclose(rep.support() / spec.time_period, np.round(rep.support() / spec.time_period))
    shifted = biphoton_time_representation(displace_photon(phi, D_t(spec.time_period), "V"))
    rep_inv = abs(time_rep_overlap(rep, shifted))
    ok = inv >= 1 - 1e-12 and orth < 1e-12 and on_lattice and rep_inv >= 1 - 1e-12
    return ok, f"invariance {inv:.15f}, orthogonality {orth:.1e}, delays on m*dT: {on_lattice}"


@check("FBS unitarity")
def _fbs():
    spec = CombSpec(2.0e15, 2 * math.pi * 20e9, truncation=4)
    params = EncodingParams(d=3, n=2, c=3)
    phi = make_biphoton_comb(spec)
    states = [encode(phi, params, Message(k, j)) for k in range(3) for j in range(3)]
    worst = 0.0
    for a in states:
        back = invert_fbs(apply_fbs(a))
        worst = max(worst, abs(1 - abs(biphoton_overlap(a, back))))
        for b in states:
            worst = max(worst, abs(biphoton_overlap(a, b) - biphoton_overlap(apply_fbs(a), apply_fbs(b))))
    return worst < 1e-12, f"max deviation {worst:.1e}"


@check("noiseless round trip")
def _noiseless():
    spec = CombSpec.from_fsr(20e9, truncation=4)
    params = EncodingParams(d=8, n=1, c=16)
    phi = make_biphoton_comb(spec)
    rng = np.random.default_rng(0)
    bad = 0
    for k in range(params.c):
        for j in range(params.d):
            rec = measure_time(apply_fbs(encode(phi, params, Message(k, j))), NoiseModel(), rng)
            bad += decode(rec, params, spec) != Message(k, j)
    return bad == 0, f"{bad} decoding errors over {params.message_count} messages"


@check("closed form == Blahut-Arimoto")
def _ba():
    worst = 0.0
    for n in (2, 8, 64):
        for ratio in (0.1, 0.5, 2.0):
            tm = cap.transition_matrix(cap.ChannelSpec(n, 1.0, ratio))
            worst = max(worst, abs(cap.symmetric_capacity(tm).capacity_bits - cap.blahut_arimoto(tm).capacity_bits))
    return worst < 1e-6, f"max difference {worst:.1e} bits"


@check("ppLN headline capacity")
def _headline():
    tot = cap.total_capacity(load_preset("ppln"))
    return abs(tot.total_bits - 8.91) <= 0.07 and tot.message_count == 481, tot.summary()


def run_all(echo=print) -> bool:
    ok_all = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        ok_all &= bool(ok)
        echo(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok_all

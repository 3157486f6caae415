"""Gaussian-binned channel models and their Shannon capacities.

The frequency and temporal shift channels are modelled as Gaussian noise
on a circle of ``N`` equal bins.  Such channels are symmetric (circulant),
so the capacity is ``log2 N - H(row)`` with a uniform input; Blahut-Arimoto
is provided as an independent check and for non-symmetric matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.special import erfcinv, ndtr

# Asymptotic alphabet size used for the "saturated" capacity values.
ASYMPTOTIC_N = 10_000
KWIAT_WEINFURTER_BITS = 4.0
KWIAT_WEINFURTER_LOSS_DB = 6.0
POLARIZATION_BITS = 2.0


class NotCirculantError(ValueError):
    pass


@dataclass(frozen=True)
class ChannelSpec:
    """Geometry of a circular Gaussian-binned channel.

    ``bin_width`` and ``sigma`` share a unit (Hz for frequency, s for time).
    When ``period`` is given, ``N * bin_width`` must equal it.
    """

    N: int
    bin_width: float
    sigma: float
    domain: str = "frequency"
    boundary: str = "circular"
    period: float | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.N}")
        if not self.bin_width > 0:
            raise ValueError("bin_width must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.domain not in ("frequency", "time"):
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.boundary not in ("circular", "truncated-approximated-as-circular"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.period is not None:
            span = self.N * self.bin_width
            if abs(span - self.period) > 1e-9 * self.period:
                raise ValueError(f"N * bin_width = {span} does not match period {self.period}")

    @property
    def span(self) -> float:
        return self.N * self.bin_width


class TransitionMatrix:
    """Row-stochastic channel matrix ``P[x, y] = P(y | x)``.

    Circulant channels keep only their first row; ``dense()`` expands it.
    """

    def __init__(self, first_row=None, dense=None):
        if (first_row is None) == (dense is None):
            raise ValueError("give exactly one of first_row or dense")
        self._row = None if first_row is None else np.asarray(first_row, dtype=float)
        self._dense = None if dense is None else np.asarray(dense, dtype=float)
        if self._dense is not None and (
            self._dense.ndim != 2 or self._dense.shape[0] != self._dense.shape[1]
        ):
            raise ValueError("dense transition matrix must be square")

    @classmethod
    def from_dense(cls, matrix) -> "TransitionMatrix":
        return cls(dense=matrix)

    @property
    def N(self) -> int:
        return len(self._row) if self._row is not None else self._dense.shape[0]

    @property
    def first_row(self) -> np.ndarray:
        return self._row if self._row is not None else self._dense[0]

    def dense(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense
        n = self.N
        idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
        return self._row[idx]

    def is_circulant(self, atol: float = 1e-12) -> bool:
        if self._row is not None:
            return True
        row = self._dense[0]
        return all(
            np.allclose(self._dense[r], np.roll(row, r), rtol=0, atol=atol)
            for r in range(1, self.N)
        )

    def row_sums(self) -> np.ndarray:
        if self._row is not None:
            return np.array([self._row.sum()])
        return self._dense.sum(axis=1)

    def __repr__(self):
        kind = "circulant" if self._row is not None else "dense"
        return f"TransitionMatrix(N={self.N}, {kind})"


@dataclass
class CapacityResult:
    capacity_bits: float
    N: int
    input_distribution: np.ndarray
    method: str
    converged: bool = True
    iterations: int = 0


def _interval_mass(lo, hi, sigma):
    """P(lo < Z*sigma < hi) computed in whichever tail keeps precision."""
    a, b = lo / sigma, hi / sigma
    return np.where(a > 0, ndtr(-a) - ndtr(-b), ndtr(b) - ndtr(a))


def transition_matrix(spec: ChannelSpec) -> TransitionMatrix:
    """Binned Gaussian transition probabilities with circular wrap.

    Entry ``(0, y)`` integrates N(0, sigma^2) over bin ``y`` and all of its
    images ``y + w*N`` for windings ``|w| <= ceil(8 sigma / span) + 1``.
    """
    n, delta, sigma = spec.N, spec.bin_width, spec.sigma
    if sigma == 0 or n == 1:
        row = np.zeros(n)
        row[0] = 1.0
        return TransitionMatrix(first_row=row)
    span = n * delta
    windings = math.ceil(8 * sigma / span) + 1
    centers = np.arange(n) * delta
    w = np.arange(-windings, windings + 1)[:, None] * span
    lo = centers[None, :] - delta / 2 + w
    hi = centers[None, :] + delta / 2 + w
    row = _interval_mass(lo, hi, sigma).sum(axis=0)
    return TransitionMatrix(first_row=row)


def entropy_bits(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def symmetric_capacity(tm) -> CapacityResult:
    """Capacity ``log2 N - H(row 0)`` of a circulant channel."""
    if not isinstance(tm, TransitionMatrix):
        tm = TransitionMatrix.from_dense(tm)
    if not tm.is_circulant():
        raise NotCirculantError("matrix is not circulant; use blahut_arimoto")
    n = tm.N
    cap = math.log2(n) - entropy_bits(tm.first_row)
    cap = min(max(cap, 0.0), math.log2(n))
    return CapacityResult(
        capacity_bits=cap,
        N=n,
        input_distribution=np.full(n, 1.0 / n),
        method="closed-form-symmetric",
    )


def _divergences(P, q):
    # D(P[x] || q) in bits, with 0 log 0 = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * (np.log2(P) - np.log2(q)[None, :]), 0.0)
    return terms.sum(axis=1)


def blahut_arimoto(tm, tol: float = 1e-9, max_iter: int = 10_000) -> CapacityResult:
    """Blahut-Arimoto iteration for the capacity of any row-stochastic matrix.

    Stops when the gap between the upper bound ``max_x D(P_x || q)`` and the
    lower bound ``log2 sum_x p_x 2^D_x`` drops below ``tol`` bits.
    """
    P = tm.dense() if isinstance(tm, TransitionMatrix) else np.asarray(tm, dtype=float)
    if P.ndim != 2:
        raise ValueError("transition matrix must be 2-D")
    if np.any(P < -1e-15) or not np.allclose(P.sum(axis=1), 1.0, rtol=0, atol=1e-9):
        raise ValueError("transition matrix must be row-stochastic")
    n = P.shape[0]
    p = np.full(n, 1.0 / n)
    lower = 0.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        q = p @ P
        D = _divergences(P, q)
        lower = math.log2(float(np.sum(p * np.exp2(D))))
        upper = float(D.max())
        if upper - lower < tol:
            converged = True
            break
        p = p * np.exp2(D)
        p /= p.sum()
    return CapacityResult(
        capacity_bits=max(lower, 0.0),
        N=n,
        input_distribution=p,
        method="blahut-arimoto",
        converged=converged,
        iterations=it,
    )


def mutual_information(counts) -> float:
    """Plug-in mutual information (bits) of a joint count table."""
    joint = np.asarray(counts, dtype=float)
    total = joint.sum()
    if total <= 0:
        raise ValueError("count table is empty")
    pxy = joint / total
    px = pxy.sum(axis=1)
    py = pxy.sum(axis=0)
    return entropy_bits(px) + entropy_bits(py) - entropy_bits(pxy)


def channel_spec_for(preset, domain: str, N: int) -> ChannelSpec:
    """Channel geometry of a preset: span B_PM (frequency) or the comb period (time)."""
    if domain == "frequency":
        return ChannelSpec(N, preset.b_pm_hz / N, preset.sigma_f_total,
                           domain="frequency", boundary="truncated-approximated-as-circular")
    if domain == "time":
        return ChannelSpec(N, preset.period_s / N, preset.sigma_t_total,
                           domain="time", period=preset.period_s)
    raise ValueError(f"unknown domain {domain!r}")


def default_n_grid(n_min: int = 10, n_max: int = ASYMPTOTIC_N, points: int = 25) -> list[int]:
    grid = np.unique(np.round(np.geomspace(n_min, n_max, points)).astype(int))
    return [int(n) for n in grid]


def capacity_sweep(preset, domain: str, N_list: Iterable[int] | None = None) -> list[tuple[int, float]]:
    N_list = default_n_grid() if N_list is None else list(N_list)
    if not N_list:
        raise ValueError("N_list must be non-empty")
    out = []
    for n in N_list:
        tm = transition_matrix(channel_spec_for(preset, domain, int(n)))
        out.append((int(n), symmetric_capacity(tm).capacity_bits))
    return out


def asymptotic_capacity(preset, domain: str, N: int = ASYMPTOTIC_N) -> float:
    return capacity_sweep(preset, domain, [N])[0][1]


def raw_z(raw_error: float, z_decimals: int | None = 2) -> float:
    """Bin size in units of sigma giving a two-sided miss probability ``raw_error``."""
    if not 0 < raw_error < 1:
        raise ValueError("raw_error must lie in (0, 1)")
    z = math.sqrt(2.0) * float(erfcinv(raw_error))
    return round(z, z_decimals) if z_decimals is not None else z


def raw_symbol_count(preset, domain: str, raw_error: float = 0.01,
                     z_decimals: int | None = 2) -> int:
    """Number of hard-decision bins of width ``z * sigma_total`` in the span.

    ``z`` is rounded to ``z_decimals`` (2.58 at 1%), matching the tabulated
    constant; pass ``None`` for the unrounded value.
    """
    z = raw_z(raw_error, z_decimals)
    if domain == "frequency":
        span, sigma = preset.b_pm_hz, preset.sigma_f_total
    elif domain == "time":
        span, sigma = preset.period_s, preset.sigma_t_total
    else:
        raise ValueError(f"unknown domain {domain!r}")
    if sigma == 0:
        raise ValueError("raw symbol count is unbounded for a noiseless channel")
    return int(math.floor(span / (z * sigma) + 1e-12))


@dataclass
class TotalCapacity:
    freq_bits: float
    time_bits: float
    total_bits: float
    message_count: int
    freq_bits_coarse: float = field(default=float("nan"))
    time_bits_coarse: float = field(default=float("nan"))

    @property
    def reported_total(self) -> float:
        """Sum of the channel capacities at 0.01-bit precision."""
        return round(round(self.freq_bits, 2) + round(self.time_bits, 2), 2)

    def summary(self) -> str:
        return (f"freq {self.freq_bits:.2f}, time {self.time_bits:.2f}, "
                f"total {self.reported_total:.2f} bits, {self.message_count} messages")


def total_capacity(preset, N: int = ASYMPTOTIC_N, coarse_N: int = 1000) -> TotalCapacity:
    """Sum of the saturated frequency and temporal channel capacities.

    ``message_count`` is ``2**total`` with each channel taken at its
    reported 0.01-bit precision.
    """
    f = asymptotic_capacity(preset, "frequency", N)
    t = asymptotic_capacity(preset, "time", N)
    count = int(round(2.0 ** (round(f, 2) + round(t, 2))))
    return TotalCapacity(
        freq_bits=f,
        time_bits=t,
        total_bits=f + t,
        message_count=count,
        freq_bits_coarse=asymptotic_capacity(preset, "frequency", coarse_N),
        time_bits_coarse=asymptotic_capacity(preset, "time", coarse_N),
    )


@dataclass
class ComparisonRow:
    scheme: str
    capacity_bits: float
    loss_db: float | None
    origin: str


def comparison_table(preset=None) -> list[ComparisonRow]:
    """Capacity comparison against other superdense/comb schemes.

    Only the Kwiat-Weinfurter bound and the 2-bit polarization term are
    constants; the rest is computed from the (default ppLN) preset.
    """
    if preset is None:
        from .presets import load_preset
        preset = load_preset("ppln")
    tot = total_capacity(preset)
    single = tot.time_bits
    return [
        ComparisonRow(f"Biphoton comb + FBS ({preset.name})", tot.reported_total, preset.fbs_loss_db, "computed"),
        ComparisonRow("Kwiat-Weinfurter Bell-state measurement", KWIAT_WEINFURTER_BITS,
                      KWIAT_WEINFURTER_LOSS_DB, "literature"),
        ComparisonRow("Single-photon comb, temporal modulation", single, None, "computed"),
        ComparisonRow("Logical TFGKP qudit Bell state", 2 * single, None, "computed"),
        ComparisonRow("Frequency-polarization hyperentanglement", tot.freq_bits + POLARIZATION_BITS,
                      None, "computed + 2-bit polarization"),
    ]


def comparison_ratios(rows: Sequence[ComparisonRow]) -> dict[str, float]:
    ours = rows[0].capacity_bits
    return {
        "vs_kwiat_weinfurter": ours / rows[1].capacity_bits,
        "vs_single_comb": ours / rows[2].capacity_bits,
        "vs_gkp_bell": ours / rows[3].capacity_bits,
    }


def render_table(rows: Sequence[ComparisonRow]) -> str:
    header = ("scheme", "capacity [bits/photon]", "loss [dB]", "origin")
    body = [(r.scheme, f"{r.capacity_bits:.2f}", "-" if r.loss_db is None else f"{r.loss_db:g}", r.origin)
            for r in rows]
    widths = [max(len(str(x[i])) for x in [header, *body]) for i in range(4)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(line, widths)).rstrip()
             for line in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)

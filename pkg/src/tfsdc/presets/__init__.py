"""Source/detector parameter presets stored as INI files.

Each file has a ``[preset]`` section (Hz for frequencies, s for durations)
and an optional ``[expected]`` section of reference values used only for
reporting.  Unknown keys are rejected.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

from ..combs import DEFAULT_TRUNCATION, CombSpec, EnvelopeSpec
from ..protocol import NoiseModel

# sigma_linewidth * B_PM; time-domain spike width of the pair source
LINEWIDTH_CALIBRATION = 1.776


class PresetNotFoundError(KeyError):
    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class Preset:
    name: str
    b_pm_hz: float
    fsr_hz: float
    sigma_f_shift_hz: float
    sigma_f_meas_hz: float
    sigma_t_shift_s: float
    sigma_t_meas_s: float
    sigma_linewidth_s: float | None = None
    lorentzian_fwhm_hz: float = 2e9
    jitter_fwhm_s: float = 20e-12
    fbs_loss_db: float = 5.0
    expected: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.sigma_linewidth_s is None:
            object.__setattr__(self, "sigma_linewidth_s", LINEWIDTH_CALIBRATION / self.b_pm_hz)
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, float) and (v < 0 or not math.isfinite(v)):
                raise ValueError(f"preset field {f.name} must be finite and non-negative, got {v}")
        if self.b_pm_hz <= 0 or self.fsr_hz <= 0:
            raise ValueError("bandwidth and FSR must be positive")

    @property
    def period_s(self) -> float:
        return 1.0 / self.fsr_hz

    @property
    def sigma_f_total(self) -> float:
        return math.hypot(self.sigma_f_shift_hz, self.sigma_f_meas_hz)

    @property
    def sigma_t_total(self) -> float:
        return math.sqrt(self.sigma_t_shift_s ** 2 + self.sigma_t_meas_s ** 2 + self.sigma_linewidth_s ** 2)

    def noise_model(self, seed: int = 0) -> NoiseModel:
        return NoiseModel(self.sigma_f_shift_hz, self.sigma_f_meas_hz, self.sigma_t_shift_s,
                          self.sigma_t_meas_s, self.sigma_linewidth_s, seed)

    def comb_spec(self, truncation: int = DEFAULT_TRUNCATION) -> CombSpec:
        return CombSpec.from_fsr(self.fsr_hz, truncation)

    def envelope(self) -> EnvelopeSpec:
        return EnvelopeSpec(self.b_pm_hz, self.lorentzian_fwhm_hz, self.fsr_hz)

    def with_overrides(self, **values) -> "Preset":
        known = {f.name for f in fields(self)} - {"expected"}
        bad = set(values) - known
        if bad:
            raise ValueError(f"unknown preset field(s): {', '.join(sorted(bad))}")
        coerced = {k: (v if k == "name" else float(v)) for k, v in values.items()}
        return replace(self, **coerced)


def _builtin_dir():
    return resources.files(__name__)


def list_presets() -> list[str]:
    return sorted(p.name[:-4] for p in _builtin_dir().iterdir() if p.name.endswith(".ini"))


def parse_preset(text: str, source: str = "<string>") -> Preset:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.read_string(text, source=source)
    if not cp.has_section("preset"):
        raise ValueError(f"{source}: missing [preset] section")
    raw = dict(cp["preset"])
    known = {f.name for f in fields(Preset)} - {"expected"}
    bad = set(raw) - known
    if bad:
        raise ValueError(f"{source}: unknown key(s) {', '.join(sorted(bad))}")
    values = {k: (v if k == "name" else float(v)) for k, v in raw.items()}
    if "name" not in values:
        values["name"] = Path(source).stem
    expected = {}
    if cp.has_section("expected"):
        expected = {k: float(v) for k, v in cp["expected"].items()}
    return Preset(expected=expected, **values)


def load_preset(name_or_path: str | Path) -> Preset:
    """Load a shipped preset by name, or any preset file by path."""
    path = Path(name_or_path)
    if path.suffix == ".ini" and path.exists():
        return parse_preset(path.read_text(), str(path))
    name = str(name_or_path).lower()
    res = _builtin_dir() / f"{name}.ini"
    if not res.is_file():
        raise PresetNotFoundError(
            f"unknown preset {str(name_or_path)!r}; known presets: {', '.join(list_presets())}")
    return parse_preset(res.read_text(), f"{name}.ini")

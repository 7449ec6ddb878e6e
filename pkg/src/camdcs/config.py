"""Run configuration.

The modern format is a key=value text file ('#' starts a comment):

    first_run = yes
    file_range = 1 46
    reduced_mass = 1.0
    energy_window = 10 100
    cam_window = 0 30 0 10
    theta_r = 75
    ...

Mandatory keys: first_run, file_range, reduced_mass. Everything else takes
the documented default. Tuple-valued keys accept whitespace- or
comma-separated values.

A legacy colon-delimited layout is honored as a documented compatibility
subset: entries appear between colons, one per line, in the fixed order
listed in LEGACY_ENTRY_ORDER (entry #1 = data directory, #2 = first run,
..., #28/#29 = winding-angle range in multiples of pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from camdcs.errors import ConfigError, ValidationError


@dataclass(frozen=True)
class RunConfig:
    first_run: bool
    file_range: tuple
    reduced_mass: float
    follow_by_hand: bool = False
    energy_window: tuple = (0.0, math.inf)
    froissart_eps: float = 0.0
    cam_window: tuple = (0.0, 30.0, 0.0, 10.0)
    parity_flip: bool = True
    remove_guessed_phase: bool = True
    multi_precision: bool = False
    nstime: int = 0
    npoints: int = 200
    noise_fac: float = 1e-8
    iover_nread: bool = False
    iover_niter: bool = False
    iover_dxl: bool = False
    nread1: int = 0
    niter1: int = 0
    dxl1: float = 0.0
    winding_range: tuple = (0, 4)
    theta_r: float = 75.0
    power_np: int = 1
    m_range: tuple = (0, 3)
    include_negative_m: bool = False
    emit_dcs3d: bool = False
    emit_prob3d: bool = False
    emit_ph3d: bool = False
    emit_f3d: bool = False
    emit_g3d: bool = False
    e_threshold: float = 0.0
    tail_eps: float = 1e-10
    data_dir: str = "input_data"
    output_dir: str = "output"

    def __post_init__(self):
        object.__setattr__(self, "file_range", tuple(int(v) for v in self.file_range))
        object.__setattr__(self, "energy_window", tuple(float(v) for v in self.energy_window))
        object.__setattr__(self, "cam_window", tuple(float(v) for v in self.cam_window))
        object.__setattr__(self, "winding_range", tuple(int(v) for v in self.winding_range))
        object.__setattr__(self, "m_range", tuple(int(v) for v in self.m_range))
        if len(self.file_range) != 2 or self.file_range[0] > self.file_range[1]:
            raise ValidationError(f"bad file_range {self.file_range}")
        if self.file_range[0] < 1:
            raise ValidationError("file indices are 1-based")
        e_lo, e_hi = self.energy_window
        if e_lo > e_hi:
            raise ValidationError(f"energy window requires E_min <= E_max, got {self.energy_window}")
        x0, x1, y0, y1 = self.cam_window
        if not (x0 < x1 and y0 < y1):
            raise ValidationError(f"bad cam_window {self.cam_window}")
        if not (0.0 <= self.theta_r <= 180.0):
            raise ValidationError(f"theta_r must be in [0, 180] degrees, got {self.theta_r}")
        nl, nr = self.winding_range
        if nl >= nr:
            raise ValidationError(f"winding range requires nl < nr, got {self.winding_range}")
        if self.power_np not in (1, 2):
            raise ValidationError(f"power_np must be 1 or 2, got {self.power_np}")
        if self.m_range[0] > self.m_range[1]:
            raise ValidationError(f"bad m_range {self.m_range}")
        if self.m_range[0] < 0 and not self.include_negative_m:
            raise ValidationError("negative m_range requires include_negative_m")
        if self.reduced_mass <= 0.0:
            raise ValidationError(f"reduced_mass must be positive, got {self.reduced_mass}")
        if self.froissart_eps < 0.0:
            raise ValidationError(f"froissart_eps must be >= 0, got {self.froissart_eps}")
        if self.nstime < 0:
            raise ValidationError(f"nstime must be >= 0, got {self.nstime}")
        if self.noise_fac < 0.0:
            raise ValidationError(f"noise_fac must be >= 0, got {self.noise_fac}")
        if self.npoints < 2:
            raise ValidationError(f"npoints must be >= 2, got {self.npoints}")


_BOOL_KEYS = {
    "first_run", "follow_by_hand", "parity_flip", "remove_guessed_phase",
    "multi_precision", "include_negative_m", "iover_nread", "iover_niter",
    "iover_dxl", "emit_dcs3d", "emit_prob3d", "emit_ph3d", "emit_f3d", "emit_g3d",
}
_INT_KEYS = {"nstime", "npoints", "nread1", "niter1", "power_np"}
_FLOAT_KEYS = {
    "reduced_mass", "froissart_eps", "noise_fac", "dxl1", "theta_r",
    "e_threshold", "tail_eps",
}
_TUPLE_KEYS = {"file_range", "energy_window", "cam_window", "winding_range", "m_range"}
_STR_KEYS = {"data_dir", "output_dir"}
_MANDATORY = ("first_run", "file_range", "reduced_mass")

#: entry order of the legacy colon-delimited layout (compatibility subset)
LEGACY_ENTRY_ORDER = (
    "data_dir", "first_run", "follow_by_hand", "theta_r", "power_np",
    "n_files", "first_file", "e_min", "e_max", "reduced_mass",
    "froissart_eps", "x_min", "x_max", "y_min", "y_max",
    "parity_flip", "remove_guessed_phase", "multi_precision",
    "nstime", "npoints", "noise_fac",
    "iover_nread", "iover_niter", "iover_dxl", "nread1", "niter1", "dxl1",
    "nl", "nr",
)


def _as_bool(value, key):
    v = value.strip().lower()
    if v in ("yes", "y", "true", "1", "on"):
        return True
    if v in ("no", "n", "false", "0", "off"):
        return False
    raise ConfigError(f"cannot interpret {value!r} as yes/no for key {key!r}")


def _split_values(value):
    return value.replace(",", " ").split()


def parse_run_config(path):
    """Parse a run configuration file (modern key=value or legacy colons)."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{path}: no such configuration file")
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if any("=" in ln.split("#", 1)[0] for ln in lines):
        raw = _parse_keyvalue(lines, path)
    else:
        raw = _parse_legacy(lines, path)
    for key in _MANDATORY:
        if key not in raw:
            raise ConfigError(f"{path}: missing mandatory key {key!r}")
    try:
        return RunConfig(**raw)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _parse_keyvalue(lines, path):
    raw = {}
    for ln, line in enumerate(lines, 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{ln}: expected key = value, got {body!r}")
        key, value = body.split("=", 1)
        key, value = key.strip(), value.strip()
        try:
            if key in _BOOL_KEYS:
                raw[key] = _as_bool(value, key)
            elif key in _INT_KEYS:
                raw[key] = int(value)
            elif key in _FLOAT_KEYS:
                raw[key] = float(value)
            elif key in _TUPLE_KEYS:
                raw[key] = tuple(float(v) for v in _split_values(value))
            elif key in _STR_KEYS:
                raw[key] = value
            else:
                raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
        except ValueError:
            raise ConfigError(f"{path}:{ln}: malformed value {value!r} for {key!r}") from None
    return raw


def _parse_legacy(lines, path):
    """Colon-delimited compatibility parser: the value sits between colons."""
    entries = []
    for ln, line in enumerate(lines, 1):
        if line.count(":") >= 2:
            first = line.index(":")
            last = line.rindex(":")
            entries.append((ln, line[first + 1 : last].strip()))
    if not entries:
        raise ConfigError(f"{path}: neither key=value pairs nor colon entries found")
    if len(entries) < 10:
        raise ConfigError(
            f"{path}: legacy layout needs at least the first 10 entries, got {len(entries)}"
        )
    named = {}
    for (ln, value), key in zip(entries, LEGACY_ENTRY_ORDER):
        named[key] = (ln, value)

    def get(key, conv, default=None):
        if key not in named:
            return default
        ln, value = named[key]
        try:
            if conv is bool:
                return _as_bool(value, key)
            return conv(value)
        except (ValueError, ConfigError):
            raise ConfigError(f"{path}:{ln}: malformed legacy entry {key!r}: {value!r}") from None

    raw = {
        "data_dir": get("data_dir", str, "input_data"),
        "first_run": get("first_run", bool),
        "follow_by_hand": get("follow_by_hand", bool, False),
        "theta_r": get("theta_r", float, 75.0),
        "power_np": get("power_np", int, 1),
        "reduced_mass": get("reduced_mass", float),
    }
    n_files = get("n_files", int)
    first_file = get("first_file", int, 1)
    if n_files is not None:
        raw["file_range"] = (first_file, first_file + n_files - 1)
    e_min, e_max = get("e_min", float), get("e_max", float)
    if e_min is not None and e_max is not None:
        raw["energy_window"] = (e_min, e_max)
    window = tuple(get(k, float) for k in ("x_min", "x_max", "y_min", "y_max"))
    if None not in window:
        raw["cam_window"] = window
    for key in ("froissart_eps", "noise_fac", "dxl1"):
        v = get(key, float)
        if v is not None:
            raw[key] = v
    for key in ("parity_flip", "remove_guessed_phase", "multi_precision",
                "iover_nread", "iover_niter", "iover_dxl"):
        v = get(key, bool)
        if v is not None:
            raw[key] = v
    for key in ("nstime", "npoints", "nread1", "niter1"):
        v = get(key, int)
        if v is not None:
            raw[key] = v
    nl, nr = get("nl", int), get("nr", int)
    if nl is not None and nr is not None:
        raw["winding_range"] = (nl, nr)
    raw = {k: v for k, v in raw.items() if v is not None}
    return raw


def apply_overrides(config, table):
    """Apply iover_{nread,niter,dxl} overrides to a parsed table."""
    t = table
    if config.iover_nread and config.nread1 >= 2:
        t = replace(t, jfin=min(config.nread1, t.nread))
    if config.iover_niter and config.niter1 >= 1:
        t = replace(t, niter=config.niter1)
    if config.iover_dxl and config.dxl1 > 0.0:
        t = replace(t, dxl=config.dxl1)
    return t

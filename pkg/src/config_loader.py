import os
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

if __package__:
    from .function_library import TEST_FUNCTIONS
    from .kernels import METHOD_NAMES
    from .spectral_engine import SPECTRA
else:
    from function_library import TEST_FUNCTIONS
    from kernels import METHOD_NAMES
    from spectral_engine import SPECTRA

ALL_EXPERIMENTS = ("kernel-bounds", "converge", "maximal-ineq", "tn-series", "abel-identity", "dump-kernel")
DEFAULT_OUTPUT_DIR = "results"
OUTPUT_DIR_ENV = "SPHERE_SUMMABILITY_OUTPUT_DIR"


@dataclass(frozen=True)
class ExperimentConfig:
    """Every field is a config key and a CLI flag of the same name."""
    experiment: str = "kernel-bounds"
    dim_n: int = 2
    alpha: float = 0.5
    tau: float = 0.4
    n_max: int = 512
    method: str = "riesz"
    test_function: str = "heat"
    seed: int = 0
    bandlimit: int = 16
    heat_t: float = 0.05
    cap_radius: float = 1.0
    regularity_beta: float = 1.0
    reference_degree: int = 2048
    angle_count: int = 200
    radii_count: int = 64
    eval_count: int = 33
    ensemble_size: int = 50
    spectrum: str = "mu"
    liouville_exponent_scale: float = 1.0
    envelope_constant: float = 1.0
    gamma0: float = 0.5
    jump_exclusion: float = 0.1
    tn_terms: int = 100000
    abel_max_degree: int = 100
    tolerance: float = 1e-12
    output_dir: str = DEFAULT_OUTPUT_DIR


# Per-experiment defaults layered over the dataclass defaults (the calibrated acceptance runs).
EXPERIMENT_DEFAULTS = {
    "kernel-bounds": {"n_max": 512},
    "converge": {"alpha": 0.6, "n_max": 512, "reference_degree": 2048, "test_function": "heat"},
    "maximal-ineq": {"alpha": 0.3, "tau": 0.4, "n_max": 256, "bandlimit": 32, "ensemble_size": 50},
    "tn-series": {"alpha": 0.3, "tau": 0.6, "tn_terms": 100000},
    "abel-identity": {"n_max": 100, "abel_max_degree": 100, "bandlimit": 16},
    "dump-kernel": {"n_max": 64, "method": "riesz"},
}

CONFIG_KEYS = tuple(f.name for f in fields(ExperimentConfig))
_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def default_config(experiment: str) -> ExperimentConfig:
    """Dataclass defaults with the experiment's own defaults applied."""
    if experiment not in ALL_EXPERIMENTS:
        raise ValueError(f"Unknown experiment '{experiment}'. Choose from: {', '.join(ALL_EXPERIMENTS)}")
    return replace(ExperimentConfig(experiment=experiment), **EXPERIMENT_DEFAULTS[experiment])


def coerce_value(key: str, raw) -> int | float | str:
    """Converts a raw (usually string) value to the type of the config key."""
    if key not in _FIELD_TYPES:
        raise KeyError(f"Unknown config key '{key}'. Valid keys: {', '.join(CONFIG_KEYS)}")
    kind = _FIELD_TYPES[key]
    if kind in (int, "int"):
        if isinstance(raw, float) and raw.is_integer():
            return int(raw)
        try:
            return int(str(raw).strip())
        except ValueError as e:
            raise ValueError(f"Config key '{key}' needs an integer, got '{raw}'.") from e
    if kind in (float, "float"):
        try:
            return float(str(raw).strip())
        except ValueError as e:
            raise ValueError(f"Config key '{key}' needs a real number, got '{raw}'.") from e
    return str(raw).strip()


def parse_config_text(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """
    Parses flat key=value text on top of base (dataclass defaults when None).

    Blank lines and everything after '#' are ignored.

    Raises:
        KeyError: For an unknown key.
        ValueError: For a malformed line or a value of the wrong type (the line number is reported).
    """
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ValueError(f"Line {number}: expected key=value, got '{content}'.")
        key, raw = (part.strip() for part in content.split("=", 1))
        if key not in CONFIG_KEYS:
            raise KeyError(f"Line {number}: unknown config key '{key}'.")
        try:
            values[key] = coerce_value(key, raw)
        except ValueError as e:
            raise ValueError(f"Line {number}: {e}") from e
    return replace(base or ExperimentConfig(), **values)


def serialize_config(cfg: ExperimentConfig) -> str:
    """One key=value line per field; reals are written with repr so parsing restores them exactly."""
    lines = []
    for key, value in asdict(cfg).items():
        lines.append(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")
    return "\n".join(lines) + "\n"


def load_config_file(path: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """
    Loads a key=value config file.

    Raises:
        FileNotFoundError: If the file does not exist or cannot be read.
    """
    print(f"Attempting to load config file: {path}")
    if not os.path.exists(path):
        raise FileNotFoundError(f"Could not load {path}. File does not exist.")
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise FileNotFoundError(f"Could not load {path}.") from e
    cfg = parse_config_text(text, base)
    print(f"Config loaded successfully from {path}.")
    return cfg


def apply_overrides(cfg: ExperimentConfig, overrides: dict) -> ExperimentConfig:
    """Applies key -> value overrides (None values are skipped), coercing each to the key's type."""
    values = {key: coerce_value(key, raw) for key, raw in overrides.items() if raw is not None}
    return replace(cfg, **values)


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """
    Checks names and numeric ranges; returns cfg unchanged when valid.

    Raises:
        ValueError: Naming the first offending key and value.
    """
    choices = {
        "experiment": ALL_EXPERIMENTS,
        "method": METHOD_NAMES,
        "test_function": TEST_FUNCTIONS,
        "spectrum": SPECTRA,
    }
    for key, allowed in choices.items():
        value = getattr(cfg, key)
        if value not in allowed:
            raise ValueError(f"Invalid {key} '{value}'. Choose from: {', '.join(allowed)}")

    minimums = {
        "dim_n": 1, "n_max": 0, "bandlimit": 0, "reference_degree": 1, "angle_count": 1,
        "radii_count": 1, "eval_count": 1, "ensemble_size": 1, "tn_terms": 2, "abel_max_degree": 1,
    }
    for key, smallest in minimums.items():
        if getattr(cfg, key) < smallest:
            raise ValueError(f"Config key '{key}' must be >= {smallest}, got {getattr(cfg, key)}.")
    for key in ("alpha", "tau"):
        if getattr(cfg, key) < 0:
            raise ValueError(f"Config key '{key}' must be >= 0, got {getattr(cfg, key)}.")
    for key in ("heat_t", "envelope_constant", "jump_exclusion", "tolerance", "liouville_exponent_scale"):
        if not getattr(cfg, key) > 0:
            raise ValueError(f"Config key '{key}' must be > 0, got {getattr(cfg, key)}.")
    if not 0 < cfg.cap_radius < np.pi:
        raise ValueError(f"cap_radius must lie in (0, pi), got {cfg.cap_radius}.")
    if not 0 < cfg.gamma0 <= np.pi:
        raise ValueError(f"gamma0 must lie in (0, pi], got {cfg.gamma0}.")
    if not cfg.output_dir:
        raise ValueError("output_dir must not be empty.")
    # config.txt must read back: '#' opens a comment and each line holds one key
    for key, value in asdict(cfg).items():
        if isinstance(value, str) and any(mark in value for mark in ("#", "\n", "\r")):
            raise ValueError(f"Config key '{key}' must not contain '#' or line breaks, got {value!r}.")
    return cfg


if __name__ == '__main__':
    print("--- Config Loader Demo ---")
    demo = default_config("converge")
    text = serialize_config(demo)
    print(text)
    print(f"Round trip holds: {parse_config_text(text) == demo}")

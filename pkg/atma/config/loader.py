"""
Experiment Configuration
Loads packaged defaults and flat YAML experiment files into a validated
ExperimentConfig, with line-accurate diagnostics.
"""

import copy
import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import yaml

CONFIG_DIR = Path(__file__).parent
EXPERIMENTS_DIR = CONFIG_DIR / "experiments"

BUILTIN_DEFAULTS: Dict[str, Any] = {
    "capacity": {"snr_ref_db": 10.0},
    "link": {
        "upsample_base": 64,
        "block_size": 16,
        "cp_fraction": 0.25,
        "constellation": "qpsk",
        "frames": 1,
    },
    "spectrum": {"subcarriers": 1024, "frames": 2, "transition": 0.10, "upsample": 8},
    "beam": {"elements": 8, "spacing": 0.5, "carrier": 2.5e9, "theta_step_deg": 0.01},
    "output": {"output_dir": "atma-output", "db_decimals": 4},
}

# Short names accepted in place of the descriptive ones.
EXPERIMENT_ALIASES = {"table2": "allocation-table", "fig9-heatmap": "aclr-heatmap"}

SWEEP_KEYS = ("n_states", "alias_factor", "oversampling", "delay", "harmonic")
GOLDEN_OPS = ("approx", "ge", "gt", "le", "lt")
DETAIL_LEVELS = ("summary", "full")

KNOWN_KEYS = {
    "experiment",
    "name",
    "n_states",
    "alias_factor",
    "oversampling",
    "delay",
    "harmonic",
    "allocations",
    "sample_rate",
    "block_size",
    "cp_length",
    "cp_fraction",
    "subcarriers",
    "elements",
    "spacing",
    "carrier",
    "upsample",
    "snr_db",
    "snr_ref_db",
    "imbalance_db",
    "phase_error_deg",
    "frames",
    "scenario",
    "transition",
    "precoder",
    "aclr_side",
    "theta_step_deg",
    "simplified",
    "window",
    "constellation",
    "equalize",
    "reverse_precoder",
    "detail",
    "seed",
    "output_dir",
    "golden",
}


class ConfigError(ValueError):
    """Invalid experiment configuration, with the offending field and line."""

    def __init__(
        self, message: str, field: Optional[str] = None, line: Optional[int] = None
    ):
        self.field = field
        self.line = line
        super().__init__(message)

    def describe(self, source: Optional[Path] = None) -> str:
        where = str(source) if source else "config"
        if self.line is not None:
            where += f":{self.line}"
        if self.field:
            return f"{where}: field '{self.field}': {self}"
        return f"{where}: {self}"


@dataclass(frozen=True)
class GoldenCheck:
    """Expected value of one column on the rows matching `where`."""

    column: str
    expected: float
    tolerance: float = 0.0
    where: Tuple[Tuple[str, Any], ...] = ()
    op: str = "approx"

    def matches(self, row: Dict[str, Any]) -> bool:
        return all(_same(row.get(key), value) for key, value in self.where)

    def describe(self) -> str:
        cond = ", ".join(f"{k}={v}" for k, v in self.where) or "all rows"
        return f"{self.column} {self.op} {self.expected} (±{self.tolerance}) where {cond}"


def _same(actual: Any, wanted: Any) -> bool:
    if isinstance(wanted, (int, float)) and not isinstance(wanted, bool):
        try:
            return float(actual) == float(wanted)
        except (TypeError, ValueError):
            return False
    return str(actual) == str(wanted)


@dataclass
class ExperimentConfig:
    experiment: str
    name: str
    n_states: List[int] = field(default_factory=lambda: [4])
    alias_factor: List[int] = field(default_factory=lambda: [4])
    oversampling: List[int] = field(default_factory=lambda: [1])
    delay: List[int] = field(default_factory=lambda: [0])
    all_delays: bool = False
    harmonic: List[int] = field(default_factory=lambda: [0])
    allocations: List[Tuple[int, int]] = field(default_factory=list)
    sample_rate: float = 1.0
    block_size: Optional[int] = None
    default_block_size: int = 16
    cp_length: Optional[int] = None
    cp_fraction: float = 0.25
    subcarriers: int = 1024
    elements: int = 8
    spacing: float = 0.5
    carrier: float = 2.5e9
    upsample: Optional[int] = None
    upsample_base: int = 64
    spectrum_upsample: int = 8
    snr_db: Optional[float] = None
    snr_ref_db: float = 10.0
    imbalance_db: float = 0.0
    phase_error_deg: float = 0.0
    frames: int = 1
    spectrum_frames: int = 2
    scenario: str = "constant-bandwidth"
    transition: float = 0.10
    precoder: str = "alternating"
    aclr_side: str = "lower"
    theta_step_deg: float = 0.01
    simplified: bool = True
    window: Optional[int] = None
    constellation: str = "qpsk"
    equalize: bool = True
    reverse_precoder: bool = True
    detail: str = "summary"
    seed: int = 0
    output_dir: str = "atma-output"
    db_decimals: int = 4
    golden: List[GoldenCheck] = field(default_factory=list)
    source: Optional[Path] = None
    text: str = ""

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_defaults(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """Load numeric defaults from defaults.yaml, falling back to built-ins."""
    if config_path is None:
        config_path = CONFIG_DIR / "defaults.yaml"

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise ValueError("top level must be a mapping")
        return _merge(BUILTIN_DEFAULTS, loaded)
    except Exception as e:
        click.echo(f"⚠️  Warning: Could not load defaults: {e}", err=True)
        return copy.deepcopy(BUILTIN_DEFAULTS)


def canonical_experiment(name: str) -> str:
    return EXPERIMENT_ALIASES.get(name, name)


def packaged_config(experiment: str) -> Path:
    return EXPERIMENTS_DIR / f"{experiment}.yaml"


def _key_lines(text: str) -> Dict[str, int]:
    """1-based line of every top-level key."""
    node = yaml.compose(text, Loader=yaml.SafeLoader)
    lines: Dict[str, int] = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, _ in node.value:
            lines[str(key_node.value)] = key_node.start_mark.line + 1
    return lines


class _Reader:
    """Typed access to the raw mapping, raising ConfigError with line info."""

    def __init__(self, data: Dict[str, Any], lines: Dict[str, int]):
        self.data = data
        self.lines = lines

    def fail(self, key: str, message: str) -> ConfigError:
        return ConfigError(message, field=key, line=self.lines.get(key))

    def has(self, key: str) -> bool:
        return key in self.data and self.data[key] is not None

    def _int(self, key: str, value: Any) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.fail(key, f"expected an integer, got {value!r}")
        return value

    def integer(self, key: str, default: int, minimum: Optional[int] = None) -> int:
        if not self.has(key):
            return default
        value = self._int(key, self.data[key])
        if minimum is not None and value < minimum:
            raise self.fail(key, f"must be at least {minimum}, got {value}")
        return value

    def optional_integer(self, key: str, minimum: int = 0) -> Optional[int]:
        if not self.has(key):
            return None
        return self.integer(key, 0, minimum)

    def number(self, key: str, default: float, positive: bool = False) -> float:
        if not self.has(key):
            return float(default)
        value = self.data[key]
        if isinstance(value, bool):
            raise self.fail(key, f"expected a number, got {value!r}")
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise self.fail(key, f"expected a number, got {value!r}") from None
        if positive and number <= 0:
            raise self.fail(key, f"must be positive, got {number}")
        return number

    def optional_number(self, key: str) -> Optional[float]:
        return self.number(key, 0.0) if self.has(key) else None

    def flag(self, key: str, default: bool) -> bool:
        if not self.has(key):
            return default
        value = self.data[key]
        if not isinstance(value, bool):
            raise self.fail(key, f"expected true or false, got {value!r}")
        return value

    def choice(self, key: str, default: str, options: Tuple[str, ...]) -> str:
        if not self.has(key):
            return default
        value = str(self.data[key])
        if value not in options:
            raise self.fail(key, f"must be one of {list(options)}, got '{value}'")
        return value

    def int_list(self, key: str, default: List[int], minimum: int = 0) -> List[int]:
        if key not in self.data:
            return list(default)
        value = self.data[key]
        if value is None:
            return []
        items = value if isinstance(value, list) else [value]
        result = []
        for item in items:
            number = self._int(key, item)
            if number < minimum:
                raise self.fail(key, f"values must be at least {minimum}, got {number}")
            result.append(number)
        return result


def _golden(reader: _Reader) -> List[GoldenCheck]:
    raw = reader.data.get("golden") or []
    if not isinstance(raw, list):
        raise reader.fail("golden", "expected a list of checks")
    checks = []
    for n, entry in enumerate(raw):
        label = f"golden[{n}]"
        if not isinstance(entry, dict):
            raise reader.fail("golden", f"{label} must be a mapping")
        if "column" not in entry or "expected" not in entry:
            raise reader.fail("golden", f"{label} needs 'column' and 'expected'")
        where = entry.get("where") or {}
        if not isinstance(where, dict):
            raise reader.fail("golden", f"{label}.where must be a mapping")
        op = str(entry.get("op", "approx"))
        if op not in GOLDEN_OPS:
            raise reader.fail("golden", f"{label}.op must be one of {list(GOLDEN_OPS)}")
        try:
            expected = float(entry["expected"])
            tolerance = float(entry.get("tolerance", 0.0))
        except (TypeError, ValueError):
            raise reader.fail(
                "golden", f"{label} expected/tolerance must be numbers"
            ) from None
        checks.append(
            GoldenCheck(
                column=str(entry["column"]),
                expected=expected,
                tolerance=tolerance,
                where=tuple(sorted(where.items())),
                op=op,
            )
        )
    return checks


def _allocations(reader: _Reader) -> List[Tuple[int, int]]:
    raw = reader.data.get("allocations") or []
    if not isinstance(raw, list):
        raise reader.fail("allocations", "expected a list of [A, O_tau] pairs")
    pairs = []
    for entry in raw:
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in entry)
        ):
            raise reader.fail("allocations", f"expected [A, O_tau], got {entry!r}")
        pairs.append((entry[0], entry[1]))
    return pairs


def parse_experiment_config(
    text: str,
    source: Optional[Path] = None,
    defaults: Optional[Dict[str, Any]] = None,
    experiment: Optional[str] = None,
) -> ExperimentConfig:
    """
    Parse one experiment file.

    Args:
        text: YAML source, a flat mapping.
        source: Path used in diagnostics and for the default name.
        defaults: Result of load_defaults(); loaded when omitted.
        experiment: Experiment type forced by the caller (subcommand).

    Raises:
        ConfigError: On YAML syntax errors or invalid fields.
    """
    try:
        data = yaml.safe_load(text)
        lines = _key_lines(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(
            f"YAML parse error: {problem}",
            line=mark.line + 1 if mark is not None else None,
        ) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping of keys to values", line=1)

    for key in sorted(set(map(str, data)) - KNOWN_KEYS):
        where = f"{source}:{lines.get(key)}" if source else f"line {lines.get(key)}"
        click.echo(f"⚠️  Warning: {where}: unknown key '{key}' ignored", err=True)

    if defaults is None:
        defaults = load_defaults()
    link = defaults["link"]
    spectrum = defaults["spectrum"]
    beam = defaults["beam"]
    reader = _Reader(data, lines)

    declared = data.get("experiment")
    if declared is not None:
        declared = canonical_experiment(str(declared))
    if experiment:
        experiment = canonical_experiment(experiment)
    if experiment and declared and declared != experiment:
        raise ConfigError(
            f"config declares experiment '{declared}', not '{experiment}'",
            field="experiment",
            line=lines.get("experiment"),
        )
    name = experiment or declared
    if not name:
        raise ConfigError("missing 'experiment' key", field="experiment")
    label = str(data.get("name") or (source.stem if source else name))

    delay_value = data.get("delay")
    all_delays = delay_value == "all"
    if all_delays:
        data = {k: v for k, v in data.items() if k != "delay"}
        reader = _Reader(data, lines)

    return ExperimentConfig(
        experiment=str(name),
        name=label,
        n_states=reader.int_list("n_states", [4], minimum=1),
        alias_factor=reader.int_list("alias_factor", [4], minimum=1),
        oversampling=reader.int_list("oversampling", [1], minimum=1),
        delay=reader.int_list("delay", [0], minimum=0),
        all_delays=all_delays,
        harmonic=reader.int_list("harmonic", [0], minimum=-(10**6)),
        allocations=_allocations(reader),
        sample_rate=reader.number("sample_rate", 1.0, positive=True),
        block_size=reader.optional_integer("block_size", minimum=1),
        default_block_size=int(link["block_size"]),
        cp_length=reader.optional_integer("cp_length"),
        cp_fraction=reader.number("cp_fraction", float(link["cp_fraction"])),
        subcarriers=reader.integer(
            "subcarriers", int(spectrum["subcarriers"]), minimum=1
        ),
        elements=reader.integer("elements", int(beam["elements"]), minimum=1),
        spacing=reader.number("spacing", float(beam["spacing"]), positive=True),
        carrier=reader.number("carrier", float(beam["carrier"]), positive=True),
        upsample=reader.optional_integer("upsample", minimum=1),
        upsample_base=int(link["upsample_base"]),
        spectrum_upsample=int(spectrum["upsample"]),
        snr_db=reader.optional_number("snr_db"),
        snr_ref_db=reader.number("snr_ref_db", float(defaults["capacity"]["snr_ref_db"])),
        imbalance_db=reader.number("imbalance_db", 0.0),
        phase_error_deg=reader.number("phase_error_deg", 0.0),
        frames=reader.integer("frames", int(link["frames"]), minimum=1),
        spectrum_frames=reader.integer("frames", int(spectrum["frames"]), minimum=1),
        scenario=reader.choice(
            "scenario",
            "constant-bandwidth",
            ("constant-bandwidth", "constant-switching"),
        ),
        transition=reader.number("transition", float(spectrum["transition"])),
        precoder=reader.choice("precoder", "alternating", ("alternating", "identity")),
        aclr_side=reader.choice("aclr_side", "lower", ("lower", "upper", "worst")),
        theta_step_deg=reader.number(
            "theta_step_deg", float(beam["theta_step_deg"]), positive=True
        ),
        simplified=reader.flag("simplified", True),
        window=reader.optional_integer("window", minimum=1),
        constellation=reader.choice(
            "constellation", str(link["constellation"]), ("qpsk", "bpsk")
        ),
        equalize=reader.flag("equalize", True),
        reverse_precoder=reader.flag("reverse_precoder", True),
        detail=reader.choice("detail", "summary", DETAIL_LEVELS),
        seed=reader.integer("seed", 0, minimum=0),
        output_dir=str(data.get("output_dir") or defaults["output"]["output_dir"]),
        db_decimals=int(defaults["output"]["db_decimals"]),
        golden=_golden(reader),
        source=source,
        text=text,
    )


def load_experiment_config(
    config_path: Path,
    defaults: Optional[Dict[str, Any]] = None,
    experiment: Optional[str] = None,
) -> ExperimentConfig:
    try:
        text = Path(config_path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror or e}") from None
    return parse_experiment_config(text, Path(config_path), defaults, experiment)

"""Declarative run configuration.

A run is fully described by a YAML file with one section per concern plus
command-line overrides; precedence is flag > file > default. Unknown keys are
rejected so typos fail loudly. The resolved configuration is echoed into
every output directory, which together with the seeds makes runs
reproducible from the config alone.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import yaml

from .data.splits import SplitSpec
from .data.synthetic import SynthConfig
from .model.config import ModelConfig
from .train.config import TrainConfig
from .wavelet.transform import WaveletConfig


def _from_mapping(cls, data: dict, section: str):
    if not isinstance(data, dict):
        raise ValueError(f"section {section!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown keys in section {section!r}: {sorted(unknown)}")
    return cls(**data)


@dataclass(frozen=True)
class DatasetConfig:
    window: int = 3
    stride: int = 2
    clip_len: int = 9  # preprocess chops each aligned segment into clips this long
    confidence_min: float = 0.1
    units: str = "pixels"

    def __post_init__(self):
        if self.window < 1 or self.stride < 1 or self.clip_len < 1:
            raise ValueError("window, stride, and clip_len must all be >= 1")


@dataclass(frozen=True)
class MetricsConfig:
    norm: str = "torso"  # "torso" | "bbox" | "fixed"
    fixed_length: float | None = None


@dataclass
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    wavelet: WaveletConfig = field(default_factory=WaveletConfig)
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    split: SplitSpec = field(default_factory=lambda: SplitSpec(train_ratio=0.8))
    metrics: MetricsConfig = field(default_factory=MetricsConfig)

    _SECTIONS = {
        "model": ModelConfig,
        "train": TrainConfig,
        "synth": SynthConfig,
        "wavelet": WaveletConfig,
        "dataset": DatasetConfig,
        "split": SplitSpec,
        "metrics": MetricsConfig,
    }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        unknown = set(data) - set(cls._SECTIONS)
        if unknown:
            raise ValueError(f"unknown config sections: {sorted(unknown)}")
        kwargs = {}
        for name, section_cls in cls._SECTIONS.items():
            if name not in data or data[name] is None:
                continue
            if section_cls is ModelConfig:
                kwargs[name] = ModelConfig.from_dict(data[name])
            elif section_cls is TrainConfig:
                kwargs[name] = TrainConfig.from_dict(data[name])
            else:
                kwargs[name] = _from_mapping(section_cls, data[name], name)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"config file not found: {path}")
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
        if data is None:
            data = {}
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "train": self.train.to_dict(),
            "synth": asdict(self.synth),
            "wavelet": asdict(self.wavelet),
            "dataset": asdict(self.dataset),
            "split": asdict(self.split),
            "metrics": asdict(self.metrics),
        }

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

    def hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:8]

    def with_overrides(self, overrides: list[str]) -> "RunConfig":
        """Apply ``section.key=value`` overrides; values are parsed as YAML."""
        data = self.to_dict()
        for item in overrides:
            if "=" not in item:
                raise ValueError(f"override must look like section.key=value, got {item!r}")
            key, _, raw = item.partition("=")
            parts = key.strip().split(".")
            if len(parts) != 2:
                raise ValueError(f"override key must be section.key, got {key!r}")
            section, name = parts
            if section not in self._SECTIONS:
                raise ValueError(f"unknown config section {section!r}")
            data.setdefault(section, {})[name] = yaml.safe_load(raw)
        return RunConfig.from_dict(data)


def load_run_config(path=None, overrides: list[str] | None = None) -> RunConfig:
    cfg = RunConfig.from_file(path) if path else RunConfig()
    if overrides:
        cfg = cfg.with_overrides(overrides)
    return cfg

"""Run configuration: one JSON document whose sections mirror the dataclasses below."""

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .simulator.models import ConfigError, GeneratorConfig, ResponseModel, from_mapping


@dataclass(frozen=True)
class Paths:
    graph: str | None = None
    later_graph: str | None = None
    profiles: str | None = None
    messages: str | None = None
    labels: str | None = None
    factions: str | None = None
    events: str | None = None
    model: str | None = None
    out: str = "out"


@dataclass(frozen=True)
class ClassifierParams:
    tree_count: int = 50
    max_depth: int = 8
    min_leaf: int = 5
    training_pairs: int = 20000
    folds: int = 10
    chi2_bins: int = 10


@dataclass(frozen=True)
class ProbeParams:
    rounds: int = 15
    interval_ticks: int = 15


@dataclass(frozen=True)
class CampaignParams:
    min_books: int = 10
    frac_model: float = 0.5
    frac_reciprocal: float = 0.25
    eligible_tag: str | None = None
    pool_size: int | None = None


@dataclass(frozen=True)
class AnalysisParams:
    damping: float = 0.85
    tol: float = 1e-10
    max_iters: int = 200
    window: int = 50
    null_runs: int = 50
    fccv_runs: int = 100
    faction_sizes: tuple = (102, 72)
    faction_out_degree: int = 8
    social_intra: float = 0.74
    comm_intra: float = 0.71


PRESETS = Path(__file__).parent / "presets"


def preset_path(name):
    """Path of a shipped preset config (``calibration`` is the campaign preset)."""
    p = PRESETS / f"{name}.json"
    if not p.exists():
        known = ", ".join(sorted(x.stem for x in PRESETS.glob("*.json")))
        raise ConfigError(f"unknown preset {name!r}; shipped presets: {known}")
    return p


SECTIONS = {
    "paths": Paths,
    "generator": GeneratorConfig,
    "response": ResponseModel,
    "classifier": ClassifierParams,
    "probe": ProbeParams,
    "campaign": CampaignParams,
    "analysis": AnalysisParams,
}


@dataclass(frozen=True)
class RunConfig:
    seed: int
    paths: Paths = field(default_factory=Paths)
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)
    response: ResponseModel = field(default_factory=ResponseModel)
    classifier: ClassifierParams = field(default_factory=ClassifierParams)
    probe: ProbeParams = field(default_factory=ProbeParams)
    campaign: CampaignParams = field(default_factory=CampaignParams)
    analysis: AnalysisParams = field(default_factory=AnalysisParams)

    @classmethod
    def from_dict(cls, data, seed=None):
        data = dict(data)
        if seed is not None:
            data["seed"] = seed
        if data.get("seed") is None:
            raise ConfigError("a seed is mandatory")
        unknown = set(data) - set(SECTIONS) - {"seed"}
        if unknown:
            raise ConfigError(f"unknown config sections: {', '.join(sorted(unknown))}")
        kwargs = {"seed": int(data["seed"])}
        for name, cls_ in SECTIONS.items():
            section = dict(data.get(name) or {})
            if name == "analysis" and "faction_sizes" in section:
                section["faction_sizes"] = tuple(section["faction_sizes"])
            kwargs[name] = from_mapping(cls_, section)
        # the generator always runs from the root seed
        kwargs["generator"] = replace(kwargs["generator"], seed=kwargs["seed"])
        return cls(**kwargs)

    @classmethod
    def load(cls, path=None, seed=None, overrides=None):
        data = {}
        if path is not None and not Path(path).exists() and (PRESETS / f"{path}.json").exists():
            path = preset_path(path)
        if path is not None:
            if not Path(path).exists():
                raise ConfigError(f"config file not found: {path}")
            try:
                data = json.loads(Path(path).read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        for section, values in (overrides or {}).items():
            data.setdefault(section, {}).update({k: v for k, v in values.items() if v is not None})
        return cls.from_dict(data, seed)

    def to_dict(self):
        d = {"seed": self.seed}
        for name in SECTIONS:
            d[name] = asdict(getattr(self, name))
        d["analysis"]["faction_sizes"] = list(self.analysis.faction_sizes)
        return d

    def digest(self):
        """SHA-256 of the canonical config, ignoring the output directory."""
        d = self.to_dict()
        d["paths"].pop("out")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def validate_inputs(self, *names):
        """Check that the named input paths are set and exist."""
        for name in names:
            p = getattr(self.paths, name)
            if p is None:
                raise ConfigError(f"missing input file: --{name.replace('_', '-')} is required")
            if not Path(p).exists():
                raise ConfigError(f"input file not found: {p}")

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

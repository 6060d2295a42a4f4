"""Run configuration: thresholds, data file locations, and feature flags.

A config file is a flat ``key = value`` text file (``#`` comments allowed).
Unset keys fall back to the defaults below; lexicon paths default to the
data files bundled with the package.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .resources import data_path


@dataclass(frozen=True)
class Config:
    # causality detection
    threshold: float = 0.5
    negation_window: int = 3
    negation_factor: float = 0.25
    # corpus ingestion
    min_body_chars: int = 40
    # KB construction
    include_flagged: bool = False
    # recommendation feeds
    include_uncurated: bool = True
    default_limit: int = 20
    # service
    port: int = 8000
    host: str = "127.0.0.1"
    admin_token: str = ""
    cors_origin: str = "*"
    data_dir: str = ""
    # data files (empty string = bundled default)
    cue_lexicon: str = ""
    state_lexicon: str = ""
    unit_lexicon: str = ""
    stopwords: str = ""
    abbreviations: str = ""
    plural_exceptions: str = ""
    questionnaire: str = ""

    def path_for(self, name: str) -> Path:
        """Resolve a data-file setting to a concrete path."""
        override = getattr(self, name)
        if override:
            return Path(override)
        bundled = {
            "cue_lexicon": "cue_lexicon.tsv",
            "state_lexicon": "state_lexicon.tsv",
            "unit_lexicon": "unit_lexicon.tsv",
            "stopwords": "stopwords.txt",
            "abbreviations": "abbreviations.txt",
            "plural_exceptions": "plural_exceptions.tsv",
            "questionnaire": "questionnaire.jsonl",
        }
        return data_path(bundled[name])


_BOOL_VALUES = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


def parse_config_text(text: str, base: Config | None = None) -> Config:
    cfg = base or Config()
    known = {f.name: f.type for f in fields(Config)}
    updates: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip().strip('"')
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        current = getattr(cfg, key)
        try:
            if isinstance(current, bool):
                if value.lower() not in _BOOL_VALUES:
                    raise ValueError(value)
                updates[key] = _BOOL_VALUES[value.lower()]
            elif isinstance(current, int):
                updates[key] = int(value)
            elif isinstance(current, float):
                updates[key] = float(value)
            else:
                updates[key] = value
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from None
    return replace(cfg, **updates)


def load_config(path: str | Path, base: Config | None = None) -> Config:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, base)

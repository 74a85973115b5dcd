"""Deterministic downlink C-RAN simulator with NOMA, ZF beamforming and
coalition-formed joint transmission."""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping

from . import _nomacomp
from ._nomacomp import ConfigError, InvalidInput, IoError

__version__ = _nomacomp.version()

SCHEMES = ("no_comp", "sc_jt_comp", "gc_jt_comp", "game_jt_comp")

Config = Mapping[str, Any]


def default_config() -> dict:
    return json.loads(_nomacomp.default_config_json())


def desk_config() -> dict:
    """7 RRHs, 6 UEs per cell, 12 RBs, two antennas, 200 TTIs."""
    return json.loads(_nomacomp.desk_config_json())


def _text(config: Config | None, overrides: Mapping[str, Any]) -> str:
    merged = dict(config or {})
    merged.update(overrides)
    return json.dumps(merged)


def validate(config: Config | None = None, **overrides: Any) -> dict:
    """Full config with defaults filled in; raises ConfigError."""
    return json.loads(_nomacomp.normalize_config_json(_text(config, overrides)))


def config_hash(config: Config | None = None, **overrides: Any) -> int:
    return _nomacomp.config_hash(_text(config, overrides))


def run(config: Config | None = None, *, keep_reports: bool = False, **overrides: Any) -> dict:
    """One run; returns the summary, plus per-TTI `reports` when asked."""
    return _nomacomp.run(_text(config, overrides), keep_reports)


def compare(config: Config | None = None, schemes: Iterable[str] = SCHEMES, **overrides: Any) -> list[dict]:
    """Same seed and shared random streams for every scheme."""
    return _nomacomp.compare(_text(config, overrides), list(schemes))


def sweep(config: Config | None, axis: str, values: Iterable[float], runs: int = 1, **overrides: Any) -> list[dict]:
    return _nomacomp.sweep(_text(config, overrides), axis, [float(v) for v in values], runs)


class Simulation(_nomacomp.Simulation):
    def __init__(self, config: Config | None = None, *, check_stability: bool = False, **overrides: Any):
        super().__init__(_text(config, overrides), check_stability)

    def __iter__(self):
        while not self.done:
            yield self.step()


__all__ = [
    "ConfigError",
    "InvalidInput",
    "IoError",
    "SCHEMES",
    "Simulation",
    "compare",
    "config_hash",
    "default_config",
    "desk_config",
    "run",
    "sweep",
    "validate",
]

"""Serializable run configuration shared by all subcommands."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields


@dataclass
class RunConfig:
    command: str
    suite: str | None = None
    system: str | None = None
    y: str | None = None
    init: str | None = None
    from_curve_points: str | None = None
    preset: str | None = None
    t_end: str | None = None
    rel_tol: float | None = None
    abs_tol: float | None = None
    max_step: float | None = None
    order: int | None = None
    seed_kind: str | None = None
    trials: int | None = None
    seed: int | None = None
    count: int | None = None
    tol: float | None = None
    expr: str | None = None
    format: str | None = None
    output: str | None = None

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_json(cls, obj: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        return cls.from_json(json.loads(text))

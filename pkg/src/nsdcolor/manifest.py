"""Reproducibility metadata embedded in every output artifact.

A manifest pins everything that determines an output: the subcommand, a
description of the input, the seed, parameter overrides, the toolkit
version, and a caller-supplied timestamp (kept out of the entropy path on
purpose — identical manifests must yield byte-identical artifacts, so wall
clocks never leak in unless explicitly injected).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__


@dataclass(frozen=True)
class RunManifest:
    subcommand: str
    input_desc: str
    seed: int
    overrides: tuple = ()          # sorted (key, value) pairs
    version: str = __version__
    timestamp: str = "unset"

    @staticmethod
    def build(subcommand: str, input_desc: str, seed: int, timestamp: str = "unset",
              **overrides) -> "RunManifest":
        pairs = tuple(sorted((k, v) for k, v in overrides.items() if v is not None))
        return RunManifest(subcommand, input_desc, seed, pairs, __version__, timestamp)

    def to_json_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "input": self.input_desc,
            "seed": self.seed,
            "overrides": {k: v for k, v in self.overrides},
            "version": self.version,
            "timestamp": self.timestamp,
        }

    def line(self) -> str:
        """Single-line comment form for the head of CSV/graph6 artifacts."""
        return "# manifest: " + json.dumps(
            self.to_json_dict(), sort_keys=True, separators=(",", ":")
        )

"""Versioned JSON reports.

A report is one JSON document: the configuration echo, provenance and a
list of result blocks, each naming the operation that produced it.  Exact
rationals appear as ``"p/q"`` strings next to a labelled decimal.  Output is
key-sorted and carries no timings unless asked, so equal inputs give
byte-identical files whatever the worker count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__

SCHEMA_VERSION = 1


@dataclass
class Block:
    operation: str
    topic: str
    result: Any

    def to_json(self) -> dict:
        return {"operation": self.operation, "topic": self.topic, "result": self.result}


@dataclass
class Report:
    command: str
    config: dict
    blocks: list[Block] = field(default_factory=list)
    timings: dict[str, float | bool] | None = None

    def add(self, operation: str, topic: str, result: Any) -> Any:
        self.blocks.append(Block(operation, topic, result))
        return result

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION,
               "provenance": {"package": "rainbow_sidon", "version": __version__,
                              "seed": self.config.get("seed")},
               "command": self.command,
               "config": self.config,
               "results": [b.to_json() for b in self.blocks]}
        if self.timings is not None:
            out["runtime"] = {k: round(v, 3) if isinstance(v, float) else v
                              for k, v in sorted(self.timings.items())}
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"

"""Sizing and styling knobs shared by layout and renderers.

All lengths are abstract pixels: box widths come from character counts
(charWidth per character) and box heights from row counts (rowHeight per
row).  The QVIZ_STYLE environment variable may point at a JSON file
overriding any field.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class StyleConfig:
    charWidth: int = 8
    rowHeight: int = 20
    boxPaddingX: int = 8
    minBoxWidth: int = 60
    layerGap: int = 60
    nodeGap: int = 24
    groupPadding: int = 12
    margin: int = 20
    fontSize: int = 12
    fontFamily: str = "Helvetica, Arial, sans-serif"

    def merged(self, overrides: dict) -> "StyleConfig":
        known = {f.name: f.type for f in fields(self)}
        for key, value in overrides.items():
            if key not in known:
                raise ValueError(f"unknown style option {key!r}")
            expected = str if key == "fontFamily" else int
            if not isinstance(value, expected) or isinstance(value, bool):
                raise ValueError(
                    f"style option {key!r} must be {expected.__name__}")
        return replace(self, **overrides)

    @staticmethod
    def from_file(path: str | Path) -> "StyleConfig":
        try:
            raw = Path(path).read_text()
        except OSError as e:
            raise ValueError(f"cannot read style file {path}: {e}") from None
        try:
            overrides = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ValueError(f"style file {path} is not valid JSON: {e}") from None
        if not isinstance(overrides, dict):
            raise ValueError(f"style file {path} must hold a JSON object")
        return StyleConfig().merged(overrides)

    @staticmethod
    def from_env(environ: dict | None = None) -> "StyleConfig":
        env = os.environ if environ is None else environ
        path = env.get("QVIZ_STYLE")
        if not path:
            return StyleConfig()
        return StyleConfig.from_file(path)

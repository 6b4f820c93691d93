"""Figure specifications and style resolution."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

KINDS = ("heatmap", "traces", "scaling", "dos")


class FigureSpecError(ValueError):
    pass


def load_style(path=None) -> dict:
    """Style mapping (colormap, contour levels, dpi); defaults ship packaged."""
    ref = resources.files("darkloc_figures") / "styles" / "default.yaml"
    style = yaml.safe_load(ref.read_text())
    if path is not None:
        user = yaml.safe_load(Path(path).read_text()) or {}
        for key, value in user.items():
            if isinstance(value, dict) and isinstance(style.get(key), dict):
                style[key].update(value)
            else:
                style[key] = value
    return style


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: inputs, kind, axis ranges, output path, style."""

    kind: str
    inputs: tuple
    output: str
    x_range: tuple | None = None
    y_range: tuple | None = None
    style: dict = field(default_factory=load_style)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureSpecError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.inputs:
            raise FigureSpecError("at least one input CSV is required")
        for p in self.inputs:
            if not Path(p).exists():
                raise FigureSpecError(f"input file not found: {p}")

    @classmethod
    def from_yaml(cls, path) -> "FigureSpec":
        doc = yaml.safe_load(Path(path).read_text()) or {}
        unknown = set(doc) - {"kind", "inputs", "output", "x_range", "y_range",
                              "style"}
        if unknown:
            raise FigureSpecError(f"unknown keys in figure spec: {sorted(unknown)}")
        for key in ("kind", "inputs", "output"):
            if key not in doc:
                raise FigureSpecError(f"figure spec missing required key '{key}'")
        inputs = doc["inputs"]
        if isinstance(inputs, str):
            inputs = [inputs]
        return cls(
            kind=doc["kind"],
            inputs=tuple(str(p) for p in inputs),
            output=str(doc["output"]),
            x_range=tuple(doc["x_range"]) if doc.get("x_range") else None,
            y_range=tuple(doc["y_range"]) if doc.get("y_range") else None,
            style=load_style(doc.get("style")),
        )

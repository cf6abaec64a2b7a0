"""Deterministic SVG and TikZ emission for line diagrams.

Output bytes are identical across runs and platforms for fixed inputs: node
order follows the canonical concept order, floats are formatted with a fixed
precision, and no timestamps are embedded.  The y-axis points up
mathematically; the SVG writer flips it at render time only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import ConceptLattice

__all__ = ["RenderOptions", "render"]


@dataclass(frozen=True)
class RenderOptions:
    node_radius: float = 0.12
    edge_width: float = 0.03
    canvas_padding: float = 1.0
    label_mode: str = "reduced-labels"   # none | extents+intents | reduced-labels
    format: str = "svg"                  # svg | tikz | json
    scale: float = 40.0                  # svg pixels per unit

    def __post_init__(self):
        if self.node_radius <= 0 or self.edge_width <= 0 or self.canvas_padding < 0:
            raise ValueError("render dimensions must be positive")
        if self.label_mode not in ("none", "extents+intents", "reduced-labels"):
            raise ValueError(f"unknown label mode {self.label_mode!r}")
        if self.format not in ("svg", "tikz", "json"):
            raise ValueError(f"unknown render format {self.format!r}")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _labels(lat: ConceptLattice, i: int, mode: str):
    if mode == "none":
        return ""
    if mode == "extents+intents":
        c = lat.concepts[i]
        ext = ",".join(lat.context.object_names(c.extent))
        intent = ",".join(lat.context.attribute_names(c.intent))
        return f"{{{ext}}} ; {{{intent}}}"
    objs, atts = lat.labels(i)
    parts = []
    if atts:
        parts.append(", ".join(atts))
    if objs:
        parts.append(", ".join(objs))
    return " / ".join(parts)


def render(lat: ConceptLattice, layout: np.ndarray, opts: RenderOptions | None = None) -> bytes:
    """Draw the diagram; deterministic bytes for fixed inputs."""
    opts = opts or RenderOptions()
    pos = np.asarray(layout, dtype=float)
    if pos.shape[0] != len(lat):
        raise ValueError("layout does not cover all concepts")
    if opts.format == "svg":
        return _render_svg(lat, pos, opts)
    if opts.format == "tikz":
        return _render_tikz(lat, pos, opts)
    from .formats import layout_to_json
    import json

    return json.dumps(layout_to_json(lat, pos), sort_keys=True, indent=2).encode()


def _render_svg(lat: ConceptLattice, pos: np.ndarray, opts: RenderOptions) -> bytes:
    pad = opts.canvas_padding
    xmin, ymin = pos.min(axis=0) - pad
    xmax, ymax = pos.max(axis=0) + pad
    s = opts.scale

    def sx(x):
        return (x - xmin) * s

    def sy(y):
        # flip: mathematical y-up to svg y-down
        return (ymax - y) * s

    width = (xmax - xmin) * s
    height = (ymax - ymin) * s
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    for lo, up in lat.covers:
        out.append(
            f'  <line x1="{_fmt(sx(pos[lo, 0]))}" y1="{_fmt(sy(pos[lo, 1]))}" '
            f'x2="{_fmt(sx(pos[up, 0]))}" y2="{_fmt(sy(pos[up, 1]))}" '
            f'stroke="black" stroke-width="{_fmt(opts.edge_width * s)}"/>'
        )
    for i in range(len(lat)):
        out.append(
            f'  <circle cx="{_fmt(sx(pos[i, 0]))}" cy="{_fmt(sy(pos[i, 1]))}" '
            f'r="{_fmt(opts.node_radius * s)}" fill="white" stroke="black" '
            f'stroke-width="{_fmt(opts.edge_width * s)}"/>'
        )
        label = _labels(lat, i, opts.label_mode)
        if label:
            out.append(
                f'  <text x="{_fmt(sx(pos[i, 0]) + opts.node_radius * s * 1.5)}" '
                f'y="{_fmt(sy(pos[i, 1]) - opts.node_radius * s * 1.5)}" '
                f'font-size="{_fmt(0.3 * s)}">{_escape(label)}</text>'
            )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _render_tikz(lat: ConceptLattice, pos: np.ndarray, opts: RenderOptions) -> bytes:
    out = [r"\begin{tikzpicture}[scale=0.5]"]
    style = (
        f"circle, draw, fill=white, inner sep=0pt, "
        f"minimum size={_fmt(opts.node_radius * 20)}mm"
    )
    out.append(f"  \\tikzstyle{{concept}}=[{style}]")
    for lo, up in lat.covers:
        out.append(
            f"  \\draw ({_fmt(pos[lo, 0])},{_fmt(pos[lo, 1])}) -- "
            f"({_fmt(pos[up, 0])},{_fmt(pos[up, 1])});"
        )
    for i in range(len(lat)):
        out.append(
            f"  \\node[concept] (n{i}) at ({_fmt(pos[i, 0])},{_fmt(pos[i, 1])}) {{}};"
        )
        label = _labels(lat, i, opts.label_mode)
        if label:
            out.append(
                f"  \\node[anchor=west, font=\\scriptsize] at "
                f"({_fmt(pos[i, 0] + opts.node_radius)},{_fmt(pos[i, 1] + opts.node_radius)}) "
                f"{{{label}}};"
            )
    out.append(r"\end{tikzpicture}")
    return ("\n".join(out) + "\n").encode()

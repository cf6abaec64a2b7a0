"""File formats: Burmeister contexts, JSON contexts and layouts, config, CSV.

The Burmeister ``.cxt`` writer is bit-exact: header ``B``, a blank line, the
object and attribute counts, the names, then rows of ``.``/``X``.  The parser
additionally tolerates lowercase crosses and CRLF line endings, which occur
in real-world context collections.
"""

from __future__ import annotations

import io
import json
import numpy as np

from .context import FormalContext
from .forces import ForceConfig
from .lattice import ConceptLattice

__all__ = [
    "extension_to_json",
    "read_cxt",
    "write_cxt",
    "context_from_json",
    "context_to_json",
    "layout_to_json",
    "layout_from_json",
    "lattice_to_json",
    "load_config",
    "config_from_mapping",
    "trace_to_csv",
    "rows_to_csv",
    "srm_to_csv",
]


# -- Burmeister .cxt ----------------------------------------------------------


def extension_to_json(result) -> dict:
    """Serialize a two-dimensional extension result (pairs by concept index)."""
    return {
        "k": result.k,
        "minimal": result.minimal,
        "added_pairs": sorted([list(p) for p in result.added_pairs]),
        "extensions": [list(ext) for ext in result.realizer.extensions],
    }


def read_cxt(text: str) -> FormalContext:
    """Parse a Burmeister context file."""
    lines = [line.rstrip("\r") for line in text.split("\n")]
    # strip trailing blank lines
    while lines and not lines[-1].strip():
        lines.pop()
    pos = 0

    def next_line(skip_blank: bool):
        nonlocal pos
        while pos < len(lines):
            line = lines[pos]
            pos += 1
            if skip_blank and not line.strip():
                continue
            return line
        raise ValueError("unexpected end of .cxt file")

    header = next_line(skip_blank=True).strip()
    if header != "B":
        raise ValueError(f"not a Burmeister context (header {header!r})")
    n_objects = int(next_line(skip_blank=True).strip())
    n_attributes = int(next_line(skip_blank=True).strip())
    objects = [next_line(skip_blank=True) for _ in range(n_objects)]
    attributes = [next_line(skip_blank=True) for _ in range(n_attributes)]
    incidence = np.zeros((n_objects, n_attributes), dtype=bool)
    for g in range(n_objects):
        row = next_line(skip_blank=True)
        if len(row) < n_attributes:
            raise ValueError(f"incidence row {g} too short: {row!r}")
        for m in range(n_attributes):
            c = row[m]
            if c in "xX":
                incidence[g, m] = True
            elif c != ".":
                raise ValueError(f"unexpected incidence character {c!r}")
    return FormalContext(tuple(objects), tuple(attributes), incidence)


def write_cxt(ctx: FormalContext) -> str:
    """Serialize a context in Burmeister format (bit-exact layout)."""
    parts = ["B", "", str(ctx.n_objects), str(ctx.n_attributes)]
    parts.extend(ctx.objects)
    parts.extend(ctx.attributes)
    for g in range(ctx.n_objects):
        parts.append(
            "".join("X" if ctx.incidence[g, m] else "." for m in range(ctx.n_attributes))
        )
    return "\n".join(parts) + "\n"


# -- JSON forms ---------------------------------------------------------------


def context_from_json(payload) -> FormalContext:
    if isinstance(payload, str):
        payload = json.loads(payload)
    try:
        objects = payload["objects"]
        attributes = payload["attributes"]
        incidence = payload["incidence"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed context JSON: {exc}") from exc
    return FormalContext(tuple(objects), tuple(attributes), np.array(incidence, dtype=bool))


def context_to_json(ctx: FormalContext) -> dict:
    return {
        "objects": list(ctx.objects),
        "attributes": list(ctx.attributes),
        "incidence": [[bool(v) for v in row] for row in ctx.incidence],
    }


def layout_to_json(lat: ConceptLattice, layout: np.ndarray) -> dict:
    """Layout JSON: nodes carry concept index, extent/intent names, x, y."""
    pos = np.asarray(layout, dtype=float)
    nodes = []
    ctx = lat.context
    for i, concept in enumerate(lat.concepts):
        nodes.append({
            "concept": i,
            "extent": ctx.object_names(concept.extent),
            "intent": ctx.attribute_names(concept.intent),
            "x": float(pos[i, 0]),
            "y": float(pos[i, 1]),
        })
    return {"dimension": 2, "nodes": nodes}


def layout_from_json(payload, lat: ConceptLattice | None = None) -> np.ndarray:
    """Read a Layout JSON.  When a lattice is given, nodes are matched by
    extent/intent rather than file order, so layouts survive re-enumeration."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    nodes = payload["nodes"]
    if lat is None:
        out = np.zeros((len(nodes), 2))
        for node in nodes:
            out[node["concept"]] = (node["x"], node["y"])
        return out
    out = np.full((len(lat), 2), np.nan)
    index = {
        (frozenset(lat.context.object_names(c.extent)),
         frozenset(lat.context.attribute_names(c.intent))): i
        for i, c in enumerate(lat.concepts)
    }
    for node in nodes:
        key = (frozenset(node["extent"]), frozenset(node["intent"]))
        if key not in index:
            raise ValueError(f"layout node {node['concept']} matches no concept")
        out[index[key]] = (node["x"], node["y"])
    if np.isnan(out).any():
        raise ValueError("layout does not cover all concepts")
    return out


def lattice_to_json(lat: ConceptLattice) -> dict:
    ctx = lat.context
    concepts = []
    for i, c in enumerate(lat.concepts):
        objs, atts = lat.labels(i)
        concepts.append({
            "index": i,
            "extent": ctx.object_names(c.extent),
            "intent": ctx.attribute_names(c.intent),
            "object_labels": objs,
            "attribute_labels": atts,
        })
    return {
        "concepts": concepts,
        "covers": [list(c) for c in lat.covers],
        "top": lat.top,
        "bottom": lat.bottom,
    }


# -- configuration ------------------------------------------------------------


_CONFIG_KEYS = set(ForceConfig.__dataclass_fields__)


def config_from_mapping(mapping: dict, base: ForceConfig | None = None) -> ForceConfig:
    base = base or ForceConfig()
    unknown = set(mapping) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return base.with_overrides(**mapping)


def load_config(path: str, base: ForceConfig | None = None) -> ForceConfig:
    """Read a force configuration from a TOML or JSON file."""
    with open(path, "rb") as fh:
        blob = fh.read()
    text = blob.decode("utf-8")
    if path.endswith(".json"):
        mapping = json.loads(text)
    else:
        try:
            import tomllib
        except ModuleNotFoundError:  # python < 3.11
            import tomli as tomllib

        mapping = tomllib.loads(text)
    return config_from_mapping(mapping, base)


# -- CSV emission --------------------------------------------------------------


def trace_to_csv(trace) -> str:
    """Energy trace rows (iteration, E_rep, E_att, E_grav, force_inf)."""
    buf = io.StringIO()
    buf.write("iteration,e_rep,e_att,e_grav,force_inf\n")
    for it, e_rep, e_att, e_grav, f_inf in trace:
        buf.write(f"{it},{e_rep!r},{e_att!r},{e_grav!r},{f_inf!r}\n")
    return buf.getvalue()


def rows_to_csv(rows) -> str:
    """Evaluation table rows (BatchRow) to CSV."""
    buf = io.StringIO()
    header = [
        "lattice", "algorithm", "concepts", "valid", "converged",
        "min_conflict_distance", "edge_crossings", "distinct_slopes",
        "reference_distance", "error",
    ]
    buf.write(",".join(header) + "\n")
    for row in rows:
        d = row.as_dict()
        buf.write(",".join(str(d.get(k, "")) for k in header) + "\n")
    return buf.getvalue()


def srm_to_csv(srm: np.ndarray) -> str:
    buf = io.StringIO()
    for row in np.asarray(srm, dtype=int):
        buf.write(",".join(str(int(v)) for v in row) + "\n")
    return buf.getvalue()

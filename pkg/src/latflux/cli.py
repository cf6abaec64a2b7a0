"""Command-line front end.

Exit codes: 0 on success, 1 on input errors (bad files, unknown flags),
2 when a computation finished with a non-convergence or budget flag.
"""

from __future__ import annotations

import argparse
import json
import os
import sys


from . import __version__
from .additive import (
    RepresentationKind,
    build_srm,
    is_additive,
    project_additive,
    snap_to_grid,
)
from .forces import ForceConfig
from .formats import (
    config_from_mapping,
    context_from_json,
    layout_from_json,
    layout_to_json,
    lattice_to_json,
    load_config,
    read_cxt,
    rows_to_csv,
)
from .lattice import compute_lattice, validate_line_diagram
from .pipeline import (
    ALGORITHMS,
    batch_evaluate,
    enumerate_four_meet_irreducible_lattices,
    quality_metrics,
)
from .render import RenderOptions, render

CONFIG_ENV = "LATFLUX_CONFIG"

_KIND_BY_NAME = {
    "doubly": RepresentationKind.DOUBLY_ADDITIVE,
    "attribute": RepresentationKind.ATTRIBUTE_ADDITIVE,
    "object": RepresentationKind.OBJECT_ADDITIVE,
    "dual-attribute": RepresentationKind.DUAL_ATTRIBUTE,
}


class InputError(Exception):
    pass


def _load_context(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read context {path}: {exc}") from exc
    try:
        if path.endswith(".cxt") or text.lstrip().startswith("B"):
            return read_cxt(text)
        return context_from_json(text)
    except ValueError as exc:
        raise InputError(f"invalid context {path}: {exc}") from exc


def _load_layout(path: str, lat):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return layout_from_json(fh.read(), lat)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"invalid layout {path}: {exc}") from exc


def _config(args) -> ForceConfig:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    cfg = ForceConfig()
    if path:
        try:
            cfg = load_config(path)
        except (OSError, ValueError) as exc:
            raise InputError(f"invalid config {path}: {exc}") from exc
    overrides = {}
    for key in ("max_iterations", "convergence_tol", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return config_from_mapping(overrides, cfg) if overrides else cfg


def _write_output(args, payload: str | bytes):
    out = getattr(args, "output", None)
    if out and out != "-":
        mode = "wb" if isinstance(payload, bytes) else "w"
        with open(out, mode) as fh:
            fh.write(payload)
    else:
        if isinstance(payload, bytes):
            sys.stdout.buffer.write(payload)
        else:
            sys.stdout.write(payload)


def _cmd_lattice(args) -> int:
    ctx = _load_context(args.context)
    lat = compute_lattice(ctx)
    _write_output(args, json.dumps(lattice_to_json(lat), indent=2) + "\n")
    return 0


def _cmd_draw(args) -> int:
    ctx = _load_context(args.context)
    lat = compute_lattice(ctx)
    cfg = _config(args)
    result = ALGORITHMS[args.algo](lat, cfg)
    if args.format == "json":
        _write_output(args, json.dumps(layout_to_json(lat, result.layout), indent=2) + "\n")
    else:
        opts = RenderOptions(format=args.format, label_mode=args.labels)
        _write_output(args, render(lat, result.layout, opts))
    if result.flags:
        print(f"flags: {', '.join(result.flags)}", file=sys.stderr)
        return 2
    return 0


def _cmd_project(args) -> int:
    ctx = _load_context(args.context)
    lat = compute_lattice(ctx)
    layout = _load_layout(args.layout, lat)
    basis = build_srm(lat, _KIND_BY_NAME[args.representation])
    projected = project_additive(basis, layout)
    _write_output(args, json.dumps(layout_to_json(lat, projected), indent=2) + "\n")
    return 0


def _cmd_check_additive(args) -> int:
    ctx = _load_context(args.context)
    lat = compute_lattice(ctx)
    layout = _load_layout(args.layout, lat)
    basis = build_srm(lat, _KIND_BY_NAME[args.representation])
    flag, residual = is_additive(basis, layout, args.tol)
    print(f"{'additive' if flag else 'not additive'} (residual {residual:.3e}, tol {args.tol:.1e})")
    return 0


def _cmd_snap(args) -> int:
    ctx = _load_context(args.context)
    lat = compute_lattice(ctx)
    layout = _load_layout(args.layout, lat)
    basis = build_srm(lat, _KIND_BY_NAME[args.representation])
    snapped = snap_to_grid(basis, layout, args.grid)
    report = validate_line_diagram(lat, snapped)
    _write_output(args, json.dumps(layout_to_json(lat, snapped), indent=2) + "\n")
    if not report.valid:
        print("warning: snapped layout violates line-diagram validity", file=sys.stderr)
    return 0


def _cmd_metrics(args) -> int:
    ctx = _load_context(args.context)
    lat = compute_lattice(ctx)
    layout = _load_layout(args.layout, lat)
    metrics = quality_metrics(lat, layout)
    report = validate_line_diagram(lat, layout)
    payload = {"valid": report.valid, **metrics.as_dict()}
    print(json.dumps(payload, indent=2))
    return 0


def _cmd_eval126(args) -> int:
    cfg = _config(args)
    lattices = enumerate_four_meet_irreducible_lattices()
    ids = [(f"lattice-{i + 1:03d}", lat) for i, lat in enumerate(lattices)]
    algos = args.algorithms.split(",") if args.algorithms else ["dimflux"]
    unknown = [a for a in algos if a not in ALGORITHMS]
    if unknown:
        raise InputError(f"unknown algorithms: {unknown}")
    references = {}
    if getattr(args, "references", None):
        import glob as globmod
        for path in globmod.glob(os.path.join(args.references, "*.json")):
            name = os.path.splitext(os.path.basename(path))[0]
            match = dict(ids).get(name)
            if match is None:
                continue
            references[name] = _load_layout(path, match)
    rows = batch_evaluate(ids, algos, cfg, references or None)
    _write_output(args, rows_to_csv(rows))
    bad = [r for r in rows if not r.valid or r.error]
    if bad:
        print(f"{len(bad)} rows flagged", file=sys.stderr)
        return 2
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latflux",
        description="Concept lattice drawing: additive projections, "
        "force-directed placement, realizer embeddings.",
    )
    parser.add_argument("--version", action="version", version=f"latflux {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("lattice", help="compute the concept lattice of a context")
    p.add_argument("context")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_lattice)

    p = sub.add_parser("draw", help="draw a context with one of the algorithms")
    p.add_argument("context")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), default="dimflux")
    p.add_argument("--format", choices=["json", "svg", "tikz"], default="json")
    p.add_argument("--labels", choices=["none", "extents+intents", "reduced-labels"],
                   default="reduced-labels")
    p.add_argument("--config")
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--convergence-tol", dest="convergence_tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_draw)

    p = sub.add_parser("project", help="orthogonally project a layout into the additive space")
    p.add_argument("layout")
    p.add_argument("context")
    p.add_argument("--representation", choices=sorted(_KIND_BY_NAME), default="doubly")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_project)

    p = sub.add_parser("check-additive", help="test whether a layout is additive")
    p.add_argument("layout")
    p.add_argument("context")
    p.add_argument("--representation", choices=sorted(_KIND_BY_NAME), default="doubly")
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(func=_cmd_check_additive)

    p = sub.add_parser("snap", help="snap the element vectors of a layout to a grid")
    p.add_argument("layout")
    p.add_argument("context")
    p.add_argument("--grid", type=float, required=True)
    p.add_argument("--representation", choices=sorted(_KIND_BY_NAME), default="doubly")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_snap)

    p = sub.add_parser("metrics", help="quality metrics of a layout")
    p.add_argument("layout")
    p.add_argument("context")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("eval126", help="evaluate algorithms over the 126 four-meet-irreducible lattices")
    p.add_argument("--algorithms", default="dimflux",
                   help="comma-separated subset of " + ",".join(sorted(ALGORITHMS)))
    p.add_argument("--references",
                   help="directory of reference Layout JSON files named by lattice id")
    p.add_argument("--config")
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_eval126)

    p = sub.add_parser("serve", help="run the layout HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7878)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract is 1 for input errors
        return 0 if exc.code == 0 else 1
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 1


if __name__ == "__main__":
    sys.exit(main())

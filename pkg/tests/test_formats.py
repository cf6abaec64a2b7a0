import json

import numpy as np
import pytest

from latflux import data
from latflux.forces import ForceConfig
from latflux.formats import (
    config_from_mapping,
    context_from_json,
    context_to_json,
    layout_from_json,
    layout_to_json,
    lattice_to_json,
    load_config,
    read_cxt,
    rows_to_csv,
    srm_to_csv,
    trace_to_csv,
    write_cxt,
)
from latflux.lattice import compute_lattice


def test_cxt_round_trip(dwarf_context):
    text = write_cxt(dwarf_context)
    back = read_cxt(text)
    assert back.objects == dwarf_context.objects
    assert back.attributes == dwarf_context.attributes
    assert np.array_equal(back.incidence, dwarf_context.incidence)
    # writing again is byte-identical
    assert write_cxt(back) == text


def test_cxt_exact_header_format(dwarf_context):
    text = write_cxt(dwarf_context)
    lines = text.split("\n")
    assert lines[0] == "B"
    assert lines[1] == ""
    assert lines[2] == "5"
    assert lines[3] == "4"
    assert lines[4] == "Ceres"


def test_cxt_tolerates_lowercase_and_crlf():
    text = "B\r\n\r\n2\r\n2\r\ng0\r\ng1\r\nm0\r\nm1\r\nx.\r\n.X\r\n"
    ctx = read_cxt(text)
    assert ctx.incidence[0, 0] and not ctx.incidence[0, 1]
    assert ctx.incidence[1, 1]


def test_cxt_rejects_garbage():
    with pytest.raises(ValueError):
        read_cxt("not a context")
    with pytest.raises(ValueError):
        read_cxt("B\n\n1\n1\ng\nm\n?\n")


def test_context_json_round_trip(dwarf_context):
    payload = context_to_json(dwarf_context)
    back = context_from_json(json.dumps(payload))
    assert back.objects == dwarf_context.objects
    assert np.array_equal(back.incidence, dwarf_context.incidence)


def test_context_json_malformed():
    with pytest.raises(ValueError):
        context_from_json({"objects": ["a"]})


def test_layout_json_round_trip(dwarf_lattice, projected_layout):
    payload = layout_to_json(dwarf_lattice, projected_layout)
    assert payload["dimension"] == 2
    back = layout_from_json(payload, dwarf_lattice)
    assert np.abs(back - projected_layout).max() < 1e-12


def test_layout_json_matches_by_extent_intent(dwarf_lattice, projected_layout):
    payload = layout_to_json(dwarf_lattice, projected_layout)
    payload["nodes"] = list(reversed(payload["nodes"]))  # scramble file order
    back = layout_from_json(payload, dwarf_lattice)
    assert np.abs(back - projected_layout).max() < 1e-12


def test_layout_json_rejects_wrong_concepts(dwarf_lattice, projected_layout):
    payload = layout_to_json(dwarf_lattice, projected_layout)
    payload["nodes"][0]["extent"] = ["Nonsense"]
    with pytest.raises(ValueError):
        layout_from_json(payload, dwarf_lattice)


def test_lattice_json_counts(dwarf_lattice):
    payload = lattice_to_json(dwarf_lattice)
    assert len(payload["concepts"]) == 11
    assert len(payload["covers"]) == 17


def test_config_from_json(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"max_iterations": 42, "w_rep": 2.5}))
    cfg = load_config(str(path))
    assert cfg.max_iterations == 42
    assert cfg.w_rep == 2.5
    assert cfg.convergence_tol == ForceConfig().convergence_tol


def test_config_from_toml(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text("max_iterations = 7\nconvergence_tol = 1e-3\n")
    cfg = load_config(str(path))
    assert cfg.max_iterations == 7
    assert cfg.convergence_tol == 1e-3


def test_config_rejects_unknown_keys():
    with pytest.raises(ValueError):
        config_from_mapping({"bogus": 1})


def test_trace_csv():
    text = trace_to_csv([(0, 1.0, 2.0, 3.0, 0.5)])
    lines = text.strip().split("\n")
    assert lines[0] == "iteration,e_rep,e_att,e_grav,force_inf"
    assert lines[1].startswith("0,1.0,2.0,3.0")


def test_rows_csv(dwarf_lattice):
    from latflux.pipeline import batch_evaluate

    rows = batch_evaluate([("dwarf", dwarf_lattice)], ["dimdraw"])
    text = rows_to_csv(rows)
    assert text.splitlines()[0].startswith("lattice,algorithm")
    assert "dwarf" in text


def test_srm_csv(dwarf_lattice):
    from latflux.additive import RepresentationKind, build_srm

    basis = build_srm(dwarf_lattice, RepresentationKind.DOUBLY_ADDITIVE)
    text = srm_to_csv(basis.srm)
    assert text.splitlines()[0] == "1,1,1,1,1,1,1,1,1"
    assert text.splitlines()[-1] == "0,0,0,0,0,0,0,0,0"


def test_extension_to_json(dwarf_lattice):
    from latflux.dimdraw import minimal_extension
    from latflux.formats import extension_to_json

    result = minimal_extension(dwarf_lattice)
    payload = extension_to_json(result)
    assert payload["k"] == result.k
    assert payload["minimal"] is True
    assert len(payload["extensions"]) == 2
    assert all(sorted(e) == list(range(len(dwarf_lattice))) for e in payload["extensions"])

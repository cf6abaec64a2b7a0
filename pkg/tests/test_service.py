import json

import numpy as np
import pytest

from golden import DRAG_FRAMES, DRAG_NODE, DRAG_STEP

from latflux import data
from latflux.additive import (
    RepresentationKind,
    build_srm,
    normalize_display,
    project_additive,
)
from latflux.formats import context_to_json, layout_to_json
from latflux.lattice import compute_lattice
from latflux.service import create_app


@pytest.fixture(scope="module")
def client():
    from fastapi.testclient import TestClient

    with TestClient(create_app()) as client:
        yield client


@pytest.fixture(scope="module")
def dwarf_payload():
    return context_to_json(data.dwarf_planets())


@pytest.fixture(scope="module")
def exact_projected(dwarf_lattice, hand_layout):
    basis = build_srm(dwarf_lattice, RepresentationKind.DOUBLY_ADDITIVE)
    return normalize_display(
        project_additive(basis, hand_layout), dwarf_lattice.top, 12.0
    )


def test_lattice_endpoint(client, dwarf_payload):
    response = client.post("/lattice", json=dwarf_payload)
    assert response.status_code == 200
    body = response.json()
    assert len(body["concepts"]) == 11
    assert len(body["covers"]) == 17


def test_lattice_endpoint_malformed_body(client):
    response = client.post("/lattice", json={"objects": ["a"]})
    assert response.status_code in (400, 422)


def test_lattice_small_context(client):
    payload = {"objects": ["g"], "attributes": ["m"], "incidence": [[False]]}
    response = client.post("/lattice", json=payload)
    assert response.status_code == 200
    assert len(response.json()["concepts"]) == 2


def test_draw_dimflux(client, dwarf_payload, dwarf_lattice):
    response = client.post("/draw", json={
        "context": dwarf_payload,
        "algo": "dimflux",
        "config": {"max_iterations": 300},
    })
    assert response.status_code == 200
    body = response.json()
    assert set(body["stages"]) >= {"embedded", "projected", "refined"}
    assert body["metrics"]["refined"]["min_conflict_distance"] > 0
    # refined stage is a valid diagram: strict cover increase
    from latflux.formats import layout_from_json
    from latflux.lattice import validate_line_diagram

    layout = layout_from_json(body["stages"]["refined"], dwarf_lattice)
    assert validate_line_diagram(dwarf_lattice, layout).order_valid


def test_draw_unknown_algo(client, dwarf_payload):
    response = client.post("/draw", json={"context": dwarf_payload, "algo": "magic"})
    assert response.status_code == 400


def test_draw_streaming_progress(client, dwarf_payload):
    response = client.post("/draw", json={
        "context": dwarf_payload,
        "algo": "doubly-fdp",
        "config": {"max_iterations": 150},
        "stream": True,
    })
    assert response.status_code == 200
    lines = response.text.strip().split("\n")
    assert any(line.startswith("progress iteration=") for line in lines)
    body = json.loads(lines[-1])
    assert "stages" in body


def test_drag_zero_displacement_identity(client, dwarf_payload, dwarf_lattice, exact_projected):
    # a strictly additive layout dragged by zero stays unchanged
    basis = build_srm(dwarf_lattice, RepresentationKind.DOUBLY_ADDITIVE)
    layout = project_additive(basis, exact_projected)
    body = {
        "context": dwarf_payload,
        "layout": layout_to_json(dwarf_lattice, layout),
        "concept": DRAG_NODE,
        "newPosition": [float(layout[DRAG_NODE, 0]), float(layout[DRAG_NODE, 1])],
    }
    response = client.post("/drag", json=body)
    assert response.status_code == 200
    payload = response.json()
    assert payload["accepted"] is True
    from latflux.formats import layout_from_json

    back = layout_from_json(payload["layout"], dwarf_lattice)
    assert np.abs(back - layout).max() < 1e-9


def test_drag_reproduces_reference_frames(client, dwarf_payload, dwarf_lattice, exact_projected):
    # drag in the translation-free representative; the display normalization
    # (top at y = 12, x bounding box centred) is applied for comparison only
    from latflux.formats import layout_from_json

    layout = exact_projected
    for frame in DRAG_FRAMES:
        body = {
            "context": dwarf_payload,
            "layout": layout_to_json(dwarf_lattice, layout),
            "concept": DRAG_NODE,
            "newPosition": [float(layout[DRAG_NODE, 0] + DRAG_STEP),
                            float(layout[DRAG_NODE, 1])],
        }
        response = client.post("/drag", json=body)
        assert response.status_code == 200
        payload = response.json()
        assert payload["accepted"] is True
        projected = layout_from_json(payload["layout"], dwarf_lattice)
        layout = normalize_display(projected, dwarf_lattice.top, 12.0)
        assert np.abs(layout - frame).max() < 1e-3


def test_drag_rejected_when_order_breaks(client, dwarf_payload, dwarf_lattice, exact_projected):
    basis = build_srm(dwarf_lattice, RepresentationKind.DOUBLY_ADDITIVE)
    layout = project_additive(basis, exact_projected)
    # drag the bottom far above the top
    body = {
        "context": dwarf_payload,
        "layout": layout_to_json(dwarf_lattice, layout),
        "concept": int(dwarf_lattice.bottom),
        "newPosition": [0.0, float(layout[dwarf_lattice.top, 1] + 50.0)],
    }
    response = client.post("/drag", json=body)
    assert response.status_code == 200
    payload = response.json()
    assert payload["accepted"] is False
    from latflux.formats import layout_from_json

    back = layout_from_json(payload["layout"], dwarf_lattice)
    assert np.abs(back - layout).max() < 1e-12


def test_drag_rejects_non_additive_layout(client, dwarf_payload, dwarf_lattice, hand_layout):
    body = {
        "context": dwarf_payload,
        "layout": layout_to_json(dwarf_lattice, hand_layout),
        "concept": 0,
        "newPosition": [0.0, 12.0],
    }
    response = client.post("/drag", json=body)
    assert response.status_code == 400


def test_snap_endpoint(client, dwarf_payload, dwarf_lattice, exact_projected):
    body = {
        "context": dwarf_payload,
        "layout": layout_to_json(dwarf_lattice, exact_projected),
        "gridStep": 0.5,
    }
    response = client.post("/snap", json=body)
    assert response.status_code == 200
    payload = response.json()
    coords = np.array([[n["x"], n["y"]] for n in payload["layout"]["nodes"]])
    ratio = coords / 0.5
    assert np.abs(ratio - np.round(ratio)).max() < 1e-9
    assert isinstance(payload["valid"], bool)


def test_snap_identity_when_on_grid(client, dwarf_payload, dwarf_lattice):
    basis = build_srm(dwarf_lattice, RepresentationKind.DOUBLY_ADDITIVE)
    rng = np.random.default_rng(8)
    from latflux.additive import positions_from_vectors

    vec = rng.integers(-2, 3, size=(basis.n_elements, 2)).astype(float)
    layout = positions_from_vectors(basis, vec)
    body = {
        "context": dwarf_payload,
        "layout": layout_to_json(dwarf_lattice, layout),
        "gridStep": 1.0,
    }
    response = client.post("/snap", json=body)
    assert response.status_code == 200
    back = np.array([[n["x"], n["y"]] for n in response.json()["layout"]["nodes"]])
    assert np.abs(back - layout).max() < 1e-9


def test_snap_collapsing_reports_invalid(client, dwarf_lattice, dwarf_payload):
    # a layout whose vectors all round to zero collapses every node
    basis = build_srm(dwarf_lattice, RepresentationKind.DOUBLY_ADDITIVE)
    from latflux.additive import positions_from_vectors

    vec = np.full((basis.n_elements, 2), 0.05)
    layout = positions_from_vectors(basis, vec)
    body = {
        "context": dwarf_payload,
        "layout": layout_to_json(dwarf_lattice, layout),
        "gridStep": 1.0,
    }
    response = client.post("/snap", json=body)
    assert response.status_code == 200
    assert response.json()["valid"] is False


def test_service_stateless_deterministic(client, dwarf_payload):
    a = client.post("/draw", json={"context": dwarf_payload, "algo": "dimdraw"})
    b = client.post("/draw", json={"context": dwarf_payload, "algo": "dimdraw"})
    assert a.json() == b.json()


def test_draw_budget_flagged_partial(client):
    from latflux.formats import context_to_json

    payload = context_to_json(data.free_modular_standard_context())
    response = client.post("/draw", json={
        "context": payload,
        "algo": "dimdraw",
        "config": {"extension_budget": 50},
    })
    assert response.status_code == 200
    assert "extension-budget-exceeded" in response.json()["flags"]

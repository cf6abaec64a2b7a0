import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from latflux import data
from latflux.lattice import compute_lattice


@pytest.fixture(scope="session")
def dwarf_context():
    return data.dwarf_planets()


@pytest.fixture(scope="session")
def dwarf_lattice(dwarf_context):
    return compute_lattice(dwarf_context)


@pytest.fixture(scope="session")
def hand_layout():
    return data.dwarf_planets_hand_layout()


@pytest.fixture(scope="session")
def projected_layout():
    return data.dwarf_planets_projected_layout()

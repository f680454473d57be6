import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from graspa.bench_data import data_dir, load_hand_model, load_mesh, parse_grasp_set, parse_layout  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def data():
    return data_dir()


@pytest.fixture(scope="session")
def gripper(data):
    return load_hand_model(data / "hands" / "two_finger_gripper.xml")


@pytest.fixture(scope="session")
def icub_hand(data):
    return load_hand_model(data / "hands" / "icub_hand.xml")


@pytest.fixture(scope="session")
def cube_scene(data):
    """(layout, placed cube mesh, grasp trial) of the two-finger cube fixture."""
    layout = parse_layout(data / "examples" / "cube" / "layout.xml")
    obj = layout.objects[0]
    placed = load_mesh(layout.mesh_path(obj)).transformed(obj.pose)
    trial = parse_grasp_set(data / "examples" / "cube" / "grasps.xml").objects[0][1][0]
    return layout, placed, trial


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

import numpy as np
import pytest

from graspa.bench_data import parse_layout, parse_pose_set, parse_reach_log
from graspa.bench_data.types import Layout, ObjectInstance, PoseSet, ReachLog, Source
from graspa.errors import SemanticError
from graspa.platform import RegionScore, graspability, object_region_scores, score_regions
from graspa.se3 import Pose, RegionGrid, rot_x, rot_z

CELL_W, CELL_H = 0.198, 0.21
# reached poses per region in the interior fixture
REACHED = {1: 0, 2: 1, 3: 2, 4: 3, 5: 4, 6: 4}


def grid_fixture():
    """Four poses per cell at the quarter points; pose k of region r is reached when k < REACHED[r]."""
    poses, entries = [], []
    for rid in range(1, 7):
        row, col = divmod(rid - 1, 3)
        for k, (fx, fy) in enumerate([(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)]):
            name = f"r{rid}_{k}"
            p = Pose([(col + fx) * CELL_W, (row + fy) * CELL_H, 0.05], rot_x(np.pi))
            poses.append((name, p))
            if k < REACHED[rid]:
                got = Pose(p.p + [0.01, -0.01, 0.005], p.R @ rot_z(0.3))
            elif k == 0:
                got = None
            elif k == 1:
                got = Pose(p.p + [0.03, 0, 0], p.R)  # too far
            else:
                got = Pose(p.p, p.R @ rot_z(0.6))  # rotated too much
            entries.append((name, got))
    return poses, entries


def boundary_fixture():
    poses, entries = grid_fixture()
    poses, entries = dict(poses), dict(entries)
    # r1_3 moves onto the 1|2 edge and is reached; r5_0 moves onto the 1/2/4/5 corner and is missed
    poses["r1_3"] = Pose([0.198, 0.105, 0.05], rot_x(np.pi))
    entries["r1_3"] = Pose([0.2, 0.1, 0.05], rot_x(np.pi))
    poses["r5_0"] = Pose([0.198, 0.21, 0.05], rot_x(np.pi))
    entries["r5_0"] = None
    return list(poses.items()), list(entries.items())


def scores(poses, entries, source=Source.FORWARD_KINEMATICS):
    return score_regions(PoseSet(0, tuple(poses)), ReachLog(0, tuple(entries), source), 0.02, 0.5)


def test_interior_grid_counts():
    got = {r.region_id: (r.n_reached, r.n_total) for r in scores(*grid_fixture())}
    assert got == {1: (0, 4), 2: (1, 4), 3: (2, 4), 4: (3, 4), 5: (4, 4), 6: (4, 4)}


def test_boundary_poses_count_in_every_adjacent_region():
    got = {r.region_id: (r.n_reached, r.n_total) for r in scores(*boundary_fixture())}
    assert got == {1: (1, 5), 2: (2, 6), 3: (2, 4), 4: (3, 5), 5: (3, 4), 6: (4, 4)}
    assert sum(t for _, t in got.values()) == 28  # 24 poses, one double and one quadruple


def test_vision_logs_score_the_same_way():
    a = scores(*grid_fixture())
    b = scores(*grid_fixture(), source=Source.VISION)
    assert a == b


def test_missing_log_entry_is_an_error():
    poses, entries = grid_fixture()
    with pytest.raises(SemanticError, match="r3_2"):
        scores(poses, [e for e in entries if e[0] != "r3_2"])


def test_region_score_validation():
    assert RegionScore(1, 3, 4).score == 0.75
    with pytest.raises(ValueError):
        RegionScore(1, 5, 4)
    with pytest.raises(ValueError):
        RegionScore(1, 0, 0)


def test_bundled_logs_give_published_region_scores(data):
    ps = parse_pose_set(data / "pose_sets" / "pose_set_0.xml")
    fk = parse_reach_log(data / "examples" / "icub" / "reach_fk_0.xml", ps)
    vis = parse_reach_log(data / "examples" / "icub" / "reach_vision_0.xml", ps)
    s0 = [r.n_reached for r in score_regions(ps, fk, 0.02, 0.5)]
    s1 = [r.n_reached for r in score_regions(ps, vis, 0.045, 0.8)]
    assert s0 == [1, 2, 3, 4, 4, 3]
    assert s1 == [0, 2, 1, 3, 4, 3]


def test_object_takes_score_of_its_region(data):
    layout = parse_layout(data / "layouts" / "layout_0.xml")
    regions = [RegionScore(i, i - 1, 5) for i in range(1, 7)]
    coms = {o.name: o.pose.p for o in layout.objects}
    coms["banana"] = np.array([0.05, 0.05, 0.0])   # region 1
    coms["foam_brick"] = np.array([0.5, 0.3, 0.0])  # region 6
    coms["gelatin_box"] = np.array([0.396, 0.21, 0.0])  # corner of 2, 3, 5, 6: best wins
    out = object_region_scores(layout, regions, coms)
    assert out["banana"] == 0.0 and out["foam_brick"] == 1.0 and out["gelatin_box"] == 1.0
    with pytest.raises(ValueError):
        object_region_scores(layout, regions[:5], coms)


def _obj(mass, grip, override=None, why=""):
    return ObjectInstance("o", "x.off", Pose([0.1, 0.1, 0]), mass, grip, override, why)


def test_graspability_rules(icub_hand):
    assert graspability(_obj(0.4, 0.05), icub_hand).score
    assert graspability(_obj(0.5, 0.05), icub_hand).score          # payload is inclusive
    g = graspability(_obj(0.51, 0.05), icub_hand)
    assert not g.score and not g.payload_ok and g.aperture_ok
    assert not graspability(_obj(0.1, 0.09), icub_hand).score      # aperture is strict
    g = graspability(_obj(0.1, 0.02, False, "flat on the table"), icub_hand)
    assert not g.score and g.overridden == "flat on the table"


def test_bundled_graspability_matches_table(data, icub_hand):
    verdicts = {}
    for lid in (0, 1, 2):
        layout = parse_layout(data / "layouts" / f"layout_{lid}.xml")
        for o in layout.objects:
            verdicts[(lid, o.name)] = graspability(o, icub_hand).score
    ungraspable = {k for k, v in verdicts.items() if not v}
    assert ungraspable == {(1, "hammer"), (2, "scissors"), (2, "power_drill"), (2, "medium_clamp"),
                           (2, "master_chef_can")}


def test_custom_grid_layout():
    g = RegionGrid(0.3, 0.2, 1, 2)
    ps = PoseSet(0, (("a", Pose([0.05, 0.1, 0])), ("b", Pose([0.25, 0.1, 0]))))
    log = ReachLog(0, (("a", Pose([0.05, 0.1, 0])), ("b", None)))
    assert [r.score for r in score_regions(ps, log, 0.01, 0.1, g)] == [1.0, 0.0]
    assert Layout(0, (), g).grid.region_ids == [1, 2]

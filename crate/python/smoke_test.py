#!/usr/bin/env python3
"""Smoke test for the ghlab Python extension module.

Builds nothing itself: it locates the compiled library under ../target
(release preferred), copies it next to this file as ghlab.so, imports it,
and exercises the main types and operations end to end.

Usage:
    cargo build -p ghlab-py --release
    python3 python/smoke_test.py
"""

import math
import pathlib
import shutil
import sys


def locate_module() -> None:
    here = pathlib.Path(__file__).resolve().parent
    target = here / "ghlab.so"
    if not target.exists():
        candidates = [
            here.parent / "target" / "release" / "libghlab.so",
            here.parent / "target" / "debug" / "libghlab.so",
        ]
        for built in candidates:
            if built.exists():
                shutil.copy2(built, target)
                break
        else:
            sys.exit("libghlab.so not found; run `cargo build -p ghlab-py --release` first")
    sys.path.insert(0, str(here))


locate_module()

import ghlab  # noqa: E402


def close(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol


def main() -> None:
    # --- metric spaces -----------------------------------------------------
    line = ghlab.MetricSpace([[0, 1, 3], [1, 0, 2], [3, 2, 0]], labels=["a", "b", "c"])
    assert len(line) == 3
    assert line.diameter() == 3.0
    assert line.dist(0, 2) == 3.0
    assert line.labels == ["a", "b", "c"]

    try:
        ghlab.MetricSpace([[0, 1], [2, 0]])
    except ValueError as e:
        assert "asymmetry" in str(e)
    else:
        raise AssertionError("asymmetric matrix must be rejected")

    cloud = ghlab.MetricSpace.from_points([[0, 0], [3, 4]], metric="euclidean")
    assert cloud.dist(0, 1) == 5.0

    # Hausdorff distance and neighborhoods.
    assert line.hausdorff([0], [0, 1]) == 1.0
    assert line.point_set_distance(0, [1, 2]) == 1.0
    assert line.open_neighborhood([0], 1.5) == [0, 1]
    assert line.closed_neighborhood([0], 1.0) == [0, 1]

    # --- relations and distortion ------------------------------------------
    identity = ghlab.Relation.diagonal(line, line)
    assert identity.distortion() == 0.0
    assert identity.is_isometry_graph()

    full = ghlab.Relation.full(line, line)
    assert full.distortion() == line.diameter()
    assert full.is_correspondence()
    assert full.inverse().distortion() == full.distortion()

    thick = identity.thicken(0.5)
    assert thick.cells() == identity.cells()  # below the minimum distance
    assert identity.compose(identity).cells() == identity.cells()

    # --- Gromov-Hausdorff ---------------------------------------------------
    delta1 = ghlab.MetricSpace.delta1()
    r = ghlab.gh_exact(delta1, line)
    assert r.status == "exact"
    assert r.value == line.diameter() / 2.0
    assert r.certificate is not None

    lo, hi = ghlab.gh_bounds(delta1, line)
    assert lo == hi == 1.5

    # Family filters collapse on finite metric spaces.
    values = {fam: ghlab.gh_exact(line, cloud, family=fam).value for fam in ["all", "us", "ls", "rc"]}
    assert len(set(values.values())) == 1, values

    # Solver agrees with the brute-force oracle.
    oracle = ghlab.gh_oracle(line, cloud)
    assert oracle.value == values["all"]

    # Scaling geodesic: d(tX, sX) = |t-s| diam X / 2.
    half = line.scale(0.5)
    r = ghlab.gh_exact(half, line)
    assert close(r.value, 0.5 * line.diameter() / 2.0)

    # Budget handling raises instead of guessing.
    try:
        ghlab.gh_exact(line, line, budget=4)
    except RuntimeError as e:
        assert "budget" in str(e)
    else:
        raise AssertionError("budget overflow must raise")

    # --- nets ----------------------------------------------------------------
    circle = ghlab.circle_net(2 * math.pi, 8)
    assert close(circle.diameter(), math.pi)
    r = ghlab.gh_exact(ghlab.MetricSpace.delta1(), circle)
    assert close(r.value, math.pi / 2)

    grid = ghlab.interval_net(1.0, 4)
    sub = grid.restriction([0, 2, 4])
    r = ghlab.gh_exact(grid, sub)
    assert r.value <= 0.25 + 1e-12

    # --- topologies and semicontinuity ---------------------------------------
    sier = ghlab.Topology.sierpinski()
    disc = ghlab.Topology.discrete(2)
    assert not sier.is_hausdorff()
    assert disc.is_hausdorff()
    assert sier.min_open(1) == [0, 1]
    assert sier.open_sets() == [[], [0], [0, 1]]

    # f: a -> {c, d}, b -> {d} is lsc but not usc.
    images = [[0, 1], [1]]
    assert ghlab.is_lower_semicontinuous(images, sier, disc)
    assert not ghlab.is_upper_semicontinuous(images, sier, disc)
    assert not ghlab.is_continuous(images, sier, disc)

    # Everything between discrete topologies is continuous.
    assert ghlab.is_continuous([[1], [0]], disc, disc)

    # Correspondence classification: the full relation is continuous.
    two = ghlab.MetricSpace([[0, 1], [1, 0]])
    full2 = ghlab.Relation.full(two, two)
    us, ls, rc = ghlab.classify(full2, sier, disc)
    assert us and ls and rc

    print("ghlab python smoke test: all assertions passed")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Smoke test for the _stretchlab extension module.

Builds nothing itself: it locates the cdylib produced by
`cargo build -p stretchlab-python` (release preferred), copies it next to a
temporary import name, and exercises the main types and operations.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_extension() -> Path:
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("lib_stretchlab.so", "lib_stretchlab.dylib", "_stretchlab.dll")
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit(
        "extension module not found; run `cargo build -p stretchlab-python` first"
    )


def main() -> None:
    lib = locate_extension()
    staging = Path(tempfile.mkdtemp(prefix="stretchlab_"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy2(lib, staging / f"_stretchlab{suffix}")
    sys.path.insert(0, str(staging))
    import _stretchlab as sl

    # measurement primitives on a regular tetrahedron
    faces = [[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]]
    edges = [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]
    tetra = sl.Surface.from_edge_lengths(faces, edges)
    assert tetra.face_count() == 4
    assert abs(tetra.perimeter([0]) - 3.0) < 1e-12
    assert abs(tetra.volume([0]) - math.sqrt(3.0) / 4.0) < 1e-12

    # exhaustive vs Lagrangian solver
    point = sl.brute_force_min(tetra, math.sqrt(3.0) / 4.0)
    assert point.perimeter == 3.0 and point.certified
    point2 = sl.constrained_min_at_volume(tetra, math.sqrt(3.0) / 4.0)
    assert abs(point2.perimeter - 3.0) < 1e-9

    # dumbbell + surgery: the stretched cylinder realizes distance R
    surface, sigma, collar = sl.build_dumbbell(0.5, 13, 6)
    assert collar.is_cylindrical(surface)
    sep, side_a, side_b = surface.separates(sigma)
    assert sep and len(side_a) + len(side_b) == surface.face_count()
    base = sl.already_cylindrical(surface, collar)
    stretched = sl.stretch(base, 8.0)
    for side in ("minus", "plus"):
        assert abs(sl.rim_distance(stretched, side) - 8.0) < 1e-9
    per_before = surface.perimeter(side_a)
    per_after = stretched.surface().perimeter(side_a)
    assert per_before == per_after, "stretching must preserve Per(Omega)"

    # the headline transition on the brute-forceable balloon dumbbell
    surface, sigma, collar = sl.build_balloon_dumbbell(1.0, 3, 3)
    sep, side_a, side_b = surface.separates(sigma)
    omega = side_a if 0 in side_a else side_b
    base = sl.already_cylindrical(surface, collar)
    boundaries = {}
    for r in (1.0, 4.0):
        g = sl.stretch(base, r)
        s = g.surface()
        target = s.volume(omega)
        best = sl.brute_force_min(s, target)
        comps = s.boundary_components(best.faces)
        boundaries[r] = sorted(tuple(sorted(e)) for c in comps for e in c[2])
    sigma_edges = sorted(tuple(sorted(e)) for e in sigma)
    assert boundaries[1.0] != sigma_edges, "unstretched: a cap-side region wins"
    assert boundaries[4.0] == sigma_edges, "stretched: the neck is isoperimetric"

    # cone stability arithmetic
    mu1, threshold, cls, exponents = sl.classify_product_cone(3, 3)
    assert mu1 == -6.0 and threshold == -6.25 and cls == "strictly-stable"
    gminus, gplus = exponents[0][1], exponents[0][2]
    assert abs(gminus + 3.0) < 1e-12 and abs(gplus + 2.0) < 1e-12
    assert sl.classify_product_cone(2, 2)[2] == "unstable"
    assert abs(sl.clifford_link_mu1(12) + 2.0) < 1e-2

    # conformal formulas and the second-variation form
    assert sl.conformal_mean_curvature(1.0, 0.0, 1.0) == 0.0
    lam = sl.stability_lambda_min([1.0 / 32] * 32, [-1.0] * 32)
    assert abs(lam - 1.0) < 1e-9

    print("smoke test: OK")


if __name__ == "__main__":
    main()

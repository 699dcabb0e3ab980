#!/usr/bin/env python3
"""Regenerate data/cross: five gNBs around a four-arm intersection, 60 vehicles, 10 s."""

import argparse
import pathlib
import random

AREA = 300.0
ROAD_LO, ROAD_HI = 140.0, 160.0
GNBS = [
    # id, x, y, psi, p_dbm, nt, b_max, rf_chains
    (1, 150.0, 150.0, 0.0, 33.0, 64, 4, 4),
    (2, 40.0, 158.0, 0.0, 33.0, 64, 4, 4),
    (3, 260.0, 142.0, 0.0, 33.0, 64, 4, 4),
    (4, 142.0, 40.0, 0.0, 33.0, 64, 4, 4),
    (5, 158.0, 260.0, 0.0, 33.0, 64, 4, 4),
]
BUILDINGS = [
    [(0, 0), (ROAD_LO, 0), (ROAD_LO, ROAD_LO), (0, ROAD_LO)],
    [(ROAD_HI, 0), (AREA, 0), (AREA, ROAD_LO), (ROAD_HI, ROAD_LO)],
    [(ROAD_HI, ROAD_HI), (AREA, ROAD_HI), (AREA, AREA), (ROAD_HI, AREA)],
    [(0, ROAD_HI), (ROAD_LO, ROAD_HI), (ROAD_LO, AREA), (0, AREA)],
]
# lane: (start point generator, unit direction)
LANES = [
    ((0.0, 145.0), (1.0, 0.0)),
    ((AREA, 155.0), (-1.0, 0.0)),
    ((155.0, 0.0), (0.0, 1.0)),
    ((145.0, AREA), (0.0, -1.0)),
]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "cross"))
    ap.add_argument("--vehicles", type=int, default=60)
    ap.add_argument("--duration", type=float, default=10.0)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for vid in range(1, args.vehicles + 1):
        (sx, sy), (dx, dy) = LANES[(vid - 1) % len(LANES)]
        speed = rng.uniform(6.0, 12.0)
        travel = speed * args.duration
        offset = rng.uniform(5.0, AREA - 5.0 - travel)
        x0, y0 = sx + dx * offset, sy + dy * offset
        t = 0.0
        while t <= args.duration + 1e-9:
            rows.append((t, vid, x0 + dx * speed * t, y0 + dy * speed * t))
            t = round(t + 0.5, 6)
    rows.sort(key=lambda r: (r[1], r[0]))

    with open(out / "trace.csv", "w") as f:
        f.write("t_s,vehicle_id,x_m,y_m\n")
        for t, vid, x, y in rows:
            f.write(f"{t:.3f},{vid},{x:.3f},{y:.3f}\n")

    with open(out / "cross.ini", "w") as f:
        f.write("# five gNBs around a four-arm intersection; buildings fill the quadrants\n")
        f.write("[area]\norigin = 0, 0\nwidth_m = 300\nheight_m = 300\nzone_side_m = 10\n\n")
        f.write("[radio]\nprofile = nr-fr2-52ghz\n\n")
        f.write("[gnbs]\n# id,x,y,psi_deg,p_dbm,nt,b_max,rf_chains\n")
        for g in GNBS:
            f.write(",".join(str(v) for v in g) + "\n")
        f.write("\n[trace]\npath = trace.csv\n\n[blockage]\n")
        for poly in BUILDINGS:
            f.write("polygon = " + ", ".join(f"{x:g} {y:g}" for x, y in poly) + "\n")


if __name__ == "__main__":
    main()

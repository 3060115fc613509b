#!/usr/bin/env python3
"""Regenerates the demo grids and records under fixtures/.

The intensity values are synthetic stand-ins: a smooth decay away from a
coarse polyline trace of the southern San Andreas fault, tapered to zero
beyond 120 km. They are not ShakeOut simulation output.
"""
import math
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2] / "fixtures"
R = 6371.0

TRACE = [(-115.71, 33.35), (-116.50, 33.95), (-117.30, 34.20), (-118.20, 34.55), (-118.90, 34.80)]
PERIODS = [0.3, 1.0, 3.0]
PSA_RATIO = [2.2, 1.1, 0.35]


def haversine(a, b):
    p1, p2 = math.radians(a[1]), math.radians(b[1])
    dp = p2 - p1
    dl = math.radians(b[0] - a[0])
    h = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * R * math.asin(math.sqrt(min(1.0, h)))


def dist_to_trace(p):
    best = float("inf")
    for a, b in zip(TRACE, TRACE[1:]):
        for k in range(201):
            t = k / 200
            q = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
            best = min(best, haversine(p, q))
    return best


def im_at(p):
    d = dist_to_trace(p)
    pga = max(0.0, 0.9 * math.exp(-d / 30.0) - 0.9 * math.exp(-120.0 / 30.0))
    return pga, 100.0 * pga, [r * pga for r in PSA_RATIO]


def fmt(x):
    return repr(round(x, 5))


def write_grid(path, name, lon0, lat0, dlon, dlat, ncols, nrows, im_fn):
    lines = [
        f"#GMGRID name={name} lon0={lon0} lat0={lat0} dlon={dlon} dlat={dlat} "
        f"ncols={ncols} nrows={nrows} periods={','.join(repr(p) for p in PERIODS)}"
    ]
    for r in range(nrows):
        for c in range(ncols):
            lon = round(lon0 + c * dlon, 6)
            lat = round(lat0 + r * dlat, 6)
            pga, pgv, psa = im_fn((lon, lat), c, r)
            lines.append(" ".join([repr(lon), repr(lat), fmt(pga), fmt(pgv)] + [fmt(v) for v in psa]))
    path.write_text("\n".join(lines) + "\n")


def write_record(path, dt, samples):
    body = "\n".join(repr(round(s, 6)) for s in samples)
    path.write_text(f"NPTS={len(samples)} DT={dt}\n{body}\n")


def main():
    write_grid(ROOT / "shakeout_demo" / "grid.gmgrid", "ShakeOut-Mw7.8-demo",
               -119.0, 33.0, 0.1, 0.1, 36, 21, lambda p, c, r: im_at(p))

    # Palm Springs: 3x3 lattice centred on the site with pga 0.9 g there.
    def palm(p, c, r):
        pga = 0.9 - 0.05 * (abs(c - 1) + abs(r - 1))
        return pga, 100.0 * pga, [k * pga for k in PSA_RATIO]
    write_grid(ROOT / "palm_springs" / "grid.gmgrid", "ShakeOut-Mw7.8-palm-springs",
               -116.6, 33.78, 0.05, 0.05, 3, 3, palm)

    # Files-mode demo: two short tapered sine records.
    rec_dir = ROOT / "records_demo" / "records"
    rec_dir.mkdir(parents=True, exist_ok=True)
    dt = 0.01
    for name, amp, freq in [("north.acc", 0.15, 1.5), ("south.acc", 0.45, 3.0)]:
        n = 1001
        samples = []
        for i in range(n):
            t = i * dt
            taper = min(1.0, t / 2.0, (10.0 - t) / 2.0)
            samples.append(amp * taper * math.sin(2 * math.pi * freq * t))
        write_record(rec_dir / name, dt, samples)
    write_grid(ROOT / "records_demo" / "grid.gmgrid", "records-demo",
               -117.0, 34.0, 0.5, 0.5, 2, 2,
               lambda p, c, r: (0.45 if r == 0 else 0.15, 30.0, [0.6, 0.3, 0.1]))


if __name__ == "__main__":
    main()

"""Regenerates the desk-scale fixture: three regions, four placements,
336 hourly capacity factors. Deterministic (seeded)."""

import csv
import math
import random

HOURS = 336
rng = random.Random(2050)


def pv_series(scale, noise):
    out = []
    for day in range(HOURS // 24):
        weather = 0.85 + 0.15 * rng.random() if noise else 1.0
        for h in range(24):
            v = 0.0
            if 6 <= h < 18:
                v = 0.75 * scale * weather * math.sin(math.pi * (h - 6 + 0.5) / 12)
            out.append(max(0.0, min(1.0, v)))
    return out


def wind_series():
    out, x = [], 0.0
    for t in range(HOURS):
        x = 0.9 * x + rng.gauss(0.0, 0.12)
        diurnal = 0.08 * math.cos(2 * math.pi * (t % 24) / 24)
        out.append(max(0.0, min(1.0, 0.42 + x + diurnal)))
    return out


series = {
    "a1": pv_series(1.0, True),
    "a2": pv_series(0.96, True),
    "b1": pv_series(0.98, True),
    "c1": wind_series(),
}

with open("capacity_factors.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["hour", *series])
    for t in range(HOURS):
        w.writerow([t, *(f"{series[k][t]:.4f}" for k in series)])

with open("placements.csv", "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["id", "tech", "region", "lat", "lon", "capacity_kw"])
    w.writerow(["a1", "pv", "A", 23.55, 58.10, 400000])
    w.writerow(["a2", "pv", "A", 23.57, 58.12, 250000])
    w.writerow(["b1", "pv", "B", 22.45, 57.40, 500000])
    w.writerow(["c1", "wind", "C", 19.40, 56.60, 800000])

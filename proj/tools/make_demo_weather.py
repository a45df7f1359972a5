#!/usr/bin/env python3
"""Write the synthetic five-day winter-storm weather series used by the demo.

Daily mean temperatures are interpolated between local-noon anchors and a
diurnal sine (coldest near 03:00 local) is added on top. Relative humidity
follows its own diurnal sine, peaking before dawn.
"""

import argparse
import csv
import math
from datetime import datetime, timedelta, timezone

START = datetime(2021, 2, 14, 6, 0, tzinfo=timezone.utc)  # local midnight at UTC-6
STEP_S = 300
DAYS = 5
DAILY_MEAN_C = [-4.0, -9.0, -13.0, -11.0, -6.0, -2.0]  # at local noon, day 0..5
AMPLITUDE_C = 3.5


def daily_mean(day: float) -> float:
    """Piecewise-linear through the noon anchors, flat outside them."""
    x = day - 0.5
    if x <= 0:
        return DAILY_MEAN_C[0]
    i = min(int(x), len(DAILY_MEAN_C) - 2)
    f = min(x - i, 1.0)
    return DAILY_MEAN_C[i] + f * (DAILY_MEAN_C[i + 1] - DAILY_MEAN_C[i])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="output CSV path")
    args = parser.parse_args()

    n = DAYS * 86400 // STEP_S
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["timestamp", "temp_c", "rh_pct"])
        for i in range(n):
            hours = i * STEP_S / 3600.0
            local_hour = hours % 24.0
            t = daily_mean(hours / 24.0) + AMPLITUDE_C * math.sin(2 * math.pi * (local_hour - 9.0) / 24.0)
            rh = 80.0 + 12.0 * math.sin(2 * math.pi * (local_hour - 21.0) / 24.0)
            ts = (START + timedelta(seconds=i * STEP_S)).strftime("%Y-%m-%dT%H:%M:%SZ")
            w.writerow([ts, f"{t:.3f}", f"{rh:.2f}"])


if __name__ == "__main__":
    main()

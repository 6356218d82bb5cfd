#!/usr/bin/env python3
"""Parameter sweeps: how transmit power moves with cluster size and load.

Runs the joint solver over a grid of (parameter value, user drop seed)
cells and averages. Three trends worth seeing once: letting a user
combine more beams drops the required power by an order of magnitude
between one and two beams per cluster, and raising either the SINR
target or the user count raises it back up. A second pass compares the
joint search against the greedy strongest-cluster baseline drop by
drop: the gap shows up as extra watts at high targets, and at one beam
per cluster as drops the baseline cannot serve at all.
"""

import collections
import tempfile
from pathlib import Path

from cobeam import SweepSpec, default_scenario, export_table, generate_users, run_sweep


def dual_means(rows):
    by_value = collections.defaultdict(list)
    failed = 0
    for row in rows:
        if row["algorithm"] != "dual":
            continue
        if row["status"] == "ok":
            by_value[row["value"]].append(row["total_power_w"])
        else:
            failed += 1
    means = {v: sum(p) / len(p) for v, p in sorted(by_value.items())}
    return means, failed


def show_trend(title, rows):
    means, failed = dual_means(rows)
    cells = "  ".join(f"{v}: {p:9.3f} W" for v, p in means.items())
    print(f"  {title:22s} {cells}")
    if failed:
        print(f"  ({failed} drops unsolved even jointly)")


def main():
    users = generate_users(count=8, seed=0)
    scenario = default_scenario(users, target_sinr_db=5.0)
    # Per-drop power is heavy tailed, so average over a decent seed count.
    seeds = tuple(range(10))

    print("== mean total transmit power, joint solver ==")
    rows_b = run_sweep(scenario, SweepSpec(parameter="cluster_size",
                                           values=(1, 2, 3), seeds=seeds,
                                           algorithms=("dual",)))
    show_trend("beams per cluster", rows_b)

    rows_g = run_sweep(scenario, SweepSpec(parameter="target_sinr_db",
                                           values=(0.0, 5.0, 10.0), seeds=seeds,
                                           algorithms=("dual",)))
    show_trend("SINR target [dB]", rows_g)

    rows_m = run_sweep(scenario, SweepSpec(parameter="num_users",
                                           values=(4, 8, 12), seeds=seeds,
                                           algorithms=("dual",)))
    show_trend("number of users", rows_m)

    print()
    print("== joint search vs greedy baseline, drop by drop ==")

    def compare(parameter, value):
        spec = SweepSpec(parameter=parameter, values=(value,), seeds=seeds)
        cells = {}
        for row in run_sweep(scenario, spec):
            cells.setdefault(row["seed"], {})[row["algorithm"]] = row
        ratios, rescued = [], 0
        for seed in sorted(cells):
            dual, simple = cells[seed]["dual"], cells[seed]["simple"]
            if dual["status"] == "ok" and simple["status"] == "ok":
                ratios.append(simple["total_power_w"] / dual["total_power_w"])
            elif dual["status"] == "ok":
                rescued += 1
        return ratios, rescued, len(cells)

    ratios, rescued, drops = compare("target_sinr_db", 10.0)
    print(f"target 10 dB over {drops} drops: baseline/joint power ratio "
          f"min {min(ratios):.3f}x, max {max(ratios):.3f}x")

    # Squeezed to one beam per cluster, the greedy pick often cannot meet
    # the targets at any power while the joint search still can.
    ratios, rescued, drops = compare("cluster_size", 1)
    print(f"one beam per cluster over {drops} drops: baseline infeasible on "
          f"{rescued}, joint search serves all of them")

    # Every cell lands in a flat CSV for plotting elsewhere.
    out = Path(tempfile.mkdtemp()) / "sweep.csv"
    export_table(rows_b, out)
    lines = out.read_text().splitlines()
    print()
    print(f"exported {len(lines) - 1} rows to {out}")
    for line in lines[:4]:
        print(f"  {line}")
    print("  ...")


if __name__ == "__main__":
    main()

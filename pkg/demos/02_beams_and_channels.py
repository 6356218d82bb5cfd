#!/usr/bin/env python3
"""From element-domain channels to a per-user beam shortlist.

Synthesizes the channel between one satellite's planar array and a few
ground users, projects it onto the oversampled DFT beam grid, and ranks
the beams each user actually receives energy from. The shortlist is
what the cluster enumeration downstream draws its combinations from.
"""

import numpy as np

from cobeam import (
    ArrayConfig,
    CodebookConfig,
    GeodeticPosition,
    LinkBudget,
    beam_centers,
    build_codebook,
    candidate_beams,
    effective_channels,
    link_geometry,
    noise_power,
    synthesize_channel,
)


def main():
    array = ArrayConfig()        # 10 x 10 elements, 2 x 2 subarrays
    codebook_cfg = CodebookConfig()  # 16 x 16 point FFT grid
    budget = LinkBudget()

    sat = GeodeticPosition(52.817247, 9.291984, 550e3)
    users = [
        GeodeticPosition(52.3, 8.1, 0.0),
        GeodeticPosition(53.1, 9.6, 0.0),
        GeodeticPosition(51.9, 9.0, 0.0),
    ]

    print("== element-domain channels ==")
    links = [link_geometry(sat, u) for u in users]
    rows = np.stack([synthesize_channel(g, array, budget) for g in links])
    print(f"channel matrix shape: {rows.shape} "
          f"({len(users)} users x {array.rows * array.cols} elements)")
    for m, g in enumerate(links):
        print(f"  user {m}: |h| = {np.linalg.norm(rows[m]):.3e}, "
              f"(u, v) = ({g.u:+.4f}, {g.v:+.4f})")

    print()
    print("== DFT codebook ==")
    codebook = build_codebook(array, codebook_cfg)
    centers = beam_centers(array, codebook_cfg)
    print(f"codebook shape: {codebook.shape} "
          f"({codebook_cfg.fft_rows * codebook_cfg.fft_cols} beams)")
    print(f"beam centers span u in [{centers[:, 0].min():+.3f}, "
          f"{centers[:, 0].max():+.3f}], v likewise")

    # One satellite here, so the leading axis of the tensors is length 1.
    effective = effective_channels(rows[np.newaxis], codebook)
    print(f"beam-domain tensor shape: {effective.shape} "
          "(satellites x beams x users)")

    print()
    print("== per-user beam shortlist ==")
    user_uv = np.array([[(g.u, g.v) for g in links]])
    shortlist = candidate_beams(user_uv, centers, count=5)
    gains = np.abs(effective[0]) ** 2
    for m in range(len(users)):
        picks = [int(n) for n in shortlist[0][m]]
        print(f"user {m}: beams {picks}")
        for n in picks:
            du = centers[n, 0] - user_uv[0, m, 0]
            dv = centers[n, 1] - user_uv[0, m, 1]
            print(f"    beam {n:3d} at ({centers[n, 0]:+.4f}, {centers[n, 1]:+.4f})"
                  f"  offset {np.hypot(du, dv):.4f}  gain {gains[n, m]:.3e}")

    print()
    print("== noise floor ==")
    sigma2 = noise_power(temperature_k=224.5, bandwidth_hz=250e6)
    print(f"kTB at 224.5 K over 250 MHz: {sigma2:.6e} W")
    print(f"matches the default link budget: {budget.noise_power_w:.6e} W")


if __name__ == "__main__":
    main()

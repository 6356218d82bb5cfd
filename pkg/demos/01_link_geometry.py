#!/usr/bin/env python3
"""Tour of the ground-to-satellite geometry helpers.

Starts from plain latitude/longitude positions, converts them to
Earth-fixed coordinates, and ends with the numbers a phased array
actually steers by: the (u, v) direction cosines of each user as seen
from the satellite, plus slant range and elevation.
"""

import numpy as np

from cobeam import (
    BoresightSpec,
    GeodeticPosition,
    UserNotVisible,
    ecef_to_geodetic,
    enu_basis,
    geodetic_to_ecef,
    link_geometry,
)


def main():
    # A satellite 550 km above northern Germany and a user on the ground.
    sat = GeodeticPosition(latitude_deg=52.817247, longitude_deg=9.291984,
                           altitude_m=550e3)
    user = GeodeticPosition(latitude_deg=52.3, longitude_deg=8.1, altitude_m=0.0)

    print("== geodetic to Earth-fixed ==")
    sat_ecef = geodetic_to_ecef(sat)
    user_ecef = geodetic_to_ecef(user)
    print(f"satellite ECEF [m]: {np.array_str(sat_ecef, precision=1)}")
    print(f"user ECEF      [m]: {np.array_str(user_ecef, precision=1)}")

    round_trip = ecef_to_geodetic(sat_ecef)
    print(f"round trip recovers lat={round_trip.latitude_deg:.6f} "
          f"lon={round_trip.longitude_deg:.6f} alt={round_trip.altitude_m:.3f} m")

    print()
    print("== local frame at the user ==")
    east, north, up = enu_basis(user.latitude_deg, user.longitude_deg)
    print(f"east : {np.array_str(east, precision=4)}")
    print(f"north: {np.array_str(north, precision=4)}")
    print(f"up   : {np.array_str(up, precision=4)}")

    print()
    print("== link as the array sees it ==")
    link = link_geometry(sat, user)
    print(f"direction cosines (u, v) = ({link.u:+.6f}, {link.v:+.6f})")
    print(f"slant range = {link.slant_range_m / 1e3:.3f} km")
    print(f"elevation   = {link.elevation_deg:.3f} deg")

    # Rotating the boresight azimuth by 90 degrees relabels the two
    # direction cosines without changing range or elevation.
    rotated = link_geometry(sat, user, boresight=BoresightSpec(azimuth_deg=90.0))
    print(f"with boresight azimuth 90 deg: (u, v) = "
          f"({rotated.u:+.6f}, {rotated.v:+.6f})")

    print()
    print("== walking a user away from the sub-satellite point ==")
    for step in range(5):
        probe = GeodeticPosition(sat.latitude_deg + 0.8 * step,
                                 sat.longitude_deg, 0.0)
        g = link_geometry(sat, probe)
        off_nadir = float(np.hypot(g.u, g.v))
        print(f"  {0.8 * step:4.1f} deg north: off-nadir radius {off_nadir:.4f}, "
              f"elevation {g.elevation_deg:6.2f} deg, "
              f"range {g.slant_range_m / 1e3:7.1f} km")

    print()
    print("== visibility mask ==")
    far = GeodeticPosition(10.0, -60.0, 0.0)
    try:
        link_geometry(sat, far)
    except UserNotVisible as exc:
        print(f"user in the Caribbean is rejected: {exc}")
    # The mask can be lowered (or disabled) when you really want the link.
    g = link_geometry(sat, far, min_elevation_deg=-90.0)
    print(f"forcing it anyway puts the user {g.elevation_deg:.1f} deg below "
          f"the horizon at {g.slant_range_m / 1e3:.0f} km")


if __name__ == "__main__":
    main()

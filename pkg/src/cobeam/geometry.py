"""Geodetic and antenna-frame geometry for satellite downlinks.

Positions are WGS-84 geodetic coordinates.  Each satellite carries a
nadir-pointing antenna whose frame may be rotated about the boresight by a
configurable azimuth; a user's direction in that frame is expressed as
direction cosines (u, v), the plane in which beam centers are defined and
candidate beams are ranked.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, UserNotVisible

# WGS-84 ellipsoid.
WGS84_A = 6378137.0
WGS84_F = 1.0 / 298.257223563
WGS84_E2 = WGS84_F * (2.0 - WGS84_F)

# Service mask: links below this elevation count as not visible.
DEFAULT_MIN_ELEVATION_DEG = 10.0


@dataclass(frozen=True)
class GeodeticPosition:
    """A point given by WGS-84 latitude, longitude, and altitude.

    Attributes
    ----------
    latitude_deg : float
        Geodetic latitude in degrees, within [-90, 90].
    longitude_deg : float
        Longitude in degrees, within [-180, 180].
    altitude_m : float
        Height above the ellipsoid in meters, finite and >= 0.
    """

    latitude_deg: float
    longitude_deg: float
    altitude_m: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.latitude_deg) and -90.0 <= self.latitude_deg <= 90.0):
            raise ConfigError(
                f"latitude_deg must lie in [-90, 90], got {self.latitude_deg}"
            )
        if not (math.isfinite(self.longitude_deg) and -180.0 <= self.longitude_deg <= 180.0):
            raise ConfigError(
                f"longitude_deg must lie in [-180, 180], got {self.longitude_deg}"
            )
        if not (math.isfinite(self.altitude_m) and self.altitude_m >= 0.0):
            raise ConfigError(f"altitude_m must be finite and >= 0, got {self.altitude_m}")


@dataclass(frozen=True)
class BoresightSpec:
    """Orientation of a nadir-pointing antenna.

    azimuth_deg rotates the antenna's u axis away from local east toward
    local north, about the boresight.  Zero means u = east, v = north.
    """

    azimuth_deg: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.azimuth_deg):
            raise ConfigError(f"azimuth_deg must be finite, got {self.azimuth_deg}")


@dataclass(frozen=True)
class LinkGeometry:
    """One satellite-to-user link: direction cosines, range, elevation."""

    u: float
    v: float
    slant_range_m: float
    elevation_deg: float


def geodetic_to_ecef(pos):
    """Convert a geodetic position to Earth-centered Earth-fixed meters.

    Parameters
    ----------
    pos : GeodeticPosition

    Returns
    -------
    ndarray, shape (3,)
        ECEF x, y, z in meters on the WGS-84 ellipsoid.
    """
    lat = math.radians(pos.latitude_deg)
    lon = math.radians(pos.longitude_deg)
    sin_lat = math.sin(lat)
    cos_lat = math.cos(lat)
    # Prime-vertical radius of curvature.
    n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
    x = (n + pos.altitude_m) * cos_lat * math.cos(lon)
    y = (n + pos.altitude_m) * cos_lat * math.sin(lon)
    z = (n * (1.0 - WGS84_E2) + pos.altitude_m) * sin_lat
    return np.array([x, y, z])


def ecef_to_geodetic(xyz):
    """Invert geodetic_to_ecef by fixed-point iteration on the latitude.

    Converges to well below 1e-6 m for any point from the surface up to
    LEO altitudes.

    Parameters
    ----------
    xyz : array_like, shape (3,)

    Returns
    -------
    GeodeticPosition
    """
    x, y, z = (float(c) for c in xyz)
    lon = math.atan2(y, x)
    p = math.hypot(x, y)
    if p == 0.0:
        # On the polar axis the longitude is arbitrary; report 0.
        alt = abs(z) - WGS84_A * math.sqrt(1.0 - WGS84_E2)
        return GeodeticPosition(math.copysign(90.0, z), 0.0, alt)
    lat = math.atan2(z, p * (1.0 - WGS84_E2))
    for _ in range(20):
        sin_lat = math.sin(lat)
        n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
        alt = p / math.cos(lat) - n
        new_lat = math.atan2(z, p * (1.0 - WGS84_E2 * n / (n + alt)))
        if abs(new_lat - lat) < 1e-14:
            lat = new_lat
            break
        lat = new_lat
    sin_lat = math.sin(lat)
    n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
    alt = p / math.cos(lat) - n
    return GeodeticPosition(math.degrees(lat), math.degrees(lon), alt)


def enu_basis(latitude_deg, longitude_deg):
    """Local east, north, up unit vectors expressed in the ECEF frame.

    Returns
    -------
    tuple of three ndarray, each shape (3,)
    """
    lat = math.radians(latitude_deg)
    lon = math.radians(longitude_deg)
    sin_lat, cos_lat = math.sin(lat), math.cos(lat)
    sin_lon, cos_lon = math.sin(lon), math.cos(lon)
    east = np.array([-sin_lon, cos_lon, 0.0])
    north = np.array([-sin_lat * cos_lon, -sin_lat * sin_lon, cos_lat])
    up = np.array([cos_lat * cos_lon, cos_lat * sin_lon, sin_lat])
    return east, north, up


def link_geometry(sat, user, boresight=BoresightSpec(), min_elevation_deg=DEFAULT_MIN_ELEVATION_DEG):
    """Direction cosines, slant range, and elevation for one link.

    The antenna frame is nadir-pointing: its u axis is local east at the
    satellite rotated by the boresight azimuth, its v axis the matching
    north.  Elevation is that of the satellite above the user's local
    horizon.

    Parameters
    ----------
    sat, user : GeodeticPosition
        The satellite must be strictly higher than the user.
    boresight : BoresightSpec
    min_elevation_deg : float
        Links below this elevation raise UserNotVisible.

    Returns
    -------
    LinkGeometry

    Raises
    ------
    UserNotVisible
        If the elevation is below min_elevation_deg.
    ConfigError
        If the satellite does not sit above the user.
    """
    if sat.altitude_m <= user.altitude_m:
        raise ConfigError(
            f"satellite altitude {sat.altitude_m} m must exceed user altitude {user.altitude_m} m"
        )
    sat_ecef = geodetic_to_ecef(sat)
    user_ecef = geodetic_to_ecef(user)
    los = user_ecef - sat_ecef
    slant_range = float(np.linalg.norm(los))
    direction = los / slant_range

    _, _, up_user = enu_basis(user.latitude_deg, user.longitude_deg)
    sin_elev = float(np.dot(-direction, up_user))
    elevation = math.degrees(math.asin(max(-1.0, min(1.0, sin_elev))))
    if elevation < min_elevation_deg:
        raise UserNotVisible(
            f"user ({user.latitude_deg:.4f}, {user.longitude_deg:.4f}) sits at "
            f"{elevation:.2f} deg elevation, below the {min_elevation_deg:.2f} deg mask"
        )

    east, north, _ = enu_basis(sat.latitude_deg, sat.longitude_deg)
    az = math.radians(boresight.azimuth_deg)
    u_axis = math.cos(az) * east + math.sin(az) * north
    v_axis = -math.sin(az) * east + math.cos(az) * north
    u = float(np.dot(direction, u_axis))
    v = float(np.dot(direction, v_axis))
    return LinkGeometry(u=u, v=v, slant_range_m=slant_range, elevation_deg=elevation)

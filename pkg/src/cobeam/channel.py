"""Array responses, the 2D-DFT beam codebook, and link-budget channels.

The transmit antenna is a uniform rectangular array whose elements are
small subarrays.  Beams are fixed DFT phase profiles across the array;
a user's channel is a free-space line-of-sight vector, and the effective
channel of a beam is the inner product of the two.

Sign convention, fixed here and relied on by beam_centers: codebook
entries carry a positive exponent, steering entries a positive exponent
as well, and the effective channel conjugates the steering side, so beam
(n1, n2) attains its peak at u = wrap(n1 / fft_rows) / spacing with
wrap(x) = ((x + 0.5) mod 1) - 0.5.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidDirection

C_LIGHT = 299792458.0  # m/s
BOLTZMANN = 1.380649e-23  # J/K

DEFAULT_CARRIER_HZ = 19e9
DEFAULT_TX_ELEMENT_GAIN_DBI = 6.0
DEFAULT_RX_GAIN_DBI = 41.45
DEFAULT_TEMPERATURE_K = 224.5
DEFAULT_BANDWIDTH_HZ = 250e6
DEFAULT_NOISE_POWER_W = BOLTZMANN * DEFAULT_TEMPERATURE_K * DEFAULT_BANDWIDTH_HZ


@dataclass(frozen=True)
class ArrayConfig:
    """Uniform rectangular array of subarray elements.

    Element (k1, k2) sits at k1 * spacing along u and k2 * spacing along
    v, in wavelengths.  Each element is itself a small URA whose array
    factor acts as the element pattern; its spacing defaults to half the
    element spacing so subarrays tile the element cell.
    """

    rows: int = 10
    cols: int = 10
    element_spacing_wavelengths: float = 2.5
    subarray_rows: int = 2
    subarray_cols: int = 2
    subarray_spacing_wavelengths: float | None = None

    def __post_init__(self):
        for name in ("rows", "cols", "subarray_rows", "subarray_cols"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not self.element_spacing_wavelengths > 0:
            raise ConfigError(
                f"element_spacing_wavelengths must be > 0, got {self.element_spacing_wavelengths}"
            )
        if self.subarray_spacing_wavelengths is None:
            object.__setattr__(
                self, "subarray_spacing_wavelengths", self.element_spacing_wavelengths / 2.0
            )
        elif not self.subarray_spacing_wavelengths > 0:
            raise ConfigError(
                f"subarray_spacing_wavelengths must be > 0, got {self.subarray_spacing_wavelengths}"
            )

    @property
    def num_elements(self):
        return self.rows * self.cols


@dataclass(frozen=True)
class CodebookConfig:
    """2D-DFT size; must cover the array in both dimensions."""

    fft_rows: int = 16
    fft_cols: int = 16

    def __post_init__(self):
        if self.fft_rows < 1 or self.fft_cols < 1:
            raise ConfigError("fft size must be >= 1 in both dimensions")

    @property
    def num_beams(self):
        return self.fft_rows * self.fft_cols


@dataclass(frozen=True)
class LinkBudget:
    """Scalar link parameters shared by all links of a scenario."""

    carrier_hz: float = DEFAULT_CARRIER_HZ
    tx_element_gain_dbi: float = DEFAULT_TX_ELEMENT_GAIN_DBI
    rx_gain_dbi: float = DEFAULT_RX_GAIN_DBI
    noise_power_w: float = DEFAULT_NOISE_POWER_W

    def __post_init__(self):
        if not self.carrier_hz > 0:
            raise ConfigError(f"carrier_hz must be > 0, got {self.carrier_hz}")
        if not self.noise_power_w > 0:
            raise ConfigError(f"noise_power_w must be > 0, got {self.noise_power_w}")

    @property
    def wavelength_m(self):
        return C_LIGHT / self.carrier_hz


def noise_power(temperature_k, bandwidth_hz):
    """Thermal noise power k_B * T * B in watts.

    Raises
    ------
    ConfigError
        On non-positive temperature or bandwidth.
    """
    if not temperature_k > 0:
        raise ConfigError(f"temperature_k must be > 0, got {temperature_k}")
    if not bandwidth_hz > 0:
        raise ConfigError(f"bandwidth_hz must be > 0, got {bandwidth_hz}")
    return BOLTZMANN * temperature_k * bandwidth_hz


def build_codebook(array, codebook):
    """All DFT beamforming vectors as rows of one matrix.

    Beam n = (n1, n2) maps to row n1 * fft_cols + n2; element (k1, k2) to
    column k1 * cols + k2.  Entry value is
    exp(+2j pi (k1 n1 / fft_rows + k2 n2 / fft_cols)) / sqrt(K).

    Parameters
    ----------
    array : ArrayConfig
    codebook : CodebookConfig

    Returns
    -------
    ndarray, shape (num_beams, num_elements), complex

    Raises
    ------
    ConfigError
        If the FFT size is smaller than the array in either dimension.
    """
    if codebook.fft_rows < array.rows or codebook.fft_cols < array.cols:
        raise ConfigError(
            f"fft size {codebook.fft_rows}x{codebook.fft_cols} cannot be smaller "
            f"than the array {array.rows}x{array.cols}"
        )
    row_phases = np.exp(
        2j * np.pi * np.outer(np.arange(codebook.fft_rows), np.arange(array.rows)) / codebook.fft_rows
    )
    col_phases = np.exp(
        2j * np.pi * np.outer(np.arange(codebook.fft_cols), np.arange(array.cols)) / codebook.fft_cols
    )
    return np.kron(row_phases, col_phases) / math.sqrt(array.num_elements)


def beam_centers(array, codebook):
    """(u, v) coordinate each beam points at, one row per beam.

    Follows the module's sign convention: beam (n1, n2) peaks at
    u = wrap(n1 / fft_rows) / spacing, v = wrap(n2 / fft_cols) / spacing,
    with the wrap keeping grating-free coordinates in [-0.5, 0.5) / spacing.

    Returns
    -------
    ndarray, shape (num_beams, 2)
    """
    spacing = array.element_spacing_wavelengths
    u_axis = ((np.arange(codebook.fft_rows) / codebook.fft_rows + 0.5) % 1.0 - 0.5) / spacing
    v_axis = ((np.arange(codebook.fft_cols) / codebook.fft_cols + 0.5) % 1.0 - 0.5) / spacing
    return np.stack(np.meshgrid(u_axis, v_axis, indexing="ij"), axis=-1).reshape(-1, 2)


def element_pattern(array, u, v):
    """Normalized subarray array-factor magnitude at direction (u, v).

    Equals 1 at boresight; broadcastable over array-like u and v.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    spacing = array.subarray_spacing_wavelengths
    factor_u = sum(np.exp(2j * np.pi * spacing * k * u) for k in range(array.subarray_rows))
    factor_v = sum(np.exp(2j * np.pi * spacing * k * v) for k in range(array.subarray_cols))
    return np.abs(factor_u * factor_v) / (array.subarray_rows * array.subarray_cols)


def steering_vector(array, u, v):
    """Array response toward direction cosines (u, v).

    Element (k1, k2) gets phase 2 pi spacing (k1 u + k2 v); every entry is
    then weighted by the subarray element pattern, so entries share one
    common modulus.

    Returns
    -------
    ndarray, shape (num_elements,), complex

    Raises
    ------
    InvalidDirection
        If u**2 + v**2 > 1 (beyond a small roundoff margin).
    """
    if u * u + v * v > 1.0 + 1e-9:
        raise InvalidDirection(f"(u, v) = ({u}, {v}) lies outside the unit disk")
    spacing = array.element_spacing_wavelengths
    k1 = np.arange(array.rows)[:, None]
    k2 = np.arange(array.cols)[None, :]
    phases = np.exp(2j * np.pi * spacing * (k1 * u + k2 * v)).reshape(-1)
    return float(element_pattern(array, u, v)) * phases


def synthesize_channel(link, array, budget):
    """Free-space line-of-sight channel vector for one link.

    Per-element amplitude follows the Friis equation with the transmit
    element and receive gains; the common phase is set by the slant range;
    the spatial signature is the steering vector at the link's (u, v).

    Parameters
    ----------
    link : LinkGeometry
    array : ArrayConfig
    budget : LinkBudget

    Returns
    -------
    ndarray, shape (num_elements,), complex
    """
    wavelength = budget.wavelength_m
    gain = 10.0 ** ((budget.tx_element_gain_dbi + budget.rx_gain_dbi) / 10.0)
    amplitude = math.sqrt(gain) * wavelength / (4.0 * math.pi * link.slant_range_m)
    phase = np.exp(-2j * np.pi * link.slant_range_m / wavelength)
    return amplitude * phase * steering_vector(array, link.u, link.v)


def effective_channels(channels, codebook_matrix):
    """Per-beam effective channel tensor g[l, n, m] = h_m^l^H w_n.

    Parameters
    ----------
    channels : ndarray, shape (L, M, K), complex
        Channel vectors per satellite and user; all-zero rows (invisible
        links) produce zero effective channels for every beam.
    codebook_matrix : ndarray, shape (N, K), complex

    Returns
    -------
    ndarray, shape (L, N, M), complex
    """
    return np.einsum("nk,lmk->lnm", codebook_matrix, np.conj(channels))

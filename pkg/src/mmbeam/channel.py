# Copyright 2026 The Mmbeam Authors. All Rights Reserved.
#
# This file is part of Mmbeam.
#
# Mmbeam is free software: you can redistribute it and/or modify it under the
# terms of the GNU General Public License as published by the Free Software
# Foundation, either version 3 of the License, or (at your option) any later
# version.
#
# Mmbeam is distributed in the hope that it will be useful, but WITHOUT ANY
# WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS FOR
# A PARTICULAR PURPOSE. See the GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with
# Mmbeam. If not, see <https://www.gnu.org/licenses/>.
"""Sparse ray-cluster channel: realizations, the MIMO matrix, and per-ray
time evolution of beamformed CSI-RS samples."""
from __future__ import annotations

import csv
import dataclasses
import functools
import math
from collections.abc import Sequence
from typing import TYPE_CHECKING, Any

import numpy as np

from mmbeam import exceptions
from mmbeam import geometry

if TYPE_CHECKING:
  from _typeshed import StrOrBytesPath
  from numpy.typing import NDArray

  ComplexArray = NDArray[np.complex128]
  FloatArray = NDArray[np.float64]

_RAY_FILE_ENCODING = 'utf-8'
_RAY_FILE_COMMENT = '#'
RAY_FILE_COLUMNS = (
    'magnitude',
    'phase',
    'delay',
    'doppler',
    'aoa_phi',
    'aoa_theta',
    'aod_phi',
    'aod_theta',
)


@dataclasses.dataclass(frozen=True)
class Ray:
  """One propagation path.

  Attributes:
    gain_magnitude: |G_r|, linear.
    initial_phase: Phase of G_r in radians, with the narrowband delay phase
      already folded in.
    delay: Seconds relative to the earliest ray. Metadata only.
    doppler: Doppler frequency in Hz.
    aoa: Arrival direction at the receiver.
    aod: Departure direction at the transmitter.
    cluster: Index of the cluster the ray belongs to.
  """
  gain_magnitude: float
  initial_phase: float
  delay: float
  doppler: float
  aoa: geometry.AnglePair
  aod: geometry.AnglePair
  cluster: int = 0

  def __post_init__(self):
    if self.gain_magnitude < 0:
      raise exceptions.InvalidConfigError('gain_magnitude',
                                          self.gain_magnitude,
                                          'must be non-negative')
    if self.delay < 0:
      raise exceptions.InvalidConfigError('delay', self.delay,
                                          'must be non-negative')

  @property
  def gain(self) -> complex:
    return self.gain_magnitude * complex(math.cos(self.initial_phase),
                                         math.sin(self.initial_phase))


@dataclasses.dataclass(frozen=True)
class ChannelRealization:
  """Set of rays between a transmit and a receive array of subarrays.

  cluster_aoas and cluster_aods hold the cluster centres the rays were drawn
  around, when known.
  """
  rays: tuple[Ray, ...]
  tx_layout: geometry.SubarrayLayout
  rx_layout: geometry.SubarrayLayout
  cluster_aoas: tuple[geometry.AnglePair, ...] = ()
  cluster_aods: tuple[geometry.AnglePair, ...] = ()

  @property
  def n_rays(self) -> int:
    return len(self.rays)

  @functools.cached_property
  def gains(self) -> ComplexArray:
    return np.array([ray.gain for ray in self.rays], dtype=complex)

  @functools.cached_property
  def dopplers(self) -> FloatArray:
    return np.array([ray.doppler for ray in self.rays], dtype=float)

  @property
  def aoas(self) -> list[geometry.AnglePair]:
    return [ray.aoa for ray in self.rays]

  @property
  def aods(self) -> list[geometry.AnglePair]:
    return [ray.aod for ray in self.rays]

  def energy(self) -> float:
    return float(np.sum(np.abs(self.gains)**2))

  def scaled(self, factor: complex) -> ChannelRealization:
    """Copy with every ray gain multiplied by factor."""
    rays = tuple(
        dataclasses.replace(
            ray,
            gain_magnitude=ray.gain_magnitude * abs(factor),
            initial_phase=ray.initial_phase + float(np.angle(factor)))
        for ray in self.rays)
    return dataclasses.replace(self, rays=rays)


@dataclasses.dataclass(frozen=True)
class ClusterConfig:
  """Knobs of the generic cluster-ray generator. Angles in degrees."""
  n_clusters: int = 4
  rays_per_cluster: int = 5
  tx_azimuth_range: tuple[float, float] = (-60.0, 60.0)
  tx_elevation_range: tuple[float, float] = (90.0, 90.0)
  rx_azimuth_range: tuple[float, float] = (-90.0, 90.0)
  rx_elevation_range: tuple[float, float] = (90.0, 90.0)
  azimuth_spread: float = 2.0
  elevation_spread: float = 0.0
  power_decay: float = 1.0
  max_doppler: float = 100.0
  delay_spread: float = 1e-7
  subcarrier_offset: float = 0.0
  normalize_drop: bool = True

  def __post_init__(self):
    if self.n_clusters < 1:
      raise exceptions.InvalidConfigError('n_clusters', self.n_clusters,
                                          'at least one cluster is required')
    if self.rays_per_cluster < 1:
      raise exceptions.InvalidConfigError('rays_per_cluster',
                                          self.rays_per_cluster,
                                          'at least one ray is required')
    for name in ('azimuth_spread', 'elevation_spread', 'power_decay',
                 'max_doppler', 'delay_spread'):
      if getattr(self, name) < 0:
        raise exceptions.InvalidConfigError(name, getattr(self, name),
                                            'must be non-negative')
    for name, limits in (('tx_azimuth_range', (-180.0, 180.0)),
                         ('rx_azimuth_range', (-180.0, 180.0)),
                         ('tx_elevation_range', (0.0, 180.0)),
                         ('rx_elevation_range', (0.0, 180.0))):
      low, high = getattr(self, name)
      if low > high:
        raise exceptions.InvalidConfigError(name, (low, high),
                                            'range is empty')
      if low < limits[0] or high > limits[1]:
        raise exceptions.InvalidConfigError(name, (low, high),
                                            f'range must lie in {limits}')

  @property
  def n_rays(self) -> int:
    return self.n_clusters * self.rays_per_cluster


def _draw_directions(
    rng: np.random.Generator,
    azimuth_range: tuple[float, float],
    elevation_range: tuple[float, float],
    n_clusters: int,
    rays_per_cluster: int,
    azimuth_spread: float,
    elevation_spread: float,
) -> tuple[list[geometry.AnglePair], list[geometry.AnglePair]]:
  """Cluster centres uniform in the ranges, rays Laplacian around them and
  clipped back into the ranges."""
  az_lo, az_hi = np.radians(azimuth_range)
  el_lo, el_hi = np.radians(elevation_range)
  centre_az = rng.uniform(az_lo, az_hi, size=n_clusters)
  centre_el = rng.uniform(el_lo, el_hi, size=n_clusters)
  shape = (n_clusters, rays_per_cluster)
  ray_az = centre_az[:, np.newaxis] + rng.laplace(
      0.0, math.radians(azimuth_spread), size=shape)
  ray_el = centre_el[:, np.newaxis] + rng.laplace(
      0.0, math.radians(elevation_spread), size=shape)
  ray_az = np.clip(ray_az, az_lo, az_hi)
  ray_el = np.clip(ray_el, el_lo, el_hi)
  centres = [
      geometry.AnglePair(float(phi), float(theta))
      for phi, theta in zip(centre_az, centre_el)
  ]
  rays = [
      geometry.AnglePair(float(phi), float(theta))
      for phi, theta in zip(ray_az.ravel(), ray_el.ravel())
  ]
  return centres, rays


def draw_realization(
    cfg: ClusterConfig,
    tx_layout: geometry.SubarrayLayout,
    rx_layout: geometry.SubarrayLayout,
    rng: np.random.Generator,
) -> ChannelRealization:
  """Draws one channel realization.

  Cluster powers decay as exp(-power_decay * c) and are normalised to sum to
  one; every ray of cluster c has a Rayleigh magnitude with mean power
  p_c / rays_per_cluster. Initial phases are uniform, dopplers are
  max_doppler * cos(u) with u uniform, and delays are exponential with mean
  delay_spread, shifted so the earliest ray has zero delay.

  Args:
    cfg: Generator configuration.
    tx_layout: Transmit array of subarrays.
    rx_layout: Receive array of subarrays.
    rng: Caller-owned generator; the draw order is fixed so equal seeds give
      equal realizations.

  Returns:
    A ChannelRealization with cfg.n_rays rays ordered cluster by cluster.
  """
  n_c, n_r = cfg.n_clusters, cfg.rays_per_cluster
  cluster_aoas, aoas = _draw_directions(rng, cfg.rx_azimuth_range,
                                        cfg.rx_elevation_range, n_c, n_r,
                                        cfg.azimuth_spread,
                                        cfg.elevation_spread)
  cluster_aods, aods = _draw_directions(rng, cfg.tx_azimuth_range,
                                        cfg.tx_elevation_range, n_c, n_r,
                                        cfg.azimuth_spread,
                                        cfg.elevation_spread)
  cluster_power = np.exp(-cfg.power_decay * np.arange(n_c))
  cluster_power /= cluster_power.sum()
  ray_power = np.repeat(cluster_power / n_r, n_r)
  magnitudes = rng.rayleigh(scale=np.sqrt(ray_power / 2))
  if cfg.normalize_drop:
    magnitudes /= np.sqrt(np.sum(magnitudes**2))
  phases = rng.uniform(0.0, 2 * math.pi, size=cfg.n_rays)
  dopplers = cfg.max_doppler * np.cos(
      rng.uniform(0.0, 2 * math.pi, size=cfg.n_rays))
  delays = rng.exponential(cfg.delay_spread, size=cfg.n_rays)
  delays -= delays.min()
  phases = np.mod(phases - 2 * math.pi * cfg.subcarrier_offset * delays,
                  2 * math.pi)
  rays = tuple(
      Ray(
          gain_magnitude=float(magnitudes[r]),
          initial_phase=float(phases[r]),
          delay=float(delays[r]),
          doppler=float(dopplers[r]),
          aoa=aoas[r],
          aod=aods[r],
          cluster=r // n_r,
      ) for r in range(cfg.n_rays))
  return ChannelRealization(rays, tx_layout, rx_layout, tuple(cluster_aoas),
                            tuple(cluster_aods))


def channel_matrix(ch: ChannelRealization) -> ComplexArray:
  """Narrowband MIMO matrix of shape (rx antennas, tx antennas).

  H = sqrt(N_tx * N_rx) * sum_r G_r a_rx(aoa_r) a_tx(aod_r)^H, with full-array
  responses assembled from subarray steering vectors and subarray phases.
  """
  n_rx = ch.rx_layout.n_antennas
  n_tx = ch.tx_layout.n_antennas
  h = np.zeros((n_rx, n_tx), dtype=complex)
  for ray in ch.rays:
    a_rx = geometry.full_array_response(ch.rx_layout, ray.aoa)
    a_tx = geometry.full_array_response(ch.tx_layout, ray.aod)
    h += ray.gain * np.outer(a_rx, a_tx.conj())
  return math.sqrt(n_rx * n_tx) * h


def rx_projections(ch: ChannelRealization,
                   rx_beams: Sequence[geometry.AnglePair]) -> ComplexArray:
  """sqrt(N) * a(beam)^H a(aoa_r) for every ray and receive beam, shaped
  (rays, beams)."""
  sub = ch.rx_layout.subarray
  a_rays = geometry.steering_matrix(sub, ch.aoas)
  a_beams = geometry.steering_matrix(sub, rx_beams)
  return math.sqrt(sub.n_elements) * (a_rays.T @ a_beams.conj())


def tx_projections(ch: ChannelRealization,
                   tx_beams: Sequence[geometry.AnglePair]) -> ComplexArray:
  """sqrt(N) * a(aod_r)^H a(beam) for every ray and transmit beam, shaped
  (rays, beams)."""
  sub = ch.tx_layout.subarray
  a_rays = geometry.steering_matrix(sub, ch.aods)
  a_beams = geometry.steering_matrix(sub, tx_beams)
  return math.sqrt(sub.n_elements) * (a_rays.conj().T @ a_beams)


def beamformed_ray_terms(
    ch: ChannelRealization,
    rx_beams: Sequence[geometry.AnglePair],
    tx_beams: Sequence[geometry.AnglePair],
) -> ComplexArray:
  """Per-ray contributions to every CSI-RS coefficient at t = 0.

  Returns:
    Array shaped (rays, rx subarrays, tx subarrays, rx beams, tx beams) with
    entries G_r e^{j(gamma^R_{r,i} - gamma^T_{r,j})} times the receive and
    transmit projections.
  """
  rx_phase = np.exp(1j * geometry.subarray_phases(ch.rx_layout, ch.aoas))
  tx_phase = np.exp(-1j * geometry.subarray_phases(ch.tx_layout, ch.aods))
  rx_proj = rx_projections(ch, rx_beams)
  tx_proj = tx_projections(ch, tx_beams)
  return np.einsum('r,ri,rj,rb,rc->rijbc', ch.gains, rx_phase, tx_phase,
                   rx_proj, tx_proj)


def doppler_rotation(ch: ChannelRealization,
                     times: Sequence[float] | FloatArray) -> ComplexArray:
  """e^{j k f_D t} per ray and time, shaped (rays, times). With wavelength
  normalised geometry k f_D t equals 2 pi f_D t."""
  times = np.asarray(times, dtype=float)
  return np.exp(1j * geometry.WAVENUMBER * np.outer(ch.dopplers, times))


def time_coefficient(
    ch: ChannelRealization,
    t: float,
    rx_sa: int,
    tx_sa: int,
    rx_beam: geometry.AnglePair,
    tx_beam: geometry.AnglePair,
) -> complex:
  """Noiseless CSI-RS sample h_{i,j,bR,bT}(t) between receive subarray rx_sa
  and transmit subarray tx_sa."""
  terms = beamformed_ray_terms(ch, [rx_beam], [tx_beam])[:, rx_sa, tx_sa, 0, 0]
  rotation = doppler_rotation(ch, [t])[:, 0]
  return complex(np.sum(terms * rotation))


def save_rays(ch: ChannelRealization, path: StrOrBytesPath) -> None:
  """Writes the rays, one per line, in RAY_FILE_COLUMNS order."""
  with open(path, 'w', encoding=_RAY_FILE_ENCODING, newline='') as f:
    f.write(f'{_RAY_FILE_COMMENT} {", ".join(RAY_FILE_COLUMNS)}\n')
    w = csv.writer(f, lineterminator='\n')
    for ray in ch.rays:
      w.writerow([
          repr(value) for value in (
              ray.gain_magnitude,
              ray.initial_phase,
              ray.delay,
              ray.doppler,
              ray.aoa.phi,
              ray.aoa.theta,
              ray.aod.phi,
              ray.aod.theta,
          )
      ])


def load_rays(
    path: StrOrBytesPath,
    tx_layout: geometry.SubarrayLayout,
    rx_layout: geometry.SubarrayLayout,
) -> ChannelRealization:
  """Reads a realization written by save_rays. Lines starting with '#' are
  comments.

  Raises:
    InvalidConfigError: If a line does not hold eight numeric columns.
  """
  rays: list[Ray] = []
  with open(path, encoding=_RAY_FILE_ENCODING, newline='') as f:
    lines = (line for line in f
             if line.strip() and not line.startswith(_RAY_FILE_COMMENT))
    for row in csv.reader(lines):
      rays.append(_parse_ray_row(row))
  return ChannelRealization(tuple(rays), tx_layout, rx_layout)


def _parse_ray_row(row: Sequence[Any]) -> Ray:
  if len(row) != len(RAY_FILE_COLUMNS):
    raise exceptions.InvalidConfigError('ray line', row,
                                        'expected eight columns')
  try:
    values = [float(value) for value in row]
  except ValueError as e:
    raise exceptions.InvalidConfigError('ray line', row,
                                        'non-numeric column') from e
  magnitude, phase, delay, doppler, aoa_phi, aoa_theta, aod_phi, aod_theta = (
      values)
  return Ray(magnitude, phase, delay, doppler,
             geometry.AnglePair(aoa_phi, aoa_theta),
             geometry.AnglePair(aod_phi, aod_theta))

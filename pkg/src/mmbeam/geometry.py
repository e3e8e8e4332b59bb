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
"""Uniform planar array geometry in the yz plane.

All lengths are in carrier wavelengths, so the wavenumber is 2*pi and only
products k*d appear. Elements are ordered z fastest: element (n_y, n_z) with
0-based indices sits at position n_y * n_z_count + n_z of a steering vector.
"""
from __future__ import annotations

import dataclasses
import math
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING

import numpy as np

from mmbeam import exceptions

if TYPE_CHECKING:
  from numpy.typing import NDArray

  ComplexArray = NDArray[np.complex128]

WAVENUMBER = 2 * math.pi
# |1 - e^{jx}| below this is treated as an exact multiple of 2*pi
_ALIAS_TOLERANCE = 1e-12


@dataclasses.dataclass(frozen=True)
class AnglePair:
  """A direction as (azimuth phi, elevation theta from the z-axis), radians."""
  phi: float
  theta: float

  def __post_init__(self):
    if not 0.0 <= self.theta <= math.pi:
      raise exceptions.InvalidConfigError('theta', self.theta,
                                          'elevation must lie in [0, pi]')
    if not -math.pi <= self.phi <= math.pi:
      raise exceptions.InvalidConfigError('phi', self.phi,
                                          'azimuth must lie in [-pi, pi]')

  @classmethod
  def from_degrees(cls, phi_deg: float, theta_deg: float) -> AnglePair:
    return cls(math.radians(phi_deg), math.radians(theta_deg))

  def as_degrees(self) -> tuple[float, float]:
    return math.degrees(self.phi), math.degrees(self.theta)

  @property
  def y_direction_cosine(self) -> float:
    return math.sin(self.theta) * math.sin(self.phi)

  @property
  def z_direction_cosine(self) -> float:
    return math.cos(self.theta)


@dataclasses.dataclass(frozen=True)
class PlanarArray:
  """Uniform planar array of n_y by n_z elements. A uniform linear array is
  the n_z == 1 case."""
  n_y: int
  n_z: int = 1
  spacing_wavelengths: float = 0.5

  def __post_init__(self):
    if self.n_y < 1 or self.n_z < 1:
      raise exceptions.InvalidConfigError('array size', (self.n_y, self.n_z),
                                          'element counts must be >= 1')
    if self.spacing_wavelengths <= 0:
      raise exceptions.InvalidConfigError('spacing_wavelengths',
                                          self.spacing_wavelengths,
                                          'spacing must be positive')

  @property
  def n_elements(self) -> int:
    return self.n_y * self.n_z

  @property
  def kd(self) -> float:
    return WAVENUMBER * self.spacing_wavelengths


@dataclasses.dataclass(frozen=True)
class SubarrayLayout:
  """Identical subarrays displaced by offsets (d_y, d_z) in wavelengths from
  the first subarray."""
  subarray: PlanarArray
  offsets: tuple[tuple[float, float], ...] = ((0.0, 0.0),)

  def __post_init__(self):
    if not self.offsets:
      raise exceptions.InvalidConfigError('offsets', self.offsets,
                                          'at least one subarray is required')
    if tuple(self.offsets[0]) != (0.0, 0.0):
      raise exceptions.InvalidConfigError(
          'offsets', self.offsets[0],
          'the first subarray is the reference and must sit at (0, 0)')

  @classmethod
  def contiguous_along_y(cls, subarray: PlanarArray,
                         n_subarrays: int) -> SubarrayLayout:
    """Subarrays placed side by side along y with no gap, as a long linear or
    planar array cut into equal pieces."""
    pitch = subarray.n_y * subarray.spacing_wavelengths
    offsets = tuple((s * pitch, 0.0) for s in range(n_subarrays))
    return cls(subarray, offsets)

  @property
  def n_subarrays(self) -> int:
    return len(self.offsets)

  @property
  def n_antennas_per_subarray(self) -> int:
    return self.subarray.n_elements

  @property
  def n_antennas(self) -> int:
    return self.n_subarrays * self.n_antennas_per_subarray


def steering_vector(array: PlanarArray, direction: AnglePair) -> ComplexArray:
  """Unit-norm array response of a uniform planar array.

  Args:
    array: The array geometry.
    direction: Arrival or departure direction.

  Returns:
    Vector of length array.n_elements whose (n_y, n_z) entry is
    exp(j*k*d*(n_z*cos(theta) + n_y*sin(theta)*sin(phi))) / sqrt(N).
  """
  return steering_matrix(array, [direction])[:, 0]


def steering_matrix(array: PlanarArray,
                    directions: Iterable[AnglePair]) -> ComplexArray:
  """Steering vectors of several directions stacked as columns."""
  directions = list(directions)
  y_cos = np.array([d.y_direction_cosine for d in directions])
  z_cos = np.array([d.z_direction_cosine for d in directions])
  n_y, n_z = np.meshgrid(
      np.arange(array.n_y), np.arange(array.n_z), indexing='ij')
  n_y = n_y.reshape(-1, 1)
  n_z = n_z.reshape(-1, 1)
  phase = array.kd * (n_z * z_cos[np.newaxis, :] + n_y * y_cos[np.newaxis, :])
  return np.exp(1j * phase) / math.sqrt(array.n_elements)


def _geometric_series(x: float, n: int) -> complex:
  """Sum of e^{jmx} for m in [0, n), with the n-term limit at aliases."""
  if abs(1 - np.exp(1j * x)) < _ALIAS_TOLERANCE:
    return complex(n)
  return complex(
      np.exp(1j * (n - 1) * x / 2) * math.sin(n * x / 2) / math.sin(x / 2))


def _z_phase_difference(dir1: AnglePair, dir2: AnglePair, kd: float) -> float:
  return kd * (dir2.z_direction_cosine - dir1.z_direction_cosine)


def _y_phase_difference(dir1: AnglePair, dir2: AnglePair, kd: float) -> float:
  return kd * (dir2.y_direction_cosine - dir1.y_direction_cosine)


def g1(array: PlanarArray, dir1: AnglePair, dir2: AnglePair) -> complex:
  """Elevation factor: sum over the n_z column of the phase progression."""
  return _geometric_series(_z_phase_difference(dir1, dir2, array.kd), array.n_z)


def g2(array: PlanarArray, dir1: AnglePair, dir2: AnglePair) -> complex:
  """Azimuth factor: sum over the n_y row of the phase progression."""
  return _geometric_series(_y_phase_difference(dir1, dir2, array.kd), array.n_y)


def inner_product_closed_form(array: PlanarArray, dir1: AnglePair,
                              dir2: AnglePair) -> complex:
  """Closed form of sqrt(N) * a(dir1)^H a(dir2).

  The three cases are: both angles equal, only the elevations equal, and
  anything else. Aliased directions (phase difference a multiple of 2*pi)
  fall back to the limit value of the geometric series, so the result always
  agrees with the direct dot product.
  """
  n = array.n_elements
  if dir1 == dir2:
    return complex(math.sqrt(n))
  if dir1.theta == dir2.theta:
    return math.sqrt(array.n_z / array.n_y) * g2(array, dir1, dir2)
  return g1(array, dir1, dir2) * g2(array, dir1, dir2) / math.sqrt(n)


def _bound(name: str, x: float) -> float:
  denominator = abs(1 - np.exp(1j * x))
  if denominator < _ALIAS_TOLERANCE:
    raise exceptions.UndefinedBoundError(name, x)
  return 2 / denominator


def g1_bound(dir1: AnglePair, dir2: AnglePair, kd: float) -> float:
  """N-independent upper bound on |g1|.

  Raises:
    UndefinedBoundError: If the elevation phase difference is a multiple of
      2*pi, equal elevations included.
  """
  return _bound('g1', _z_phase_difference(dir1, dir2, kd))


def g2_bound(dir1: AnglePair, dir2: AnglePair, kd: float) -> float:
  """N-independent upper bound on |g2|.

  Raises:
    UndefinedBoundError: If the azimuth phase difference is a multiple of
      2*pi, equal y direction cosines included.
  """
  return _bound('g2', _y_phase_difference(dir1, dir2, kd))


def g_bounds(dir1: AnglePair, dir2: AnglePair,
             kd: float) -> tuple[float, float]:
  """Both N-independent bounds, (g1_bound, g2_bound).

  The pair is only returned when both bounds exist; callers that can use one
  bound alone call g1_bound or g2_bound.

  Raises:
    UndefinedBoundError: Naming the first undefined bound, g1 before g2.
  """
  return g1_bound(dir1, dir2, kd), g2_bound(dir1, dir2, kd)


def subarray_phase(offset: Sequence[float], direction: AnglePair) -> float:
  """Phase of a subarray displaced by (d_y, d_z) wavelengths relative to the
  reference subarray, for a plane wave along direction."""
  d_y, d_z = offset
  return WAVENUMBER * (
      d_z * direction.z_direction_cosine + d_y * direction.y_direction_cosine)


def subarray_phases(layout: SubarrayLayout,
                    directions: Sequence[AnglePair]) -> NDArray[np.float64]:
  """Matrix of subarray_phase values shaped (len(directions), n_subarrays)."""
  offsets = np.asarray(layout.offsets, dtype=float)
  y_cos = np.array([d.y_direction_cosine for d in directions])
  z_cos = np.array([d.z_direction_cosine for d in directions])
  return WAVENUMBER * (
      np.outer(z_cos, offsets[:, 1]) + np.outer(y_cos, offsets[:, 0]))


def full_array_response(layout: SubarrayLayout,
                        direction: AnglePair) -> ComplexArray:
  """Unit-norm response of the whole array of subarrays.

  Block s is the subarray steering vector rotated by the subarray phase and
  scaled by 1/sqrt(n_subarrays).
  """
  sub = steering_vector(layout.subarray, direction)
  blocks = [
      sub * np.exp(1j * subarray_phase(offset, direction))
      for offset in layout.offsets
  ]
  return np.concatenate(blocks) / math.sqrt(layout.n_subarrays)


def angular_separation(dir1: AnglePair, dir2: AnglePair) -> float:
  """Great-circle angle between two directions, radians."""
  u1 = _unit_vector(dir1)
  u2 = _unit_vector(dir2)
  cross = np.linalg.norm(np.cross(u1, u2))
  return math.atan2(float(cross), float(np.dot(u1, u2)))


def _unit_vector(direction: AnglePair) -> NDArray[np.float64]:
  return np.array([
      math.sin(direction.theta) * math.cos(direction.phi),
      direction.y_direction_cosine,
      direction.z_direction_cosine,
  ])

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
"""Effective-power beam shortlisting and the large-array dominance probe."""
from __future__ import annotations

import csv
import dataclasses
import math
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING

import numpy as np

from mmbeam import channel
from mmbeam import codebook
from mmbeam import exceptions
from mmbeam import geometry
from mmbeam import search
from mmbeam import sounding

if TYPE_CHECKING:
  from _typeshed import StrOrBytesPath
  from numpy.typing import NDArray

  FloatArray = NDArray[np.float64]

PROBE_FILE_ENCODING = 'utf-8'
PROBE_FILE_HEADER = ('n', 'beam_kind', 'beam_index', 'p_eff')
DEFAULT_PROBE_SIDES = (4, 8, 16)
DEFAULT_PROBE_MAGNITUDES = (1.0, 0.6, 0.35)
DEFAULT_PROBE_SEPARATION = 0.25
_PROBE_AZIMUTHS = (-60.0, 60.0)
_PROBE_ELEVATIONS = (60.0, 120.0)


@dataclasses.dataclass(frozen=True, eq=False)
class EffectivePowerProfile:
  rx_powers: FloatArray
  tx_powers: FloatArray


def effective_power_rx(t: sounding.MeasurementTensor) -> FloatArray:
  """P_rx(l): mean of |h[i, j, l, bT]|^2 over i, j and bT."""
  return np.mean(np.abs(t.values)**2, axis=(0, 1, 3))


def effective_power_tx(t: sounding.MeasurementTensor) -> FloatArray:
  """P_tx(k): mean of |h[i, j, bR, k]|^2 over i, j and bR."""
  return np.mean(np.abs(t.values)**2, axis=(0, 1, 2))


def effective_power_profile(
    t: sounding.MeasurementTensor) -> EffectivePowerProfile:
  return EffectivePowerProfile(effective_power_rx(t), effective_power_tx(t))


def top_p(powers: Sequence[float] | FloatArray, p: int) -> tuple[int, ...]:
  """Indices of the p largest powers, ascending. Equal powers favour the lower
  index.

  Raises:
    SubsetSizeError: If p is outside [1, len(powers)].
  """
  powers = np.asarray(powers, dtype=float)
  if not 1 <= p <= len(powers):
    raise exceptions.SubsetSizeError(p, len(powers))
  order = np.argsort(-powers, kind='stable')
  return tuple(sorted(int(index) for index in order[:p]))


def dominant_beams(
    t: sounding.MeasurementTensor,
    p: int,
    sides: search.Sides = search.Sides.BOTH,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
  """Receive and transmit candidate subsets for a restricted search.

  With sides RX only the receive side is shortlisted and every transmit beam
  stays a candidate.
  """
  rx = top_p(effective_power_rx(t), p)
  if sides == search.Sides.BOTH:
    tx = top_p(effective_power_tx(t), p)
  else:
    tx = tuple(range(t.n_tx_beams))
  return rx, tx


@dataclasses.dataclass(frozen=True, eq=False)
class Lemma1Report:
  """Effective powers of one probe size.

  Attributes:
    n_antennas: Antennas per subarray, n_side squared.
    rx_powers: Receive effective powers per codebook beam.
    tx_powers: Transmit effective powers per codebook beam.
    aoa_beams: Receive codebook index of each ray's AoA.
    aod_beams: Transmit codebook index of each ray's AoD.
    ray_powers: |G_r|^2 per ray.
  """
  n_antennas: int
  rx_powers: FloatArray
  tx_powers: FloatArray
  aoa_beams: tuple[int, ...]
  aod_beams: tuple[int, ...]
  ray_powers: FloatArray

  @property
  def rx_dominance_ratio(self) -> float:
    return _dominance_ratio(self.rx_powers, self.aoa_beams)

  @property
  def tx_dominance_ratio(self) -> float:
    return _dominance_ratio(self.tx_powers, self.aod_beams)

  @property
  def rx_ordered(self) -> bool:
    return _follows_ray_powers(self.rx_powers, self.aoa_beams,
                               self.ray_powers)

  @property
  def tx_ordered(self) -> bool:
    return _follows_ray_powers(self.tx_powers, self.aod_beams,
                               self.ray_powers)


def _dominance_ratio(powers: FloatArray, path_beams: Sequence[int]) -> float:
  """Weakest on-path beam power over the strongest off-path beam power."""
  off_path = np.ones(len(powers), dtype=bool)
  off_path[list(path_beams)] = False
  if not off_path.any():
    return math.inf
  strongest_off = float(powers[off_path].max())
  weakest_on = float(powers[list(path_beams)].min())
  if strongest_off == 0:
    return math.inf
  return weakest_on / strongest_off


def _follows_ray_powers(powers: FloatArray, path_beams: Sequence[int],
                        ray_powers: FloatArray) -> bool:
  order = np.argsort(-ray_powers, kind='stable')
  beam_powers = powers[np.asarray(path_beams)[order]]
  return bool(np.all(np.diff(beam_powers) <= 0))


def _path_beams(cb: codebook.RFCodebook,
                directions: Iterable[geometry.AnglePair],
                side: str) -> tuple[int, ...]:
  indices: list[int] = []
  for ray_index, direction in enumerate(directions):
    beam = cb.index_of(direction)
    if beam is None:
      raise exceptions.CodebookMissingAoAError(side, ray_index)
    indices.append(beam)
  return tuple(indices)


def lemma1_probe(
    rays: Sequence[channel.Ray],
    rx_codebook: codebook.RFCodebook,
    tx_codebook: codebook.RFCodebook,
    n_sides: Sequence[int] = DEFAULT_PROBE_SIDES,
    n_subarrays: int = 2,
    noise: sounding.NoiseModel | None = None,
) -> list[Lemma1Report]:
  """Effective powers of a fixed ray set on growing square subarrays.

  For every n_side, both ends use n_subarrays contiguous subarrays of
  n_side x n_side half-wavelength planar arrays. The noiseless ray-expansion
  tensor (plus noise, when given) is reduced to effective powers.

  Args:
    rays: The channel rays; directions are reused unchanged for every size.
    rx_codebook: Must contain every ray AoA exactly.
    tx_codebook: Must contain every ray AoD exactly.
    n_sides: Increasing antennas per subarray side.
    n_subarrays: Subarrays per end averaged over.
    noise: Optional measurement noise.

  Returns:
    One report per entry of n_sides.

  Raises:
    CodebookMissingAoAError: If a ray direction is absent from a codebook.
  """
  aoa_beams = _path_beams(rx_codebook, (ray.aoa for ray in rays), 'rx')
  aod_beams = _path_beams(tx_codebook, (ray.aod for ray in rays), 'tx')
  ray_powers = np.array([ray.gain_magnitude**2 for ray in rays])
  reports: list[Lemma1Report] = []
  for n_side in n_sides:
    layout = geometry.SubarrayLayout.contiguous_along_y(
        geometry.PlanarArray(n_side, n_side), n_subarrays)
    ch = channel.ChannelRealization(tuple(rays), layout, layout)
    t = sounding.measure_ray_expansion(ch, tx_codebook, rx_codebook)
    if noise is not None:
      t = sounding.add_noise(t, noise)
    profile = effective_power_profile(t)
    reports.append(
        Lemma1Report(
            n_antennas=n_side * n_side,
            rx_powers=profile.rx_powers,
            tx_powers=profile.tx_powers,
            aoa_beams=aoa_beams,
            aod_beams=aod_beams,
            ray_powers=ray_powers,
        ))
  return reports


def write_probe_csv(reports: Iterable[Lemma1Report],
                    path: StrOrBytesPath) -> None:
  """One 'n,beam_kind,beam_index,p_eff' line per beam, side and probe size.

  beam_kind is rx_aoa, rx_other, tx_aod or tx_other.
  """
  with open(path, 'w', encoding=PROBE_FILE_ENCODING, newline='') as f:
    w = csv.writer(f, lineterminator='\n')
    w.writerow(PROBE_FILE_HEADER)
    for report in reports:
      for side, on_path, powers, beams in (
          ('rx', 'aoa', report.rx_powers, report.aoa_beams),
          ('tx', 'aod', report.tx_powers, report.aod_beams),
      ):
        for index, power in enumerate(powers):
          kind = f'{side}_{on_path}' if index in beams else f'{side}_other'
          w.writerow([report.n_antennas, kind, index, f'{power:.12g}'])


def _direction_cosine_distance(dir1: geometry.AnglePair,
                               dir2: geometry.AnglePair) -> float:
  return math.hypot(dir1.y_direction_cosine - dir2.y_direction_cosine,
                    dir1.z_direction_cosine - dir2.z_direction_cosine)


def draw_probe_channel(
    rng: np.random.Generator,
    ray_magnitudes: Sequence[float] = DEFAULT_PROBE_MAGNITUDES,
    n_off_path: int = 8,
    min_separation: float = DEFAULT_PROBE_SEPARATION,
) -> tuple[tuple[channel.Ray, ...], codebook.RFCodebook, codebook.RFCodebook]:
  """Random rays plus codebooks holding their exact AoAs and AoDs.

  Directions are uniform over azimuth [-60, 60] and elevation [60, 120]
  degrees. On each side the ray directions and n_off_path further beams are
  drawn by rejection so that any two are at least min_separation apart in
  (y, z) direction cosines, the coordinates a yz-plane array resolves.

  Returns:
    (rays, rx_codebook, tx_codebook), codebook beam r being ray r's
    direction for r < len(ray_magnitudes).
  """

  def separated_directions(count: int) -> list[geometry.AnglePair]:
    directions: list[geometry.AnglePair] = []
    while len(directions) < count:
      candidate = geometry.AnglePair.from_degrees(
          float(rng.uniform(*_PROBE_AZIMUTHS)),
          float(rng.uniform(*_PROBE_ELEVATIONS)))
      if all(
          _direction_cosine_distance(candidate, d) >= min_separation
          for d in directions):
        directions.append(candidate)
    return directions

  n_rays = len(ray_magnitudes)
  rx_beams = separated_directions(n_rays + n_off_path)
  tx_beams = separated_directions(n_rays + n_off_path)
  rays = tuple(
      channel.Ray(
          gain_magnitude=float(magnitude),
          initial_phase=float(rng.uniform(0, 2 * math.pi)),
          delay=0.0,
          doppler=0.0,
          aoa=rx_beams[r],
          aod=tx_beams[r],
      ) for r, magnitude in enumerate(ray_magnitudes))
  return (rays, codebook.RFCodebook(tuple(rx_beams)),
          codebook.RFCodebook(tuple(tx_beams)))

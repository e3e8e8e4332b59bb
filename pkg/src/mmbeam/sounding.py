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
"""CSI-RS beam-pair sounding.

A measurement tensor holds h[i, j, bR, bT], the channel seen by receive
subarray i steering beam bR while transmit subarray j sends a unit pilot on
beam bT. Two independent routes produce it: projecting the MIMO matrix through
RF precoders, and summing the per-ray expansion.
"""
from __future__ import annotations

import csv
import dataclasses
import math
from typing import TYPE_CHECKING

import numpy as np

from mmbeam import channel
from mmbeam import codebook
from mmbeam import exceptions
from mmbeam import geometry

if TYPE_CHECKING:
  from _typeshed import StrOrBytesPath
  from numpy.typing import NDArray

  ComplexArray = NDArray[np.complex128]

TENSOR_FILE_ENCODING = 'utf-8'
TENSOR_FILE_HEADER = ('i', 'j', 'b_rx', 'b_tx', 're', 'im')


@dataclasses.dataclass(frozen=True, eq=False)
class MeasurementTensor:
  """Complex CSI-RS samples indexed [rx subarray, tx subarray, rx beam, tx
  beam].

  Attributes:
    values: Array of shape (rx subarrays, tx subarrays, rx beams, tx beams).
    noise_variance: Variance of the additive noise already in values.
  """
  values: ComplexArray
  noise_variance: float = 0.0

  def __post_init__(self):
    if self.values.ndim != 4:
      raise exceptions.DimensionMismatchError('Measurement tensor rank', 4,
                                              self.values.ndim)
    if self.noise_variance < 0:
      raise exceptions.InvalidConfigError('noise_variance',
                                          self.noise_variance,
                                          'must be non-negative')

  @property
  def shape(self) -> tuple[int, int, int, int]:
    n_rx_sa, n_tx_sa, n_rx_beams, n_tx_beams = self.values.shape
    return n_rx_sa, n_tx_sa, n_rx_beams, n_tx_beams

  @property
  def n_rx_subarrays(self) -> int:
    return self.shape[0]

  @property
  def n_tx_subarrays(self) -> int:
    return self.shape[1]

  @property
  def n_rx_beams(self) -> int:
    return self.shape[2]

  @property
  def n_tx_beams(self) -> int:
    return self.shape[3]


@dataclasses.dataclass(frozen=True)
class NoiseModel:
  """Circularly-symmetric complex Gaussian noise of variance sigma2, drawn from
  a caller-owned generator."""
  sigma2: float
  rng: np.random.Generator

  def __post_init__(self):
    if self.sigma2 < 0:
      raise exceptions.InvalidConfigError('sigma2', self.sigma2,
                                          'must be non-negative')


def _uniform_precoders(layout: geometry.SubarrayLayout,
                       cb: codebook.RFCodebook) -> ComplexArray:
  """RF precoders with every subarray on the same beam, stacked per beam."""
  return np.stack([
      codebook.rf_precoder_matrix(
          layout, cb, codebook.RFAssignment((b,) * layout.n_subarrays))
      for b in range(len(cb))
  ])


def measure_direct(
    h: ComplexArray,
    tx_layout: geometry.SubarrayLayout,
    rx_layout: geometry.SubarrayLayout,
    tx_codebook: codebook.RFCodebook,
    rx_codebook: codebook.RFCodebook,
) -> MeasurementTensor:
  """Noiseless tensor h[i, j, bR, bT] = [F_R(bR)^H H F_T(bT)](i, j).

  Raises:
    DimensionMismatchError: If H does not match the two layouts.
  """
  expected = (rx_layout.n_antennas, tx_layout.n_antennas)
  if h.shape != expected:
    raise exceptions.DimensionMismatchError('Channel matrix shape', expected,
                                            h.shape)
  f_rx = _uniform_precoders(rx_layout, rx_codebook)
  f_tx = _uniform_precoders(tx_layout, tx_codebook)
  values = np.einsum('bai,ac,dcj->ijbd', f_rx.conj(), h, f_tx)
  return MeasurementTensor(values)


def measure_ray_expansion(
    ch: channel.ChannelRealization,
    tx_codebook: codebook.RFCodebook,
    rx_codebook: codebook.RFCodebook,
) -> MeasurementTensor:
  """Noiseless tensor summed ray by ray from subarray phases and per-subarray
  beam projections."""
  terms = channel.beamformed_ray_terms(ch, list(rx_codebook),
                                       list(tx_codebook))
  return MeasurementTensor(terms.sum(axis=0))


def add_noise(t: MeasurementTensor, nm: NoiseModel) -> MeasurementTensor:
  """Adds one independent CN(0, sigma2) draw to every entry.

  Draws are taken in C order of the tensor, so a fixed generator state gives a
  fixed result. A zero variance returns the tensor unchanged and consumes
  nothing from the generator.
  """
  if nm.sigma2 == 0:
    return t
  scale = math.sqrt(nm.sigma2 / 2)
  noise = nm.rng.normal(scale=scale, size=(2,) + t.values.shape)
  return MeasurementTensor(t.values + noise[0] + 1j * noise[1],
                           t.noise_variance + nm.sigma2)


def save_tensor(t: MeasurementTensor, path: StrOrBytesPath) -> None:
  """Writes one 'i,j,b_rx,b_tx,re,im' line per entry."""
  with open(path, 'w', encoding=TENSOR_FILE_ENCODING, newline='') as f:
    w = csv.writer(f, lineterminator='\n')
    w.writerow(TENSOR_FILE_HEADER)
    for index in np.ndindex(*t.shape):
      value = complex(t.values[index])
      w.writerow([*index, repr(value.real), repr(value.imag)])

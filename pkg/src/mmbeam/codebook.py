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
"""RF beam codebooks, baseband precoder codebooks and RF precoder assembly."""
from __future__ import annotations

import dataclasses
import math
from collections.abc import Iterable, Iterator
from typing import TYPE_CHECKING

import numpy as np

from mmbeam import exceptions
from mmbeam import geometry

if TYPE_CHECKING:
  from _typeshed import StrOrBytesPath
  from numpy.typing import NDArray

  ComplexArray = NDArray[np.complex128]

CODEBOOK_FILE_ENCODING = 'utf-8'
_COMMENT = '#'
_COLUMN_NORM_TOLERANCE = 1e-9
BROADSIDE_ELEVATION = math.pi / 2


@dataclasses.dataclass(frozen=True)
class RFCodebook:
  """Ordered set of analog beam directions one subarray can steer to."""
  beams: tuple[geometry.AnglePair, ...]

  def __post_init__(self):
    if not self.beams:
      raise exceptions.InvalidConfigError('beams', self.beams,
                                          'codebook must not be empty')
    if len(set(self.beams)) != len(self.beams):
      raise exceptions.InvalidConfigError('beams', self.beams,
                                          'beams must be distinct')

  def __len__(self) -> int:
    return len(self.beams)

  def __getitem__(self, index: int) -> geometry.AnglePair:
    if not 0 <= index < len(self.beams):
      raise exceptions.BeamIndexError('RF codebook', index, len(self.beams))
    return self.beams[index]

  def __iter__(self) -> Iterator[geometry.AnglePair]:
    return iter(self.beams)

  def subset(self, indices: Iterable[int]) -> RFCodebook:
    return RFCodebook(tuple(self[index] for index in indices))

  def index_of(self, direction: geometry.AnglePair) -> int | None:
    """Index of a beam pointing exactly at direction, if any."""
    try:
      return self.beams.index(direction)
    except ValueError:
      return None


@dataclasses.dataclass(frozen=True, eq=False)
class BBCodebook:
  """Baseband precoders, each an (n_sa, n_layers) matrix of unit total power
  shared evenly by its layers, so every column has norm 1/sqrt(n_layers)."""
  matrices: tuple[ComplexArray, ...]

  def __post_init__(self):
    if not self.matrices:
      raise exceptions.InvalidConfigError('matrices', self.matrices,
                                          'codebook must not be empty')
    shape = self.matrices[0].shape
    for index, matrix in enumerate(self.matrices):
      if matrix.ndim != 2 or matrix.shape != shape:
        raise exceptions.DimensionMismatchError(
            f'Baseband precoder {index}', shape, matrix.shape)
      norms = np.linalg.norm(matrix, axis=0)
      if not np.allclose(norms,
                         1 / math.sqrt(matrix.shape[1]),
                         atol=_COLUMN_NORM_TOLERANCE):
        raise exceptions.InvalidConfigError(
            f'matrices[{index}]', matrix,
            'columns must have norm 1/sqrt(n_layers)')

  def __len__(self) -> int:
    return len(self.matrices)

  def __getitem__(self, index: int) -> ComplexArray:
    if not 0 <= index < len(self.matrices):
      raise exceptions.BeamIndexError('Baseband codebook', index,
                                      len(self.matrices))
    return self.matrices[index]

  @property
  def n_subarrays(self) -> int:
    return self.matrices[0].shape[0]

  @property
  def n_layers(self) -> int:
    return self.matrices[0].shape[1]

  def stacked(self) -> ComplexArray:
    """All precoders as one (entries, n_sa, n_layers) array."""
    return np.stack(self.matrices)


@dataclasses.dataclass(frozen=True)
class RFAssignment:
  """Codebook beam index chosen by each subarray."""
  beam_indices: tuple[int, ...]

  def __len__(self) -> int:
    return len(self.beam_indices)

  def __iter__(self) -> Iterator[int]:
    return iter(self.beam_indices)

  def validate(self, n_subarrays: int, codebook_size: int) -> None:
    """
    Raises:
      DimensionMismatchError: If the assignment does not cover every subarray.
      BeamIndexError: If an index falls outside the codebook.
    """
    if len(self.beam_indices) != n_subarrays:
      raise exceptions.DimensionMismatchError('RF assignment length',
                                              n_subarrays,
                                              len(self.beam_indices))
    for index in self.beam_indices:
      if not 0 <= index < codebook_size:
        raise exceptions.BeamIndexError('RF assignment', index, codebook_size)


def uniform_codebook(sector_start: float,
                     sector_end: float,
                     n_beams: int,
                     elevation: float = BROADSIDE_ELEVATION) -> RFCodebook:
  """Beams at the midpoints of n_beams equal azimuth bins of a sector.

  Args:
    sector_start: Lower sector edge, radians.
    sector_end: Upper sector edge, radians.
    n_beams: Number of bins.
    elevation: Common elevation of every beam.

  Returns:
    RFCodebook with strictly increasing azimuths.

  Raises:
    InvalidConfigError: If n_beams < 1 or the sector is empty.
  """
  if n_beams < 1:
    raise exceptions.InvalidConfigError('n_beams', n_beams,
                                        'at least one beam is required')
  if sector_end <= sector_start:
    raise exceptions.InvalidConfigError('sector', (sector_start, sector_end),
                                        'sector end must exceed its start')
  width = (sector_end - sector_start) / n_beams
  return RFCodebook(
      tuple(
          geometry.AnglePair(sector_start + (m + 0.5) * width, elevation)
          for m in range(n_beams)))


def rf_precoder_matrix(layout: geometry.SubarrayLayout, cb: RFCodebook,
                       asg: RFAssignment) -> ComplexArray:
  """Block-diagonal RF precoder of shape (n_antennas, n_subarrays).

  Column s holds the steering vector of beam asg[s] in the rows owned by
  subarray s and zeros elsewhere, so F^H F is the identity.
  """
  asg.validate(layout.n_subarrays, len(cb))
  n_ant = layout.n_antennas_per_subarray
  f = np.zeros((layout.n_antennas, layout.n_subarrays), dtype=complex)
  for s, beam_index in enumerate(asg):
    f[s * n_ant:(s + 1) * n_ant, s] = geometry.steering_vector(
        layout.subarray, cb[beam_index])
  return f


_TWO_PORT_RANK2 = (
    np.eye(2, dtype=complex) / math.sqrt(2),
    np.array([[1, 1], [1, -1]], dtype=complex) / 2,
    np.array([[1, 1], [1j, -1j]], dtype=complex) / 2,
)
_TWO_PORT_RANK1 = tuple(
    np.array([[1], [phase]], dtype=complex) / math.sqrt(2)
    for phase in (1, -1, 1j, -1j))
_BUILTIN_BB_CODEBOOKS = {
    (2, 2): _TWO_PORT_RANK2,
    (2, 1): _TWO_PORT_RANK1,
}


def default_bb_codebook(n_sa: int = 2, n_layers: int = 2) -> BBCodebook:
  """Two-port LTE precoders: three rank-2 matrices or four rank-1 vectors.

  Raises:
    UnsupportedCodebookSizeError: For any other (n_sa, n_layers).
  """
  try:
    matrices = _BUILTIN_BB_CODEBOOKS[(n_sa, n_layers)]
  except KeyError as e:
    raise exceptions.UnsupportedCodebookSizeError(n_sa, n_layers) from e
  return BBCodebook(tuple(m.copy() for m in matrices))


def nearest_beam(cb: RFCodebook, direction: geometry.AnglePair) -> int:
  """Index of the beam with the smallest great-circle distance to direction.
  Ties go to the lower index."""
  distances = [geometry.angular_separation(beam, direction) for beam in cb]
  return int(np.argmin(distances))


def _content_lines(path: StrOrBytesPath) -> Iterator[str]:
  """Stripped lines of a codebook file with comments removed. Blank lines are
  kept as ''."""
  with open(path, encoding=CODEBOOK_FILE_ENCODING) as f:
    for line in f:
      line = line.split(_COMMENT, 1)[0].strip()
      yield line


def _parse_complex(token: str) -> complex:
  try:
    return complex(token.replace(' ', ''))
  except ValueError as e:
    raise exceptions.InvalidConfigError('codebook entry', token,
                                        'expected a complex like 1-0.5j') from e


def load_bb_codebook(path: StrOrBytesPath) -> BBCodebook:
  """Reads baseband precoders from a text file.

  Each matrix is a block of rows separated from the next by a blank line; a
  row is a comma separated list of complex values such as '0.5+0.5j'.

  Raises:
    InvalidConfigError: On unparsable entries, ragged rows or an empty file.
    DimensionMismatchError: If matrices differ in shape.
  """
  blocks: list[list[list[complex]]] = [[]]
  for line in _content_lines(path):
    if not line:
      if blocks[-1]:
        blocks.append([])
      continue
    blocks[-1].append([_parse_complex(token) for token in line.split(',')])
  matrices: list[ComplexArray] = []
  for rows in blocks:
    if not rows:
      continue
    if len({len(row) for row in rows}) != 1:
      raise exceptions.InvalidConfigError('codebook block', rows,
                                          'rows differ in length')
    matrices.append(np.array(rows, dtype=complex))
  return BBCodebook(tuple(matrices))


def load_rf_codebook(path: StrOrBytesPath) -> RFCodebook:
  """Reads beams from 'phi_deg, theta_deg' lines."""
  beams: list[geometry.AnglePair] = []
  for line in _content_lines(path):
    if not line:
      continue
    tokens = line.split(',')
    if len(tokens) != 2:
      raise exceptions.InvalidConfigError('RF codebook line', line,
                                          'expected phi_deg, theta_deg')
    try:
      phi_deg, theta_deg = (float(token) for token in tokens)
    except ValueError as e:
      raise exceptions.InvalidConfigError('RF codebook line', line,
                                          'non-numeric angle') from e
    beams.append(geometry.AnglePair.from_degrees(phi_deg, theta_deg))
  return RFCodebook(tuple(beams))

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
"""Joint search over baseband and per-subarray RF precoders.

Every search maximises the mutual information of the compressed channel
H_c = M P, where M(i, j) is the measured coefficient for the RF beams picked
by receive subarray i and transmit subarray j, and P is a baseband precoder.
Candidates are enumerated in lexicographic (bb_index, tx_assignment,
rx_assignment) order and the first maximiser wins.
"""
from __future__ import annotations

import dataclasses
import enum
import fractions
import math
from collections.abc import Iterable
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from mmbeam import codebook
from mmbeam import exceptions
from mmbeam import sounding

if TYPE_CHECKING:
  from numpy.typing import NDArray

  ComplexArray = NDArray[np.complex128]
  FloatArray = NDArray[np.float64]

DEFAULT_COMBINATION_CAP = 2**24
DEFAULT_CHUNK_SIZE = 2**16
# Mutual information values closer than this are treated as equal so the
# lexicographic tie-break is not decided by rounding.
TIE_TOLERANCE = 1e-10


class Sides(enum.StrEnum):
  """Which ends of the link a beam reduction is applied to."""
  RX = 'rx'
  BOTH = 'both'


@dataclasses.dataclass(frozen=True)
class PrecoderSelection:
  bb_index: int
  tx_assignment: codebook.RFAssignment
  rx_assignment: codebook.RFAssignment

  def key(self) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    return (self.bb_index, self.tx_assignment.beam_indices,
            self.rx_assignment.beam_indices)


@dataclasses.dataclass(frozen=True)
class SearchResult:
  selection: PrecoderSelection
  mutual_info: float
  combinations_evaluated: int


def compressed_channel(t: sounding.MeasurementTensor, sel: PrecoderSelection,
                       bb: codebook.BBCodebook) -> ComplexArray:
  """H_c of shape (rx subarrays, layers) for one selection.

  Raises:
    BeamIndexError: If an index of sel is outside its codebook.
    DimensionMismatchError: If an assignment or the baseband codebook does
      not match the tensor.
  """
  n_rx_sa, n_tx_sa, n_rx_beams, n_tx_beams = t.shape
  sel.rx_assignment.validate(n_rx_sa, n_rx_beams)
  sel.tx_assignment.validate(n_tx_sa, n_tx_beams)
  if bb.n_subarrays != n_tx_sa:
    raise exceptions.DimensionMismatchError('Baseband precoder rows', n_tx_sa,
                                            bb.n_subarrays)
  rx = np.asarray(sel.rx_assignment.beam_indices)
  tx = np.asarray(sel.tx_assignment.beam_indices)
  m = t.values[np.arange(n_rx_sa)[:, np.newaxis],
               np.arange(n_tx_sa)[np.newaxis, :], rx[:, np.newaxis],
               tx[np.newaxis, :]]
  return m @ bb[sel.bb_index]


def _check_sigma2(sigma2: float) -> None:
  if not sigma2 > 0:
    raise exceptions.InvalidConfigError('sigma2', sigma2, 'must be positive')


def mutual_information(h_c: ComplexArray, sigma2: float) -> float:
  """log2 det(I + H_c^H H_c / sigma2) in bits/s/Hz, via singular values."""
  _check_sigma2(sigma2)
  singular_values = scipy.linalg.svdvals(np.atleast_2d(h_c))
  return float(np.sum(np.log2(1 + singular_values**2 / sigma2)))


def _batched_mutual_information(h_c: ComplexArray,
                                sigma2: float) -> FloatArray:
  singular_values = np.linalg.svd(h_c, compute_uv=False)
  return np.sum(np.log2(1 + singular_values**2 / sigma2), axis=-1)


def selection_mutual_information(t: sounding.MeasurementTensor,
                                 sel: PrecoderSelection,
                                 bb: codebook.BBCodebook,
                                 sigma2: float) -> float:
  """Mutual information a fixed selection achieves on tensor t."""
  return mutual_information(compressed_channel(t, sel, bb), sigma2)


def combination_count(n_rx_candidates: int, n_rx_subarrays: int,
                      n_tx_candidates: int, n_tx_subarrays: int,
                      n_bb: int) -> int:
  """Exact number of joint precoder choices,
  n_rx^N_rx_sa * n_tx^N_tx_sa * n_bb."""
  return (n_rx_candidates**n_rx_subarrays * n_tx_candidates**n_tx_subarrays *
          n_bb)


def complexity_reduction(k_p: int, k: int) -> fractions.Fraction:
  """Ratio K_P / K as an exact fraction."""
  return fractions.Fraction(k_p, k)


def _candidate_array(candidates: Iterable[int], size: int,
                     side: str) -> NDArray[np.intp]:
  unique = sorted(set(candidates))
  if not unique:
    raise exceptions.EmptyCandidateSetError(side)
  for index in unique:
    if not 0 <= index < size:
      raise exceptions.BeamIndexError(f'{side} candidate', index, size)
  return np.asarray(unique, dtype=np.intp)


def restricted_search(
    t: sounding.MeasurementTensor,
    bb: codebook.BBCodebook,
    sigma2: float,
    rx_candidates: Iterable[int],
    tx_candidates: Iterable[int],
    cap: int = DEFAULT_COMBINATION_CAP,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> SearchResult:
  """Best selection whose RF beams all come from the candidate subsets.

  Every subarray of a side draws from the same candidate subset, so the
  number of combinations is
  |rx|^N_rx_sa * |tx|^N_tx_sa * len(bb). Combinations are evaluated in
  vectorised chunks of at most chunk_size.

  Args:
    t: Measured, possibly noisy, tensor.
    bb: Baseband codebook.
    sigma2: Noise variance used in the objective.
    rx_candidates: Receive beam indices. Duplicates are ignored.
    tx_candidates: Transmit beam indices. Duplicates are ignored.
    cap: Largest number of combinations allowed.
    chunk_size: Combinations evaluated per vectorised step.

  Returns:
    The best selection, its mutual information on t and the number of
    combinations evaluated.

  Raises:
    EmptyCandidateSetError: If a candidate subset is empty.
    BeamIndexError: If a candidate is outside the codebook.
    ResourceCapExceededError: If the number of combinations exceeds cap.
  """
  _check_sigma2(sigma2)
  n_rx_sa, n_tx_sa, n_rx_beams, n_tx_beams = t.shape
  if bb.n_subarrays != n_tx_sa:
    raise exceptions.DimensionMismatchError('Baseband precoder rows', n_tx_sa,
                                            bb.n_subarrays)
  rx_cands = _candidate_array(rx_candidates, n_rx_beams, 'rx')
  tx_cands = _candidate_array(tx_candidates, n_tx_beams, 'tx')
  k = combination_count(len(rx_cands), n_rx_sa, len(tx_cands), n_tx_sa,
                        len(bb))
  if k > cap:
    raise exceptions.ResourceCapExceededError(k, cap)

  shape = ((len(bb),) + (len(tx_cands),) * n_tx_sa +
           (len(rx_cands),) * n_rx_sa)
  precoders = bb.stacked()
  rx_rows = np.arange(n_rx_sa)[np.newaxis, :, np.newaxis]
  tx_cols = np.arange(n_tx_sa)[np.newaxis, np.newaxis, :]
  best_flat = -1
  best_mi = -math.inf
  for start in range(0, k, chunk_size):
    flat = np.arange(start, min(k, start + chunk_size))
    digits = np.unravel_index(flat, shape)
    bb_index = digits[0]
    tx_beams = tx_cands[np.stack(digits[1:1 + n_tx_sa], axis=-1)]
    rx_beams = rx_cands[np.stack(digits[1 + n_tx_sa:], axis=-1)]
    m = t.values[rx_rows, tx_cols, rx_beams[:, :, np.newaxis],
                 tx_beams[:, np.newaxis, :]]
    mi = _batched_mutual_information(m @ precoders[bb_index], sigma2)
    chunk_max = float(mi.max())
    if chunk_max > best_mi + TIE_TOLERANCE:
      first = int(np.flatnonzero(mi >= chunk_max - TIE_TOLERANCE)[0])
      best_flat = int(flat[first])
      best_mi = float(mi[first])

  digits = np.unravel_index(best_flat, shape)
  selection = PrecoderSelection(
      bb_index=int(digits[0]),
      tx_assignment=codebook.RFAssignment(
          tuple(int(tx_cands[d]) for d in digits[1:1 + n_tx_sa])),
      rx_assignment=codebook.RFAssignment(
          tuple(int(rx_cands[d]) for d in digits[1 + n_tx_sa:])),
  )
  return SearchResult(selection, best_mi, k)


def exhaustive_search(
    t: sounding.MeasurementTensor,
    bb: codebook.BBCodebook,
    sigma2: float,
    cap: int = DEFAULT_COMBINATION_CAP,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> SearchResult:
  """Best selection over every RF beam and baseband precoder."""
  return restricted_search(t, bb, sigma2, range(t.n_rx_beams),
                           range(t.n_tx_beams), cap, chunk_size)


def random_subsets(
    n_rx_beams: int,
    n_tx_beams: int,
    p: int,
    rng: np.random.Generator,
    sides: Sides = Sides.BOTH,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
  """p distinct receive beams and, with sides BOTH, p distinct transmit beams
  drawn uniformly without replacement. Receive beams are drawn first.

  Raises:
    SubsetSizeError: If p is outside [1, codebook size] on a reduced side.
  """
  sizes = [n_rx_beams] + ([n_tx_beams] if sides == Sides.BOTH else [])
  for size in sizes:
    if not 1 <= p <= size:
      raise exceptions.SubsetSizeError(p, size)
  rx = tuple(sorted(int(b) for b in rng.choice(n_rx_beams, p, replace=False)))
  if sides == Sides.BOTH:
    tx = tuple(
        sorted(int(b) for b in rng.choice(n_tx_beams, p, replace=False)))
  else:
    tx = tuple(range(n_tx_beams))
  return rx, tx


def random_subset_search(
    t: sounding.MeasurementTensor,
    bb: codebook.BBCodebook,
    sigma2: float,
    p: int,
    rng: np.random.Generator,
    sides: Sides = Sides.BOTH,
    cap: int = DEFAULT_COMBINATION_CAP,
) -> SearchResult:
  """Restricted search over randomly drawn beam subsets of size p."""
  rx, tx = random_subsets(t.n_rx_beams, t.n_tx_beams, p, rng, sides)
  return restricted_search(t, bb, sigma2, rx, tx, cap)

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
"""Definition of Mmbeam exceptions and warnings."""
import functools
import warnings
from collections.abc import Callable, Iterable
from typing import Any, ParamSpec, Self, TypeVar

_P = ParamSpec('_P')
_R = TypeVar('_R')


def propagate_warnings(
    stack_level: int) -> Callable[[Callable[_P, _R]], Callable[_P, _R]]:
  """Captures output warnings and adjusts the context line of the warning to
  reflect the frame specified by stack_level."""

  def decorator(function: Callable[_P, _R]) -> Callable[_P, _R]:

    @functools.wraps(function)
    def capture_and_raise_warnings(*args: _P.args, **kwargs: _P.kwargs) -> _R:
      captured: list[warnings.WarningMessage] = []
      try:
        with warnings.catch_warnings(record=True) as captured:
          warnings.simplefilter('always')
          return function(*args, **kwargs)
      finally:
        # Also re-emitted when function raises.
        for warning in captured:
          warnings.warn(warning.message,
                        warning.category,
                        stacklevel=stack_level)

    return capture_and_raise_warnings

  return decorator


class InvalidConfigError(ValueError):
  """Mmbeam exception for a configuration value which cannot be used to build
  a simulation object."""

  def __init__(self, field: str, value: Any, reason: str):
    """
    Args:
      field: Name of the offending configuration field, e.g. 'n_clusters' or
        'experiment.trials'
      value: The rejected value
      reason: Human readable constraint that was violated
    """
    super().__init__(field, value, reason)
    self.field = field
    self.value = value
    self.reason = reason

  def __str__(self) -> str:
    return f'Invalid value for {self.field} ({self.reason}): {self.value!r}'


class UndefinedBoundError(ValueError):
  """Mmbeam exception when a sidelobe bound has a vanishing denominator."""

  def __init__(self, bound_name: str, phase_difference: float):
    super().__init__(bound_name, phase_difference)
    self.bound_name = bound_name
    self.phase_difference = phase_difference

  def __str__(self) -> str:
    return (f'Bound {self.bound_name} is undefined: phase difference '
            f'{self.phase_difference} is a multiple of 2*pi')


class BeamIndexError(IndexError):
  """Mmbeam exception for a beam, subarray or codebook index outside the range
  of the codebook it refers to."""

  def __init__(self, context_message: str, index: int, size: int):
    super().__init__(context_message, index, size)
    self.index = index
    self.size = size
    self.message: str = (f'{context_message}: index {index} outside '
                         f'[0, {size - 1}]')

  def __str__(self) -> str:
    return self.message


class DimensionMismatchError(ValueError):
  """Mmbeam exception for arrays whose shapes disagree with the geometry they
  are used with."""

  def __init__(self, context_message: str, expected: Any, actual: Any):
    super().__init__(context_message, expected, actual)
    self.expected = expected
    self.actual = actual
    self.message: str = (f'{context_message}: expected {expected} but '
                         f'instead got {actual}')

  def __str__(self) -> str:
    return self.message


class UnsupportedCodebookSizeError(ValueError):
  """Mmbeam exception when no built-in baseband codebook exists for the
  requested dimensions."""

  def __init__(self, n_sa: int, n_layers: int):
    super().__init__(n_sa, n_layers)
    self.n_sa = n_sa
    self.n_layers = n_layers

  def __str__(self) -> str:
    return (f'No built-in baseband codebook for {self.n_sa} subarrays and '
            f'{self.n_layers} layers. Supply a codebook file instead')


class EmptyCandidateSetError(ValueError):
  """Mmbeam exception for an empty set of beam candidates."""

  def __init__(self, side: str):
    super().__init__(side)
    self.side = side

  def __str__(self) -> str:
    return f'Candidate beam set for the {self.side} side is empty'


class SubsetSizeError(ValueError):
  """Mmbeam exception for a subset size P outside [1, codebook size]."""

  def __init__(self, p: int, size: int):
    super().__init__(p, size)
    self.p = p
    self.size = size

  def __str__(self) -> str:
    return f'Subset size {self.p} must lie in [1, {self.size}]'


class ResourceCapExceededError(Exception):
  """Mmbeam exception for a precoder search larger than the configured cap."""

  def __init__(self, combinations: int, cap: int):
    super().__init__(combinations, cap)
    self.combinations = combinations
    self.cap = cap

  def __str__(self) -> str:
    return (f'Search over {self.combinations} precoder combinations exceeds '
            f'the cap of {self.cap}')


class LayoutMismatchError(ValueError):
  """Mmbeam exception for a subarray triple whose displacements disagree with
  the receive layout."""

  def __init__(self, subarray_index: int, expected: Any, actual: Any):
    super().__init__(subarray_index, expected, actual)
    self.subarray_index = subarray_index
    self.expected = expected
    self.actual = actual

  def __str__(self) -> str:
    return (f'Subarray {self.subarray_index} is displaced by {self.actual} '
            f'but the triple expects {self.expected}')


class CodebookMissingAoAError(ValueError):
  """Mmbeam exception when a probe codebook lacks a channel ray direction."""

  def __init__(self, side: str, ray_index: int):
    super().__init__(side, ray_index)
    self.side = side
    self.ray_index = ray_index

  def __str__(self) -> str:
    kind = 'AoA' if self.side == 'rx' else 'AoD'
    return (f'The {self.side} codebook has no beam at the {kind} of ray '
            f'{self.ray_index}')


class AllEstimatesDiscardedError(Exception):
  """Mmbeam exception when every AoA candidate pair was rejected."""

  def __init__(self, discarded: int):
    super().__init__(discarded)
    self.discarded = discarded

  def __str__(self) -> str:
    return (f'All {self.discarded} AoA candidate pairs were discarded; no '
            f'estimate is available')


class MissingBaselineError(KeyError):
  """Mmbeam exception when a gap table is requested without exhaustive-search
  rows to compare against."""

  def __init__(self, baseline: str):
    super().__init__(baseline)
    self.baseline = baseline

  def __str__(self) -> str:
    return f'Result rows contain no {self.baseline} baseline'


class DegenerateDopplerWarning(Warning):
  """Mmbeam warning when rays share a doppler rate, so the expected cross
  correlation keeps a cross term that the analytic value omits."""

  def __init__(self, ray_pairs: Iterable[tuple[int, int]]):
    self.ray_pairs = tuple(ray_pairs)
    self.message: str = self._create_message()

  def __str__(self) -> str:
    return self.message

  def _create_message(self) -> str:
    pairs = ' '.join(f'({p},{q})' for p, q in self.ray_pairs)
    return (f'Rays share a doppler rate; analytic correlations omit their '
            f'cross terms: {pairs}')


class DiscardedEstimateWarning(Warning):
  """Mmbeam warning when a beam pair does not yield an AoA estimate."""

  def __init__(self, beam_pair: tuple[int, int], reason: str):
    """
    Args:
      beam_pair: (tx_beam, rx_beam) pair the estimate was derived from
      reason: Short description, e.g. 'elevation argument outside [-1, 1]'
    """
    self.beam_pair = beam_pair
    self.reason = reason
    self.message: str = self._create_message()

  def __str__(self) -> str:
    return self.message

  def _create_message(self) -> str:
    return (f'Discarded AoA estimate from beam pair {self.beam_pair}: '
            f'{self.reason}')


class DuplicateEstimateWarning(Warning):
  """Mmbeam warning when an AoA estimate duplicates an accepted one and is
  merged into it. Informs of the estimate which was kept."""

  def __init__(self, duplicate_value: Any, replacement_value: Any):
    self.duplicate_value = duplicate_value
    self.replacement_value = replacement_value
    self.message: str = self._create_message()

  def _create_message(self) -> str:
    return (f'Duplicate AoA estimate (merged into: {self.replacement_value}): '
            f'{self.duplicate_value}')

  def __str__(self) -> str:
    return self.message


class UnusedConfigKeyWarning(Warning):
  """Mmbeam warning when a configuration file carries keys that no section
  consumes."""

  def __init__(self, context_message: Any, leftovers: Iterable[Any]):
    self.leftovers = leftovers
    self.message: str = self._create_message(context_message)

  def __str__(self) -> str:
    return self.message

  @classmethod
  def from_iterable(
      cls,
      context_message: str,
      iterable: Iterable[Any],
      delimiter: str = ' ',
  ) -> Self:
    """Formats an iterable of leftover keys into one delimited string.

    Args:
      context_message: Where the keys were found, e.g. 'Section [channel]'
      iterable: Each value is cast into a string and joined using delimiter.
      delimiter: The delimiter by which all values in iterable are joined.

    Returns:
      An UnusedConfigKeyWarning composed of passed arguments.
    """
    delimited_leftovers = delimiter.join(sorted(str(v) for v in iterable))
    return cls(context_message, delimited_leftovers)

  def _create_message(self, context_message: Any) -> str:
    return (f'{context_message}. The following keys were not used: '
            f'{self.leftovers}')

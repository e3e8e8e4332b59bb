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
"""Long-term AoA estimation from cross-subarray correlations.

Three receive subarrays steer the same beam: a reference, one displaced by
d_y along y and one displaced by d_z along z. Rays rotate at their own
doppler rates, so over many CSI-RS instances the cross terms between rays
average out and the phase of each cross-subarray correlation is a
power-weighted mix of the per-ray subarray phases. The strongest beam pairs
then yield elevation from the z correlation and azimuth from the y
correlation.

Without a z-displaced subarray the elevation of the receive codebook beam is
used and only azimuth is estimated.
"""
from __future__ import annotations

import csv
import dataclasses
import itertools
import math
import warnings
from collections.abc import Iterable, Sequence
from typing import TYPE_CHECKING

import numpy as np

from mmbeam import channel
from mmbeam import codebook
from mmbeam import exceptions
from mmbeam import geometry
from mmbeam import sounding

if TYPE_CHECKING:
  from _typeshed import StrOrBytesPath
  from numpy.typing import NDArray

  ComplexArray = NDArray[np.complex128]
  FloatArray = NDArray[np.float64]

ESTIMATE_FILE_ENCODING = 'utf-8'
ESTIMATE_FILE_HEADER = ('m', 'j_m', 'k_m', 'power', 'theta_deg', 'phi_deg')
DUPLICATE_SEPARATION = math.radians(1.0)
_ZERO_CORRELATION = 1e-12
_MIN_SINE = 1e-9
_OFFSET_TOLERANCE = 1e-12
_DOPPLER_TOLERANCE = 1e-9
# Frames between the warning and the caller of a decorated function.
_STACK_LEVEL_TO_CALLER = 2


@dataclasses.dataclass(frozen=True)
class SubarrayTriple:
  """Receive subarrays used for one set of correlations.

  Attributes:
    ref_index: Reference subarray.
    y_index: Subarray displaced by (d_y, 0) from the reference.
    z_index: Subarray displaced by (0, d_z) from the reference, or None for
      azimuth-only estimation.
    d_y: y displacement in wavelengths.
    d_z: z displacement in wavelengths, None when z_index is None.
  """
  ref_index: int
  y_index: int
  z_index: int | None
  d_y: float
  d_z: float | None = None

  def __post_init__(self):
    if (self.z_index is None) != (self.d_z is None):
      raise exceptions.InvalidConfigError('d_z', self.d_z,
                                          'z_index and d_z go together')
    if self.d_y == 0 or self.d_z == 0:
      raise exceptions.InvalidConfigError('displacement', (self.d_y, self.d_z),
                                          'displacements must be non-zero')

  @property
  def has_elevation(self) -> bool:
    return self.z_index is not None

  def validate(self, layout: geometry.SubarrayLayout) -> None:
    """
    Raises:
      LayoutMismatchError: If a displacement differs from the layout offsets.
    """
    indices = [self.ref_index, self.y_index]
    if self.z_index is not None:
      indices.append(self.z_index)
    for index in indices:
      if not 0 <= index < layout.n_subarrays:
        raise exceptions.BeamIndexError('Receive subarray', index,
                                        layout.n_subarrays)
    ref = np.asarray(layout.offsets[self.ref_index], dtype=float)
    expected = [(self.y_index, (self.d_y, 0.0))]
    if self.z_index is not None and self.d_z is not None:
      expected.append((self.z_index, (0.0, self.d_z)))
    for index, displacement in expected:
      actual = np.asarray(layout.offsets[index], dtype=float) - ref
      if not np.allclose(actual, displacement, atol=_OFFSET_TOLERANCE,
                         rtol=0):
        raise exceptions.LayoutMismatchError(index, displacement,
                                             tuple(actual))

  @classmethod
  def from_layout(cls,
                  layout: geometry.SubarrayLayout,
                  ref_index: int = 0) -> SubarrayTriple:
    """Picks the nearest pure-y and pure-z neighbours of ref_index.

    Raises:
      InvalidConfigError: If no subarray is displaced purely along y.
    """
    ref = np.asarray(layout.offsets[ref_index], dtype=float)
    y_partner: tuple[float, int] | None = None
    z_partner: tuple[float, int] | None = None
    for index, offset in enumerate(layout.offsets):
      d_y, d_z = np.asarray(offset, dtype=float) - ref
      if index == ref_index:
        continue
      if abs(d_z) <= _OFFSET_TOLERANCE and d_y > 0:
        if y_partner is None or d_y < y_partner[0]:
          y_partner = (float(d_y), index)
      elif abs(d_y) <= _OFFSET_TOLERANCE and d_z > 0:
        if z_partner is None or d_z < z_partner[0]:
          z_partner = (float(d_z), index)
    if y_partner is None:
      raise exceptions.InvalidConfigError(
          'rx offsets', layout.offsets,
          f'no subarray is displaced along y from subarray {ref_index}')
    if z_partner is None:
      return cls(ref_index, y_partner[1], None, y_partner[0])
    return cls(ref_index, y_partner[1], z_partner[1], y_partner[0],
               z_partner[0])


@dataclasses.dataclass(frozen=True, eq=False)
class CorrelationStats:
  """Per (tx beam j, rx beam k) power and cross-subarray correlations.

  Attributes:
    p_avg: Mean power at the reference subarray, shape (tx beams, rx beams).
    c21: Mean of z_y z_ref^*, same shape.
    c31: Mean of z_z z_ref^*, or None without a z-displaced subarray.
    m: Number of CSI-RS instances, None for expectation values.
  """
  p_avg: FloatArray
  c21: ComplexArray
  c31: ComplexArray | None
  m: int | None


@dataclasses.dataclass(frozen=True)
class AoAEstimate:
  theta_hat: float
  phi_hat: float
  source_pair: tuple[int, int]
  power: float

  @property
  def direction(self) -> geometry.AnglePair:
    return geometry.AnglePair(self.phi_hat, self.theta_hat)


def _as_triples(
    triples: SubarrayTriple | Sequence[SubarrayTriple],
    layout: geometry.SubarrayLayout,
) -> list[SubarrayTriple]:
  if isinstance(triples, SubarrayTriple):
    triples = [triples]
  triples = list(triples)
  if not triples:
    raise exceptions.InvalidConfigError('triples', triples,
                                        'at least one triple is required')
  first = triples[0]
  for triple in triples:
    triple.validate(layout)
    if (triple.d_y, triple.d_z) != (first.d_y, first.d_z):
      raise exceptions.InvalidConfigError(
          'triples', triples, 'combined triples must share displacements')
  return triples


def _shared_doppler_pairs(dopplers: FloatArray) -> list[tuple[int, int]]:
  return [(p, q)
          for p, q in itertools.combinations(range(len(dopplers)), 2)
          if abs(dopplers[p] - dopplers[q]) < _DOPPLER_TOLERANCE]


@exceptions.propagate_warnings(_STACK_LEVEL_TO_CALLER)
def analytic_stats(
    ch: channel.ChannelRealization,
    triples: SubarrayTriple | Sequence[SubarrayTriple],
    tx_codebook: codebook.RFCodebook,
    rx_codebook: codebook.RFCodebook,
    sigma2: float = 0.0,
    tx_subarray: int = 0,
) -> CorrelationStats:
  """Expectation values of the correlations with vanishing cross-ray terms.

  With A_r the post-beamforming amplitude of ray r at the reference
  subarray, p_avg = sum |A_r|^2 + sigma2 and each correlation is
  sum |A_r|^2 e^{j gamma_r}, gamma_r being the subarray phase difference of
  ray r over the triple's displacement.

  Args:
    ch: Channel realization.
    triples: One triple or several with identical displacements, averaged.
    tx_codebook: Transmit beams, indexed by j.
    rx_codebook: Receive beams, indexed by k.
    sigma2: Noise variance added to the power.
    tx_subarray: Transmit subarray sending the CSI-RS.

  Returns:
    CorrelationStats with m set to None.

  Raises:
    LayoutMismatchError: If a triple disagrees with the receive layout.

  Warns:
    DegenerateDopplerWarning: If two rays share a doppler rate.
  """
  triples = _as_triples(triples, ch.rx_layout)
  if not 0 <= tx_subarray < ch.tx_layout.n_subarrays:
    raise exceptions.BeamIndexError('Transmit subarray', tx_subarray,
                                    ch.tx_layout.n_subarrays)
  if shared := _shared_doppler_pairs(ch.dopplers):
    warnings.warn(exceptions.DegenerateDopplerWarning(shared))
  terms = channel.beamformed_ray_terms(ch, list(rx_codebook),
                                       list(tx_codebook))[:, :, tx_subarray]
  # (rays, tx beams, rx beams)
  ray_power = np.abs(terms[:, 0]).transpose(0, 2, 1)**2
  phases = geometry.subarray_phases(ch.rx_layout, ch.aoas)
  c21 = np.zeros(ray_power.shape[1:], dtype=complex)
  c31 = np.zeros(ray_power.shape[1:], dtype=complex)
  for triple in triples:
    ref = phases[:, triple.ref_index]
    c21 += np.einsum('rjk,r->jk', ray_power,
                     np.exp(1j * (phases[:, triple.y_index] - ref)))
    if triple.z_index is not None:
      c31 += np.einsum('rjk,r->jk', ray_power,
                       np.exp(1j * (phases[:, triple.z_index] - ref)))
  p_avg = ray_power.sum(axis=0) + sigma2
  return CorrelationStats(
      p_avg=p_avg,
      c21=c21 / len(triples),
      c31=c31 / len(triples) if triples[0].has_elevation else None,
      m=None,
  )


def accumulate_stats(
    ch: channel.ChannelRealization,
    triples: SubarrayTriple | Sequence[SubarrayTriple],
    tx_codebook: codebook.RFCodebook,
    rx_codebook: codebook.RFCodebook,
    times: Sequence[float] | FloatArray,
    noise: sounding.NoiseModel | None = None,
    tx_subarray: int = 0,
) -> CorrelationStats:
  """Empirical correlations over CSI-RS instances at the given times.

  Every receive subarray steers the same beam at each instance. Samples are
  time_coefficient values plus, when noise is given, independent CN(0,
  sigma2) draws per subarray, beam pair and instance.

  Raises:
    InvalidConfigError: If times is empty.
    LayoutMismatchError: If a triple disagrees with the receive layout.
  """
  triples = _as_triples(triples, ch.rx_layout)
  times = np.asarray(times, dtype=float)
  if times.size < 1:
    raise exceptions.InvalidConfigError('times', times,
                                        'at least one instance is required')
  if not 0 <= tx_subarray < ch.tx_layout.n_subarrays:
    raise exceptions.BeamIndexError('Transmit subarray', tx_subarray,
                                    ch.tx_layout.n_subarrays)
  terms = channel.beamformed_ray_terms(ch, list(rx_codebook),
                                       list(tx_codebook))[:, :, tx_subarray]
  rotation = channel.doppler_rotation(ch, times)
  # (rx subarrays, tx beams, rx beams, instances)
  z = np.einsum('rikj,rm->ijkm', terms, rotation)
  if noise is not None and noise.sigma2 > 0:
    scale = math.sqrt(noise.sigma2 / 2)
    draws = noise.rng.normal(scale=scale, size=(2,) + z.shape)
    z = z + draws[0] + 1j * draws[1]
  p_avg = np.zeros(z.shape[1:3])
  c21 = np.zeros(z.shape[1:3], dtype=complex)
  c31 = np.zeros(z.shape[1:3], dtype=complex)
  for triple in triples:
    z_ref = z[triple.ref_index]
    p_avg += np.mean(np.abs(z_ref)**2, axis=-1)
    c21 += np.mean(z[triple.y_index] * z_ref.conj(), axis=-1)
    if triple.z_index is not None:
      c31 += np.mean(z[triple.z_index] * z_ref.conj(), axis=-1)
  n = len(triples)
  return CorrelationStats(
      p_avg=p_avg / n,
      c21=c21 / n,
      c31=c31 / n if triples[0].has_elevation else None,
      m=int(times.size),
  )


def unwrap_phase(wrapped: float,
                 expected: float,
                 period: float = 2 * math.pi) -> float:
  """wrapped + period * alpha, alpha the integer bringing it nearest to
  expected."""
  alpha = round((expected - wrapped) / period)
  return wrapped + period * alpha


def _discard(pair: tuple[int, int], reason: str) -> None:
  warnings.warn(exceptions.DiscardedEstimateWarning(pair, reason))


@exceptions.propagate_warnings(_STACK_LEVEL_TO_CALLER)
def estimate_aoas(
    stats: CorrelationStats,
    triple: SubarrayTriple,
    rx_codebook: codebook.RFCodebook,
    p: int,
) -> list[AoAEstimate]:
  """AoA estimates from the p strongest beam pairs, strongest first.

  For each pair (j, k) the phase of c31 is unwrapped against
  k d_z cos(theta_k) of receive beam k and inverted for elevation; the phase
  of c21 is then unwrapped against k d_y sin(theta_hat) sin(phi_k) and
  inverted for azimuth. Estimates within one degree of an earlier estimate
  are merged into it.

  Args:
    stats: Correlations from analytic_stats or accumulate_stats.
    triple: The geometry the correlations were measured with.
    rx_codebook: Receive beams that stats is indexed by.
    p: Number of strongest beam pairs to examine.

  Returns:
    At most p estimates inside the visible region.

  Raises:
    SubsetSizeError: If p < 1.
    AllEstimatesDiscardedError: If no examined pair yields an estimate.

  Warns:
    DiscardedEstimateWarning: For every pair without an estimate.
    DuplicateEstimateWarning: For every merged estimate.
  """
  n_pairs = stats.p_avg.size
  if p < 1:
    raise exceptions.SubsetSizeError(p, n_pairs)
  order = np.argsort(-stats.p_avg, axis=None, kind='stable')[:p]
  kd_y = geometry.WAVENUMBER * triple.d_y
  estimates: list[AoAEstimate] = []
  discarded = 0
  for flat in order:
    j, k = (int(v) for v in np.unravel_index(flat, stats.p_avg.shape))
    beam = rx_codebook[k]
    theta_hat = _estimate_elevation(stats, triple, beam, (j, k))
    phi_hat = None
    if theta_hat is not None:
      phi_hat = _estimate_azimuth(complex(stats.c21[j, k]), kd_y, theta_hat,
                                  beam, (j, k))
    if theta_hat is None or phi_hat is None:
      discarded += 1
      continue
    estimate = AoAEstimate(theta_hat, phi_hat, (j, k),
                           float(stats.p_avg[j, k]))
    kept = next((e for e in estimates if geometry.angular_separation(
        e.direction, estimate.direction) < DUPLICATE_SEPARATION), None)
    if kept is not None:
      warnings.warn(exceptions.DuplicateEstimateWarning(estimate, kept))
      continue
    estimates.append(estimate)
  if not estimates:
    raise exceptions.AllEstimatesDiscardedError(discarded)
  return estimates


def _estimate_elevation(stats: CorrelationStats, triple: SubarrayTriple,
                        beam: geometry.AnglePair,
                        pair: tuple[int, int]) -> float | None:
  if stats.c31 is None or triple.d_z is None:
    return beam.theta
  c31 = complex(stats.c31[pair])
  if abs(c31) < _ZERO_CORRELATION:
    _discard(pair, 'zero z correlation')
    return None
  kd_z = geometry.WAVENUMBER * triple.d_z
  phase = unwrap_phase(float(np.angle(c31)), kd_z * beam.z_direction_cosine)
  argument = phase / kd_z
  if abs(argument) > 1:
    _discard(pair, 'elevation argument outside [-1, 1]')
    return None
  return math.acos(argument)


def _estimate_azimuth(c21: complex, kd_y: float, theta_hat: float,
                      beam: geometry.AnglePair,
                      pair: tuple[int, int]) -> float | None:
  if abs(c21) < _ZERO_CORRELATION:
    _discard(pair, 'zero y correlation')
    return None
  sine = math.sin(theta_hat)
  if sine < _MIN_SINE:
    _discard(pair, 'azimuth undefined along the z axis')
    return None
  phase = unwrap_phase(float(np.angle(c21)),
                       kd_y * sine * math.sin(beam.phi))
  argument = phase / (kd_y * sine)
  if abs(argument) > 1:
    _discard(pair, 'azimuth argument outside [-1, 1]')
    return None
  return math.asin(argument)


def steer_candidates(
    estimates: Sequence[AoAEstimate]) -> codebook.RFCodebook:
  """Receive codebook steering exactly at the estimated directions.

  Raises:
    EmptyCandidateSetError: If estimates is empty.
  """
  if not estimates:
    raise exceptions.EmptyCandidateSetError('rx')
  return codebook.RFCodebook(tuple(e.direction for e in estimates))


def nearest_codebook_candidates(estimates: Sequence[AoAEstimate],
                                rx_codebook: codebook.RFCodebook
                               ) -> tuple[int, ...]:
  """Receive codebook beams nearest to the estimates, ascending and without
  repeats."""
  if not estimates:
    raise exceptions.EmptyCandidateSetError('rx')
  return tuple(
      sorted({codebook.nearest_beam(rx_codebook, e.direction)
              for e in estimates}))


def write_estimates_csv(estimates: Iterable[AoAEstimate],
                        path: StrOrBytesPath) -> None:
  with open(path, 'w', encoding=ESTIMATE_FILE_ENCODING, newline='') as f:
    w = csv.writer(f, lineterminator='\n')
    w.writerow(ESTIMATE_FILE_HEADER)
    for m, e in enumerate(estimates):
      w.writerow([
          m, e.source_pair[0], e.source_pair[1], f'{e.power:.12g}',
          f'{math.degrees(e.theta_hat):.12g}',
          f'{math.degrees(e.phi_hat):.12g}'
      ])

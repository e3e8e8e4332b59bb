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
"""Monte Carlo comparison of precoder search strategies over an SNR sweep.

Seeding: trial t uses the first 32-bit word of
SeedSequence(master_seed, spawn_key=(t,)) as its seed. Inside a trial, the
channel is drawn from SeedSequence(seed, spawn_key=(0,)), measurement noise
at SNR index s from (1, s), random subsets from (2, s, p), empirical AoA
statistics from (3, s) and noise of AoA-steered measurements from
(3, s, p). Results therefore do not depend on the order trials run in.
"""
from __future__ import annotations

import collections
import concurrent.futures
import configparser
import csv
import dataclasses
import enum
import fractions
import logging
import math
import warnings
from collections.abc import Callable, Iterable, Mapping, Sequence
from typing import TYPE_CHECKING, Any

import numpy as np

from mmbeam import aoa
from mmbeam import beamsel
from mmbeam import channel
from mmbeam import codebook
from mmbeam import exceptions
from mmbeam import geometry
from mmbeam import search
from mmbeam import sounding

if TYPE_CHECKING:
  from _typeshed import StrOrBytesPath

logger = logging.getLogger(__name__)

RESULT_FILE_ENCODING = 'utf-8'
RESULT_FILE_HEADER = ('snr_db', 'method', 'p', 'trial', 'mutual_info_bps_hz',
                      'combinations', 'seed')
SUMMARY_FILE_HEADER = ('method', 'p', 'snr_db', 'mean_mutual_info_bps_hz',
                       'mean_combinations', 'gap_db', 'mi_difference',
                       'complexity_ratio')
FULL_SEARCH_LABEL = 'full'
_FLOAT_FORMAT = '{:.12g}'
_SNR_DECIMALS = 9

_CHANNEL_STREAM = 0
_NOISE_STREAM = 1
_RANDOM_STREAM = 2
_AOA_STREAM = 3


class Method(enum.StrEnum):
  EXHAUSTIVE = 'exhaustive'
  EFFPOWER = 'effpower'
  AOA = 'aoa'
  RANDOM = 'random'


_METHOD_ORDER = {method: rank for rank, method in enumerate(Method)}


class Scoring(enum.StrEnum):
  """GENIE scores a selection on the noiseless tensor, NOISY reports the
  objective value the search itself saw."""
  GENIE = 'genie'
  NOISY = 'noisy'


class AoAStats(enum.StrEnum):
  ANALYTIC = 'analytic'
  EMPIRICAL = 'empirical'


class AoASteering(enum.StrEnum):
  """PRECISE steers receive beams at the estimates, NEAREST snaps them to the
  receive codebook."""
  PRECISE = 'precise'
  NEAREST = 'nearest'


@dataclasses.dataclass(frozen=True)
class ArrayConfig:
  """Both ends are ULAs (n_z == 1 by default) cut into contiguous
  subarrays along y."""
  tx_subarrays: int = 2
  tx_antennas_y: int = 8
  tx_antennas_z: int = 1
  rx_subarrays: int = 2
  rx_antennas_y: int = 4
  rx_antennas_z: int = 1
  spacing_wavelengths: float = 0.5

  def __post_init__(self):
    for name in ('tx_subarrays', 'rx_subarrays'):
      if getattr(self, name) < 1:
        raise exceptions.InvalidConfigError(name, getattr(self, name),
                                            'at least one subarray')

  def tx_layout(self) -> geometry.SubarrayLayout:
    return geometry.SubarrayLayout.contiguous_along_y(
        geometry.PlanarArray(self.tx_antennas_y, self.tx_antennas_z,
                             self.spacing_wavelengths), self.tx_subarrays)

  def rx_layout(self) -> geometry.SubarrayLayout:
    return geometry.SubarrayLayout.contiguous_along_y(
        geometry.PlanarArray(self.rx_antennas_y, self.rx_antennas_z,
                             self.spacing_wavelengths), self.rx_subarrays)


@dataclasses.dataclass(frozen=True)
class CodebookConfig:
  """Angles in degrees. A file path, when set, replaces the uniform
  codebook or the built-in baseband codebook."""
  tx_beams: int = 12
  tx_sector: tuple[float, float] = (-60.0, 60.0)
  rx_beams: int = 8
  rx_sector: tuple[float, float] = (-90.0, 90.0)
  elevation: float = 90.0
  n_layers: int = 2
  tx_codebook_file: str | None = None
  rx_codebook_file: str | None = None
  bb_codebook_file: str | None = None

  def tx_codebook(self) -> codebook.RFCodebook:
    if self.tx_codebook_file:
      return codebook.load_rf_codebook(self.tx_codebook_file)
    return codebook.uniform_codebook(math.radians(self.tx_sector[0]),
                                     math.radians(self.tx_sector[1]),
                                     self.tx_beams,
                                     math.radians(self.elevation))

  def rx_codebook(self) -> codebook.RFCodebook:
    if self.rx_codebook_file:
      return codebook.load_rf_codebook(self.rx_codebook_file)
    return codebook.uniform_codebook(math.radians(self.rx_sector[0]),
                                     math.radians(self.rx_sector[1]),
                                     self.rx_beams,
                                     math.radians(self.elevation))

  def bb_codebook(self, n_tx_subarrays: int) -> codebook.BBCodebook:
    if self.bb_codebook_file:
      return codebook.load_bb_codebook(self.bb_codebook_file)
    return codebook.default_bb_codebook(n_tx_subarrays, self.n_layers)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
  """Everything one run depends on.

  Attributes:
    array: Antenna geometry of both ends.
    codebooks: RF and baseband codebooks.
    cluster: Cluster-ray generator settings.
    snr_db: (min, max, step) of the SNR sweep, inclusive of max.
    trials: Channel realizations per SNR point.
    p_values: Subset sizes for the reduced searches.
    methods: Strategies to run.
    master_seed: Root of every random stream.
    scoring: How the reported mutual information is computed.
    effpower_sides: Ends shortlisted by effective power. Also sets the
      transmit side of aoa and the sides random subsets are drawn on.
    aoa_stats: Analytic expectations or empirical accumulation.
    aoa_steering: Steering mode of the aoa method.
    aoa_instances: CSI-RS instances for empirical statistics.
    aoa_period: Seconds between CSI-RS instances.
    combination_cap: Largest search allowed.
  """
  array: ArrayConfig = ArrayConfig()
  codebooks: CodebookConfig = CodebookConfig()
  cluster: channel.ClusterConfig = channel.ClusterConfig()
  snr_db: tuple[float, float, float] = (0.0, 20.0, 5.0)
  trials: int = 100
  p_values: tuple[int, ...] = (1, 3)
  methods: tuple[Method, ...] = tuple(Method)
  master_seed: int = 0
  scoring: Scoring = Scoring.GENIE
  effpower_sides: search.Sides = search.Sides.BOTH
  aoa_stats: AoAStats = AoAStats.ANALYTIC
  aoa_steering: AoASteering = AoASteering.PRECISE
  aoa_instances: int = 1000
  aoa_period: float = 5e-3
  combination_cap: int = search.DEFAULT_COMBINATION_CAP

  def __post_init__(self):
    if self.trials < 1:
      raise exceptions.InvalidConfigError('experiment.trials', self.trials,
                                          'at least one trial is required')
    snr_min, snr_max, snr_step = self.snr_db
    if not snr_step > 0:
      raise exceptions.InvalidConfigError('experiment.snr_db', self.snr_db,
                                          'step must be positive')
    if snr_max < snr_min:
      raise exceptions.InvalidConfigError('experiment.snr_db', self.snr_db,
                                          'max must not be below min')
    if not self.methods:
      raise exceptions.InvalidConfigError('experiment.methods', self.methods,
                                          'at least one method is required')
    if self.reduced_methods and not self.p_values:
      raise exceptions.InvalidConfigError(
          'experiment.p_values', self.p_values,
          'reduced searches need at least one subset size')
    for p in self.p_values:
      if p < 1:
        raise exceptions.InvalidConfigError('experiment.p_values', p,
                                            'subset sizes must be >= 1')
    if self.aoa_instances < 1:
      raise exceptions.InvalidConfigError('experiment.aoa_instances',
                                          self.aoa_instances,
                                          'at least one instance')
    if not self.aoa_period > 0:
      raise exceptions.InvalidConfigError('experiment.aoa_period',
                                          self.aoa_period, 'must be positive')

  @property
  def reduced_methods(self) -> tuple[Method, ...]:
    return tuple(m for m in self.methods if m != Method.EXHAUSTIVE)

  @property
  def snr_points(self) -> tuple[float, ...]:
    snr_min, snr_max, snr_step = self.snr_db
    count = math.floor((snr_max - snr_min) / snr_step + 1e-9) + 1
    return tuple(
        round(snr_min + i * snr_step, _SNR_DECIMALS) for i in range(count))


@dataclasses.dataclass(frozen=True)
class ResultRow:
  """One mutual-information sample. p is None for the exhaustive search."""
  snr_db: float
  method: Method
  p: int | None
  trial: int
  mutual_info: float
  combinations: int
  seed: int

  def sort_key(self) -> tuple[int, int, float, int]:
    return (_METHOD_ORDER[self.method], -1 if self.p is None else self.p,
            self.snr_db, self.trial)

  def csv_fields(self) -> list[Any]:
    return [
        _FLOAT_FORMAT.format(self.snr_db),
        str(self.method),
        FULL_SEARCH_LABEL if self.p is None else self.p,
        self.trial,
        _FLOAT_FORMAT.format(self.mutual_info),
        self.combinations,
        self.seed,
    ]


@dataclasses.dataclass(frozen=True, eq=False)
class _Setup:
  tx_layout: geometry.SubarrayLayout
  rx_layout: geometry.SubarrayLayout
  tx_codebook: codebook.RFCodebook
  rx_codebook: codebook.RFCodebook
  bb: codebook.BBCodebook
  triple: aoa.SubarrayTriple | None


def _build_setup(cfg: ExperimentConfig) -> _Setup:
  tx_layout = cfg.array.tx_layout()
  rx_layout = cfg.array.rx_layout()
  tx_cb = cfg.codebooks.tx_codebook()
  rx_cb = cfg.codebooks.rx_codebook()
  try:
    bb = cfg.codebooks.bb_codebook(tx_layout.n_subarrays)
  except exceptions.UnsupportedCodebookSizeError as e:
    raise exceptions.InvalidConfigError(
        'codebook.n_layers', (e.n_sa, e.n_layers), str(e)) from e
  if bb.n_subarrays != tx_layout.n_subarrays:
    raise exceptions.InvalidConfigError(
        'codebook.bb_codebook_file', bb.n_subarrays,
        f'precoders need {tx_layout.n_subarrays} rows')
  for p in cfg.p_values if cfg.reduced_methods else ():
    if p > len(rx_cb):
      raise exceptions.InvalidConfigError(
          'experiment.p_values', p, f'exceeds the {len(rx_cb)} rx beams')
    if cfg.effpower_sides == search.Sides.BOTH and p > len(tx_cb):
      raise exceptions.InvalidConfigError(
          'experiment.p_values', p, f'exceeds the {len(tx_cb)} tx beams')
  triple = None
  if Method.AOA in cfg.methods:
    if rx_layout.n_subarrays < 2:
      raise exceptions.InvalidConfigError(
          'array.rx_subarrays', rx_layout.n_subarrays,
          'AoA estimation needs at least two receive subarrays')
    triple = aoa.SubarrayTriple.from_layout(rx_layout)
  return _Setup(tx_layout, rx_layout, tx_cb, rx_cb, bb, triple)


def trial_seed(master_seed: int, trial: int) -> int:
  return int(
      np.random.SeedSequence(master_seed,
                             spawn_key=(trial,)).generate_state(1)[0])


def _stream(seed: int, *key: int) -> np.random.Generator:
  return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


@dataclasses.dataclass(frozen=True)
class TrialOutcome:
  rows: tuple[ResultRow, ...]
  discarded_estimates: int = 0
  merged_estimates: int = 0


class _TrialRunner:
  """Runs every method of one trial at one SNR point."""

  def __init__(self, cfg: ExperimentConfig, setup: _Setup, trial: int):
    self.cfg = cfg
    self.setup = setup
    self.trial = trial
    self.seed = trial_seed(cfg.master_seed, trial)
    self.ch = channel.draw_realization(cfg.cluster, setup.tx_layout,
                                       setup.rx_layout,
                                       _stream(self.seed, _CHANNEL_STREAM))
    self.clean = sounding.measure_ray_expansion(self.ch, setup.tx_codebook,
                                                setup.rx_codebook)

  def run(self) -> list[ResultRow]:
    rows: list[ResultRow] = []
    for s, snr in enumerate(self.cfg.snr_points):
      sigma2 = 10**(-snr / 10)
      noisy = sounding.add_noise(
          self.clean,
          sounding.NoiseModel(sigma2, _stream(self.seed, _NOISE_STREAM, s)))
      for method in self.cfg.methods:
        for p, result, mi in self._run_method(method, s, sigma2, noisy):
          rows.append(
              ResultRow(snr, method, p, self.trial, mi,
                        result.combinations_evaluated, self.seed))
    return rows

  def _score(self, result: search.SearchResult,
             clean: sounding.MeasurementTensor, sigma2: float) -> float:
    if self.cfg.scoring == Scoring.NOISY:
      return result.mutual_info
    return search.selection_mutual_information(clean, result.selection,
                                               self.setup.bb, sigma2)

  def _run_method(
      self, method: Method, s: int, sigma2: float,
      noisy: sounding.MeasurementTensor
  ) -> Iterable[tuple[int | None, search.SearchResult, float]]:
    cap = self.cfg.combination_cap
    bb = self.setup.bb
    sides = self.cfg.effpower_sides
    if method == Method.EXHAUSTIVE:
      result = search.exhaustive_search(noisy, bb, sigma2, cap)
      yield None, result, self._score(result, self.clean, sigma2)
      return
    stats = self._aoa_stats(s, sigma2) if method == Method.AOA else None
    for p in self.cfg.p_values:
      if method == Method.EFFPOWER:
        rx, tx = beamsel.dominant_beams(noisy, p, sides)
        result = search.restricted_search(noisy, bb, sigma2, rx, tx, cap)
      elif method == Method.RANDOM:
        result = search.random_subset_search(
            noisy, bb, sigma2, p,
            _stream(self.seed, _RANDOM_STREAM, s, p), sides, cap)
      else:
        assert stats is not None
        yield self._run_aoa(stats, p, s, sigma2, noisy)
        continue
      yield p, result, self._score(result, self.clean, sigma2)

  def _aoa_stats(self, s: int, sigma2: float) -> aoa.CorrelationStats:
    setup = self.setup
    assert setup.triple is not None
    if self.cfg.aoa_stats == AoAStats.ANALYTIC:
      return aoa.analytic_stats(self.ch, setup.triple, setup.tx_codebook,
                                setup.rx_codebook, sigma2)
    times = self.cfg.aoa_period * np.arange(self.cfg.aoa_instances)
    noise = sounding.NoiseModel(sigma2, _stream(self.seed, _AOA_STREAM, s))
    return aoa.accumulate_stats(self.ch, setup.triple, setup.tx_codebook,
                                setup.rx_codebook, times, noise)

  def _run_aoa(
      self, stats: aoa.CorrelationStats, p: int, s: int, sigma2: float,
      noisy: sounding.MeasurementTensor
  ) -> tuple[int, search.SearchResult, float]:
    setup = self.setup
    cap = self.cfg.combination_cap
    assert setup.triple is not None
    if self.cfg.effpower_sides == search.Sides.BOTH:
      tx = beamsel.top_p(beamsel.effective_power_tx(noisy), p)
    else:
      tx = tuple(range(noisy.n_tx_beams))
    try:
      estimates = aoa.estimate_aoas(stats, setup.triple, setup.rx_codebook, p)
    except exceptions.AllEstimatesDiscardedError:
      logger.debug('Trial %d: no AoA estimate, falling back to effective '
                   'power', self.trial)
      rx = beamsel.top_p(beamsel.effective_power_rx(noisy), p)
      result = search.restricted_search(noisy, setup.bb, sigma2, rx, tx, cap)
      return p, result, self._score(result, self.clean, sigma2)
    if self.cfg.aoa_steering == AoASteering.NEAREST:
      rx = aoa.nearest_codebook_candidates(estimates, setup.rx_codebook)
      result = search.restricted_search(noisy, setup.bb, sigma2, rx, tx, cap)
      return p, result, self._score(result, self.clean, sigma2)
    steered = aoa.steer_candidates(estimates)
    steered_clean = sounding.measure_ray_expansion(self.ch, setup.tx_codebook,
                                                   steered)
    steered_noisy = sounding.add_noise(
        steered_clean,
        sounding.NoiseModel(sigma2, _stream(self.seed, _AOA_STREAM, s, p)))
    result = search.restricted_search(steered_noisy, setup.bb, sigma2,
                                      range(len(steered)), tx, cap)
    return p, result, self._score(result, steered_clean, sigma2)


def run_trial(cfg: ExperimentConfig,
              trial: int,
              setup: _Setup | None = None) -> TrialOutcome:
  """Rows of one trial for every SNR point, method and subset size, with
  counts of AoA candidate pairs that were discarded or merged.

  setup holds the arrays and codebooks of cfg; it is built from cfg, codebook
  files included, when not given.
  """
  if setup is None:
    setup = _build_setup(cfg)
  with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter('always')
    runner = _TrialRunner(cfg, setup, trial)
    rows = runner.run()
  counts = collections.Counter(w.category for w in caught)
  for w in caught:
    if not issubclass(w.category, (exceptions.DiscardedEstimateWarning,
                                   exceptions.DuplicateEstimateWarning)):
      warnings.warn(w.message, w.category, stacklevel=2)
  logger.debug('Trial %d (seed %d): %d rows', trial, runner.seed, len(rows))
  return TrialOutcome(
      tuple(rows),
      discarded_estimates=counts[exceptions.DiscardedEstimateWarning],
      merged_estimates=counts[exceptions.DuplicateEstimateWarning],
  )


_worker_setup: _Setup | None = None


def _init_worker(setup: _Setup) -> None:
  global _worker_setup  # pylint: disable=global-statement
  _worker_setup = setup


def _run_worker_trial(cfg: ExperimentConfig, trial: int) -> TrialOutcome:
  return run_trial(cfg, trial, _worker_setup)


def _log_complexity(cfg: ExperimentConfig, setup: _Setup) -> None:
  n_rx_sa = setup.rx_layout.n_subarrays
  n_tx_sa = setup.tx_layout.n_subarrays
  k = search.combination_count(len(setup.rx_codebook), n_rx_sa,
                               len(setup.tx_codebook), n_tx_sa, len(setup.bb))
  logger.info('Exhaustive search evaluates K = %d combinations', k)
  for p in cfg.p_values if cfg.reduced_methods else ():
    n_tx = p if cfg.effpower_sides == search.Sides.BOTH else len(
        setup.tx_codebook)
    k_p = search.combination_count(p, n_rx_sa, n_tx, n_tx_sa, len(setup.bb))
    ratio = search.complexity_reduction(k_p, k)
    logger.info('P = %d: K_P = %d, K_P/K = %s (%.1fx reduction)', p, k_p,
                ratio, 1 / ratio)


def run_experiment(cfg: ExperimentConfig,
                   workers: int = 1) -> list[ResultRow]:
  """Runs every trial and returns the rows in canonical order.

  Args:
    cfg: The experiment.
    workers: Processes to spread trials over. The output does not depend on
      it.

  Returns:
    Rows sorted by (method, p with the full search first, snr, trial).

  Raises:
    InvalidConfigError: If cfg cannot be realised.
    ResourceCapExceededError: If a search is larger than the cap.
  """
  setup = _build_setup(cfg)
  logger.info('Running %d trials at SNR %s dB with methods %s', cfg.trials,
              ', '.join(_FLOAT_FORMAT.format(s) for s in cfg.snr_points),
              ', '.join(str(m) for m in cfg.methods))
  _log_complexity(cfg, setup)
  trials = range(cfg.trials)
  if workers > 1:
    with concurrent.futures.ProcessPoolExecutor(
        workers, initializer=_init_worker, initargs=(setup,)) as pool:
      outcomes = list(
          pool.map(_run_worker_trial, [cfg] * cfg.trials, trials))
  else:
    outcomes = [run_trial(cfg, trial, setup) for trial in trials]
  discarded = sum(o.discarded_estimates for o in outcomes)
  merged = sum(o.merged_estimates for o in outcomes)
  if discarded:
    logger.warning('%d AoA candidate pairs were discarded over %d trials',
                   discarded, cfg.trials)
  if merged:
    logger.info('%d duplicate AoA estimates were merged', merged)
  rows = [row for o in outcomes for row in o.rows]
  return sorted(rows, key=ResultRow.sort_key)


def write_csv(rows: Iterable[ResultRow], path: StrOrBytesPath) -> None:
  """Writes rows in canonical order with a header line."""
  with open(path, 'w', encoding=RESULT_FILE_ENCODING, newline='') as f:
    w = csv.writer(f, lineterminator='\n')
    w.writerow(RESULT_FILE_HEADER)
    for row in sorted(rows, key=ResultRow.sort_key):
      w.writerow(row.csv_fields())


@dataclasses.dataclass(frozen=True)
class SummaryEntry:
  """Means of one (method, p, snr) cell and its comparison to the
  exhaustive curve.

  gap_db is the extra SNR the method needs to reach the same mean mutual
  information as the exhaustive search; None when it cannot be interpolated.
  """
  method: Method
  p: int | None
  snr_db: float
  mean_mutual_info: float
  mean_combinations: float
  n_trials: int
  gap_db: float | None = None
  mi_difference: float | None = None
  complexity_ratio: fractions.Fraction | None = None


def summarize(rows: Iterable[ResultRow],
              gaps: bool = True) -> list[SummaryEntry]:
  """Per-(method, p, snr) means plus gap and complexity ratio against the
  exhaustive search.

  Raises:
    MissingBaselineError: If gaps is set and no exhaustive rows exist.
  """
  cells: dict[tuple[Method, int | None, float],
              list[ResultRow]] = collections.defaultdict(list)
  for row in rows:
    cells[(row.method, row.p, row.snr_db)].append(row)
  means = {
      key: (float(np.mean([r.mutual_info for r in cell])),
            sum(r.combinations for r in cell), len(cell))
      for key, cell in cells.items()
  }
  baseline = {
      snr: value for (method, _, snr), value in means.items()
      if method == Method.EXHAUSTIVE
  }
  if gaps and not baseline:
    raise exceptions.MissingBaselineError(str(Method.EXHAUSTIVE))
  baseline_snrs = sorted(baseline)
  baseline_mis = [baseline[snr][0] for snr in baseline_snrs]

  entries: list[SummaryEntry] = []
  for key in sorted(means, key=lambda k: (_METHOD_ORDER[k[0]], -1 if k[1] is
                                          None else k[1], k[2])):
    method, p, snr = key
    mean_mi, total_combinations, n = means[key]
    entry = SummaryEntry(method, p, snr, mean_mi, total_combinations / n, n)
    if gaps and snr in baseline:
      base_mi, base_total, base_n = baseline[snr]
      entry = dataclasses.replace(
          entry,
          gap_db=_snr_gap(snr, mean_mi, baseline_snrs, baseline_mis),
          mi_difference=base_mi - mean_mi,
          complexity_ratio=fractions.Fraction(total_combinations * base_n,
                                              base_total * n),
      )
    entries.append(entry)
  return entries


def _snr_gap(snr: float, mean_mi: float, baseline_snrs: Sequence[float],
             baseline_mis: Sequence[float]) -> float | None:
  """snr minus the SNR at which the piecewise-linear baseline reaches
  mean_mi."""
  if len(baseline_snrs) < 2:
    return None
  if not baseline_mis[0] <= mean_mi <= baseline_mis[-1]:
    return None
  if np.any(np.diff(baseline_mis) <= 0):
    return None
  return snr - float(np.interp(mean_mi, baseline_mis, baseline_snrs))


def write_summary_csv(entries: Iterable[SummaryEntry],
                      path: StrOrBytesPath) -> None:

  def optional(value: float | None) -> str:
    return '' if value is None else _FLOAT_FORMAT.format(value)

  with open(path, 'w', encoding=RESULT_FILE_ENCODING, newline='') as f:
    w = csv.writer(f, lineterminator='\n')
    w.writerow(SUMMARY_FILE_HEADER)
    for e in entries:
      w.writerow([
          str(e.method),
          FULL_SEARCH_LABEL if e.p is None else e.p,
          _FLOAT_FORMAT.format(e.snr_db),
          _FLOAT_FORMAT.format(e.mean_mutual_info),
          _FLOAT_FORMAT.format(e.mean_combinations),
          optional(e.gap_db),
          optional(e.mi_difference),
          '' if e.complexity_ratio is None else str(e.complexity_ratio),
      ])


def _parse_pair(text: str) -> tuple[float, float]:
  low, high = (float(v) for v in text.split(','))
  return low, high


def parse_snr(text: str) -> tuple[float, float, float]:
  """'min:max:step', or a single value for one SNR point."""
  parts = [float(v) for v in text.split(':')]
  if len(parts) == 1:
    return parts[0], parts[0], 1.0
  snr_min, snr_max, snr_step = parts
  return snr_min, snr_max, snr_step


def parse_ints(text: str) -> tuple[int, ...]:
  return tuple(int(v) for v in text.split(',') if v.strip())


def parse_methods(text: str) -> tuple[Method, ...]:
  return tuple(Method(v.strip()) for v in text.split(',') if v.strip())


def _parse_bool(text: str) -> bool:
  value = configparser.ConfigParser.BOOLEAN_STATES.get(text.strip().lower())
  if value is None:
    raise ValueError(text)
  return value


def _optional_path(text: str) -> str | None:
  return text.strip() or None


_Parser = Callable[[str], Any]
_ARRAY_KEYS: Mapping[str, tuple[str, _Parser]] = {
    'tx_subarrays': ('tx_subarrays', int),
    'tx_antennas_y': ('tx_antennas_y', int),
    'tx_antennas_z': ('tx_antennas_z', int),
    'rx_subarrays': ('rx_subarrays', int),
    'rx_antennas_y': ('rx_antennas_y', int),
    'rx_antennas_z': ('rx_antennas_z', int),
    'spacing_wavelengths': ('spacing_wavelengths', float),
}
_CODEBOOK_KEYS: Mapping[str, tuple[str, _Parser]] = {
    'tx_beams': ('tx_beams', int),
    'tx_sector_deg': ('tx_sector', _parse_pair),
    'rx_beams': ('rx_beams', int),
    'rx_sector_deg': ('rx_sector', _parse_pair),
    'elevation_deg': ('elevation', float),
    'n_layers': ('n_layers', int),
    'tx_codebook_file': ('tx_codebook_file', _optional_path),
    'rx_codebook_file': ('rx_codebook_file', _optional_path),
    'bb_codebook_file': ('bb_codebook_file', _optional_path),
}
_CHANNEL_KEYS: Mapping[str, tuple[str, _Parser]] = {
    'n_clusters': ('n_clusters', int),
    'rays_per_cluster': ('rays_per_cluster', int),
    'tx_azimuth_range_deg': ('tx_azimuth_range', _parse_pair),
    'tx_elevation_range_deg': ('tx_elevation_range', _parse_pair),
    'rx_azimuth_range_deg': ('rx_azimuth_range', _parse_pair),
    'rx_elevation_range_deg': ('rx_elevation_range', _parse_pair),
    'azimuth_spread_deg': ('azimuth_spread', float),
    'elevation_spread_deg': ('elevation_spread', float),
    'power_decay': ('power_decay', float),
    'max_doppler_hz': ('max_doppler', float),
    'delay_spread_s': ('delay_spread', float),
    'subcarrier_offset_hz': ('subcarrier_offset', float),
    'normalize_drop': ('normalize_drop', _parse_bool),
}
_EXPERIMENT_KEYS: Mapping[str, tuple[str, _Parser]] = {
    'snr_db': ('snr_db', parse_snr),
    'trials': ('trials', int),
    'p_values': ('p_values', parse_ints),
    'methods': ('methods', parse_methods),
    'master_seed': ('master_seed', int),
    'scoring': ('scoring', Scoring),
    'effpower_sides': ('effpower_sides', search.Sides),
    'aoa_stats': ('aoa_stats', AoAStats),
    'aoa_steering': ('aoa_steering', AoASteering),
    'aoa_instances': ('aoa_instances', int),
    'aoa_period_s': ('aoa_period', float),
    'combination_cap': ('combination_cap', int),
}
_SECTIONS: Mapping[str, Mapping[str, tuple[str, _Parser]]] = {
    'array': _ARRAY_KEYS,
    'codebook': _CODEBOOK_KEYS,
    'channel': _CHANNEL_KEYS,
    'experiment': _EXPERIMENT_KEYS,
}


def _section_kwargs(parser: configparser.ConfigParser,
                    section: str) -> dict[str, Any]:
  keys = _SECTIONS[section]
  if not parser.has_section(section):
    return {}
  kwargs: dict[str, Any] = {}
  for key, text in parser.items(section):
    if key not in keys:
      continue
    field, parse = keys[key]
    try:
      kwargs[field] = parse(text)
    except ValueError as e:
      raise exceptions.InvalidConfigError(f'{section}.{key}', text,
                                          'malformed value') from e
  leftovers = set(parser.options(section)) - set(keys)
  if leftovers:
    warnings.warn(
        exceptions.UnusedConfigKeyWarning.from_iterable(
            f'Section [{section}]', leftovers))
  return kwargs


@exceptions.propagate_warnings(2)
def load_config(path: StrOrBytesPath) -> ExperimentConfig:
  """Reads an INI file with [array], [codebook], [channel] and [experiment]
  sections. Missing keys keep their defaults.

  Raises:
    InvalidConfigError: If the file cannot be read or a value is malformed or
      out of range.

  Warns:
    UnusedConfigKeyWarning: For keys and sections nothing consumes.
  """
  parser = configparser.ConfigParser()
  try:
    with open(path, encoding=RESULT_FILE_ENCODING) as f:
      parser.read_file(f)
  except (OSError, configparser.Error) as e:
    raise exceptions.InvalidConfigError('config file', path, str(e)) from e
  unknown_sections = set(parser.sections()) - set(_SECTIONS)
  if unknown_sections:
    warnings.warn(
        exceptions.UnusedConfigKeyWarning.from_iterable(
            'Unknown sections', unknown_sections))
  return ExperimentConfig(
      array=ArrayConfig(**_section_kwargs(parser, 'array')),
      codebooks=CodebookConfig(**_section_kwargs(parser, 'codebook')),
      cluster=channel.ClusterConfig(**_section_kwargs(parser, 'channel')),
      **_section_kwargs(parser, 'experiment'),
  )

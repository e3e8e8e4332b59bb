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
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=redefined-outer-name
import collections
import csv
import dataclasses
import fractions
import logging
import math

import numpy as np
import pytest
import pytest_cases
import scipy.stats

from mmbeam import exceptions
from mmbeam import harness
from mmbeam import search

_CASES = 'test_mmbeam.case_harness'
_FULL_SEARCH_COMBINATIONS = 8**2 * 12**2 * 3


@pytest_cases.fixture
def small_config():
  return harness.ExperimentConfig(trials=2,
                                  snr_db=(0.0, 10.0, 10.0),
                                  p_values=(1, 3),
                                  master_seed=11)


@pytest_cases.fixture
def small_rows(small_config):
  return harness.run_experiment(small_config)


@pytest_cases.fixture
def write_ini(tmp_path):

  def factory(text):
    path = tmp_path / 'experiment.ini'
    path.write_text(text, encoding='utf-8')
    return path

  return factory


@pytest_cases.fixture
def baseline_rows():
  exhaustive = harness.Method.EXHAUSTIVE
  effpower = harness.Method.EFFPOWER
  return [
      harness.ResultRow(0.0, exhaustive, None, 0, 1.0, 100, 1),
      harness.ResultRow(10.0, exhaustive, None, 0, 3.0, 100, 1),
      harness.ResultRow(0.0, effpower, 1, 0, 0.5, 5, 1),
      harness.ResultRow(10.0, effpower, 1, 0, 1.5, 5, 1),
      harness.ResultRow(10.0, effpower, 1, 1, 2.5, 5, 2),
  ]


def _read_csv(path):
  with open(path, encoding='utf-8', newline='') as f:
    return list(csv.reader(f))


class TestExperimentConfig:

  @pytest_cases.parametrize_with_cases('kwargs',
                                       cases=_CASES,
                                       has_tag=['InvalidExperimentConfig'])
  def test_invalid_config(self, kwargs):
    with pytest.raises(exceptions.InvalidConfigError):
      harness.ExperimentConfig(**kwargs)

  def test_exhaustive_only_needs_no_sizes(self):
    cfg = harness.ExperimentConfig(methods=(harness.Method.EXHAUSTIVE,),
                                   p_values=())
    assert cfg.reduced_methods == ()

  @pytest.mark.parametrize('snr_db, expected', [
      ((0.0, 20.0, 5.0), (0.0, 5.0, 10.0, 15.0, 20.0)),
      ((0.0, 1.0, 0.1), tuple(i / 10 for i in range(11))),
      ((3.0, 3.0, 1.0), (3.0,)),
      ((-5.0, 6.0, 5.0), (-5.0, 0.0, 5.0)),
  ])
  def test_snr_points(self, snr_db, expected):
    assert harness.ExperimentConfig(snr_db=snr_db).snr_points == expected

  @pytest_cases.parametrize_with_cases('kwargs',
                                       cases=_CASES,
                                       has_tag=['UnrealisableExperiment'])
  def test_unrealisable_experiment(self, kwargs):
    cfg = harness.ExperimentConfig(trials=1, **kwargs)
    with pytest.raises(exceptions.InvalidConfigError):
      harness.run_experiment(cfg)


class TestTrialSeed:

  def test_trial_seed_is_stable(self):
    assert harness.trial_seed(5, 3) == harness.trial_seed(5, 3)

  def test_trial_seeds_differ(self):
    seeds = {harness.trial_seed(0, trial) for trial in range(100)}
    assert len(seeds) == 100
    assert all(0 <= seed < 2**32 for seed in seeds)

  def test_master_seed_changes_trial_seed(self):
    assert harness.trial_seed(0, 0) != harness.trial_seed(1, 0)


class TestRunExperiment:

  def test_row_count(self, small_config, small_rows):
    per_trial = 1 + len(small_config.reduced_methods) * 2
    assert len(small_rows) == 2 * 2 * per_trial

  def test_rows_in_canonical_order(self, small_rows):
    assert small_rows == sorted(small_rows, key=harness.ResultRow.sort_key)
    assert small_rows[0].method == harness.Method.EXHAUSTIVE
    assert small_rows[0].p is None
    assert small_rows[-1].method == harness.Method.RANDOM

  def test_rows_carry_trial_seed(self, small_config, small_rows):
    for row in small_rows:
      assert row.seed == harness.trial_seed(small_config.master_seed,
                                            row.trial)

  def test_combination_counts(self, small_rows):
    counts = {(r.method, r.p): r.combinations for r in small_rows}
    assert counts[(harness.Method.EXHAUSTIVE, None)] == (
        _FULL_SEARCH_COMBINATIONS)
    for method in (harness.Method.EFFPOWER, harness.Method.RANDOM):
      assert counts[(method, 1)] == 3
      assert counts[(method, 3)] == 3**4 * 3
    assert counts[(harness.Method.AOA, 3)] <= 3**4 * 3

  def test_mutual_information_is_finite(self, small_rows):
    values = np.array([r.mutual_info for r in small_rows])
    assert np.all(np.isfinite(values))
    assert np.all(values >= 0)

  @pytest.mark.io
  def test_same_seed_same_file(self, small_config, small_rows, tmp_path,
                               file_hash):
    first = tmp_path / 'first.csv'
    second = tmp_path / 'second.csv'
    harness.write_csv(small_rows, first)
    harness.write_csv(harness.run_experiment(small_config), second)
    assert file_hash(first) == file_hash(second)

  def test_other_seed_other_rows(self, small_config, small_rows):
    other = harness.run_experiment(
        dataclasses.replace(small_config, master_seed=12))
    assert ([r.mutual_info for r in other] !=
            [r.mutual_info for r in small_rows])

  def test_trials_do_not_depend_on_count(self, small_config, small_rows):
    shorter = harness.run_experiment(
        dataclasses.replace(small_config, trials=1))
    first_trial = [r for r in small_rows if r.trial == 0]
    assert shorter == first_trial

  def test_codebooks_built_once_per_run(self, small_config, mocker):
    tx_spy = mocker.spy(harness.CodebookConfig, 'tx_codebook')
    rx_spy = mocker.spy(harness.CodebookConfig, 'rx_codebook')
    harness.run_experiment(small_config)
    assert tx_spy.call_count == 1
    assert rx_spy.call_count == 1

  def test_single_trial_builds_its_own_setup(self, small_config, small_rows):
    outcome = harness.run_trial(small_config, 1)
    assert sorted(outcome.rows, key=harness.ResultRow.sort_key) == [
        r for r in small_rows if r.trial == 1
    ]

  @pytest.mark.slow
  def test_workers_do_not_change_rows(self, small_config, small_rows):
    assert harness.run_experiment(small_config, workers=2) == small_rows

  @pytest.mark.parametrize('stats', list(harness.AoAStats))
  @pytest.mark.parametrize('steering', list(harness.AoASteering))
  def test_aoa_variants(self, stats, steering):
    cfg = harness.ExperimentConfig(trials=2,
                                   snr_db=(10.0, 10.0, 1.0),
                                   p_values=(2,),
                                   methods=(harness.Method.AOA,),
                                   aoa_stats=stats,
                                   aoa_steering=steering,
                                   aoa_instances=50)
    rows = harness.run_experiment(cfg)
    assert len(rows) == 2
    for row in rows:
      assert 0 < row.combinations <= 2**4 * 3
      assert math.isfinite(row.mutual_info)

  def test_receive_side_only(self):
    cfg = harness.ExperimentConfig(trials=1,
                                   snr_db=(10.0, 10.0, 1.0),
                                   p_values=(2,),
                                   methods=(harness.Method.EFFPOWER,),
                                   effpower_sides=search.Sides.RX)
    (row,) = harness.run_experiment(cfg)
    assert row.combinations == 2**2 * 12**2 * 3

  def test_noisy_scoring_respects_subsets(self):
    cfg = harness.ExperimentConfig(trials=5,
                                   snr_db=(0.0, 20.0, 10.0),
                                   p_values=(1, 3),
                                   methods=(harness.Method.EXHAUSTIVE,
                                            harness.Method.EFFPOWER,
                                            harness.Method.RANDOM),
                                   scoring=harness.Scoring.NOISY)
    cells = {(r.method, r.p, r.snr_db, r.trial): r.mutual_info
             for r in harness.run_experiment(cfg)}
    for snr in cfg.snr_points:
      for trial in range(cfg.trials):
        full = cells[(harness.Method.EXHAUSTIVE, None, snr, trial)]
        three = cells[(harness.Method.EFFPOWER, 3, snr, trial)]
        one = cells[(harness.Method.EFFPOWER, 1, snr, trial)]
        assert full >= three - 1e-9
        assert three >= one - 1e-9
        assert full >= cells[(harness.Method.RANDOM, 3, snr, trial)] - 1e-9

  def test_full_subset_matches_exhaustive(self):
    cfg = harness.ExperimentConfig(trials=3,
                                   snr_db=(0.0, 10.0, 10.0),
                                   p_values=(8,),
                                   methods=(harness.Method.EXHAUSTIVE,
                                            harness.Method.EFFPOWER),
                                   effpower_sides=search.Sides.RX)
    rows = harness.run_experiment(cfg)
    full = [r.mutual_info for r in rows if r.p is None]
    subset = [r.mutual_info for r in rows if r.p == 8]
    assert full == subset

  def test_resource_cap(self):
    cfg = harness.ExperimentConfig(trials=1,
                                   methods=(harness.Method.EXHAUSTIVE,),
                                   combination_cap=1000)
    with pytest.raises(exceptions.ResourceCapExceededError) as e:
      harness.run_experiment(cfg)
    assert e.value.combinations == _FULL_SEARCH_COMBINATIONS

  def test_logs_complexity(self, small_config, caplog):
    caplog.set_level(logging.INFO, logger='mmbeam.harness')
    harness.run_experiment(dataclasses.replace(small_config, trials=1))
    assert f'K = {_FULL_SEARCH_COMBINATIONS}' in caplog.text
    assert 'K_P/K = 1/9216' in caplog.text

  @pytest.mark.slow
  def test_mutual_information_grows_with_snr(self):
    cfg = harness.ExperimentConfig(trials=20,
                                   snr_db=(0.0, 20.0, 20.0),
                                   methods=(harness.Method.EXHAUSTIVE,))
    rows = harness.run_experiment(cfg)
    low = [r.mutual_info for r in rows if r.snr_db == 0.0]
    high = [r.mutual_info for r in rows if r.snr_db == 20.0]
    result = scipy.stats.ttest_ind(high, low, alternative='greater')
    assert result.pvalue < 0.01

  @pytest.mark.slow
  def test_every_method_mean_grows_with_snr(self):
    cfg = harness.ExperimentConfig(trials=10,
                                   snr_db=(0.0, 20.0, 10.0),
                                   p_values=(1, 3),
                                   master_seed=5)
    rows = harness.run_experiment(cfg)
    curves = collections.defaultdict(lambda: collections.defaultdict(list))
    for row in rows:
      curves[(row.method, row.p)][row.snr_db].append(row.mutual_info)
    assert len(curves) == 1 + 3 * 2
    for curve in curves.values():
      means = [np.mean(curve[snr]) for snr in cfg.snr_points]
      assert all(np.diff(means) >= 0)


class TestResultFiles:

  @pytest.mark.io
  def test_result_csv(self, small_rows, tmp_path):
    path = tmp_path / 'results.csv'
    harness.write_csv(small_rows, path)
    rows = _read_csv(path)
    assert tuple(rows[0]) == harness.RESULT_FILE_HEADER
    assert len(rows) == 1 + len(small_rows)
    assert rows[1][:4] == ['0', 'exhaustive', 'full', '0']
    assert rows[1][5] == str(_FULL_SEARCH_COMBINATIONS)

  def test_summary(self, baseline_rows):
    entries = harness.summarize(baseline_rows)
    assert [(e.method, e.p, e.snr_db) for e in entries] == [
        (harness.Method.EXHAUSTIVE, None, 0.0),
        (harness.Method.EXHAUSTIVE, None, 10.0),
        (harness.Method.EFFPOWER, 1, 0.0),
        (harness.Method.EFFPOWER, 1, 10.0),
    ]
    below, matched = entries[2:]
    assert below.gap_db is None
    assert below.mi_difference == pytest.approx(0.5)
    assert matched.mean_mutual_info == pytest.approx(2.0)
    assert matched.n_trials == 2
    assert matched.gap_db == pytest.approx(5.0)
    assert matched.mi_difference == pytest.approx(1.0)
    assert matched.complexity_ratio == fractions.Fraction(1, 20)
    assert entries[0].gap_db == pytest.approx(0.0)
    assert entries[0].complexity_ratio == 1

  def test_summary_without_baseline(self, baseline_rows):
    reduced = [r for r in baseline_rows if r.p is not None]
    with pytest.raises(exceptions.MissingBaselineError):
      harness.summarize(reduced)
    entries = harness.summarize(reduced, gaps=False)
    assert all(e.gap_db is None and e.complexity_ratio is None
               for e in entries)

  def test_single_snr_baseline_has_no_gap(self, baseline_rows):
    rows = [r for r in baseline_rows if r.snr_db == 10.0]
    entries = harness.summarize(rows)
    assert all(e.gap_db is None for e in entries)
    assert entries[-1].mi_difference == pytest.approx(1.0)

  @pytest.mark.io
  def test_summary_csv(self, baseline_rows, tmp_path):
    path = tmp_path / 'summary.csv'
    harness.write_summary_csv(harness.summarize(baseline_rows), path)
    rows = _read_csv(path)
    assert tuple(rows[0]) == harness.SUMMARY_FILE_HEADER
    assert rows[3] == ['effpower', '1', '0', '0.5', '5', '', '0.5', '1/20']
    assert rows[4] == ['effpower', '1', '10', '2', '5', '5', '1', '1/20']


class TestLoadConfig:

  @pytest_cases.parametrize_with_cases('text',
                                       cases=_CASES,
                                       has_tag=['WellFormedConfig'])
  def test_well_formed(self, text, write_ini):
    cfg = harness.load_config(write_ini(text))
    assert cfg.array.rx_subarrays == 3
    assert cfg.array.tx_subarrays == 2
    assert cfg.codebooks.tx_beams == 6
    assert cfg.codebooks.tx_sector == (-45.0, 45.0)
    assert cfg.cluster.n_clusters == 2
    assert cfg.cluster.max_doppler == 50.0
    assert cfg.cluster.normalize_drop is False
    assert cfg.snr_points == (-5.0, 0.0, 5.0)
    assert cfg.trials == 4
    assert cfg.p_values == (2,)
    assert cfg.methods == (harness.Method.EXHAUSTIVE, harness.Method.EFFPOWER)
    assert cfg.scoring == harness.Scoring.NOISY
    assert cfg.effpower_sides == search.Sides.RX
    assert cfg.combination_cap == 100000

  def test_empty_file_gives_defaults(self, write_ini):
    assert harness.load_config(write_ini('')) == harness.ExperimentConfig()

  @pytest_cases.parametrize_with_cases('text',
                                       cases=_CASES,
                                       has_tag=['MalformedConfig'])
  def test_malformed(self, text, write_ini):
    with pytest.raises(exceptions.InvalidConfigError):
      harness.load_config(write_ini(text))

  @pytest_cases.parametrize_with_cases('text',
                                       cases=_CASES,
                                       has_tag=['UnusedConfigKey'])
  def test_unused_keys_warn(self, text, write_ini):
    with pytest.warns(exceptions.UnusedConfigKeyWarning):
      cfg = harness.load_config(write_ini(text))
    assert cfg.trials == 2

  def test_missing_file(self, tmp_path):
    with pytest.raises(exceptions.InvalidConfigError):
      harness.load_config(tmp_path / 'absent.ini')


class TestParsers:

  @pytest.mark.parametrize('text, expected', [
      ('0:20:5', (0.0, 20.0, 5.0)),
      ('-10:10:2.5', (-10.0, 10.0, 2.5)),
      ('7', (7.0, 7.0, 1.0)),
  ])
  def test_parse_snr(self, text, expected):
    assert harness.parse_snr(text) == expected

  @pytest.mark.parametrize('text', ['0:20', 'low:high:step'])
  def test_parse_snr_malformed(self, text):
    with pytest.raises(ValueError):
      harness.parse_snr(text)

  def test_parse_ints(self):
    assert harness.parse_ints('1, 3,') == (1, 3)

  def test_parse_methods(self):
    assert harness.parse_methods('aoa, random') == (harness.Method.AOA,
                                                     harness.Method.RANDOM)
    with pytest.raises(ValueError):
      harness.parse_methods('bogus')


@pytest.mark.slow
def test_method_ranking_at_ten_db():
  cfg = harness.ExperimentConfig(trials=500,
                                 snr_db=(10.0, 10.0, 1.0),
                                 p_values=(1, 3),
                                 master_seed=2026)
  rows = harness.run_experiment(cfg)

  def samples(method, p):
    return np.array(
        [r.mutual_info for r in rows if r.method == method and r.p == p])

  full = samples(harness.Method.EXHAUSTIVE, None)
  effpower_3 = samples(harness.Method.EFFPOWER, 3)
  effpower_1 = samples(harness.Method.EFFPOWER, 1)
  random_3 = samples(harness.Method.RANDOM, 3)
  aoa_3 = samples(harness.Method.AOA, 3)
  assert full.mean() >= effpower_3.mean() >= effpower_1.mean()
  assert effpower_3.mean() >= 0.9 * full.mean()
  assert random_3.mean() < effpower_3.mean()
  assert scipy.stats.ttest_ind(effpower_3, random_3).pvalue < 0.05
  assert abs(aoa_3.mean() - effpower_3.mean()) <= 0.1 * effpower_3.mean()

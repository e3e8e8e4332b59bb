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
import pytest_cases

from mmbeam import harness


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_no_trials():
  return {'trials': 0}


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_zero_snr_step():
  return {'snr_db': (0.0, 10.0, 0.0)}


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_decreasing_snr():
  return {'snr_db': (10.0, 0.0, 5.0)}


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_no_methods():
  return {'methods': ()}


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_reduced_search_without_sizes():
  return {'p_values': ()}


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_zero_subset_size():
  return {'p_values': (0, 3)}


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_no_aoa_instances():
  return {'aoa_instances': 0}


@pytest_cases.case(tags=['InvalidExperimentConfig'])
def case_zero_aoa_period():
  return {'aoa_period': 0.0}


@pytest_cases.case(tags=['UnrealisableExperiment'])
def case_subset_larger_than_rx_codebook():
  return {'p_values': (9,)}


@pytest_cases.case(tags=['UnrealisableExperiment'])
def case_aoa_with_one_rx_subarray():
  return {'array': harness.ArrayConfig(rx_subarrays=1)}


@pytest_cases.case(tags=['UnrealisableExperiment'])
def case_no_builtin_bb_codebook():
  return {'array': harness.ArrayConfig(tx_subarrays=3)}


@pytest_cases.case(tags=['WellFormedConfig'])
def case_full_config():
  return """
[array]
rx_subarrays = 3

[codebook]
tx_beams = 6
tx_sector_deg = -45, 45

[channel]
n_clusters = 2
max_doppler_hz = 50
normalize_drop = no

[experiment]
snr_db = -5:5:5
trials = 4
p_values = 2
methods = exhaustive, effpower
scoring = noisy
effpower_sides = rx
combination_cap = 100000
"""


@pytest_cases.case(tags=['MalformedConfig'])
def case_trials_not_integer():
  return '[experiment]\ntrials = many\n'


@pytest_cases.case(tags=['MalformedConfig'])
def case_unknown_scoring():
  return '[experiment]\nscoring = psychic\n'


@pytest_cases.case(tags=['MalformedConfig'])
def case_sector_single_value():
  return '[codebook]\ntx_sector_deg = 10\n'


@pytest_cases.case(tags=['MalformedConfig'])
def case_ambiguous_boolean():
  return '[channel]\nnormalize_drop = maybe\n'


@pytest_cases.case(tags=['MalformedConfig'])
def case_out_of_range_trials():
  return '[experiment]\ntrials = 0\n'


@pytest_cases.case(tags=['MalformedConfig'])
def case_out_of_range_clusters():
  return '[channel]\nn_clusters = 0\n'


@pytest_cases.case(tags=['MalformedConfig'])
def case_missing_section_header():
  return 'trials = 4\n'


@pytest_cases.case(tags=['UnusedConfigKey'])
def case_unknown_key():
  return '[experiment]\ntrials = 2\ncolour = blue\n'


@pytest_cases.case(tags=['UnusedConfigKey'])
def case_unknown_section():
  return '[experiment]\ntrials = 2\n\n[plotting]\ndpi = 300\n'

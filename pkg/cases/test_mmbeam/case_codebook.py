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

_RANK2_FILE = """\
# two-port rank-2 precoders
0.7071067811865476, 0
0, 0.7071067811865476

0.5, 0.5
0.5, -0.5

0.5, 0.5
0.5j, -0.5j
"""


@pytest_cases.case(tags=['BBFile', 'WellFormed'])
def case_rank2_file():
  return _RANK2_FILE


@pytest_cases.case(tags=['BBFile', 'WellFormed'])
def case_rank2_file_extra_blank_lines():
  return '\n\n' + _RANK2_FILE.replace('\n\n', '\n\n\n') + '\n\n'


@pytest_cases.case(tags=['BBFile', 'Malformed'])
def case_bb_file_bad_entry():
  return '0.5, 0.5\n0.5, half\n'


@pytest_cases.case(tags=['BBFile', 'Malformed'])
def case_bb_file_ragged_rows():
  return '0.5, 0.5\n0.5\n'


@pytest_cases.case(tags=['BBFile', 'Malformed'])
def case_bb_file_empty():
  return '# nothing here\n'


@pytest_cases.case(tags=['BBFile', 'Malformed'])
def case_bb_file_not_normalized():
  return '1, 0\n0, 1\n'


@pytest_cases.case(tags=['RFFile', 'Malformed'])
def case_rf_file_three_columns():
  return '0, 90, 1\n'


@pytest_cases.case(tags=['RFFile', 'Malformed'])
def case_rf_file_not_numeric():
  return 'left, 90\n'


@pytest_cases.case(tags=['RFFile', 'Malformed'])
def case_rf_file_duplicate_beams():
  return '10, 90\n10, 90\n'


@pytest_cases.case(tags=['RFFile', 'Malformed'])
def case_rf_file_elevation_out_of_range():
  return '10, 190\n'

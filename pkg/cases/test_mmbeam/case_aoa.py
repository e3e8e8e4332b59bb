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

from mmbeam import aoa


@pytest_cases.case(tags=['InvalidTriple'])
def case_z_index_without_displacement():
  return {'ref_index': 0, 'y_index': 1, 'z_index': 2, 'd_y': 0.5}


@pytest_cases.case(tags=['InvalidTriple'])
def case_displacement_without_z_index():
  return {'ref_index': 0, 'y_index': 1, 'z_index': None, 'd_y': 0.5,
          'd_z': 0.5}


@pytest_cases.case(tags=['InvalidTriple'])
def case_zero_y_displacement():
  return {'ref_index': 0, 'y_index': 1, 'z_index': None, 'd_y': 0.0}


@pytest_cases.case(tags=['MismatchedTriple'])
def case_swapped_partners():
  return aoa.SubarrayTriple(0, 2, 1, 1.0, 1.0)


@pytest_cases.case(tags=['MismatchedTriple'])
def case_wrong_y_displacement():
  return aoa.SubarrayTriple(0, 1, 2, 0.5, 1.0)


@pytest_cases.case(tags=['MismatchedTriple'])
def case_wrong_z_displacement():
  return aoa.SubarrayTriple(0, 1, 2, 1.0, 2.0)


@pytest_cases.case(tags=['TrueDirection'])
def case_elevated_direction():
  return 20.0, 60.0


@pytest_cases.case(tags=['TrueDirection'])
def case_broadside_direction():
  return 0.0, 90.0


@pytest_cases.case(tags=['TrueDirection'])
def case_below_horizon_direction():
  return -35.0, 110.0

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


@pytest_cases.case(tags=['InvalidClusterConfig'])
def case_no_clusters():
  return {'n_clusters': 0}


@pytest_cases.case(tags=['InvalidClusterConfig'])
def case_no_rays():
  return {'rays_per_cluster': 0}


@pytest_cases.case(tags=['InvalidClusterConfig'])
def case_negative_spread():
  return {'azimuth_spread': -1.0}


@pytest_cases.case(tags=['InvalidClusterConfig'])
def case_negative_doppler():
  return {'max_doppler': -5.0}


@pytest_cases.case(tags=['InvalidClusterConfig'])
def case_empty_azimuth_range():
  return {'tx_azimuth_range': (30.0, -30.0)}


@pytest_cases.case(tags=['InvalidClusterConfig'])
def case_elevation_range_outside():
  return {'rx_elevation_range': (-10.0, 90.0)}


@pytest_cases.case(tags=['MalformedRayLine'])
def case_ray_line_too_short():
  return '1.0,0.0,0.0,0.0,0.0,1.5707963267948966,0.0\n'


@pytest_cases.case(tags=['MalformedRayLine'])
def case_ray_line_not_numeric():
  return '1.0,zero,0.0,0.0,0.0,1.5707963267948966,0.0,1.5707963267948966\n'


@pytest_cases.case(tags=['MalformedRayLine'])
def case_ray_line_negative_gain():
  return '-1.0,0.0,0.0,0.0,0.0,1.5707963267948966,0.0,1.5707963267948966\n'

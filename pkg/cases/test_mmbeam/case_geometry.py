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
import math

import numpy as np
import pytest_cases

from mmbeam import geometry


class SteeringVectorCase:

  def __init__(self, array, direction, expected):
    self.array = array
    self.direction = direction
    self.expected = np.asarray(expected, dtype=complex)


@pytest_cases.case(tags=['SteeringVector'])
def case_two_element_broadside():
  return SteeringVectorCase(geometry.PlanarArray(2),
                            geometry.AnglePair(0.0, math.pi / 2),
                            np.array([1, 1]) / math.sqrt(2))


@pytest_cases.case(tags=['SteeringVector'])
def case_two_element_thirty_degrees():
  return SteeringVectorCase(geometry.PlanarArray(2),
                            geometry.AnglePair(math.pi / 6, math.pi / 2),
                            np.array([1, 1j]) / math.sqrt(2))


@pytest_cases.case(tags=['SteeringVector'])
def case_vertical_pair_at_sixty_degrees():
  # kd cos(pi/3) = pi/2 along z
  return SteeringVectorCase(geometry.PlanarArray(1, 2),
                            geometry.AnglePair(0.0, math.pi / 3),
                            np.array([1, 1j]) / math.sqrt(2))


@pytest_cases.case(tags=['DirectionPair', 'Generic'])
def case_directions_apart():
  return (geometry.AnglePair.from_degrees(10.0, 80.0),
          geometry.AnglePair.from_degrees(-25.0, 100.0))


@pytest_cases.case(tags=['DirectionPair', 'Generic'])
def case_directions_close():
  return (geometry.AnglePair.from_degrees(3.0, 91.0),
          geometry.AnglePair.from_degrees(4.0, 89.5))


@pytest_cases.case(tags=['DirectionPair', 'SameElevation'])
def case_directions_same_elevation():
  return (geometry.AnglePair.from_degrees(-40.0, 70.0),
          geometry.AnglePair.from_degrees(35.0, 70.0))


@pytest_cases.case(tags=['DirectionPair', 'Identical'])
def case_directions_identical():
  return (geometry.AnglePair.from_degrees(12.0, 75.0),
          geometry.AnglePair.from_degrees(12.0, 75.0))


@pytest_cases.case(tags=['DirectionPair', 'Aliased', 'SameElevation'])
def case_directions_endfire_alias():
  # kd (sin(-pi/2) - sin(pi/2)) = -2 pi
  return (geometry.AnglePair(math.pi / 2, math.pi / 2),
          geometry.AnglePair(-math.pi / 2, math.pi / 2))


@pytest_cases.case(tags=['InvalidAngle'])
def case_elevation_negative():
  return {'phi': 0.0, 'theta': -0.1}


@pytest_cases.case(tags=['InvalidAngle'])
def case_elevation_above_pi():
  return {'phi': 0.0, 'theta': math.pi + 0.1}


@pytest_cases.case(tags=['InvalidAngle'])
def case_azimuth_outside():
  return {'phi': 4.0, 'theta': 1.0}

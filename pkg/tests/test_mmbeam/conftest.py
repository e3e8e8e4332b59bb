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
# pylint: disable=redefined-outer-name
"""Shared layouts, generators and file digests for the mmbeam tests."""
import math

import numpy as np
import pytest_cases
import xxhash

from mmbeam import channel
from mmbeam import codebook
from mmbeam import geometry

SEED = 20260417


def generate_file_hash(file, hash_function=None, blocksize=2**20):
  """Collision resistance of xxh128 is sufficient for our verification needs."""
  if hash_function is None:
    hash_function = xxhash.xxh128
  x = hash_function()
  with open(file, 'rb') as f:
    while chunk := f.read(blocksize):
      x.update(chunk)
  return x.digest()


def _make_ray(aoa_deg=(0.0, 90.0),
             aod_deg=(0.0, 90.0),
             magnitude=1.0,
             phase=0.0,
             doppler=0.0):
  return channel.Ray(magnitude, phase, 0.0, doppler,
                     geometry.AnglePair.from_degrees(*aoa_deg),
                     geometry.AnglePair.from_degrees(*aod_deg))


@pytest_cases.fixture
def make_ray():
  """Factory of rays with angles given in degrees."""
  return _make_ray


@pytest_cases.fixture
def file_hash():
  return generate_file_hash


@pytest_cases.fixture
def rng():
  return np.random.default_rng(SEED)


@pytest_cases.fixture
def tx_layout():
  return geometry.SubarrayLayout.contiguous_along_y(geometry.PlanarArray(8), 2)


@pytest_cases.fixture
def rx_layout():
  return geometry.SubarrayLayout.contiguous_along_y(geometry.PlanarArray(4), 2)


@pytest_cases.fixture
def planar_rx_layout():
  """Three 2x2 subarrays: reference, one along y and one along z."""
  return geometry.SubarrayLayout(geometry.PlanarArray(2, 2),
                                 ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)))


@pytest_cases.fixture
def tx_codebook():
  return codebook.uniform_codebook(-math.pi / 3, math.pi / 3, 12)


@pytest_cases.fixture
def rx_codebook():
  return codebook.uniform_codebook(-math.pi / 2, math.pi / 2, 8)


@pytest_cases.fixture
def cluster_config():
  return channel.ClusterConfig()


@pytest_cases.fixture
def realization(cluster_config, tx_layout, rx_layout, rng):
  return channel.draw_realization(cluster_config, tx_layout, rx_layout, rng)

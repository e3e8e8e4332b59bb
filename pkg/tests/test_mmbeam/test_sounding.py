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
import csv
import math

import numpy as np
import pytest

from mmbeam import channel
from mmbeam import codebook
from mmbeam import exceptions
from mmbeam import geometry
from mmbeam import sounding


def _random_codebook(rng, n_beams):
  return codebook.RFCodebook(
      tuple(
          geometry.AnglePair(rng.uniform(-math.pi / 2, math.pi / 2),
                             rng.uniform(math.pi / 4, 3 * math.pi / 4))
          for _ in range(n_beams)))


def _relative_error(a, b):
  return np.linalg.norm(a - b) / np.linalg.norm(b)


class TestMeasurementTensor:

  def test_rank_must_be_four(self):
    with pytest.raises(exceptions.DimensionMismatchError):
      sounding.MeasurementTensor(np.zeros((2, 2, 3)))

  def test_negative_noise_variance(self):
    with pytest.raises(exceptions.InvalidConfigError):
      sounding.MeasurementTensor(np.zeros((1, 1, 1, 1)), -1.0)

  def test_shape_properties(self):
    t = sounding.MeasurementTensor(np.zeros((2, 3, 4, 5), dtype=complex))
    assert t.shape == (2, 3, 4, 5)
    assert (t.n_rx_subarrays, t.n_tx_subarrays, t.n_rx_beams,
            t.n_tx_beams) == (2, 3, 4, 5)


class TestRouteEquivalence:

  def test_default_layouts(self, realization, tx_layout, rx_layout,
                           tx_codebook, rx_codebook):
    direct = sounding.measure_direct(channel.channel_matrix(realization),
                                     tx_layout, rx_layout, tx_codebook,
                                     rx_codebook)
    expansion = sounding.measure_ray_expansion(realization, tx_codebook,
                                               rx_codebook)
    assert direct.shape == (2, 2, 8, 12)
    assert _relative_error(direct.values, expansion.values) <= 1e-9

  @pytest.mark.slow
  def test_random_planar_layouts(self, rng):
    cfg = channel.ClusterConfig(rays_per_cluster=5,
                                tx_elevation_range=(45.0, 135.0),
                                rx_elevation_range=(45.0, 135.0),
                                elevation_spread=3.0)
    for _ in range(100):
      n_sa = int(rng.integers(1, 5))
      n_y = int(rng.integers(1, 5))
      n_z = int(rng.integers(1, 5))
      sub = geometry.PlanarArray(n_y, n_z)
      offsets = tuple(
          (0.0, 0.0) if s == 0 else (float(rng.uniform(-4, 4)),
                                     float(rng.uniform(-4, 4)))
          for s in range(n_sa))
      rx_layout = geometry.SubarrayLayout(sub, offsets)
      tx_layout = geometry.SubarrayLayout.contiguous_along_y(sub, n_sa)
      ch = channel.draw_realization(cfg, tx_layout, rx_layout, rng)
      tx_cb = _random_codebook(rng, 3)
      rx_cb = _random_codebook(rng, 4)
      direct = sounding.measure_direct(channel.channel_matrix(ch), tx_layout,
                                       rx_layout, tx_cb, rx_cb)
      expansion = sounding.measure_ray_expansion(ch, tx_cb, rx_cb)
      assert _relative_error(direct.values, expansion.values) <= 1e-9

  def test_rx_subarray_ratio_is_phase_difference(self, make_ray, tx_layout,
                                                 rx_layout, tx_codebook,
                                                 rx_codebook):
    ray = make_ray(aoa_deg=(25.0, 90.0), aod_deg=(-12.0, 90.0))
    ch = channel.ChannelRealization((ray,), tx_layout, rx_layout)
    t = sounding.measure_ray_expansion(ch, tx_codebook, rx_codebook)
    gamma = geometry.subarray_phase(rx_layout.offsets[1], ray.aoa)
    np.testing.assert_allclose(t.values[1, 0],
                               np.exp(1j * gamma) * t.values[0, 0],
                               atol=1e-12)

  def test_direct_rejects_wrong_matrix(self, tx_layout, rx_layout, tx_codebook,
                                       rx_codebook):
    with pytest.raises(exceptions.DimensionMismatchError):
      sounding.measure_direct(np.zeros((8, 8)), tx_layout, rx_layout,
                              tx_codebook, rx_codebook)


class TestNoise:

  def test_zero_variance_is_identity(self, realization, tx_codebook,
                                     rx_codebook):
    t = sounding.measure_ray_expansion(realization, tx_codebook, rx_codebook)
    generator = np.random.default_rng(5)
    state = generator.bit_generator.state
    assert sounding.add_noise(t, sounding.NoiseModel(0.0, generator)) is t
    assert generator.bit_generator.state == state

  def test_noise_statistics(self):
    t = sounding.MeasurementTensor(np.zeros((1, 1, 200, 200), dtype=complex))
    noisy = sounding.add_noise(
        t, sounding.NoiseModel(0.5, np.random.default_rng(11)))
    samples = noisy.values.ravel()
    assert noisy.noise_variance == 0.5
    assert np.mean(np.abs(samples)**2) == pytest.approx(0.5, abs=0.02)
    assert np.var(samples.real) == pytest.approx(0.25, abs=0.01)
    assert abs(np.mean(samples)) < 0.02

  def test_noise_is_white(self):
    t = sounding.MeasurementTensor(np.zeros((1, 1, 200, 200), dtype=complex))
    noisy = sounding.add_noise(
        t, sounding.NoiseModel(0.5, np.random.default_rng(12)))
    samples = noisy.values[0, 0]
    for lagged, leading in ((samples[1:, :], samples[:-1, :]),
                            (samples[:, 1:], samples[:, :-1])):
      assert abs(np.mean(lagged * leading.conj())) < 0.02
    assert abs(np.mean(samples**2)) < 0.02
    assert abs(np.mean(samples.real * samples.imag)) < 0.01

  def test_noise_is_reproducible(self, realization, tx_codebook, rx_codebook):
    t = sounding.measure_ray_expansion(realization, tx_codebook, rx_codebook)
    first = sounding.add_noise(
        t, sounding.NoiseModel(0.1, np.random.default_rng(9)))
    second = sounding.add_noise(
        t, sounding.NoiseModel(0.1, np.random.default_rng(9)))
    np.testing.assert_array_equal(first.values, second.values)

  def test_negative_variance(self, rng):
    with pytest.raises(exceptions.InvalidConfigError):
      sounding.NoiseModel(-0.1, rng)


@pytest.mark.io
def test_save_tensor(tmp_path):
  values = np.arange(8, dtype=complex).reshape(1, 2, 2, 2) * (1 - 0.5j)
  path = tmp_path / 'tensor.csv'
  sounding.save_tensor(sounding.MeasurementTensor(values), path)
  with open(path, encoding='utf-8', newline='') as f:
    rows = list(csv.reader(f))
  assert tuple(rows[0]) == sounding.TENSOR_FILE_HEADER
  assert len(rows) == 9
  assert rows[-1] == ['0', '1', '1', '1', '7.0', '-3.5']

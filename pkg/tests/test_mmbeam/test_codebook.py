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
import math

import numpy as np
import pytest
import pytest_cases

from mmbeam import codebook
from mmbeam import exceptions
from mmbeam import geometry

_CASES = 'test_mmbeam.case_codebook'


class TestUniformCodebook:

  def test_receive_default_midpoints(self, rx_codebook):
    azimuths = [math.degrees(beam.phi) for beam in rx_codebook]
    assert len(rx_codebook) == 8
    assert azimuths == pytest.approx(
        [-78.75 + 22.5 * m for m in range(8)])
    assert all(beam.theta == pytest.approx(math.pi / 2) for beam in rx_codebook)

  def test_transmit_default_spacing(self, tx_codebook):
    azimuths = np.degrees([beam.phi for beam in tx_codebook])
    np.testing.assert_allclose(np.diff(azimuths), 10.0)
    assert azimuths[0] == pytest.approx(-55.0)

  def test_custom_elevation(self):
    cb = codebook.uniform_codebook(0.0, 1.0, 2, elevation=1.2)
    assert [beam.theta for beam in cb] == [1.2, 1.2]

  @pytest.mark.parametrize('args', [(0.0, 1.0, 0), (1.0, 1.0, 4),
                                    (1.0, -1.0, 4)])
  def test_invalid_sector(self, args):
    with pytest.raises(exceptions.InvalidConfigError):
      codebook.uniform_codebook(*args)


class TestRFCodebook:

  def test_empty_codebook_raises(self):
    with pytest.raises(exceptions.InvalidConfigError):
      codebook.RFCodebook(())

  def test_duplicate_beams_raise(self):
    beam = geometry.AnglePair(0.1, 1.0)
    with pytest.raises(exceptions.InvalidConfigError):
      codebook.RFCodebook((beam, beam))

  @pytest.mark.parametrize('index', [-1, 8])
  def test_getitem_out_of_range(self, rx_codebook, index):
    with pytest.raises(exceptions.BeamIndexError) as e:
      _ = rx_codebook[index]
    assert e.value.size == 8

  def test_index_of_and_subset(self, rx_codebook):
    subset = rx_codebook.subset([6, 1])
    assert list(subset) == [rx_codebook[6], rx_codebook[1]]
    assert rx_codebook.index_of(rx_codebook[6]) == 6
    assert rx_codebook.index_of(geometry.AnglePair(0.123, 1.0)) is None

  def test_nearest_beam(self, rx_codebook):
    direction = geometry.AnglePair.from_degrees(10.0, 90.0)
    assert codebook.nearest_beam(rx_codebook, direction) == 4

  def test_nearest_beam_tie_picks_lower_index(self):
    cb = codebook.RFCodebook((
        geometry.AnglePair(-math.radians(10.0), math.pi / 2),
        geometry.AnglePair(math.radians(10.0), math.pi / 2),
    ))
    assert codebook.nearest_beam(cb, geometry.AnglePair(0.0,
                                                        math.pi / 2)) == 0


class TestRFPrecoder:

  def test_precoder_is_block_diagonal(self, rx_layout, rx_codebook):
    asg = codebook.RFAssignment((2, 5))
    f = codebook.rf_precoder_matrix(rx_layout, rx_codebook, asg)
    assert f.shape == (8, 2)
    np.testing.assert_allclose(f.conj().T @ f, np.eye(2), atol=1e-12)
    np.testing.assert_array_equal(f[4:, 0], 0)
    np.testing.assert_array_equal(f[:4, 1], 0)
    np.testing.assert_allclose(
        f[4:, 1], geometry.steering_vector(rx_layout.subarray, rx_codebook[5]))

  def test_assignment_length_mismatch(self, rx_layout, rx_codebook):
    with pytest.raises(exceptions.DimensionMismatchError):
      codebook.rf_precoder_matrix(rx_layout, rx_codebook,
                                  codebook.RFAssignment((1,)))

  def test_assignment_index_out_of_range(self, rx_layout, rx_codebook):
    with pytest.raises(exceptions.BeamIndexError):
      codebook.rf_precoder_matrix(rx_layout, rx_codebook,
                                  codebook.RFAssignment((1, 8)))


class TestBBCodebook:

  def test_default_rank2(self):
    bb = codebook.default_bb_codebook()
    assert len(bb) == 3
    assert (bb.n_subarrays, bb.n_layers) == (2, 2)
    np.testing.assert_allclose(bb[0], np.eye(2) / math.sqrt(2))
    for matrix in bb.matrices:
      np.testing.assert_allclose(np.linalg.norm(matrix, axis=0),
                                 1 / math.sqrt(2))
      assert np.linalg.norm(matrix) == pytest.approx(1.0)

  def test_default_rank1(self):
    bb = codebook.default_bb_codebook(2, 1)
    assert len(bb) == 4
    assert bb.stacked().shape == (4, 2, 1)
    for matrix in bb.matrices:
      assert np.linalg.norm(matrix) == pytest.approx(1.0)

  @pytest.mark.parametrize('dims', [(4, 2), (2, 3), (1, 1)])
  def test_unsupported_sizes(self, dims):
    with pytest.raises(exceptions.UnsupportedCodebookSizeError) as e:
      codebook.default_bb_codebook(*dims)
    assert (e.value.n_sa, e.value.n_layers) == dims

  def test_mismatched_shapes(self):
    with pytest.raises(exceptions.DimensionMismatchError):
      codebook.BBCodebook((np.eye(2) / math.sqrt(2),
                           np.ones((2, 1)) / math.sqrt(2)))

  def test_index_out_of_range(self):
    with pytest.raises(exceptions.BeamIndexError):
      _ = codebook.default_bb_codebook()[3]


@pytest.mark.io
class TestCodebookFiles:

  @pytest_cases.parametrize_with_cases('content',
                                       cases=_CASES,
                                       has_tag=['BBFile', 'WellFormed'])
  def test_load_bb_codebook(self, content, tmp_path):
    path = tmp_path / 'bb.txt'
    path.write_text(content, encoding='utf-8')
    loaded = codebook.load_bb_codebook(path)
    default = codebook.default_bb_codebook()
    assert len(loaded) == len(default)
    for got, expected in zip(loaded.matrices, default.matrices):
      np.testing.assert_allclose(got, expected, atol=1e-12)

  @pytest_cases.parametrize_with_cases('content',
                                       cases=_CASES,
                                       has_tag=['BBFile', 'Malformed'])
  def test_malformed_bb_codebook(self, content, tmp_path):
    path = tmp_path / 'bb.txt'
    path.write_text(content, encoding='utf-8')
    with pytest.raises(exceptions.InvalidConfigError):
      codebook.load_bb_codebook(path)

  def test_load_rf_codebook(self, tmp_path):
    path = tmp_path / 'rf.txt'
    path.write_text('# phi, theta\n-30, 90\n\n15.5, 80  # tilted\n',
                    encoding='utf-8')
    cb = codebook.load_rf_codebook(path)
    assert len(cb) == 2
    assert cb[0].as_degrees() == pytest.approx((-30.0, 90.0))
    assert cb[1].as_degrees() == pytest.approx((15.5, 80.0))

  @pytest_cases.parametrize_with_cases('content',
                                       cases=_CASES,
                                       has_tag=['RFFile', 'Malformed'])
  def test_malformed_rf_codebook(self, content, tmp_path):
    path = tmp_path / 'rf.txt'
    path.write_text(content, encoding='utf-8')
    with pytest.raises(exceptions.InvalidConfigError):
      codebook.load_rf_codebook(path)

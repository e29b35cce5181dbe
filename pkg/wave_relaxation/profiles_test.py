# Copyright 2024 The wave_relaxation Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import os
import tempfile

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np
from wave_relaxation import profiles
from wave_relaxation.core import problems


class ParseNumberTest(parameterized.TestCase):

  @parameterized.named_parameters(
      ('decimal', '0.13', 0.13),
      ('fraction', '1/6', 1 / 6),
      ('negative_fraction', '-3/4', -0.75),
      ('pi', 'pi', math.pi),
      ('minus_pi', '-pi', -math.pi),
      ('exponent', '1e-12', 1e-12),
      ('padded', '  2 ', 2.0),
  )
  def test_parse_number(self, text, expected):
    self.assertEqual(profiles.parse_number(text), expected)

  def test_rejects_garbage(self):
    with self.assertRaisesRegex(ValueError, 'Not a number'):
      profiles.parse_number('two')

  def test_parse_numbers(self):
    self.assertEqual(profiles.parse_numbers('0.6, 1.2,4'), (0.6, 1.2, 4.0))
    self.assertEqual(profiles.parse_numbers(' '), ())


class ProfileTest(parameterized.TestCase):

  def test_power(self):
    f = profiles.parse_profile('power:2', profiles.TIME)
    np.testing.assert_array_equal(f(np.array([0.0, 1.5])), [0.0, 2.25])

  def test_power_decay(self):
    f = profiles.parse_profile('power-decay:2,1', profiles.TIME)
    self.assertAlmostEqual(float(f(2.0)), 4.0 * math.exp(-2.0), places=14)

  def test_ramp_matches_x_exp_at_the_boundary(self):
    ramp = profiles.parse_profile('ramp-x-exp:-3', profiles.TIME)
    self.assertAlmostEqual(
        float(ramp(2.0)), -3.0 * math.exp(3.0) * 2.0, places=10
    )

  def test_affine_speed_profile(self):
    f = profiles.parse_profile('affine:1/6,1/6', profiles.SPACE)
    np.testing.assert_allclose(f(np.array([0.0, 5.0])), [1 / 6, 1.0])

  def test_two_dimensional_profiles(self):
    left = profiles.parse_profile('power-sin:2', profiles.TIME_Y)
    right = profiles.parse_profile('parabola-power:3', profiles.TIME_Y)
    self.assertAlmostEqual(float(left(2.0, np.pi / 2)), 4.0)
    self.assertAlmostEqual(float(right(1.0, np.pi)), 0.0)
    bump = profiles.parse_profile('strip-polynomial', profiles.SPACE_XY)
    for x in (0.0, 0.4, 0.75, 1.0):
      self.assertAlmostEqual(float(bump(x, 1.0)), 0.0, places=14)
    self.assertNotEqual(float(bump(0.2, 1.0)), 0.0)

  def test_zero_takes_any_variables(self):
    for variables in (profiles.TIME, profiles.SPACE_XY, profiles.TIME_XY):
      f = profiles.parse_profile('zero', variables)
      self.assertEqual(float(np.max(np.abs(f(np.ones(3))))), 0.0)

  def test_unknown_profile_suggests(self):
    with self.assertRaisesRegex(ValueError, "Did you mean 'power'"):
      profiles.parse_profile('powr:2', profiles.TIME)

  def test_wrong_variables(self):
    with self.assertRaisesRegex(ValueError, r'function of \(t\)'):
      profiles.parse_profile('power:2', profiles.SPACE)

  def test_wrong_argument_count(self):
    with self.assertRaisesRegex(ValueError, 'takes 2 arguments, got 1'):
      profiles.parse_profile('power-decay:2', profiles.TIME)


class SpeedTest(absltest.TestCase):

  def test_constant(self):
    self.assertEqual(profiles.parse_speed('constant:2').value(), 2.0)
    self.assertEqual(profiles.parse_speed('1').value(), 1.0)

  def test_piecewise(self):
    speed = profiles.parse_speed('piecewise:1/4, 2, 1/2')
    self.assertEqual(speed.kind, problems.PIECEWISE)
    self.assertEqual(speed.pieces, (0.25, 2.0, 0.5))

  def test_profile(self):
    speed = profiles.parse_speed('profile:affine:1/6,1/6')
    self.assertEqual(speed.kind, problems.PROFILE)
    np.testing.assert_allclose(speed.sample(np.array([5.0])), [1.0])

  def test_table(self):
    speed = profiles.parse_speed('table:0:1,2:3')
    np.testing.assert_allclose(speed.sample(np.array([1.0])), [2.0])

  def test_bad_table_entry(self):
    with self.assertRaisesRegex(ValueError, 'x:c pairs'):
      profiles.parse_speed('table:0,1')

  def test_unknown_kind(self):
    with self.assertRaisesRegex(ValueError, "Did you mean 'constant'"):
      profiles.parse_speed('konstant:1')

  def test_two_dimensional_speed_must_be_constant(self):
    self.assertEqual(profiles.parse_constant_speed('piecewise:2,2'), 2.0)
    with self.assertRaisesRegex(ValueError, 'constant speed'):
      profiles.parse_constant_speed('piecewise:1,2')


class SourceTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    self.temp_dir = tempfile.TemporaryDirectory()

  def tearDown(self):
    super().tearDown()
    self.temp_dir.cleanup()

  def test_none(self):
    self.assertIsNone(profiles.parse_source('none', profiles.TIME_X))

  def test_table_interpolates_and_vanishes_outside(self):
    path = os.path.join(self.temp_dir.name, 'source.csv')
    with open(path, 'w') as f:
      f.write('t,0,1\n0,0,1\n1,2,3\n')
    source = profiles.parse_source(
        'table:source.csv', profiles.TIME_X, self.temp_dir.name
    )
    t = np.array([0.0, 0.5, 1.0])
    values = source(t[:, None], np.array([0.0, 0.5])[None, :])
    np.testing.assert_allclose(values, [[0.0, 0.5], [1.0, 1.5], [2.0, 2.5]])
    self.assertEqual(float(source(2.0, 0.5)), 0.0)

  def test_table_only_in_one_dimension(self):
    with self.assertRaisesRegex(ValueError, 'only supported in 1D'):
      profiles.parse_source('table:source.csv', profiles.TIME_XY)

  def test_missing_table(self):
    with self.assertRaisesRegex(ValueError, 'does not exist'):
      profiles.parse_source(
          'table:missing.csv', profiles.TIME_X, self.temp_dir.name
      )

  def test_suggest_keyword(self):
    self.assertEqual(
        profiles.suggest_keyword('nnwrr', ['nnwr', 'swr-classical']),
        " Did you mean 'nnwr'?",
    )
    self.assertEqual(profiles.suggest_keyword('xyz', []), '')


if __name__ == '__main__':
  absltest.main()

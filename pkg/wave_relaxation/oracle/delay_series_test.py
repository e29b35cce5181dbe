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

import fractions
import math

import numpy as np
from absl.testing import absltest
from absl.testing import parameterized
from wave_relaxation.oracle import delay_series

F = fractions.Fraction


def _tail_bound(s, horizon, unit):
  return 2 * math.exp(-s * horizon) / (1 - math.exp(-2 * unit * s)) + 1e-13


class GeneratorTest(parameterized.TestCase):

  def test_reciprocal_sinh_terms(self):
    series = delay_series.series_reciprocal_sinh(1, 1, 4)
    self.assertEqual(series.terms, ((F(1), F(2)), (F(3), F(2))))

  def test_coth_terms(self):
    series = delay_series.series_coth(0.5, 1, 2.1)
    self.assertEqual(
        series.terms, ((F(0), F(1)), (F(1), F(2)), (F(2), F(2)))
    )

  def test_reciprocal_cosh_alternates(self):
    series = delay_series.series_reciprocal_cosh(1, 2, 3)
    self.assertEqual(
        series.terms, ((F(1, 2), F(2)), (F(3, 2), F(-2)), (F(5, 2), F(2)))
    )

  def test_tanh_alternates(self):
    series = delay_series.series_tanh(1, 1, 4)
    self.assertEqual(
        series.terms, ((F(0), F(1)), (F(2), F(-2)), (F(4), F(2)))
    )

  def test_reciprocal_sinh_value(self):
    series = delay_series.series_reciprocal_sinh(1, 1, 40)
    self.assertAlmostEqual(series.evaluate(1.0), 1 / math.sinh(1.0), places=14)

  @parameterized.product(
      s=(0.5, 1.0, 2.0),
      kind=('csch', 'coth', 'sech', 'tanh'),
  )
  def test_numeric_consistency(self, s, kind):
    h, c, horizon = 0.7, 1.0, 30.0
    generators = {
        'csch': (delay_series.series_reciprocal_sinh, lambda x: 1 / np.sinh(x)),
        'coth': (delay_series.series_coth, lambda x: 1 / np.tanh(x)),
        'sech': (delay_series.series_reciprocal_cosh, lambda x: 1 / np.cosh(x)),
        'tanh': (delay_series.series_tanh, np.tanh),
    }
    generator, closed = generators[kind]
    series = generator(h, c, horizon)
    self.assertLessEqual(
        abs(series.evaluate(s) - closed(h * s / c)),
        _tail_bound(s, horizon, h / c),
    )

  def test_causality(self):
    for generator in (
        delay_series.series_reciprocal_sinh,
        delay_series.series_reciprocal_cosh,
    ):
      self.assertGreater(min(generator(0.3, 1, 5).delays), 0)
    for generator in (delay_series.series_coth, delay_series.series_tanh):
      delays = generator(0.3, 1, 5).delays
      self.assertEqual(delays[0], 0)
      self.assertGreater(delays[1], 0)

  @parameterized.named_parameters(
      ('zero_width', 0.0, 1.0, 1.0),
      ('negative_speed', 1.0, -1.0, 1.0),
      ('zero_horizon', 1.0, 1.0, 0.0),
  )
  def test_rejects_non_positive_arguments(self, h, c, horizon):
    with self.assertRaisesRegex(ValueError, 'must be positive'):
      delay_series.series_coth(h, c, horizon)

  def test_term_cap(self):
    with self.assertRaises(delay_series.TermLimitError):
      delay_series.series_reciprocal_sinh(0.001, 1, 10, max_terms=100)


class ArithmeticTest(absltest.TestCase):

  def test_mul_single_terms(self):
    a = delay_series.from_terms([(1, 2)], 10)
    b = delay_series.from_terms([(2, 3)], 10)
    self.assertEqual(delay_series.series_mul(a, b).terms, ((F(3), F(6)),))

  def test_identity_is_neutral(self):
    a = delay_series.series_coth(0.4, 1, 6)
    self.assertEqual(
        delay_series.series_mul(a, delay_series.identity(6)), a
    )

  def test_square_of_reciprocal_sinh(self):
    expected = 1 / math.sinh(1.0) ** 2
    short = delay_series.series_reciprocal_sinh(1, 1, 6)
    long = delay_series.series_reciprocal_sinh(1, 1, 30)
    self.assertLessEqual(
        abs(delay_series.series_mul(short, short).evaluate(1.0) - expected),
        1e-2,
    )
    self.assertLessEqual(
        abs(delay_series.series_mul(long, long).evaluate(1.0) - expected),
        1e-12,
    )

  def test_horizon_is_the_smaller_one(self):
    a = delay_series.series_coth(0.5, 1, 10)
    b = delay_series.series_coth(0.5, 1, 3)
    product = delay_series.series_mul(a, b)
    self.assertEqual(product.horizon, 3)
    self.assertLessEqual(max(product.delays), 3)
    self.assertEqual(delay_series.series_add(a, b).horizon, 3)

  def test_add_cancels_exactly(self):
    a = delay_series.series_coth(0.1, 1, 5)
    b = delay_series.series_scale(a, -1)
    self.assertEmpty(delay_series.series_add(a, b).terms)

  def test_merges_equal_delays(self):
    series = delay_series.from_terms([(0.5, 1), (0.5, 2), (1.0, 0)], 2)
    self.assertEqual(series.terms, ((F(1, 2), F(3)),))
    self.assertEqual(series.coefficient(0.5), 3)
    self.assertEqual(series.coefficient(0.7), 0)

  def test_leading_term(self):
    series = delay_series.series_coth(0.5, 1, 3)
    self.assertEqual(series.leading_term(), (F(1), F(2)))
    self.assertIsNone(delay_series.zero(3).leading_term())

  def test_negative_delay_is_rejected(self):
    with self.assertRaisesRegex(ValueError, 'not causal'):
      delay_series.from_terms([(-0.1, 1)], 1)

  def test_product_term_cap(self):
    a = delay_series.from_terms([(F(k, 7), 1) for k in range(10)], 10)
    b = delay_series.from_terms([(F(k, 11), 1) for k in range(10)], 10)
    with self.assertRaises(delay_series.TermLimitError):
      delay_series.series_mul(a, b, max_terms=50)


class ShiftTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    self.grid = np.linspace(0.0, 2.0, 21)

  def test_whole_step_shift_of_a_sine(self):
    shifted = delay_series.shift_trace(np.sin(self.grid), self.grid, 0.5)
    expected = np.where(
        self.grid >= 0.5, np.sin(self.grid - 0.5), 0.0
    )
    np.testing.assert_allclose(shifted, expected, atol=1e-15)

  def test_fractional_shift_interpolates(self):
    shifted = delay_series.shift_trace(self.grid, self.grid, 0.25)
    np.testing.assert_allclose(
        shifted, np.maximum(self.grid - 0.25, 0.0), atol=1e-14
    )

  def test_shift_past_the_window(self):
    shifted = delay_series.shift_trace(self.grid, self.grid, 5.0)
    np.testing.assert_array_equal(shifted, np.zeros_like(self.grid))

  def test_shift_of_two_dimensional_values(self):
    values = np.outer(self.grid, np.arange(3.0))
    shifted = delay_series.shift_trace(values, self.grid, 0.3)
    np.testing.assert_allclose(
        shifted, np.outer(np.maximum(self.grid - 0.3, 0.0), np.arange(3.0)),
        atol=1e-14,
    )

  def test_apply(self):
    series = delay_series.from_terms([(0, 1), (0.5, -2)], 2)
    result = delay_series.apply(series, self.grid**2, self.grid)
    expected = self.grid**2 - 2 * np.maximum(self.grid - 0.5, 0.0) ** 2
    np.testing.assert_allclose(result, expected, atol=1e-14)

  def test_common_step_and_sampling(self):
    self.assertEqual(
        delay_series.common_step([F(0), F(3, 5), F(1)]), F(1, 5)
    )
    self.assertIsNone(delay_series.common_step([F(0)]))
    series = [delay_series.series_coth(0.6, 1, 3)]
    self.assertTrue(delay_series.check_sampling(series, 0.1))
    self.assertFalse(delay_series.check_sampling(series, 0.07))


if __name__ == '__main__':
  absltest.main()

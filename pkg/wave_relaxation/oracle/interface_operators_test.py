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

from absl.testing import absltest
from absl.testing import parameterized
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.oracle import interface_operators

F = fractions.Fraction

_WIDTHS = (0.6, 0.6, 0.5, 2.3, 1.0)


class InterfaceOperatorsTest(parameterized.TestCase):

  def test_equal_widths_far_neighbor(self):
    operators = interface_operators.build_interface_operators(
        [0.5] * 4, 1.0, 4.0
    )
    self.assertEqual(operators.num_interfaces, 3)
    self.assertEqual(
        operators.hat_coefficient(0, 2).leading_term(), (F(1), F(4))
    )
    self.assertEqual(operators.entry(0, 2).leading_term(), (F(1), F(-4)))

  def test_equal_widths_diagonal(self):
    operators = interface_operators.build_interface_operators(
        [0.5] * 4, 1.0, 4.0
    )
    hat = operators.hat_coefficient(1, 1)
    self.assertEqual(hat.coefficient(0), 0)
    self.assertEqual(hat.leading_term(), (F(1), F(8)))
    self.assertEqual(operators.entry(1, 1).coefficient(0), 4)

  def test_equal_widths_neighbors_vanish_inside(self):
    operators = interface_operators.build_interface_operators(
        [0.5] * 5, 1.0, 4.0
    )
    self.assertEmpty(operators.entry(1, 2).terms)
    self.assertEmpty(operators.entry(2, 1).terms)

  def test_two_equal_subdomains_give_four(self):
    operators = interface_operators.build_interface_operators(
        [1.0, 1.0], 1.0, 6.0
    )
    self.assertEqual(operators.entry(0, 0).terms, ((F(0), F(4)),))

  def test_symmetries(self):
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 8.0
    )
    self.assertEqual(operators.entry(0, 2), operators.entry(2, 0))
    self.assertEqual(operators.entry(1, 3), operators.entry(3, 1))
    self.assertEqual(
        operators.hat_coefficient(0, 2), operators.hat_coefficient(2, 0)
    )

  def test_short_delays_cancel(self):
    """Only the unit term is shorter than 2 h_min / c."""
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 8.0
    )
    for (i, j), series in operators.entries.items():
      for delay, coeff in series.terms:
        if delay == 0:
          self.assertEqual((i, coeff), (j, 4))
        else:
          self.assertGreaterEqual(delay, 1)

  @parameterized.parameters(0.5, 1.0, 2.0)
  def test_matches_closed_form(self, s):
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 80.0
    )
    self.assertEqual(interface_operators.check_operators(operators, s), {})

  def test_reports_truncated_operators(self):
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 2.0
    )
    self.assertNotEmpty(interface_operators.check_operators(operators, 0.5))

  def test_accepts_a_partition(self):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=5.0,
        time_window=2.0,
        speed=problems.WaveSpeed(constant=1.0),
    )
    partition = partition_lib.build_partition(
        problem, [0.6, 1.2, 1.7, 4.0], dx=0.1, dt=0.1
    )
    from_partition = interface_operators.build_interface_operators(
        partition, 1.0, 2.0
    )
    from_widths = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 2.0
    )
    self.assertEqual(from_partition.entries, from_widths.entries)

  def test_needs_two_subdomains(self):
    with self.assertRaisesRegex(ValueError, 'at least two subdomains'):
      interface_operators.build_interface_operators([1.0], 1.0, 1.0)


if __name__ == '__main__':
  absltest.main()

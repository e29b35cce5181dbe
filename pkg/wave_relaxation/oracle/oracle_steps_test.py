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

import numpy as np
from absl.testing import absltest
from absl.testing import parameterized
from wave_relaxation import iteration_runner
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.methods import guesses
from wave_relaxation.methods import nnwr
from wave_relaxation.methods import reference
from wave_relaxation.oracle import interface_operators
from wave_relaxation.oracle import oracle_steps

_WIDTHS = (0.6, 0.6, 0.5, 2.3, 1.0)


def _traces(grid, functions):
  return [traces.SpaceTimeTrace(grid, f(grid)) for f in functions]


def _max_abs(iterates):
  return max(trace.max_abs() for trace in iterates)


class OracleStepTest(parameterized.TestCase):

  def test_zero_stays_zero(self):
    grid = np.linspace(0.0, 2.0, 201)
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 2.0
    )
    zeros = _traces(grid, [np.zeros_like] * 4)
    self.assertEqual(
        _max_abs(oracle_steps.oracle_nnwr_step(zeros, operators, 0.3)), 0.0
    )

  def test_two_subdomains_vanish_in_one_sweep(self):
    grid = np.linspace(0.0, 4.0, 401)
    operators = interface_operators.build_interface_operators(
        [1.0, 1.5], 1.0, 4.0
    )
    (after,) = oracle_steps.oracle_nnwr_step(
        _traces(grid, [np.square]), operators, 0.25
    )
    np.testing.assert_array_equal(after.values, np.zeros(grid.size))

  def test_five_subdomains_vanish_up_to_two_h_min(self):
    grid = np.linspace(0.0, 1.0, 201)
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 1.0
    )
    guess = _traces(grid, [np.square] * 4)
    self.assertEqual(
        _max_abs(oracle_steps.oracle_nnwr_step(guess, operators, 0.25)), 0.0
    )
    self.assertGreater(
        _max_abs(oracle_steps.oracle_nnwr_step(guess, operators, 0.3)), 1e-3
    )

  def test_iterates_vanish_on_growing_windows(self):
    grid = np.linspace(0.0, 3.0, 301)
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 3.0
    )
    history = oracle_steps.oracle_nnwr_iterate(
        _traces(grid, [np.square, np.sin, np.square, lambda t: t]),
        operators,
        0.25,
        3,
    )
    self.assertLen(history, 4)
    for k, iterates in enumerate(history[1:], start=1):
      horizon = oracle_steps.predict_vanishing(0.5, 1.0, 0.25, k)
      inside = grid <= horizon + 1e-12
      for trace in iterates:
        np.testing.assert_array_equal(
            trace.values[inside], np.zeros(np.count_nonzero(inside))
        )
    self.assertGreater(_max_abs(history[1]), 0.0)
    self.assertEqual(_max_abs(history[3]), 0.0)

  def test_rejects_mismatched_traces(self):
    operators = interface_operators.build_interface_operators(
        _WIDTHS, 1.0, 1.0
    )
    grid = np.linspace(0.0, 1.0, 11)
    with self.assertRaisesRegex(ValueError, 'Got 2 traces'):
      oracle_steps.oracle_nnwr_step(
          _traces(grid, [np.square] * 2), operators, 0.25
      )
    uneven = np.concatenate([grid[:5], grid[5:] ** 1.2])
    with self.assertRaisesRegex(ValueError, 'uniform'):
      oracle_steps.oracle_nnwr_step(
          _traces(uneven, [np.square] * 4), operators, 0.25
      )
    with self.assertRaisesRegex(ValueError, 'theta'):
      oracle_steps.oracle_nnwr_step(
          _traces(grid, [np.square] * 4), operators, 1.5
      )

  @parameterized.named_parameters(
      ('equal_widths', 1.0, 1.0, 3.0),
      ('unequal_widths', 1.0, 0.6, 3.6),
  )
  def test_matches_discrete_nnwr_at_unit_courant_number(
      self, left, right, time_window
  ):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=left + right,
        time_window=time_window,
        speed=problems.WaveSpeed(constant=1.0),
        g_lo=lambda t: t**2,
        g_hi=lambda t: np.sin(t),
    )
    partition = partition_lib.build_partition(
        problem, [left], dx=0.05, dt=0.05
    )
    guess = guesses.InitialGuess(guesses.POLY_T2)
    exact = reference.mono_reference(problem, partition).interface_traces()
    _, final = nnwr.run_nnwr(
        problem, partition, 0.3, guess, max_iterations=1, tolerance=0.0
    )
    initial = guess.interface_traces(problem, partition)
    error_before = [
        trace.with_values(trace.values - ref.values)
        for trace, ref in zip(initial, exact)
    ]
    operators = interface_operators.build_interface_operators(
        partition, 1.0, time_window
    )
    (predicted,) = oracle_steps.oracle_nnwr_step(error_before, operators, 0.3)
    np.testing.assert_allclose(
        final[0].values - exact[0].values, predicted.values, rtol=0, atol=1e-9
    )


class TwoDimensionalOracleTest(absltest.TestCase):

  def test_zero_alpha_is_the_one_dimensional_step(self):
    grid = np.linspace(0.0, 3.0, 301)
    operators = interface_operators.build_interface_operators(
        [0.4, 0.6, 0.5], 1.0, 3.0
    )
    guess = _traces(grid, [np.square, np.sin])
    one_d = oracle_steps.oracle_nnwr_step(guess, operators, 0.3)
    mode = oracle_steps.oracle_nnwr_step_2d_mode(guess, operators, 0.0, 0.3)
    for a, b in zip(one_d, mode):
      np.testing.assert_array_equal(a.values, b.values)

  def test_equal_strips_vanish_before_two_h_min(self):
    grid = np.linspace(0.0, 0.6, 61)
    operators = interface_operators.build_interface_operators(
        [1 / 3] * 3, 1.0, 0.6
    )
    rng = np.random.default_rng(7)
    guess = []
    for _ in range(2):
      values = rng.uniform(-1.0, 1.0, grid.size)
      values[0] = 0.0
      guess.append(traces.SpaceTimeTrace(grid, values))
    for alpha in (1.0, 3.0):
      after = oracle_steps.oracle_nnwr_step_2d_mode(
          guess, operators, alpha, 0.25
      )
      self.assertEqual(_max_abs(after), 0.0)

  def test_mode_tail_changes_the_result(self):
    grid = np.linspace(0.0, 3.0, 301)
    operators = interface_operators.build_interface_operators(
        [0.4, 0.6], 1.0, 3.0
    )
    guess = _traces(grid, [np.square])
    flat = oracle_steps.oracle_nnwr_step_2d_mode(guess, operators, 0.0, 0.3)
    mode = oracle_steps.oracle_nnwr_step_2d_mode(guess, operators, 1.0, 0.3)
    late = grid > 1.6 + 1e-9
    early = ~late
    np.testing.assert_array_equal(flat[0].values[early], mode[0].values[early])
    self.assertGreater(
        np.max(np.abs(flat[0].values[late] - mode[0].values[late])), 1e-3
    )

  def test_full_step_acts_mode_by_mode(self):
    grid = np.linspace(0.0, 2.0, 201)
    y = np.linspace(0.0, np.pi, 21)
    operators = interface_operators.build_interface_operators(
        [0.4, 0.6], 1.0, 2.0
    )
    time_part = grid**2
    guess = [traces.SpaceTimeTrace(grid, np.outer(time_part, np.sin(y)))]
    (after,) = oracle_steps.oracle_nnwr_step_2d(guess, y, operators, 0.3)
    (mode,) = oracle_steps.oracle_nnwr_step_2d_mode(
        [traces.SpaceTimeTrace(grid, time_part)], operators, 1.0, 0.3
    )
    np.testing.assert_allclose(
        after.values, np.outer(mode.values, np.sin(y)), atol=1e-10
    )

  def test_full_step_vanishes_for_equal_strips(self):
    grid = np.linspace(0.0, 0.6, 61)
    y = np.linspace(0.0, np.pi, 17)
    operators = interface_operators.build_interface_operators(
        [1 / 3] * 3, 1.0, 0.6
    )
    values = np.outer(grid, np.sin(y) + np.sin(3 * y))
    guess = [traces.SpaceTimeTrace(grid, values)] * 2
    after = oracle_steps.oracle_nnwr_step_2d(guess, y, operators, 0.25)
    self.assertLess(_max_abs(after), 1e-12)


class PredictVanishingTest(parameterized.TestCase):

  @parameterized.parameters(
      (0.5, 1.0, 1, 1.0),
      (2.0, 0.25, 3, 48.0),
      (0.5, 1.0, 0, 0.0),
  )
  def test_horizon(self, h_min, speed, k, expected):
    self.assertEqual(
        oracle_steps.predict_vanishing(h_min, speed, 0.25, k), expected
    )

  def test_other_theta_has_no_prediction(self):
    self.assertIsNone(oracle_steps.predict_vanishing(0.5, 1.0, 0.3, 2))

  def test_from_partition(self):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=5.0,
        time_window=1.0,
        speed=problems.WaveSpeed(constant=1.0),
    )
    partition = partition_lib.build_partition(
        problem, [0.6, 1.2, 1.7, 4.0], dx=0.1, dt=0.1
    )
    self.assertAlmostEqual(
        oracle_steps.predict_vanishing(partition, 1.0, 0.25, 2), 2.0
    )


class OracleMethodTest(absltest.TestCase):

  def test_runner_reaches_zero(self):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=5.0,
        time_window=1.0,
        speed=problems.WaveSpeed(constant=1.0),
        g_lo=lambda t: t,
    )
    partition = partition_lib.build_partition(
        problem, [0.6, 1.2, 1.7, 4.0], dx=0.02, dt=0.02
    )
    method = oracle_steps.OracleNnwrMethod(
        problem, partition, 0.25, guesses.InitialGuess()
    )
    record, final = iteration_runner.run_iterations(method, max_iterations=3)
    self.assertEqual(record.errors[0], 1.0)
    self.assertEqual(record.iterations_to_tolerance, 1)
    self.assertEqual(_max_abs(final), 0.0)
    self.assertEqual(record.method, 'oracle-nnwr')
    self.assertEqual(record.metadata['vanishing_horizon'], 1.0)

  def test_needs_constant_speed(self):
    problem = problems.WaveProblem1D(
        x_lo=0.0,
        x_hi=2.0,
        time_window=1.0,
        speed=problems.WaveSpeed(pieces=(1.0, 0.5)),
    )
    partition = partition_lib.build_partition(problem, [1.0], dx=0.1, dt=0.1)
    with self.assertRaisesRegex(ValueError, 'constant wave speed'):
      oracle_steps.OracleNnwrMethod(
          problem, partition, 0.25, guesses.InitialGuess()
      )


if __name__ == '__main__':
  absltest.main()

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

"""NNWR sweeps carried out with the delay operators instead of solves.

The oracle acts on interface errors: traces of the homogeneous problem that
vanish at t <= 0. In 1D every operator entry is a sum of shifts. A 2D strip
decomposition is diagonalized by a sine transform in y; mode n sees every
shift exp(-rho s) replaced by exp(-rho sqrt(s^2 + alpha_n^2)), that is a shift
followed by a convolution with the continuous chi tail.
"""

from typing import Any, Sequence

from absl import logging
import numpy as np
from scipy import fft
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.methods import base_method
from wave_relaxation.methods import guesses
from wave_relaxation.methods import nnwr
from wave_relaxation.oracle import chi_kernel
from wave_relaxation.oracle import delay_series
from wave_relaxation.oracle import interface_operators

NAME = 'oracle-nnwr'


def _check_traces(
    iterates: Sequence[traces.SpaceTimeTrace],
    operators: interface_operators.InterfaceOperators,
) -> np.ndarray:
  if len(iterates) != operators.num_interfaces:
    raise ValueError(
        f'Got {len(iterates)} traces for {operators.num_interfaces}'
        ' interfaces.'
    )
  grid = iterates[0].time_grid
  for trace in iterates[1:]:
    if trace.time_grid.shape != grid.shape or np.any(
        trace.time_grid != grid
    ):
      raise ValueError('Oracle traces must share one time grid.')
  steps = np.diff(grid)
  if abs(grid[0]) > 1e-12 or np.ptp(steps) > 1e-9 * steps[0]:
    raise ValueError('Oracle traces need a uniform time grid starting at 0.')
  delay_series.check_sampling(operators.all_series(), float(steps[0]))
  return grid


def _tail_convolution(
    kernel: chi_kernel.ChiKernel, values: np.ndarray, grid: np.ndarray
) -> np.ndarray:
  """int_beta^t chi_tail(tau) w(t - tau) dtau by the trapezoid rule."""
  dt = grid[1] - grid[0]
  weights = kernel.continuous(grid)
  first = int(np.searchsorted(grid, kernel.beta - 1e-9 * dt))
  if first >= grid.size:
    return np.zeros_like(values)
  if abs(grid[first] - kernel.beta) <= 1e-9 * dt:
    weights[first] *= 0.5
  result = np.convolve(weights, values)[: grid.size] * dt
  return result - 0.5 * dt * weights * values[0]


def _apply_mode(
    series: delay_series.DelaySeries,
    values: np.ndarray,
    grid: np.ndarray,
    alpha: float,
) -> np.ndarray:
  if alpha == 0:
    return delay_series.apply(series, values, grid)
  result = np.zeros_like(values)
  for delay, coeff in series.terms:
    if float(delay) > grid[-1]:
      break
    shifted = delay_series.shift_trace(values, grid, delay)
    if delay > 0:
      shifted = shifted + _tail_convolution(
          chi_kernel.ChiKernel(alpha, float(delay)), values, grid
      )
    result += float(coeff) * shifted
  return result


def oracle_nnwr_step_2d_mode(
    iterates: Sequence[traces.SpaceTimeTrace],
    operators: interface_operators.InterfaceOperators,
    alpha: float,
    theta: float,
) -> tuple[traces.SpaceTimeTrace, ...]:
  """One sweep for a single Fourier mode with alpha = c n pi / L_y.

  alpha = 0 is exactly oracle_nnwr_step.
  """
  nnwr.check_theta(theta)
  if alpha < 0:
    raise ValueError(f'alpha must be >= 0, got {alpha}.')
  grid = _check_traces(iterates, operators)
  n = operators.num_interfaces
  result = []
  for i in range(n):
    correction = np.zeros_like(iterates[i].values)
    for j in range(max(0, i - 2), min(n, i + 3)):
      correction += _apply_mode(
          operators.entry(i, j), iterates[j].values, grid, alpha
      )
    result.append(
        iterates[i].with_values(iterates[i].values - theta * correction)
    )
  return tuple(result)


def oracle_nnwr_step(
    iterates: Sequence[traces.SpaceTimeTrace],
    operators: interface_operators.InterfaceOperators,
    theta: float,
) -> tuple[traces.SpaceTimeTrace, ...]:
  """w_i <- w_i - theta sum_j S_ij w_j with S_ij acting as time shifts.

  Args:
    iterates: One 1D trace per interface on a common uniform grid from 0.
    operators: The delay operators of the partition.
    theta: Relaxation parameter in (0, 1].

  Returns:
    The traces after one sweep.
  """
  return oracle_nnwr_step_2d_mode(iterates, operators, 0.0, theta)


def oracle_nnwr_iterate(
    iterates: Sequence[traces.SpaceTimeTrace],
    operators: interface_operators.InterfaceOperators,
    theta: float,
    num_iterations: int,
) -> list[tuple[traces.SpaceTimeTrace, ...]]:
  """The initial traces followed by `num_iterations` oracle sweeps."""
  history = [tuple(iterates)]
  for _ in range(num_iterations):
    history.append(oracle_nnwr_step(history[-1], operators, theta))
  return history


def oracle_nnwr_step_2d(
    iterates: Sequence[traces.SpaceTimeTrace],
    y: np.ndarray,
    operators: interface_operators.InterfaceOperators,
    theta: float,
    num_modes: int | None = None,
) -> tuple[traces.SpaceTimeTrace, ...]:
  """One sweep on 2D strip traces by sine decomposition in y.

  Args:
    iterates: Traces of shape (M + 1, ny + 1) that vanish on the y edges.
    y: The uniform y nodes, edges included.
    operators: Delay operators of the strip widths.
    theta: Relaxation parameter.
    num_modes: Keep only the lowest modes. Defaults to all ny - 1 of them.

  Returns:
    The traces after one sweep, recombined on the y nodes.
  """
  y = np.asarray(y, dtype=float)
  height = y[-1] - y[0]
  interior_count = y.size - 2
  if interior_count < 1:
    raise ValueError('Need at least one interior y node.')
  for trace in iterates:
    if trace.values.ndim != 2 or trace.values.shape[1] != y.size:
      raise ValueError('2D oracle traces must have one column per y node.')
  num_modes = interior_count if num_modes is None else num_modes
  if not 1 <= num_modes <= interior_count:
    raise ValueError(f'num_modes must be in [1, {interior_count}].')
  coefficients = [
      fft.idst(2.0 * trace.values[:, 1:-1], type=1, axis=1)
      for trace in iterates
  ]
  updated = [np.zeros_like(c) for c in coefficients]
  for n in range(num_modes):
    alpha = operators.speed * (n + 1) * np.pi / height
    modes = [
        traces.SpaceTimeTrace(trace.time_grid, c[:, n])
        for trace, c in zip(iterates, coefficients)
    ]
    stepped = oracle_nnwr_step_2d_mode(modes, operators, alpha, theta)
    for k, mode in enumerate(stepped):
      updated[k][:, n] = mode.values
  result = []
  for trace, c in zip(iterates, updated):
    values = np.zeros_like(trace.values)
    values[:, 1:-1] = fft.dst(c, type=1, axis=1) / 2.0
    result.append(trace.with_values(values))
  return tuple(result)


def predict_vanishing(
    partition: partition_lib.Partition | float,
    speed: float,
    theta: float,
    num_iterations: int,
) -> float | None:
  """Window on which the traces are zero after `num_iterations` sweeps.

  Args:
    partition: A partition or directly its smallest width h_min.
    speed: Wave speed c.
    theta: Only theta = 1/4 carries a finite-step guarantee.
    num_iterations: k >= 0.

  Returns:
    2 k h_min / c, or None when theta != 1/4.
  """
  if theta != 0.25:
    return None
  if num_iterations < 0:
    raise ValueError(f'num_iterations must be >= 0, got {num_iterations}.')
  h_min = (
      partition.h_min
      if isinstance(partition, partition_lib.Partition)
      else float(partition)
  )
  return 2 * num_iterations * h_min / speed


def oracle_time_grid(partition: partition_lib.Partition) -> np.ndarray:
  """Common trace grid of an oracle run: the finest subdomain grid."""
  return partition.finest_time_grid()


class OracleNnwrMethod(base_method.WaveformRelaxationMethod):
  """NNWR errors propagated by the oracle, for the iteration runner.

  The guess is sampled for the homogeneous problem on the finest time grid,
  so the iterates are errors and the reference traces are zero.
  """

  def __init__(
      self,
      problem: problems.WaveProblem,
      partition: partition_lib.Partition,
      theta: float,
      guess: guesses.InitialGuess,
      num_modes: int | None = None,
      name: str = NAME,
  ):
    super().__init__(problem, partition, name)
    if partition.num_subdomains < 2:
      raise ValueError('The oracle needs at least two subdomains.')
    if problem.dimension == 1 and not problem.speed.is_constant:
      raise ValueError('The oracle needs a constant wave speed.')
    self._theta = nnwr.check_theta(theta)
    self._guess = guess
    self._num_modes = num_modes
    self._speed = (
        float(problem.speed)
        if problem.dimension == 2
        else problem.speed.value()
    )
    self._operators = interface_operators.build_interface_operators(
        partition, self._speed, problem.time_window
    )
    self._current = None

  @property
  def theta(self) -> float:
    return self._theta

  @property
  def seed(self) -> int | None:
    if self._guess.kind == guesses.RANDOM:
      return self._guess.seed
    return None

  @property
  def operators(self) -> interface_operators.InterfaceOperators:
    return self._operators

  @property
  def metadata(self) -> dict[str, Any]:
    return {
        'vanishing_horizon': predict_vanishing(
            self.partition, self._speed, self._theta, 1
        )
    }

  def reset(self) -> tuple[traces.SpaceTimeTrace, ...]:
    grid = oracle_time_grid(self.partition)
    homogeneous = self.problem.homogeneous()
    self._current = tuple(
        self._guess.sample(
            homogeneous,
            self.partition.interior_interfaces,
            [grid] * self.partition.num_interfaces,
            self.partition.y_nodes() if self.partition.is_2d else None,
        )
    )
    logging.info(
        'Oracle run on %d interfaces with %d samples each.',
        len(self._current),
        grid.size,
    )
    return self._current

  def step(self) -> base_method.IterationResult:
    if self.partition.is_2d:
      self._current = oracle_nnwr_step_2d(
          self._current,
          self.partition.y_nodes(),
          self._operators,
          self._theta,
          self._num_modes,
      )
    else:
      self._current = oracle_nnwr_step(
          self._current, self._operators, self._theta
      )
    return base_method.IterationResult(traces=self._current)

  def reference_traces(self) -> tuple[traces.SpaceTimeTrace, ...]:
    return tuple(
        trace.with_values(np.zeros_like(trace.values))
        for trace in self._current
    )

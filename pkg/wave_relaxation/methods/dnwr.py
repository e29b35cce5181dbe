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

"""Dirichlet-Neumann waveform relaxation on two subdomains."""

from typing import Sequence

from wave_relaxation import iteration_runner
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.methods import base_method
from wave_relaxation.methods import guesses
from wave_relaxation.methods import nnwr
from wave_relaxation.methods import subdomains
from wave_relaxation.solvers import stepper
from wave_relaxation.solvers import transfer

NAME = 'dnwr'


class DnwrMethod(base_method.WaveformRelaxationMethod):
  """Solves Dirichlet on the left subdomain and Neumann on the right one.

  The right subdomain receives the left normal derivative, scaled by the
  speed ratio when the speed jumps, and the interface trace is relaxed with
  its Dirichlet value: w <- (1 - theta) w + theta u_2(x_1).
  """

  def __init__(
      self,
      problem: problems.WaveProblem,
      partition: partition_lib.Partition,
      theta: float = 0.5,
      guess: guesses.InitialGuess | Sequence[traces.SpaceTimeTrace] = (
          guesses.InitialGuess()
      ),
      name: str = NAME,
  ):
    super().__init__(problem, partition, name)
    if partition.num_subdomains != 2:
      raise ValueError(
          'DNWR is implemented for exactly two subdomains, got'
          f' {partition.num_subdomains}.'
      )
    self._theta = nnwr.check_theta(theta)
    self._guess = guess
    self._left = subdomains.build_subdomain(problem, partition, 0)
    self._right = subdomains.build_subdomain(problem, partition, 1)
    self._trace = None

  @property
  def theta(self) -> float:
    return self._theta

  @property
  def seed(self) -> int | None:
    if isinstance(self._guess, guesses.InitialGuess):
      if self._guess.kind == guesses.RANDOM:
        return self._guess.seed
    return None

  def reset(self) -> tuple[traces.SpaceTimeTrace, ...]:
    (self._trace,) = guesses.resolve(self._guess, self.problem, self.partition)
    return (self._trace,)

  def step(self) -> base_method.IterationResult:
    left_field = subdomains.solve(
        self._left,
        stepper.BoundarySpec(
            subdomains.physical_condition(
                self.problem, self._left, stepper.LEFT
            ),
            stepper.dirichlet(
                transfer.resample(self._trace, self._left.time_grid)
            ),
        ),
    )
    flux = transfer.resample(
        stepper.extract_normal_derivative(
            left_field, stepper.RIGHT, stepper.CONSISTENT
        ),
        self._right.time_grid,
    )
    ratio = self._left.speed_at(stepper.RIGHT) / self._right.speed_at(
        stepper.LEFT
    )
    right_field = subdomains.solve(
        self._right,
        stepper.BoundarySpec(
            stepper.neumann(flux.with_values(-ratio * flux.values)),
            subdomains.physical_condition(
                self.problem, self._right, stepper.RIGHT
            ),
        ),
    )
    interface_value = transfer.resample(
        right_field.boundary_trace(stepper.LEFT), self._trace.time_grid
    )
    self._trace = self._trace.with_values(
        (1.0 - self._theta) * self._trace.values
        + self._theta * interface_value.values
    )
    return base_method.IterationResult(traces=(self._trace,))


def run_dnwr(
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    theta: float = 0.5,
    guess: guesses.InitialGuess | Sequence[traces.SpaceTimeTrace] = (
        guesses.InitialGuess()
    ),
    max_iterations: int = 20,
    tolerance: float = 1e-12,
) -> tuple[traces.ConvergenceRecord, tuple[traces.SpaceTimeTrace, ...]]:
  """Runs DNWR on a two-subdomain partition.

  Raises:
    ValueError: If the partition does not have exactly two subdomains or
      theta is outside (0, 1].
  """
  method = DnwrMethod(problem, partition, theta, guess)
  return iteration_runner.run_iterations(method, max_iterations, tolerance)

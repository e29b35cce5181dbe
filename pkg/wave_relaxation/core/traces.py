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

"""Interface traces and convergence records."""

import dataclasses
from typing import Any, Sequence

import numpy as np

DIRICHLET = 'dirichlet'
FLUX = 'flux'


@dataclasses.dataclass(frozen=True, eq=False)
class SpaceTimeTrace:
  """Samples of a function on an interface, one row per time level.

  Attributes:
    time_grid: Strictly increasing sample times.
    values: Shape (M+1,) in 1D or (M+1, ny+1) along a 2D interface.
    kind: DIRICHLET for values, FLUX for normal derivatives.
  """

  time_grid: np.ndarray
  values: np.ndarray
  kind: str = DIRICHLET

  def __post_init__(self):
    time_grid = np.array(self.time_grid, dtype=float)
    values = np.array(self.values, dtype=float)
    if time_grid.ndim != 1 or time_grid.size < 2:
      raise ValueError('A trace needs at least two sample times.')
    if np.any(np.diff(time_grid) <= 0):
      raise ValueError('Trace sample times must be strictly increasing.')
    if values.ndim not in (1, 2) or values.shape[0] != time_grid.size:
      raise ValueError(
          f'Trace values of shape {values.shape} do not match'
          f' {time_grid.size} sample times.'
      )
    if self.kind not in (DIRICHLET, FLUX):
      raise ValueError(f'Unknown trace kind {self.kind!r}.')
    time_grid.setflags(write=False)
    values.setflags(write=False)
    object.__setattr__(self, 'time_grid', time_grid)
    object.__setattr__(self, 'values', values)

  @property
  def is_2d(self) -> bool:
    return self.values.ndim == 2

  @property
  def num_steps(self) -> int:
    return self.time_grid.size - 1

  def max_abs(self) -> float:
    return float(np.max(np.abs(self.values)))

  def with_values(self, values: np.ndarray) -> 'SpaceTimeTrace':
    return SpaceTimeTrace(self.time_grid, values, self.kind)


@dataclasses.dataclass()
class ConvergenceRecord:
  """Interface errors of one iteration history.

  Attributes:
    method: Name of the method that produced the history.
    theta: Relaxation parameter, if the method has one.
    errors: errors[k] is the interface error after iteration k; errors[0] is
      the error of the initial guess.
    iterations_to_tolerance: First k with errors[k] <= tolerance * errors[0],
      or None if the iteration budget ran out first.
    wall_times: Seconds spent in each iteration; wall_times[0] is zero.
    seed: Seed of a random initial guess.
    metadata: Method-specific extras such as reconstructed solution errors.
  """

  method: str
  theta: float | None
  errors: list[float]
  iterations_to_tolerance: int | None
  wall_times: list[float] = dataclasses.field(default_factory=list)
  seed: int | None = None
  metadata: dict[str, Any] = dataclasses.field(default_factory=dict)

  @property
  def converged(self) -> bool:
    return self.iterations_to_tolerance is not None

  @property
  def num_iterations(self) -> int:
    return len(self.errors) - 1

  def relative_errors(self) -> list[float]:
    """Errors divided by the error of the initial guess."""
    if not self.errors or self.errors[0] == 0:
      return list(self.errors)
    return [e / self.errors[0] for e in self.errors]


def interface_error(
    iterates: Sequence[SpaceTimeTrace], references: Sequence[SpaceTimeTrace]
) -> float:
  """Max-norm distance between iterate and reference interface traces.

  Args:
    iterates: One trace per interface.
    references: Matching traces, on the same grids.

  Returns:
    max over interfaces and samples of |iterate - reference|, 0.0 when there
    are no interfaces.

  Raises:
    ValueError: If the two sides do not match in count or shape.
  """
  if len(iterates) != len(references):
    raise ValueError(
        f'Got {len(iterates)} iterate traces for {len(references)} references.'
    )
  error = 0.0
  for k, (iterate, reference) in enumerate(zip(iterates, references)):
    if iterate.values.shape != reference.values.shape:
      raise ValueError(
          f'Trace shape mismatch at interface {k + 1}:'
          f' {iterate.values.shape} vs {reference.values.shape}.'
      )
    error = max(error, float(np.max(np.abs(iterate.values - reference.values))))
  return error

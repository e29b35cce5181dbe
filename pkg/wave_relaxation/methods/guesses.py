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

"""Initial interface guesses."""

import dataclasses
from typing import Sequence

import numpy as np
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces

POLY_T2 = 'poly-t2'
T_SIN_Y = 't-sin-y'
ZERO = 'zero'
RANDOM = 'random'

GUESS_KINDS = (POLY_T2, T_SIN_Y, ZERO, RANDOM)


@dataclasses.dataclass(frozen=True)
class InitialGuess:
  """Recipe for the iteration-0 traces.

  Every trace is pinned to the initial displacement at t = 0, and 2D traces
  are pinned to the y-boundary data, so guesses are compatible with the
  problem data.

  Attributes:
    kind: One of GUESS_KINDS. RANDOM draws uniform samples on [-1, 1].
    seed: Seed of the RANDOM generator.
  """

  kind: str = POLY_T2
  seed: int = 0

  def __post_init__(self):
    if self.kind not in GUESS_KINDS:
      raise ValueError(
          f'Unknown initial guess {self.kind!r}; expected one of {GUESS_KINDS}.'
      )

  def sample(
      self,
      problem: problems.WaveProblem,
      points: Sequence[float],
      time_grids: Sequence[np.ndarray],
      y: np.ndarray | None = None,
  ) -> list[traces.SpaceTimeTrace]:
    """Guess traces at the given x positions.

    Args:
      problem: Provides the data the traces are pinned to.
      points: x positions, one per trace.
      time_grids: Time grid of every trace.
      y: Nodes along the interfaces of a 2D problem.

    Returns:
      One trace per point. Random samples are drawn point by point in order.
    """
    if len(points) != len(time_grids):
      raise ValueError('Need one time grid per guess point.')
    if (problem.dimension == 2) != (y is not None):
      raise ValueError('y nodes are required exactly for 2D problems.')
    if self.kind == T_SIN_Y and problem.dimension != 2:
      raise ValueError(f'The {T_SIN_Y} guess needs a 2D problem.')
    rng = np.random.default_rng(self.seed)
    result = []
    for point, grid in zip(points, time_grids):
      t = np.asarray(grid, dtype=float)
      x = np.asarray(point, dtype=float)
      shape = t.shape if y is None else (t.size, y.size)
      if self.kind == POLY_T2:
        values = t**2 if y is None else np.outer(t**2, np.ones(y.size))
      elif self.kind == T_SIN_Y:
        values = np.outer(t, np.sin(y))
      elif self.kind == ZERO:
        values = np.zeros(shape)
      else:
        values = rng.uniform(-1.0, 1.0, size=shape)
      if y is None:
        values[0] = float(problem.u0(x))
      else:
        values[0] = np.broadcast_to(problem.u0(x, y), y.shape)
        values[:, 0] = np.broadcast_to(problem.g_bottom(t, x), t.shape)
        values[:, -1] = np.broadcast_to(problem.g_top(t, x), t.shape)
      result.append(traces.SpaceTimeTrace(t, values))
    return result

  def interface_traces(
      self, problem: problems.WaveProblem, partition: partition_lib.Partition
  ) -> list[traces.SpaceTimeTrace]:
    """Guess traces at the interior interfaces, on their carrier grids."""
    return self.sample(
        problem,
        partition.interior_interfaces,
        [partition.carrier_grid(i) for i in range(partition.num_interfaces)],
        partition.y_nodes() if partition.is_2d else None,
    )


def resolve(
    guess: 'InitialGuess | Sequence[traces.SpaceTimeTrace]',
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
) -> tuple[traces.SpaceTimeTrace, ...]:
  """Turns a guess recipe or explicit traces into interface traces."""
  if isinstance(guess, InitialGuess):
    return tuple(guess.interface_traces(problem, partition))
  result = tuple(guess)
  if len(result) != partition.num_interfaces:
    raise ValueError(
        f'Got {len(result)} guess traces for {partition.num_interfaces}'
        ' interfaces.'
    )
  return result

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

"""Per-subdomain data shared by the iterative methods."""

import dataclasses

import numpy as np
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.solvers import stepper


def _evaluate(function, shape: tuple[int, ...], *args) -> np.ndarray:
  return np.broadcast_to(np.asarray(function(*args), dtype=float), shape).copy()


@dataclasses.dataclass(frozen=True, eq=False)
class SubdomainData:
  """Everything a subdomain solve needs apart from the x-side conditions.

  Attributes:
    index: Partition subdomain whose time grid is used.
    first_node: Global index of the leftmost node.
    last_node: Global index of the rightmost node.
    x: Node coordinates.
    time_grid: Time levels.
    speed: Wave speed on the nodes.
    u0: Initial displacement on the nodes.
    v0: Initial velocity on the nodes.
    source: Forcing on the space-time grid, or None.
    y: Nodes along a 2D strip.
    y_data: Dirichlet data on the bottom and top of a 2D strip.
  """

  index: int
  first_node: int
  last_node: int
  x: np.ndarray
  time_grid: np.ndarray
  speed: np.ndarray
  u0: np.ndarray
  v0: np.ndarray
  source: np.ndarray | None = None
  y: np.ndarray | None = None
  y_data: tuple[np.ndarray, np.ndarray] | None = None

  @property
  def is_2d(self) -> bool:
    return self.y is not None

  @property
  def side_shape(self) -> tuple[int, ...]:
    """Shape of one time level of an x-side trace."""
    return () if self.y is None else (self.y.size,)

  def speed_at(self, side: str) -> float:
    return float(self.speed[0] if side == stepper.LEFT else self.speed[-1])

  def zero_trace(self) -> traces.SpaceTimeTrace:
    return traces.SpaceTimeTrace(
        self.time_grid, np.zeros((self.time_grid.size,) + self.side_shape)
    )

  def homogeneous(self) -> 'SubdomainData':
    """The same subdomain with zero initial, source and y-boundary data."""
    y_data = None
    if self.y_data is not None:
      y_data = (np.zeros_like(self.y_data[0]), np.zeros_like(self.y_data[1]))
    return dataclasses.replace(
        self,
        u0=np.zeros_like(self.u0),
        v0=np.zeros_like(self.v0),
        source=None,
        y_data=y_data,
    )


def build_subdomain(
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    index: int,
    first_node: int | None = None,
    last_node: int | None = None,
) -> SubdomainData:
  """Samples the problem data on a range of global nodes.

  Args:
    problem: The global problem.
    partition: The partition providing the grids.
    index: Subdomain whose time grid is used.
    first_node: First global node; defaults to the subdomain's left interface.
    last_node: Last global node; defaults to the subdomain's right interface.

  Returns:
    The sampled data.
  """
  own_first, own_last = partition.node_range(index)
  first = own_first if first_node is None else first_node
  last = own_last if last_node is None else last_node
  if not 0 <= first < last < partition.num_nodes:
    raise ValueError(f'Invalid node range [{first}, {last}].')
  x = partition.interfaces[0] + partition.dx * np.arange(first, last + 1)
  time_grid = partition.time_grid(index)
  t = time_grid
  if problem.dimension == 1:
    if (first, last) == (own_first, own_last):
      speed = problem.speed.sample(x, subdomain=index)
    else:
      speed = problem.speed.sample(x)
    source = None
    if problem.source is not None:
      source = _evaluate(
          problem.source, (t.size, x.size), t[:, None], x[None, :]
      )
    return SubdomainData(
        index=index,
        first_node=first,
        last_node=last,
        x=x,
        time_grid=time_grid,
        speed=speed,
        u0=_evaluate(problem.u0, x.shape, x),
        v0=_evaluate(problem.v0, x.shape, x),
        source=source,
    )
  y = partition.y_nodes()
  shape = (x.size, y.size)
  source = None
  if problem.source is not None:
    source = _evaluate(
        problem.source,
        (t.size,) + shape,
        t[:, None, None],
        x[None, :, None],
        y[None, None, :],
    )
  side = (t.size, x.size)
  return SubdomainData(
      index=index,
      first_node=first,
      last_node=last,
      x=x,
      time_grid=time_grid,
      speed=np.full(x.shape, float(problem.speed)),
      u0=_evaluate(problem.u0, shape, x[:, None], y[None, :]),
      v0=_evaluate(problem.v0, shape, x[:, None], y[None, :]),
      source=source,
      y=y,
      y_data=(
          _evaluate(problem.g_bottom, side, t[:, None], x[None, :]),
          _evaluate(problem.g_top, side, t[:, None], x[None, :]),
      ),
  )


def physical_condition(
    problem: problems.WaveProblem, data: SubdomainData, side: str
) -> stepper.BoundaryCondition:
  """Dirichlet condition from the problem's data on a physical boundary."""
  t = data.time_grid
  if problem.dimension == 1:
    function = problem.g_lo if side == stepper.LEFT else problem.g_hi
    values = _evaluate(function, t.shape, t)
  else:
    function = problem.g_left if side == stepper.LEFT else problem.g_right
    values = _evaluate(function, (t.size, data.y.size), t[:, None],
                       data.y[None, :])
  return stepper.dirichlet(traces.SpaceTimeTrace(t, values))


def solve(
    data: SubdomainData, bc: stepper.BoundarySpec
) -> stepper.SubdomainField:
  """Runs the leapfrog solver on a subdomain."""
  if data.is_2d:
    return stepper.solve_subdomain_2d(
        data.x,
        data.y,
        data.time_grid,
        float(data.speed[0]),
        data.u0,
        data.v0,
        bc,
        data.y_data,
        data.source,
    )
  return stepper.solve_subdomain_1d(
      data.x, data.time_grid, data.speed, data.u0, data.v0, bc, data.source
  )

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

"""Single-domain reference solutions the iterations are measured against."""

import dataclasses
from typing import Sequence

from absl import logging
import numpy as np
from wave_relaxation.core import partition as partition_lib
from wave_relaxation.core import problems
from wave_relaxation.core import traces
from wave_relaxation.methods import subdomains
from wave_relaxation.solvers import stepper
from wave_relaxation.solvers import transfer

# How the normal derivatives of two neighbors are combined at an interface.
FLUX_SPEED_WEIGHTED = 'speed'
FLUX_PLAIN = 'plain'
FLUX_WEIGHTINGS = (FLUX_SPEED_WEIGHTED, FLUX_PLAIN)


def check_flux_weighting(weighting: str) -> str:
  if weighting not in FLUX_WEIGHTINGS:
    raise ValueError(
        f'Unknown flux weighting {weighting!r}; expected one of'
        f' {", ".join(FLUX_WEIGHTINGS)}.'
    )
  return weighting


@dataclasses.dataclass(frozen=True, eq=False)
class MonoReference:
  """Leapfrog solution on the whole domain with the finest time step.

  Attributes:
    field: The global field.
    partition: Partition the reference is read back on.
  """

  field: stepper.SubdomainField
  partition: partition_lib.Partition

  def node_values(self, first: int, last: int) -> np.ndarray:
    return self.field.values[:, first : last + 1]

  def restrict(
      self, first: int, last: int, time_grid: np.ndarray
  ) -> np.ndarray:
    """Reference values on a node range, resampled onto time_grid."""
    projection = transfer.build_projection(self.field.time_grid, time_grid)
    return projection.apply(self.node_values(first, last))

  def interface_traces(self) -> tuple[traces.SpaceTimeTrace, ...]:
    """Reference traces on the carrier grid of every interior interface."""
    result = []
    for i in range(self.partition.num_interfaces):
      node = self.partition.node_offsets[i + 1]
      trace = traces.SpaceTimeTrace(
          self.field.time_grid, self.field.values[:, node]
      )
      result.append(
          transfer.resample(trace, self.partition.carrier_grid(i))
      )
    return tuple(result)


def mono_couplings(
    problem: problems.WaveProblem1D,
    partition: partition_lib.Partition,
    flux_weighting: str = FLUX_SPEED_WEIGHTED,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
  """Node speeds and neighbor couplings of the global 1D grid.

  A piecewise speed that jumps at an interface couples the interface node to
  its neighbors with 2 c_L^2 c_R / (c_L + c_R) on the left and
  2 c_L c_R^2 / (c_L + c_R) on the right, the flux-continuous stencil of the
  speed-weighted interface condition c_L u_x(x-) = c_R u_x(x+). The plain
  condition u_x(x-) = u_x(x+) uses 2 c_L^2 c_R^2 / (c_L^2 + c_R^2) on both
  sides.

  Returns:
    (speed, left coupling, right coupling), one value per global node.
  """
  check_flux_weighting(flux_weighting)
  x = partition.global_x()
  if problem.speed.kind != problems.PIECEWISE:
    speed = problem.speed.sample(x)
    return speed, speed**2, speed**2
  speed = np.empty(x.shape)
  for i, c in enumerate(problem.speed.pieces):
    first, last = partition.node_range(i)
    speed[first : last + 1] = c
  left = speed**2
  right = speed**2
  for i in range(partition.num_interfaces):
    node = partition.node_offsets[i + 1]
    c_left = float(problem.speed.pieces[i])
    c_right = float(problem.speed.pieces[i + 1])
    if flux_weighting == FLUX_PLAIN:
      both = 2 * c_left**2 * c_right**2 / (c_left**2 + c_right**2)
      left[node] = right[node] = both
    else:
      left[node] = 2 * c_left**2 * c_right / (c_left + c_right)
      right[node] = 2 * c_left * c_right**2 / (c_left + c_right)
  return speed, left, right


def mono_reference(
    problem: problems.WaveProblem,
    partition: partition_lib.Partition,
    flux_weighting: str = FLUX_SPEED_WEIGHTED,
) -> MonoReference:
  """Solves the undecomposed problem on the finest subdomain time grid.

  Args:
    problem: The global problem.
    partition: Decomposition the reference is read back on.
    flux_weighting: Interface condition at speed jumps, see `mono_couplings`.

  Returns:
    The reference.
  """
  num_nodes = partition.num_nodes
  whole = partition_lib.Partition(
      interfaces=(partition.interfaces[0], partition.interfaces[-1]),
      dx=partition.dx,
      time_steps=(partition.time_steps[partition.finest_index()],),
      time_window=partition.time_window,
      node_offsets=(0, num_nodes - 1),
      speeds=None,
      y_lo=partition.y_lo,
      y_hi=partition.y_hi,
      dy=partition.dy,
  )
  if problem.dimension == 1 and problem.speed.kind == problems.PIECEWISE:
    data = subdomains.build_subdomain(
        dataclasses.replace(
            problem,
            speed=problems.WaveSpeed(constant=max(problem.speed.pieces)),
        ),
        whole,
        0,
    )
  else:
    data = subdomains.build_subdomain(problem, whole, 0)
  bc = stepper.BoundarySpec(
      subdomains.physical_condition(problem, data, stepper.LEFT),
      subdomains.physical_condition(problem, data, stepper.RIGHT),
  )
  logging.info(
      'Solving the reference on %d nodes and %d time steps.',
      num_nodes,
      data.time_grid.size - 1,
  )
  if data.is_2d:
    field = subdomains.solve(data, bc)
  else:
    speed, left, right = mono_couplings(problem, partition, flux_weighting)
    field = stepper.solve_subdomain_1d(
        data.x,
        data.time_grid,
        speed,
        data.u0,
        data.v0,
        bc,
        data.source,
        couplings=(left, right),
    )
  return MonoReference(field=field, partition=partition)


def solution_error(
    fields: Sequence[stepper.SubdomainField],
    reference: MonoReference,
    relative: bool = True,
) -> float:
  """Max-norm error of subdomain fields against the reference.

  Args:
    fields: One field per subdomain, in order.
    reference: The mono-domain reference.
    relative: Divide by the largest reference value when it is non-zero.

  Returns:
    The error.
  """
  partition = reference.partition
  error = 0.0
  for i, field in enumerate(fields):
    first, last = partition.node_range(i)
    expected = reference.restrict(first, last, field.time_grid)
    error = max(error, float(np.max(np.abs(field.values - expected))))
  scale = float(np.max(np.abs(reference.field.values)))
  if relative and scale > 0:
    return error / scale
  return error

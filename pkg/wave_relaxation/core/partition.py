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

"""Non-overlapping decomposition of the space-time domain."""

import dataclasses
import math
from typing import Sequence

from absl import logging
import numpy as np
from wave_relaxation.core import problems

# Relative tolerance used to decide that a coordinate sits on the grid.
GRID_TOLERANCE = 1e-12


@dataclasses.dataclass(frozen=True)
class Partition:
  """Subdomains (x_{i-1}, x_i) with their own time grids.

  Subdomain and interface indices are 0-based in code: subdomain i spans
  (interfaces[i], interfaces[i + 1]) and interior interface i sits at
  interfaces[i + 1], between subdomains i and i + 1.

  Attributes:
    interfaces: x_0 < x_1 < ... < x_N, physical boundaries included.
    dx: Shared spatial step.
    time_steps: Time step of every subdomain, fitted to the time window.
    time_window: Final time T.
    node_offsets: Global node index of every entry of `interfaces`.
    speeds: Constant speed of every subdomain, when the speed is piecewise
      constant. None for variable speeds.
    y_lo: Bottom of the strips (2D only).
    y_hi: Top of the strips (2D only).
    dy: Vertical step (2D only).
  """

  interfaces: tuple[float, ...]
  dx: float
  time_steps: tuple[float, ...]
  time_window: float
  node_offsets: tuple[int, ...]
  speeds: tuple[float, ...] | None = None
  y_lo: float | None = None
  y_hi: float | None = None
  dy: float | None = None

  @property
  def num_subdomains(self) -> int:
    return len(self.interfaces) - 1

  @property
  def num_interfaces(self) -> int:
    """Number of interior interfaces."""
    return len(self.interfaces) - 2

  @property
  def interior_interfaces(self) -> tuple[float, ...]:
    return self.interfaces[1:-1]

  @property
  def widths(self) -> tuple[float, ...]:
    return tuple(b - a for a, b in zip(self.interfaces, self.interfaces[1:]))

  @property
  def h_min(self) -> float:
    return min(self.widths)

  @property
  def is_2d(self) -> bool:
    return self.dy is not None

  @property
  def num_nodes(self) -> int:
    """Number of global x nodes."""
    return self.node_offsets[-1] + 1

  @property
  def ny(self) -> int:
    """Number of y intervals (2D only)."""
    if self.dy is None:
      raise ValueError('A 1D partition has no y grid.')
    return int(round((self.y_hi - self.y_lo) / self.dy))

  def num_steps(self, i: int) -> int:
    return int(round(self.time_window / self.time_steps[i]))

  def time_grid(self, i: int) -> np.ndarray:
    """Time grid of subdomain i."""
    return np.linspace(0.0, self.time_window, self.num_steps(i) + 1)

  def finest_index(self) -> int:
    """Index of the subdomain with the most time steps."""
    return max(range(self.num_subdomains), key=self.num_steps)

  def finest_time_grid(self) -> np.ndarray:
    return self.time_grid(self.finest_index())

  def global_x(self) -> np.ndarray:
    return self.interfaces[0] + self.dx * np.arange(self.num_nodes)

  def node_range(self, i: int) -> tuple[int, int]:
    """First and last global node of subdomain i."""
    return self.node_offsets[i], self.node_offsets[i + 1]

  def x_nodes(self, i: int) -> np.ndarray:
    """Nodes of subdomain i, interface nodes included."""
    first, last = self.node_range(i)
    return self.interfaces[0] + self.dx * np.arange(first, last + 1)

  def y_nodes(self) -> np.ndarray:
    if self.dy is None:
      raise ValueError('A 1D partition has no y grid.')
    return np.linspace(self.y_lo, self.y_hi, self.ny + 1)

  def carrier_grid(self, interface: int) -> np.ndarray:
    """Time grid interface traces are stored on: the left neighbor's grid."""
    return self.time_grid(interface)


def _on_grid(value: float, step: float, scale: float) -> int:
  """Returns value / step as an integer, or raises if it is not one."""
  count = int(round(value / step))
  if abs(count * step - value) > GRID_TOLERANCE * max(abs(scale), 1.0):
    raise ValueError(f'{value} is not a multiple of {step}.')
  return count


def _fit_step(window: float, step: float, what: str) -> float:
  """Shrinks step so that it divides window."""
  count = math.ceil(window / step - 1e-9)
  fitted = window / count
  if abs(fitted - step) > GRID_TOLERANCE * step:
    logging.warning(
        '%s %.12g does not divide %.12g; using %.12g (%d steps).',
        what,
        step,
        window,
        fitted,
        count,
    )
  return fitted


def build_partition(
    problem: problems.WaveProblem,
    interfaces: Sequence[float],
    dx: float,
    dt: float | Sequence[float],
    dy: float | None = None,
) -> Partition:
  """Builds and validates a partition of the problem's domain.

  Args:
    problem: The problem whose domain is split.
    interfaces: Interior interface coordinates, strictly increasing.
    dx: Shared spatial step. Must divide every subdomain width.
    dt: One time step for all subdomains or one per subdomain. Steps that do
      not divide the time window are shrunk, with a warning.
    dy: Vertical step of a 2D problem. Shrunk like dt if needed.

  Returns:
    The partition.

  Raises:
    ValueError: If the interfaces are not strictly inside the domain and
      increasing, if dx does not fit, or if a subdomain violates the CFL
      condition.
  """
  interior = [float(x) for x in interfaces]
  points = [float(problem.x_lo)] + interior + [float(problem.x_hi)]
  if any(b <= a for a, b in zip(points, points[1:])):
    raise ValueError(
        f'Interfaces {interior} must be strictly increasing and strictly'
        f' inside ({problem.x_lo}, {problem.x_hi}).'
    )
  if not dx > 0:
    raise ValueError(f'dx must be positive, got {dx}.')
  length = points[-1] - points[0]
  try:
    num_cells = _on_grid(length, dx, length)
  except ValueError as e:
    raise ValueError(
        f'Domain length {length} is not a multiple of dx = {dx}.'
    ) from e
  fitted_dx = length / num_cells
  offsets = []
  for x in points:
    try:
      offsets.append(_on_grid(x - points[0], fitted_dx, length))
    except ValueError as e:
      raise ValueError(
          f'Interface {x} does not sit on the dx = {dx} grid.'
      ) from e

  num_subdomains = len(points) - 1
  if isinstance(dt, (int, float)):
    steps = [float(dt)] * num_subdomains
  else:
    steps = [float(s) for s in dt]
    if len(steps) == 1:
      steps = steps * num_subdomains
  if len(steps) != num_subdomains:
    raise ValueError(
        f'Got {len(steps)} time steps for {num_subdomains} subdomains.'
    )
  if any(not s > 0 for s in steps):
    raise ValueError(f'Time steps must be positive, got {steps}.')
  window = float(problem.time_window)
  steps = [_fit_step(window, s, f'dt of subdomain {i + 1}')
           for i, s in enumerate(steps)]

  y_lo = y_hi = fitted_dy = None
  speeds = None
  if problem.dimension == 2:
    if dy is None or not dy > 0:
      raise ValueError('A 2D problem needs a positive dy.')
    y_lo, y_hi = float(problem.y_lo), float(problem.y_hi)
    fitted_dy = _fit_step(y_hi - y_lo, dy, 'dy')
    speeds = (float(problem.speed),) * num_subdomains
  elif dy is not None:
    raise ValueError('dy is only meaningful for 2D problems.')
  elif problem.speed.kind == problems.PIECEWISE:
    if len(problem.speed.pieces) != num_subdomains:
      raise ValueError(
          f'Piecewise speed has {len(problem.speed.pieces)} pieces for'
          f' {num_subdomains} subdomains.'
      )
    speeds = tuple(float(c) for c in problem.speed.pieces)
  elif problem.speed.kind == problems.CONSTANT:
    speeds = (problem.speed.value(),) * num_subdomains

  partition = Partition(
      interfaces=tuple(points),
      dx=fitted_dx,
      time_steps=tuple(steps),
      time_window=window,
      node_offsets=tuple(offsets),
      speeds=speeds,
      y_lo=y_lo,
      y_hi=y_hi,
      dy=fitted_dy,
  )
  _check_cfl(problem, partition)
  return partition


def subdomain_speed(
    problem: problems.WaveProblem, partition: Partition, i: int
) -> np.ndarray:
  """Speed on the nodes of subdomain i."""
  x = partition.x_nodes(i)
  if problem.dimension == 2:
    return np.full(x.shape, float(problem.speed))
  return problem.speed.sample(x, subdomain=i)


def _check_cfl(problem: problems.WaveProblem, partition: Partition) -> None:
  for i in range(partition.num_subdomains):
    c_max = float(np.max(subdomain_speed(problem, partition, i)))
    dt = partition.time_steps[i]
    if partition.is_2d:
      rate = math.sqrt(1 / partition.dx**2 + 1 / partition.dy**2)
    else:
      rate = 1 / partition.dx
    courant = c_max * dt * rate
    if courant > 1 + 1e-12:
      raise ValueError(
          f'CFL condition violated on subdomain {i + 1}: Courant number'
          f' {courant:.6g} > 1. The maximum admissible time step is'
          f' {1 / (c_max * rate):.6g}.'
      )
